#include "vps/lang/parser.hpp"

#include <charconv>
#include <cstdlib>

#include "vps/text.hpp"

namespace vps::lang {

namespace {

// Binary operator precedence, loosest first.
int binary_precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return 0;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Program program() {
        Program prog;
        if (at_end()) fail("expected 'class'");
        while (!at_end()) prog.classes.push_back(class_decl());
        return prog;
    }

private:
    // -- token stream --------------------------------------------------------

    bool at_end() const { return i_ >= toks_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token eof{TokenKind::Punctuation, "", 0, 0, 0};
        return i_ + ahead < toks_.size() ? toks_[i_ + ahead] : eof;
    }

    SourcePos pos() const {
        if (!at_end()) return peek().pos();
        if (toks_.empty()) return {1, 1};
        const Token& last = toks_.back();
        return {last.line, last.column + static_cast<int>(text::utf16_length(last.lexeme))};
    }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = at_end() ? "end of input" : "'" + peek().lexeme + "'";
        throw ParseError(expected + " but found " + found, pos());
    }

    bool check(std::string_view text) const {
        return !at_end() && (peek().kind == TokenKind::Punctuation || peek().kind == TokenKind::Operator ||
                             peek().kind == TokenKind::Keyword) &&
               peek().lexeme == text;
    }

    bool accept(std::string_view text) {
        if (!check(text)) return false;
        ++i_;
        return true;
    }

    const Token& expect(std::string_view text) {
        if (!check(text)) fail("expected '" + std::string(text) + "'");
        return toks_[i_++];
    }

    const Token& expect_ident(const char* what = "identifier") {
        if (at_end() || peek().kind != TokenKind::Identifier) fail(std::string("expected ") + what);
        return toks_[i_++];
    }

    bool check_ident(std::size_t ahead = 0) const { return peek(ahead).kind == TokenKind::Identifier; }

    // -- declarations --------------------------------------------------------

    static bool is_type_keyword(const Token& t) {
        return t.kind == TokenKind::Keyword &&
               (t.lexeme == "int" || t.lexeme == "double" || t.lexeme == "boolean" ||
                t.lexeme == "char" || t.lexeme == "String");
    }

    TypeRef base_type() {
        const Token& t = peek();
        TypeRef type;
        if (is_type_keyword(t)) {
            if (t.lexeme == "int") type = TypeRef::of(BaseType::Int);
            else if (t.lexeme == "double") type = TypeRef::of(BaseType::Double);
            else if (t.lexeme == "boolean") type = TypeRef::of(BaseType::Boolean);
            else if (t.lexeme == "char") type = TypeRef::of(BaseType::Char);
            else type = TypeRef::of(BaseType::String);
            ++i_;
        } else if (t.kind == TokenKind::Identifier) {
            type = TypeRef::klass(t.lexeme);
            ++i_;
        } else {
            fail("expected type");
        }
        return type;
    }

    TypeRef type() {
        TypeRef t = base_type();
        if (check("[") && peek(1).lexeme == "]") {
            i_ += 2;
            t.array = true;
        }
        return t;
    }

    ClassDecl class_decl() {
        ClassDecl decl;
        decl.pos = expect("class").pos();
        decl.name = expect_ident("class name").lexeme;
        expect("{");
        while (!check("}")) {
            if (at_end()) fail("expected '}'");
            member(decl);
        }
        expect("}");
        return decl;
    }

    void member(ClassDecl& decl) {
        SourcePos start = pos();
        if (check_ident() && peek(1).lexeme == "(") {
            CtorDecl ctor;
            ctor.pos = start;
            ctor.name = expect_ident().lexeme;
            ctor.params = params();
            ctor.body = block();
            decl.ctors.push_back(std::move(ctor));
            return;
        }
        expect("public");
        if (accept("static")) {
            MainDecl main;
            main.pos = start;
            expect("void");
            if (peek().kind != TokenKind::Identifier || peek().lexeme != "main") fail("expected 'main'");
            ++i_;
            expect("(");
            expect("String");
            expect("[");
            expect("]");
            main.argsName = expect_ident("parameter name").lexeme;
            expect(")");
            main.body = block();
            decl.mains.push_back(std::move(main));
            return;
        }
        TypeRef t;
        if (accept("void")) {
            t = TypeRef::of(BaseType::Void);
        } else {
            t = type();
        }
        const Token& name = expect_ident("member name");
        if (check("(")) {
            MethodDecl m;
            m.pos = start;
            m.returnType = t;
            m.name = name.lexeme;
            m.params = params();
            m.body = block();
            decl.methods.push_back(std::move(m));
            return;
        }
        if (t.is_void()) fail("expected '('");
        expect(";");
        decl.fields.push_back(FieldDecl{t, name.lexeme, start});
    }

    std::vector<Param> params() {
        std::vector<Param> out;
        expect("(");
        if (!check(")")) {
            do {
                Param p;
                p.pos = pos();
                p.type = type();
                p.name = expect_ident("parameter name").lexeme;
                out.push_back(std::move(p));
            } while (accept(","));
        }
        expect(")");
        return out;
    }

    // -- statements ----------------------------------------------------------

    Block block() {
        Block b;
        b.open = expect("{").pos();
        while (!check("}")) {
            if (at_end()) fail("expected '}'");
            b.stmts.push_back(statement());
        }
        b.close = expect("}").pos();
        return b;
    }

    bool starts_declaration() const {
        if (is_type_keyword(peek())) return true;
        if (!check_ident()) return false;
        if (check_ident(1)) return true;
        return peek(1).lexeme == "[" && peek(2).lexeme == "]";
    }

    Stmt statement() {
        Stmt s;
        s.pos = pos();
        if (accept("if")) {
            s.kind = StmtKind::If;
            expect("(");
            s.expr = expression();
            expect(")");
            s.blocks.push_back(block());
            if (accept("else")) s.blocks.push_back(block());
            return s;
        }
        if (accept("while")) {
            s.kind = StmtKind::While;
            expect("(");
            s.expr = expression();
            expect(")");
            s.blocks.push_back(block());
            return s;
        }
        if (accept("return")) {
            s.kind = StmtKind::Return;
            if (!check(";")) s.expr = expression();
            expect(";");
            return s;
        }
        if (starts_declaration()) {
            s.kind = StmtKind::VarDecl;
            s.declType = type();
            s.name = expect_ident("variable name").lexeme;
            if (accept("=")) s.expr = expression();
            expect(";");
            return s;
        }
        Expr e = expression();
        if (check("=")) {
            if (!is_lvalue(e)) throw ParseError("left side of '=' is not assignable", e.pos);
            ++i_;
            s.kind = StmtKind::Assign;
            s.target = std::move(e);
            s.expr = expression();
        } else {
            s.kind = StmtKind::ExprStmt;
            s.expr = std::move(e);
        }
        expect(";");
        return s;
    }

    static bool is_lvalue(const Expr& e) {
        switch (e.kind) {
        case ExprKind::Name:
            return true;
        case ExprKind::Field:
        case ExprKind::Index: {
            const Expr* root = &e;
            while (root->kind == ExprKind::Field || root->kind == ExprKind::Index) root = &root->operands[0];
            return root->kind == ExprKind::Name || root->kind == ExprKind::This;
        }
        default:
            return false;
        }
    }

    // -- expressions ---------------------------------------------------------

    Expr node(ExprKind kind, SourcePos at) {
        Expr e;
        e.kind = kind;
        e.pos = at;
        e.id = next_id_++;
        return e;
    }

    Expr expression() { return binary(1); }

    Expr binary(int min_prec) {
        Expr lhs = unary();
        while (!at_end() && peek().kind == TokenKind::Operator) {
            int prec = binary_precedence(peek().lexeme);
            if (prec == 0 || prec < min_prec) break;
            const Token& op = toks_[i_++];
            Expr rhs = binary(prec + 1);
            Expr e = node(ExprKind::Binary, op.pos());
            e.text = op.lexeme;
            e.operands.push_back(std::move(lhs));
            e.operands.push_back(std::move(rhs));
            lhs = std::move(e);
        }
        return lhs;
    }

    Expr unary() {
        if (check("-") || check("!")) {
            const Token& op = toks_[i_++];
            Expr e = node(ExprKind::Unary, op.pos());
            e.text = op.lexeme;
            e.operands.push_back(unary());
            return e;
        }
        return postfix();
    }

    std::vector<Expr> args() {
        std::vector<Expr> out;
        expect("(");
        if (!check(")")) {
            do {
                out.push_back(expression());
            } while (accept(","));
        }
        expect(")");
        return out;
    }

    Expr postfix() {
        Expr e = primary();
        if (e.kind == ExprKind::NewArray || e.kind == ExprKind::Println) return e;
        while (true) {
            if (check(".")) {
                SourcePos at = pos();
                ++i_;
                const Token& member = expect_ident("member name");
                if (check("(")) {
                    Expr call = node(ExprKind::Call, at);
                    call.text = member.lexeme;
                    call.operands.push_back(std::move(e));
                    for (auto& a : args()) call.operands.push_back(std::move(a));
                    e = std::move(call);
                } else {
                    Expr field = node(ExprKind::Field, at);
                    field.text = member.lexeme;
                    field.operands.push_back(std::move(e));
                    e = std::move(field);
                }
            } else if (check("[")) {
                SourcePos at = pos();
                ++i_;
                Expr idx = node(ExprKind::Index, at);
                idx.operands.push_back(std::move(e));
                idx.operands.push_back(expression());
                expect("]");
                e = std::move(idx);
            } else {
                return e;
            }
        }
    }

    Expr primary() {
        if (at_end()) fail("expected expression");
        const Token& t = peek();
        SourcePos at = t.pos();
        switch (t.kind) {
        case TokenKind::IntLiteral: {
            Expr e = node(ExprKind::IntLit, at);
            // values beyond int64 saturate; validation reports them as out of range
            auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), e.intValue);
            if (ec != std::errc{}) e.intValue = INT64_MAX;
            ++i_;
            return e;
        }
        case TokenKind::DoubleLiteral: {
            Expr e = node(ExprKind::DoubleLit, at);
            e.doubleValue = std::strtod(t.lexeme.c_str(), nullptr);
            ++i_;
            return e;
        }
        case TokenKind::StringLiteral: {
            Expr e = node(ExprKind::StringLit, at);
            e.text = decode_escapes(std::string_view(t.lexeme).substr(1, t.lexeme.size() - 2), at);
            ++i_;
            return e;
        }
        case TokenKind::CharLiteral: {
            Expr e = node(ExprKind::CharLit, at);
            e.charValue = text::first_utf16_unit(
                decode_escapes(std::string_view(t.lexeme).substr(1, t.lexeme.size() - 2), at));
            ++i_;
            return e;
        }
        case TokenKind::Identifier: {
            if (t.lexeme == "System" && peek(1).lexeme == "." && peek(2).lexeme == "out" &&
                peek(3).lexeme == "." && peek(4).lexeme == "println") {
                i_ += 5;
                Expr e = node(ExprKind::Println, at);
                auto a = args();
                if (a.size() != 1) throw ParseError("println takes exactly one argument", at);
                e.operands.push_back(std::move(a.front()));
                return e;
            }
            Expr e = node(ExprKind::Name, at);
            e.text = t.lexeme;
            ++i_;
            return e;
        }
        case TokenKind::Keyword:
            if (t.lexeme == "true" || t.lexeme == "false") {
                Expr e = node(ExprKind::BoolLit, at);
                e.boolValue = t.lexeme == "true";
                ++i_;
                return e;
            }
            if (t.lexeme == "null") {
                ++i_;
                return node(ExprKind::Null, at);
            }
            if (t.lexeme == "this") {
                ++i_;
                return node(ExprKind::This, at);
            }
            if (t.lexeme == "new") return new_expr();
            break;
        case TokenKind::Punctuation:
            if (t.lexeme == "(") {
                ++i_;
                Expr e = expression();
                expect(")");
                return e;
            }
            break;
        default:
            break;
        }
        fail("expected expression");
    }

    Expr new_expr() {
        SourcePos at = expect("new").pos();
        TypeRef elem = base_type();
        if (check("[")) {
            ++i_;
            Expr e = node(ExprKind::NewArray, at);
            e.newType = elem;
            e.operands.push_back(expression());
            expect("]");
            return e;
        }
        if (elem.base != BaseType::Class) fail("expected '['");
        Expr e = node(ExprKind::NewObject, at);
        e.text = elem.className;
        e.operands = args();
        return e;
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    int next_id_ = 0;
};

}  // namespace

Program parse_program(std::string_view source) { return Parser(tokenize(source)).program(); }

}  // namespace vps::lang
