#include "vps/lang/printer.hpp"

#include <sstream>

#include "vps/text.hpp"

namespace vps::lang {

namespace {

int precedence(const Expr& e) {
    if (e.kind == ExprKind::Binary) {
        const auto& op = e.text;
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "==" || op == "!=") return 3;
        if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
        if (op == "+" || op == "-") return 5;
        return 6;
    }
    if (e.kind == ExprKind::Unary) return 7;
    return 8;
}

void print_expr(std::ostream& os, const Expr& e);

void print_wrapped(std::ostream& os, const Expr& e, bool wrap) {
    if (wrap) os << '(';
    print_expr(os, e);
    if (wrap) os << ')';
}

void print_args(std::ostream& os, const std::vector<Expr>& ops, std::size_t from) {
    os << '(';
    for (std::size_t i = from; i < ops.size(); ++i) {
        if (i > from) os << ", ";
        print_expr(os, ops[i]);
    }
    os << ')';
}

void print_receiver(std::ostream& os, const Expr& e) {
    bool wrap = precedence(e) < 8 || e.kind == ExprKind::NewArray;
    print_wrapped(os, e, wrap);
}

void print_expr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
    case ExprKind::IntLit: os << e.intValue; break;
    case ExprKind::DoubleLit: os << text::format_double(e.doubleValue); break;
    case ExprKind::BoolLit: os << (e.boolValue ? "true" : "false"); break;
    case ExprKind::CharLit: os << text::quote_char(e.charValue); break;
    case ExprKind::StringLit: os << text::quote_string(e.text); break;
    case ExprKind::Null: os << "null"; break;
    case ExprKind::Name: os << e.text; break;
    case ExprKind::This: os << "this"; break;
    case ExprKind::Field:
        print_receiver(os, e.operands[0]);
        os << '.' << e.text;
        break;
    case ExprKind::Index:
        print_receiver(os, e.operands[0]);
        os << '[';
        print_expr(os, e.operands[1]);
        os << ']';
        break;
    case ExprKind::Call:
        print_receiver(os, e.operands[0]);
        os << '.' << e.text;
        print_args(os, e.operands, 1);
        break;
    case ExprKind::NewObject:
        os << "new " << e.text;
        print_args(os, e.operands, 0);
        break;
    case ExprKind::NewArray:
        os << "new " << to_string(e.newType) << '[';
        print_expr(os, e.operands[0]);
        os << ']';
        break;
    case ExprKind::Unary: {
        os << e.text;
        const Expr& x = e.operands[0];
        bool wrap = precedence(x) < 7;
        print_wrapped(os, x, wrap);
        break;
    }
    case ExprKind::Binary: {
        int p = precedence(e);
        print_wrapped(os, e.operands[0], precedence(e.operands[0]) < p);
        os << ' ' << e.text << ' ';
        print_wrapped(os, e.operands[1], precedence(e.operands[1]) <= p);
        break;
    }
    case ExprKind::Println:
        os << "System.out.println(";
        print_expr(os, e.operands[0]);
        os << ')';
        break;
    }
}

class Printer {
public:
    std::string run(const Program& p) {
        for (std::size_t i = 0; i < p.classes.size(); ++i) {
            if (i > 0) os_ << '\n';
            klass(p.classes[i]);
        }
        return os_.str();
    }

private:
    void indent() {
        for (int i = 0; i < depth_; ++i) os_ << "    ";
    }

    void params(const std::vector<Param>& ps) {
        os_ << '(';
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (i > 0) os_ << ", ";
            os_ << to_string(ps[i].type) << ' ' << ps[i].name;
        }
        os_ << ')';
    }

    void klass(const ClassDecl& c) {
        os_ << "class " << c.name << " {\n";
        ++depth_;
        for (const auto& f : c.fields) {
            indent();
            os_ << "public " << to_string(f.type) << ' ' << f.name << ";\n";
        }
        for (const auto& ctor : c.ctors) {
            indent();
            os_ << ctor.name;
            params(ctor.params);
            os_ << ' ';
            block(ctor.body);
            os_ << '\n';
        }
        for (const auto& m : c.methods) {
            indent();
            os_ << "public " << to_string(m.returnType) << ' ' << m.name;
            params(m.params);
            os_ << ' ';
            block(m.body);
            os_ << '\n';
        }
        for (const auto& m : c.mains) {
            indent();
            os_ << "public static void main(String[] " << m.argsName << ") ";
            block(m.body);
            os_ << '\n';
        }
        --depth_;
        os_ << "}\n";
    }

    void block(const Block& b) {
        os_ << "{\n";
        ++depth_;
        for (const auto& s : b.stmts) stmt(s);
        --depth_;
        indent();
        os_ << '}';
    }

    void stmt(const Stmt& s) {
        indent();
        switch (s.kind) {
        case StmtKind::VarDecl:
            os_ << to_string(s.declType) << ' ' << s.name;
            if (s.expr) {
                os_ << " = ";
                print_expr(os_, *s.expr);
            }
            os_ << ";\n";
            break;
        case StmtKind::Assign:
            print_expr(os_, *s.target);
            os_ << " = ";
            print_expr(os_, *s.expr);
            os_ << ";\n";
            break;
        case StmtKind::ExprStmt:
            print_expr(os_, *s.expr);
            os_ << ";\n";
            break;
        case StmtKind::If:
            os_ << "if (";
            print_expr(os_, *s.expr);
            os_ << ") ";
            block(s.blocks[0]);
            if (s.blocks.size() > 1) {
                os_ << " else ";
                block(s.blocks[1]);
            }
            os_ << '\n';
            break;
        case StmtKind::While:
            os_ << "while (";
            print_expr(os_, *s.expr);
            os_ << ") ";
            block(s.blocks[0]);
            os_ << '\n';
            break;
        case StmtKind::Return:
            os_ << "return";
            if (s.expr) {
                os_ << ' ';
                print_expr(os_, *s.expr);
            }
            os_ << ";\n";
            break;
        }
    }

    std::ostringstream os_;
    int depth_ = 0;
};

}  // namespace

std::string pretty_print(const Program& program) { return Printer().run(program); }

std::string pretty_print(const Expr& expr) {
    std::ostringstream os;
    print_expr(os, expr);
    return os.str();
}

}  // namespace vps::lang
