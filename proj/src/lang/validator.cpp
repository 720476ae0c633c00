#include "vps/lang/validator.hpp"

#include <optional>
#include <set>
#include <utility>

#include "vps/lang/parser.hpp"

namespace vps::lang {

std::string_view to_string(ErrorCategory category) {
    switch (category) {
    case ErrorCategory::UnknownType: return "unknown type";
    case ErrorCategory::UnknownField: return "unknown field";
    case ErrorCategory::UnknownMethod: return "unknown method";
    case ErrorCategory::UnknownVariable: return "unknown variable";
    case ErrorCategory::ArityMismatch: return "arity mismatch";
    case ErrorCategory::TypeMismatch: return "type mismatch";
    case ErrorCategory::MissingMain: return "missing main";
    case ErrorCategory::DuplicateMain: return "duplicate main";
    case ErrorCategory::DuplicateDeclaration: return "duplicate declaration";
    case ErrorCategory::InvalidConstructor: return "invalid constructor";
    case ErrorCategory::MissingReturn: return "missing return";
    case ErrorCategory::NotAStatement: return "not a statement";
    case ErrorCategory::LiteralOutOfRange: return "literal out of range";
    case ErrorCategory::InvalidAssignment: return "invalid assignment";
    }
    return "?";
}

namespace {

std::string summarize(const std::vector<ValidationError>& errors) {
    std::string s = std::to_string(errors.size()) + " validation error(s)";
    if (!errors.empty()) {
        const auto& e = errors.front();
        s += "; first at " + std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column) + ": " +
             e.message;
    }
    return s;
}

constexpr std::int64_t kIntMax = 2147483647;

bool assignable(const TypeRef& to, const TypeRef& from) {
    if (to == from) return true;
    if (from.base == BaseType::Null && !from.array) return to.is_reference() && to.base != BaseType::Null;
    if (to.array || from.array) return false;
    if (to.base == BaseType::Int) return from.base == BaseType::Char;
    if (to.base == BaseType::Double) return from.base == BaseType::Int || from.base == BaseType::Char;
    return false;
}

TypeRef promote(const TypeRef& a, const TypeRef& b) {
    if (a.base == BaseType::Double || b.base == BaseType::Double) return TypeRef::of(BaseType::Double);
    return TypeRef::of(BaseType::Int);
}

bool is_string(const TypeRef& t) { return !t.array && t.base == BaseType::String; }
bool is_boolean(const TypeRef& t) { return !t.array && t.base == BaseType::Boolean; }
bool is_integral(const TypeRef& t) {
    return !t.array && (t.base == BaseType::Int || t.base == BaseType::Char);
}

using MaybeType = std::optional<TypeRef>;

class Checker {
public:
    explicit Checker(Program& prog) : prog_(prog) {}

    std::vector<ValidationError> run() {
        check_classes();
        check_main_count();
        for (auto& c : prog_.classes) check_bodies(c);
        return std::move(errors_);
    }

private:
    void error(ErrorCategory cat, std::string message, SourcePos pos) {
        errors_.push_back(ValidationError{cat, std::move(message), pos});
    }

    // -- declarations --------------------------------------------------------

    bool check_type(const TypeRef& t, SourcePos pos, bool allow_void = false) {
        if (t.base == BaseType::Void) {
            if (allow_void && !t.array) return true;
            error(ErrorCategory::TypeMismatch, "'void' is not allowed here", pos);
            return false;
        }
        if (t.base == BaseType::Class && !prog_.find_class(t.className)) {
            error(ErrorCategory::UnknownType, "unknown type '" + t.className + "'", pos);
            return false;
        }
        return true;
    }

    void check_params(const std::vector<Param>& params) {
        std::set<std::string> seen;
        for (const auto& p : params) {
            check_type(p.type, p.pos);
            if (!seen.insert(p.name).second) {
                error(ErrorCategory::DuplicateDeclaration, "duplicate parameter '" + p.name + "'", p.pos);
            }
        }
    }

    void check_classes() {
        std::set<std::string> names;
        for (const auto& c : prog_.classes) {
            if (!names.insert(c.name).second) {
                error(ErrorCategory::DuplicateDeclaration, "duplicate class '" + c.name + "'", c.pos);
            }
            std::set<std::string> fields;
            for (const auto& f : c.fields) {
                check_type(f.type, f.pos);
                if (!fields.insert(f.name).second) {
                    error(ErrorCategory::DuplicateDeclaration,
                          "duplicate field '" + f.name + "' in class '" + c.name + "'", f.pos);
                }
            }
            for (std::size_t i = 0; i < c.ctors.size(); ++i) {
                const auto& ctor = c.ctors[i];
                if (ctor.name != c.name) {
                    error(ErrorCategory::InvalidConstructor,
                          "constructor '" + ctor.name + "' does not match class '" + c.name + "'", ctor.pos);
                }
                if (i > 0) {
                    error(ErrorCategory::DuplicateDeclaration,
                          "class '" + c.name + "' declares more than one constructor", ctor.pos);
                }
                check_params(ctor.params);
            }
            std::set<std::string> methods;
            for (const auto& m : c.methods) {
                check_type(m.returnType, m.pos, true);
                if (!methods.insert(m.name).second) {
                    error(ErrorCategory::DuplicateDeclaration,
                          "duplicate method '" + m.name + "' in class '" + c.name + "'", m.pos);
                }
                check_params(m.params);
            }
        }
    }

    void check_main_count() {
        std::size_t count = 0;
        for (const auto& c : prog_.classes) {
            for (const auto& m : c.mains) {
                if (++count > 1) {
                    error(ErrorCategory::DuplicateMain, "more than one main method", m.pos);
                }
            }
        }
        if (count == 0) {
            SourcePos pos = prog_.classes.empty() ? SourcePos{1, 1} : prog_.classes.front().pos;
            error(ErrorCategory::MissingMain, "no 'public static void main(String[] args)' method", pos);
        }
    }

    // -- bodies --------------------------------------------------------------

    struct Context {
        const ClassDecl* owner = nullptr;  // nullptr inside main
        TypeRef returnType = TypeRef::of(BaseType::Void);
    };

    void check_bodies(ClassDecl& c) {
        for (auto& ctor : c.ctors) {
            enter_body({&c, TypeRef::of(BaseType::Void)}, ctor.params);
            block(ctor.body);
            leave_body();
        }
        for (auto& m : c.methods) {
            enter_body({&c, m.returnType}, m.params);
            block(m.body);
            if (!m.returnType.is_void() && !always_returns(m.body)) {
                error(ErrorCategory::MissingReturn, "method '" + m.name + "' must return a value", m.pos);
            }
            leave_body();
        }
        for (auto& m : c.mains) {
            enter_body({nullptr, TypeRef::of(BaseType::Void)}, {});
            block(m.body);
            leave_body();
        }
    }

    void enter_body(Context ctx, const std::vector<Param>& params) {
        ctx_ = ctx;
        scopes_.clear();
        scopes_.emplace_back();
        for (const auto& p : params) scopes_.back().emplace_back(p.name, valid(p.type));
    }

    void leave_body() { scopes_.clear(); }

    MaybeType valid(const TypeRef& t) const {
        if (t.base == BaseType::Class && !prog_.find_class(t.className)) return std::nullopt;
        return t;
    }

    const std::pair<std::string, MaybeType>* lookup_local(const std::string& name) const {
        for (auto s = scopes_.rbegin(); s != scopes_.rend(); ++s) {
            for (const auto& entry : *s) {
                if (entry.first == name) return &entry;
            }
        }
        return nullptr;
    }

    static bool always_returns(const Block& b) {
        if (b.stmts.empty()) return false;
        const Stmt& last = b.stmts.back();
        if (last.kind == StmtKind::Return) return true;
        if (last.kind == StmtKind::If && last.blocks.size() == 2) {
            return always_returns(last.blocks[0]) && always_returns(last.blocks[1]);
        }
        if (last.kind == StmtKind::While && last.expr->kind == ExprKind::BoolLit && last.expr->boolValue) {
            return true;
        }
        return false;
    }

    void block(Block& b) {
        scopes_.emplace_back();
        for (auto& s : b.stmts) stmt(s);
        scopes_.pop_back();
    }

    void require(const MaybeType& actual, const TypeRef& expected, SourcePos pos, const char* what) {
        if (!actual) return;
        if (!assignable(expected, *actual)) {
            error(ErrorCategory::TypeMismatch,
                  std::string("incompatible types in ") + what + ": " + to_string(*actual) +
                      " cannot be converted to " + to_string(expected),
                  pos);
        }
    }

    void stmt(Stmt& s) {
        switch (s.kind) {
        case StmtKind::VarDecl: {
            bool ok = check_type(s.declType, s.pos);
            if (lookup_local(s.name)) {
                error(ErrorCategory::DuplicateDeclaration, "variable '" + s.name + "' is already defined",
                      s.pos);
            }
            if (s.expr) {
                MaybeType init = value(*s.expr);
                if (ok) require(init, s.declType, s.expr->pos, "declaration");
            }
            scopes_.back().emplace_back(s.name, ok ? MaybeType(s.declType) : std::nullopt);
            break;
        }
        case StmtKind::Assign: {
            MaybeType target = expr(*s.target);
            const Expr& t = *s.target;
            if (t.kind == ExprKind::Field && t.text == "length" && t.operands[0].type.array) {
                error(ErrorCategory::InvalidAssignment, "cannot assign to the length of an array", t.pos);
                target.reset();
            }
            MaybeType v = value(*s.expr);
            if (target) require(v, *target, s.expr->pos, "assignment");
            break;
        }
        case StmtKind::ExprStmt:
            if (s.expr->kind != ExprKind::Call && s.expr->kind != ExprKind::Println) {
                error(ErrorCategory::NotAStatement, "expression result is not used", s.expr->pos);
            }
            expr(*s.expr);
            break;
        case StmtKind::If:
        case StmtKind::While: {
            MaybeType cond = value(*s.expr);
            if (cond && !is_boolean(*cond)) {
                error(ErrorCategory::TypeMismatch, "condition must be boolean, found " + to_string(*cond),
                      s.expr->pos);
            }
            for (auto& b : s.blocks) block(b);
            break;
        }
        case StmtKind::Return:
            if (ctx_.returnType.is_void()) {
                if (s.expr) {
                    value(*s.expr);
                    error(ErrorCategory::TypeMismatch, "cannot return a value here", s.expr->pos);
                }
            } else if (!s.expr) {
                error(ErrorCategory::TypeMismatch, "missing return value", s.pos);
            } else {
                require(value(*s.expr), ctx_.returnType, s.expr->pos, "return");
            }
            break;
        }
    }

    // Like expr(), but a void result is an error.
    MaybeType value(Expr& e) {
        MaybeType t = expr(e);
        if (t && t->is_void()) {
            error(ErrorCategory::TypeMismatch, "void value used in an expression", e.pos);
            return std::nullopt;
        }
        return t;
    }

    MaybeType annotate(Expr& e, MaybeType t) {
        if (t) e.type = *t;
        return t;
    }

    void check_args(std::vector<Expr>& ops, std::size_t from, const std::vector<Param>& params,
                    const std::string& what, SourcePos pos) {
        std::vector<MaybeType> actual;
        for (std::size_t i = from; i < ops.size(); ++i) actual.push_back(value(ops[i]));
        if (actual.size() != params.size()) {
            error(ErrorCategory::ArityMismatch,
                  what + " expects " + std::to_string(params.size()) + " argument(s) but got " +
                      std::to_string(actual.size()),
                  pos);
            return;
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            require(actual[i], params[i].type, ops[from + i].pos, "argument");
        }
    }

    MaybeType expr(Expr& e) { return annotate(e, compute(e)); }

    MaybeType compute(Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit:
            if (e.intValue > kIntMax) {
                error(ErrorCategory::LiteralOutOfRange, "integer literal out of range", e.pos);
            }
            return TypeRef::of(BaseType::Int);
        case ExprKind::DoubleLit: return TypeRef::of(BaseType::Double);
        case ExprKind::BoolLit: return TypeRef::of(BaseType::Boolean);
        case ExprKind::CharLit: return TypeRef::of(BaseType::Char);
        case ExprKind::StringLit: return TypeRef::of(BaseType::String);
        case ExprKind::Null: return TypeRef::of(BaseType::Null);
        case ExprKind::Name: {
            if (const auto* local = lookup_local(e.text)) {
                e.binding = NameBinding::Local;
                return local->second;
            }
            if (ctx_.owner) {
                if (const FieldDecl* f = ctx_.owner->find_field(e.text)) {
                    e.binding = NameBinding::ImplicitField;
                    return valid(f->type);
                }
            }
            error(ErrorCategory::UnknownVariable, "unknown variable '" + e.text + "'", e.pos);
            return std::nullopt;
        }
        case ExprKind::This:
            if (!ctx_.owner) {
                error(ErrorCategory::UnknownVariable, "'this' is not available in main", e.pos);
                return std::nullopt;
            }
            return TypeRef::klass(ctx_.owner->name);
        case ExprKind::Field: {
            MaybeType recv = value(e.operands[0]);
            if (!recv) return std::nullopt;
            if (recv->array) {
                if (e.text == "length") return TypeRef::of(BaseType::Int);
                error(ErrorCategory::UnknownField, "arrays have no field '" + e.text + "'", e.pos);
                return std::nullopt;
            }
            if (recv->base != BaseType::Class) {
                error(ErrorCategory::UnknownField,
                      "cannot access field '" + e.text + "' of type " + to_string(*recv), e.pos);
                return std::nullopt;
            }
            const ClassDecl* c = prog_.find_class(recv->className);
            const FieldDecl* f = c ? c->find_field(e.text) : nullptr;
            if (!f) {
                error(ErrorCategory::UnknownField,
                      "unknown field '" + e.text + "' in class '" + recv->className + "'", e.pos);
                return std::nullopt;
            }
            return valid(f->type);
        }
        case ExprKind::Index: {
            MaybeType recv = value(e.operands[0]);
            MaybeType idx = value(e.operands[1]);
            if (idx && !is_integral(*idx)) {
                error(ErrorCategory::TypeMismatch, "array index must be int, found " + to_string(*idx),
                      e.operands[1].pos);
            }
            if (!recv) return std::nullopt;
            if (!recv->array) {
                error(ErrorCategory::TypeMismatch, "cannot index a value of type " + to_string(*recv), e.pos);
                return std::nullopt;
            }
            return recv->element();
        }
        case ExprKind::Call: {
            MaybeType recv = value(e.operands[0]);
            if (!recv) {
                for (std::size_t i = 1; i < e.operands.size(); ++i) value(e.operands[i]);
                return std::nullopt;
            }
            const ClassDecl* c =
                (!recv->array && recv->base == BaseType::Class) ? prog_.find_class(recv->className) : nullptr;
            const MethodDecl* m = c ? c->find_method(e.text) : nullptr;
            if (!m) {
                error(ErrorCategory::UnknownMethod,
                      "unknown method '" + e.text + "' for type " + to_string(*recv), e.pos);
                for (std::size_t i = 1; i < e.operands.size(); ++i) value(e.operands[i]);
                return std::nullopt;
            }
            check_args(e.operands, 1, m->params, "method '" + e.text + "'", e.pos);
            if (m->returnType.is_void()) return m->returnType;
            return valid(m->returnType);
        }
        case ExprKind::NewObject: {
            const ClassDecl* c = prog_.find_class(e.text);
            if (!c) {
                error(ErrorCategory::UnknownType, "unknown type '" + e.text + "'", e.pos);
                for (auto& a : e.operands) value(a);
                return std::nullopt;
            }
            static const std::vector<Param> none;
            const CtorDecl* ctor = c->ctor();
            check_args(e.operands, 0, ctor ? ctor->params : none, "constructor '" + c->name + "'", e.pos);
            return TypeRef::klass(c->name);
        }
        case ExprKind::NewArray: {
            bool ok = check_type(e.newType, e.pos);
            MaybeType len = value(e.operands[0]);
            if (len && !is_integral(*len)) {
                error(ErrorCategory::TypeMismatch, "array length must be int, found " + to_string(*len),
                      e.operands[0].pos);
            }
            if (!ok) return std::nullopt;
            return e.newType.as_array();
        }
        case ExprKind::Unary: {
            Expr& x = e.operands[0];
            if (e.text == "-" && x.kind == ExprKind::IntLit && x.intValue == kIntMax + 1) {
                return annotate(x, TypeRef::of(BaseType::Int));
            }
            MaybeType t = value(x);
            if (!t) return std::nullopt;
            if (e.text == "-") {
                if (!t->is_numeric()) {
                    error(ErrorCategory::TypeMismatch, "bad operand type " + to_string(*t) + " for unary '-'",
                          e.pos);
                    return std::nullopt;
                }
                return promote(*t, *t);
            }
            if (!is_boolean(*t)) {
                error(ErrorCategory::TypeMismatch, "bad operand type " + to_string(*t) + " for '!'", e.pos);
                return std::nullopt;
            }
            return t;
        }
        case ExprKind::Binary: return binary(e);
        case ExprKind::Println: {
            value(e.operands[0]);
            return TypeRef::of(BaseType::Void);
        }
        }
        return std::nullopt;
    }

    MaybeType binary(Expr& e) {
        MaybeType l = value(e.operands[0]);
        MaybeType r = value(e.operands[1]);
        if (!l || !r) return std::nullopt;
        const std::string& op = e.text;
        auto bad = [&]() -> MaybeType {
            error(ErrorCategory::TypeMismatch,
                  "bad operand types for '" + op + "': " + to_string(*l) + " and " + to_string(*r), e.pos);
            return std::nullopt;
        };
        if (op == "+" && (is_string(*l) || is_string(*r))) return TypeRef::of(BaseType::String);
        if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
            if (!l->is_numeric() || !r->is_numeric()) return bad();
            return promote(*l, *r);
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            if (!l->is_numeric() || !r->is_numeric()) return bad();
            return TypeRef::of(BaseType::Boolean);
        }
        if (op == "&&" || op == "||") {
            if (!is_boolean(*l) || !is_boolean(*r)) return bad();
            return TypeRef::of(BaseType::Boolean);
        }
        // == and !=
        bool ok = (l->is_numeric() && r->is_numeric()) || (is_boolean(*l) && is_boolean(*r)) ||
                  (is_string(*l) && is_string(*r)) ||
                  (l->is_reference() && r->is_reference() &&
                   (*l == *r || l->base == BaseType::Null || r->base == BaseType::Null));
        if (!ok) return bad();
        return TypeRef::of(BaseType::Boolean);
    }

    Program& prog_;
    std::vector<ValidationError> errors_;
    Context ctx_;
    std::vector<std::vector<std::pair<std::string, MaybeType>>> scopes_;
};

}  // namespace

ValidationFailed::ValidationFailed(std::vector<ValidationError> errors)
    : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}

std::vector<ValidationError> check(const Program& program) {
    Program copy = program;
    return Checker(copy).run();
}

CheckedProgram validate(Program program, std::string source) {
    auto errors = Checker(program).run();
    if (!errors.empty()) throw ValidationFailed(std::move(errors));
    return CheckedProgram(std::move(program), std::move(source));
}

CheckedProgram compile(std::string_view source) {
    return validate(parse_program(source), std::string(source));
}

}  // namespace vps::lang
