#include "vps/lang/ast.hpp"

#include <cstring>

namespace vps::lang {

std::string to_string(BaseType base) {
    switch (base) {
    case BaseType::Int: return "int";
    case BaseType::Double: return "double";
    case BaseType::Boolean: return "boolean";
    case BaseType::Char: return "char";
    case BaseType::String: return "String";
    case BaseType::Class: return "class";
    case BaseType::Void: return "void";
    case BaseType::Null: return "null";
    }
    return "?";
}

std::string to_string(const TypeRef& type) {
    std::string s = type.base == BaseType::Class ? type.className : to_string(type.base);
    if (type.array) s += "[]";
    return s;
}

const FieldDecl* ClassDecl::find_field(const std::string& field) const {
    for (const auto& f : fields) {
        if (f.name == field) return &f;
    }
    return nullptr;
}

const MethodDecl* ClassDecl::find_method(const std::string& method) const {
    for (const auto& m : methods) {
        if (m.name == method) return &m;
    }
    return nullptr;
}

const ClassDecl* Program::find_class(const std::string& name) const {
    for (const auto& c : classes) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const ClassDecl* Program::main_class() const {
    for (const auto& c : classes) {
        if (!c.mains.empty()) return &c;
    }
    return nullptr;
}

const MainDecl* Program::main() const {
    const ClassDecl* c = main_class();
    return c ? &c->mains.front() : nullptr;
}

const std::string& CheckedProgram::name() const { return main_class().name; }

namespace {

bool same_block(const Block& a, const Block& b);

bool same_opt(const std::optional<Expr>& a, const std::optional<Expr>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || same_structure(*a, *b);
}

bool same_stmt(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind || a.declType != b.declType || a.name != b.name) return false;
    if (!same_opt(a.target, b.target) || !same_opt(a.expr, b.expr)) return false;
    if (a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        if (!same_block(a.blocks[i], b.blocks[i])) return false;
    }
    return true;
}

bool same_block(const Block& a, const Block& b) {
    if (a.stmts.size() != b.stmts.size()) return false;
    for (std::size_t i = 0; i < a.stmts.size(); ++i) {
        if (!same_stmt(a.stmts[i], b.stmts[i])) return false;
    }
    return true;
}

bool same_params(const std::vector<Param>& a, const std::vector<Param>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].type != b[i].type || a[i].name != b[i].name) return false;
    }
    return true;
}

bool same_class(const ClassDecl& a, const ClassDecl& b) {
    if (a.name != b.name || a.fields.size() != b.fields.size() || a.ctors.size() != b.ctors.size() ||
        a.methods.size() != b.methods.size() || a.mains.size() != b.mains.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
        if (a.fields[i].type != b.fields[i].type || a.fields[i].name != b.fields[i].name) return false;
    }
    for (std::size_t i = 0; i < a.ctors.size(); ++i) {
        const auto &x = a.ctors[i], &y = b.ctors[i];
        if (x.name != y.name || !same_params(x.params, y.params) || !same_block(x.body, y.body)) return false;
    }
    for (std::size_t i = 0; i < a.methods.size(); ++i) {
        const auto &x = a.methods[i], &y = b.methods[i];
        if (x.name != y.name || x.returnType != y.returnType || !same_params(x.params, y.params) ||
            !same_block(x.body, y.body)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.mains.size(); ++i) {
        if (a.mains[i].argsName != b.mains[i].argsName || !same_block(a.mains[i].body, b.mains[i].body)) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool same_structure(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.text != b.text || a.operands.size() != b.operands.size()) return false;
    switch (a.kind) {
    case ExprKind::IntLit:
        if (a.intValue != b.intValue) return false;
        break;
    case ExprKind::DoubleLit:
        // bitwise, so that NaN payloads and signed zero compare exactly
        if (std::memcmp(&a.doubleValue, &b.doubleValue, sizeof(double)) != 0) return false;
        break;
    case ExprKind::BoolLit:
        if (a.boolValue != b.boolValue) return false;
        break;
    case ExprKind::CharLit:
        if (a.charValue != b.charValue) return false;
        break;
    case ExprKind::NewArray:
        if (a.newType != b.newType) return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a.operands.size(); ++i) {
        if (!same_structure(a.operands[i], b.operands[i])) return false;
    }
    return true;
}

bool same_structure(const Program& a, const Program& b) {
    if (a.classes.size() != b.classes.size()) return false;
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
        if (!same_class(a.classes[i], b.classes[i])) return false;
    }
    return true;
}

}  // namespace vps::lang
