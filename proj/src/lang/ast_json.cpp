#include "vps/lang/ast_json.hpp"

#include <nlohmann/json.hpp>

#include "vps/text.hpp"

namespace vps::lang {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kExprKinds[] = {"IntLit", "DoubleLit", "BoolLit", "CharLit", "StringLit", "Null",
                                      "Name",   "This",      "Field",   "Index",   "Call",      "NewObject",
                                      "NewArray", "Unary",   "Binary",  "Println"};
constexpr const char* kStmtKinds[] = {"VarDecl", "Assign", "ExprStmt", "If", "While", "Return"};

Json pos_json(SourcePos p) { return {{"line", p.line}, {"column", p.column}}; }

Json expr_json(const Expr& e) {
    Json j;
    j["kind"] = kExprKinds[static_cast<int>(e.kind)];
    j["pos"] = pos_json(e.pos);
    switch (e.kind) {
    case ExprKind::IntLit: j["value"] = e.intValue; break;
    case ExprKind::DoubleLit: j["value"] = text::format_double(e.doubleValue); break;
    case ExprKind::BoolLit: j["value"] = e.boolValue; break;
    case ExprKind::CharLit: j["value"] = text::quote_char(e.charValue); break;
    case ExprKind::StringLit: j["value"] = e.text; break;
    case ExprKind::Name:
        j["name"] = e.text;
        j["binding"] = e.binding == NameBinding::ImplicitField ? "field" : "local";
        break;
    case ExprKind::Field:
    case ExprKind::Call: j["member"] = e.text; break;
    case ExprKind::NewObject: j["class"] = e.text; break;
    case ExprKind::NewArray: j["element"] = to_string(e.newType); break;
    case ExprKind::Unary:
    case ExprKind::Binary: j["op"] = e.text; break;
    default: break;
    }
    if (!e.operands.empty()) {
        j["operands"] = Json::array();
        for (const auto& o : e.operands) j["operands"].push_back(expr_json(o));
    }
    j["type"] = to_string(e.type);
    return j;
}

Json block_json(const Block& b);

Json stmt_json(const Stmt& s) {
    Json j;
    j["kind"] = kStmtKinds[static_cast<int>(s.kind)];
    j["pos"] = pos_json(s.pos);
    switch (s.kind) {
    case StmtKind::VarDecl:
        j["type"] = to_string(s.declType);
        j["name"] = s.name;
        if (s.expr) j["init"] = expr_json(*s.expr);
        break;
    case StmtKind::Assign:
        j["target"] = expr_json(*s.target);
        j["value"] = expr_json(*s.expr);
        break;
    case StmtKind::ExprStmt: j["expr"] = expr_json(*s.expr); break;
    case StmtKind::If:
        j["cond"] = expr_json(*s.expr);
        j["then"] = block_json(s.blocks.at(0));
        if (s.blocks.size() > 1) j["else"] = block_json(s.blocks[1]);
        break;
    case StmtKind::While:
        j["cond"] = expr_json(*s.expr);
        j["body"] = block_json(s.blocks.at(0));
        break;
    case StmtKind::Return:
        if (s.expr) j["value"] = expr_json(*s.expr);
        break;
    }
    return j;
}

Json block_json(const Block& b) {
    Json arr = Json::array();
    for (const auto& s : b.stmts) arr.push_back(stmt_json(s));
    return arr;
}

Json params_json(const std::vector<Param>& ps) {
    Json arr = Json::array();
    for (const auto& p : ps) arr.push_back({{"type", to_string(p.type)}, {"name", p.name}});
    return arr;
}

}  // namespace

std::string ast_to_json(const CheckedProgram& program) {
    Json j;
    j["main"] = program.name();
    j["classes"] = Json::array();
    for (const auto& c : program.ast().classes) {
        Json cj;
        cj["name"] = c.name;
        cj["pos"] = pos_json(c.pos);
        cj["fields"] = Json::array();
        for (const auto& f : c.fields) cj["fields"].push_back({{"type", to_string(f.type)}, {"name", f.name}});
        cj["constructors"] = Json::array();
        for (const auto& k : c.ctors) {
            cj["constructors"].push_back({{"name", k.name}, {"params", params_json(k.params)}, {"body", block_json(k.body)}});
        }
        cj["methods"] = Json::array();
        for (const auto& m : c.methods) {
            cj["methods"].push_back({{"returnType", to_string(m.returnType)},
                                     {"name", m.name},
                                     {"params", params_json(m.params)},
                                     {"body", block_json(m.body)}});
        }
        if (!c.mains.empty()) cj["mainMethod"] = {{"args", c.mains[0].argsName}, {"body", block_json(c.mains[0].body)}};
        j["classes"].push_back(std::move(cj));
    }
    return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

}  // namespace vps::lang
