#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vps/lang/token.hpp"

namespace vps::lang {

enum class BaseType { Int, Double, Boolean, Char, String, Class, Void, Null };

/// A declared or inferred static type. Arrays are one-dimensional only.
struct TypeRef {
    BaseType base = BaseType::Void;
    std::string className;  // set when base == Class
    bool array = false;

    static TypeRef of(BaseType b) { return TypeRef{b, {}, false}; }
    static TypeRef klass(std::string name) { return TypeRef{BaseType::Class, std::move(name), false}; }
    TypeRef element() const { return TypeRef{base, className, false}; }
    TypeRef as_array() const { return TypeRef{base, className, true}; }

    bool is_numeric() const {
        return !array && (base == BaseType::Int || base == BaseType::Double || base == BaseType::Char);
    }
    /// Arrays, class instances and the null type live on the heap side.
    bool is_reference() const { return array || base == BaseType::Class || base == BaseType::Null; }
    bool is_void() const { return !array && base == BaseType::Void; }

    friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

/// Java spelling: "int", "Person", "String[]".
std::string to_string(const TypeRef& type);
std::string to_string(BaseType base);

enum class ExprKind {
    IntLit,
    DoubleLit,
    BoolLit,
    CharLit,
    StringLit,
    Null,
    Name,
    This,
    Field,      // operands[0].text
    Index,      // operands[0][operands[1]]
    Call,       // operands[0].text(operands[1..])
    NewObject,  // new text(operands...)
    NewArray,   // new newType[operands[0]]
    Unary,      // text operands[0]
    Binary,     // operands[0] text operands[1]
    Println,    // System.out.println(operands[0])
};

/// How a bare name resolved during validation.
enum class NameBinding { Unresolved, Local, ImplicitField };

struct Expr {
    ExprKind kind = ExprKind::Null;
    SourcePos pos;
    std::string text;  // name, member, class, operator or decoded string literal
    std::int64_t intValue = 0;
    double doubleValue = 0.0;
    bool boolValue = false;
    char16_t charValue = 0;
    TypeRef newType;  // element type of NewArray
    std::vector<Expr> operands;

    int id = -1;  // unique per program, assigned by the parser

    // filled in by validate()
    TypeRef type;
    NameBinding binding = NameBinding::Unresolved;
};

enum class StmtKind { VarDecl, Assign, ExprStmt, If, While, Return };

struct Stmt;

struct Block {
    std::vector<Stmt> stmts;
    SourcePos open;
    SourcePos close;
};

struct Stmt {
    StmtKind kind = StmtKind::ExprStmt;
    SourcePos pos;

    // VarDecl
    TypeRef declType;
    std::string name;

    std::optional<Expr> target;  // Assign lvalue
    std::optional<Expr> expr;    // initializer, assigned value, expression, condition, return value

    std::vector<Block> blocks;  // If: then[, else]; While: body
};

struct Param {
    TypeRef type;
    std::string name;
    SourcePos pos;
};

struct FieldDecl {
    TypeRef type;
    std::string name;
    SourcePos pos;
};

struct CtorDecl {
    std::string name;
    std::vector<Param> params;
    Block body;
    SourcePos pos;
};

struct MethodDecl {
    TypeRef returnType;  // Void for void methods
    std::string name;
    std::vector<Param> params;
    Block body;
    SourcePos pos;
};

struct MainDecl {
    std::string argsName;
    Block body;
    SourcePos pos;
};

struct ClassDecl {
    std::string name;
    std::vector<FieldDecl> fields;
    std::vector<CtorDecl> ctors;  // the grammar admits several; validation allows one
    std::vector<MethodDecl> methods;
    std::vector<MainDecl> mains;
    SourcePos pos;

    const FieldDecl* find_field(const std::string& field) const;
    const MethodDecl* find_method(const std::string& method) const;
    const CtorDecl* ctor() const { return ctors.empty() ? nullptr : &ctors.front(); }
};

struct Program {
    std::vector<ClassDecl> classes;

    const ClassDecl* find_class(const std::string& name) const;
    /// Class that declares main, or nullptr.
    const ClassDecl* main_class() const;
    const MainDecl* main() const;
};

/// Structural equality that ignores positions, expression ids and the
/// annotations added by validation.
bool same_structure(const Program& a, const Program& b);
bool same_structure(const Expr& a, const Expr& b);

/// A program that passed validation. Copies share one immutable AST, so
/// pointers into it remain valid for as long as any copy is alive.
class CheckedProgram {
public:
    explicit CheckedProgram(Program program, std::string source = {})
        : program_(std::make_shared<const Program>(std::move(program))),
          source_(std::make_shared<const std::string>(std::move(source))) {}

    const Program& ast() const { return *program_; }
    const std::string& source() const { return *source_; }
    const std::string& name() const;
    const MainDecl& main() const { return *program_->main(); }
    const ClassDecl& main_class() const { return *program_->main_class(); }
    const ClassDecl* find_class(const std::string& name) const { return program_->find_class(name); }

private:
    std::shared_ptr<const Program> program_;
    std::shared_ptr<const std::string> source_;
};

}  // namespace vps::lang
