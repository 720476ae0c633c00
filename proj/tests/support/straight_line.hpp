#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "vps/machine/state.hpp"

// Random straight-line programs over a fixed set of classes, and a desk
// oracle that evaluates them without the lexer, parser or interpreter.
namespace vps::test::gen {

/// The oracle's own value model.
struct OValue {
    enum class Kind { Int, Str, Null, Ref } kind = Kind::Null;
    std::int32_t i = 0;
    std::string s;
    int ref = 0;  // 1-based heap id

    static OValue integer(std::int32_t v) { return {Kind::Int, v, {}, 0}; }
    static OValue str(std::string v) { return {Kind::Str, 0, std::move(v), 0}; }
    static OValue null() { return {}; }
    static OValue to(int id) { return {Kind::Ref, 0, {}, id}; }
};

struct ONode {
    bool array = false;
    std::string type;  // class name or element type
    std::vector<std::pair<std::string, OValue>> slots;  // fields, or cells keyed "0".."n-1"
};

struct OState {
    std::vector<std::pair<std::string, OValue>> vars;  // main frame, declaration order
    std::vector<ONode> heap;                           // index + 1 == heap id
};

/// Static types the generator works with.
enum class Ty { Int, Str, Person, Node, Pair, IntArr, PersonArr };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind {
        IntLit,
        StrLit,
        Null,
        Var,
        Field,    // var.field
        Index,    // var[index]
        Add,
        Sub,
        Mul,
        Concat,   // String + int or String + String
        NewPerson,
        NewNode,
        NewPair,
        NewIntArr,
        NewPersonArr,
    } kind;
    std::int32_t i = 0;  // literal, index or length
    std::string s;       // literal, var name, field name
    std::vector<ExprPtr> args;
};

struct Stmt {
    enum class Kind { Decl, DeclDefault, AssignVar, AssignField, AssignIndex } kind;
    Ty type = Ty::Int;  // Decl
    std::string name;   // declared/assigned var, or the object/array var
    std::string field;
    std::int32_t index = 0;
    ExprPtr value;
};

struct Program {
    std::vector<Stmt> stmts;
    int allocations = 0;
};

/// Shared class declarations used by every generated program.
std::string prelude();

std::string to_source(const Program& p);

/// Evaluates the statements from an empty main frame and heap.
OState desk_evaluate(const Program& p);

/// The oracle state in the machine's representation, for snapshot_equal.
machine::MachineState to_machine_state(const OState& s);

struct Limits {
    int maxStatements = 20;
    int maxAllocations = 10;
};

/// A program that runs to completion without runtime errors.
Program generate(std::mt19937& rng, Limits limits = {});

}  // namespace vps::test::gen
