#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vps/lang/ast.hpp"
#include "vps/machine/value.hpp"

namespace vps::machine {

struct Binding {
    std::string name;
    Value value;
};

struct ArrayNode {
    std::string elemType;  // "int", "Person", ...
    std::vector<Value> cells;
};

struct ObjectNode {
    std::string className;
    std::vector<Binding> fields;  // declaration order

    const Value* find(const std::string& field) const;
};

using HeapNode = std::variant<ArrayNode, ObjectNode>;

/// Heap of numbered memory areas. Ids start at 1 and follow allocation
/// order; nodes are never removed. Copies share unmodified nodes.
class Heap {
public:
    std::size_t size() const { return nodes_.size(); }
    bool contains(std::uint32_t id) const { return id >= 1 && id <= nodes_.size(); }
    const HeapNode& at(std::uint32_t id) const;

    std::uint32_t allocate(HeapNode node);
    void replace(std::uint32_t id, HeapNode node);

    /// Ids in allocation order (1..size()).
    std::vector<std::uint32_t> ids() const;

private:
    std::vector<std::shared_ptr<const HeapNode>> nodes_;
};

/// Where execution stands inside one block of a frame.
struct Cursor {
    const lang::Block* block = nullptr;
    std::size_t pc = 0;
    std::size_t scopeMark = 0;  // bindings.size() on block entry
};

enum class FrameKind { Main, Constructor, Method };

/// Interpreter bookkeeping carried by a frame. Not part of what a snapshot
/// shows; snapshot_equal ignores it. Points into the CheckedProgram the
/// state was produced from.
struct FrameControl {
    FrameKind kind = FrameKind::Main;
    const lang::Block* body = nullptr;
    const lang::MethodDecl* method = nullptr;
    std::vector<Cursor> cursors;
    std::map<int, Value> memo;  // expr id -> value, for the statement in progress
    int awaiting = -1;          // expr id of the call whose frame sits above
};

struct Frame {
    std::string label;  // "main", "Person.Person", "Person.getRut"
    std::vector<Binding> bindings;
    FrameControl control;

    const Value* find(const std::string& name) const;
};

enum class Status { Running, Finished, Error };

enum class ErrorKind {
    None,
    NullPointer,
    IndexOutOfBounds,
    DivisionByZero,
    NegativeArraySize,
    MissingReturn,
    StackOverflow,
    StepBudget,
};

std::string_view to_string(Status status);

struct MachineState {
    std::size_t stepIndex = 0;  // index of the event that produced this snapshot
    std::size_t executed = 0;   // steps taken to reach this snapshot
    std::vector<Frame> frames;  // outermost first
    Heap heap;
    Status status = Status::Running;
    ErrorKind errorKind = ErrorKind::None;
    std::string error;
    std::optional<int> nextLine;

    const Frame& top() const { return frames.back(); }
};

/// Structural equality of frames (labels and bindings) and heap, comparing
/// heap ids literally.
bool snapshot_equal(const MachineState& a, const MachineState& b);

/// Number of RefV occurrences across all frames and heap nodes.
std::size_t count_refs(const MachineState& s);

/// True when every RefV in frames and heap names an existing node.
bool referentially_closed(const MachineState& s);

}  // namespace vps::machine
