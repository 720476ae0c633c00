#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vps/lang/ast.hpp"
#include "vps/machine/state.hpp"

namespace vps::machine {

enum class EventKind { Decl, Assign, Call, Return, Print, Branch, Alloc, Halt };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct TraceEvent {
    std::size_t stepIndex = 0;
    int line = 0;
    EventKind kind = EventKind::Halt;
    std::string description;
    MachineState state;
};

struct StepResult {
    TraceEvent event;
    std::optional<std::string> printed;  // println output produced by this step
};

inline constexpr std::size_t kDefaultMaxSteps = 10000;

struct Trace {
    std::string sourceText;
    std::string programName;
    std::vector<TraceEvent> events;
    std::vector<std::string> output;

    Status finalStatus() const { return events.empty() ? Status::Running : events.back().state.status; }
};

/// State before the first statement of main: one empty `main` frame, empty
/// heap. Finished straight away when main has no statements.
MachineState init_machine(const lang::CheckedProgram& program);

/// Executes one statement of the innermost frame (or the implicit return /
/// halt at the end of a body). Runtime faults produce an Error state rather
/// than an exception. Throws std::logic_error if the state is not Running.
/// The state must come from the same program.
StepResult step(const MachineState& state, const lang::CheckedProgram& program);

/// Steps until the machine stops. If the machine is still running at the
/// maxSteps-th event, that event is marked Error("step budget exceeded"),
/// so a trace never holds more than maxSteps events.
Trace run_to_end(const lang::CheckedProgram& program, std::size_t maxSteps = kDefaultMaxSteps);

/// Java-like text for println and string concatenation.
std::string display(const Value& v, const Heap& heap);

}  // namespace vps::machine
