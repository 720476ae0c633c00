#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "vps/lang/ast.hpp"
#include "vps/machine/interpreter.hpp"

namespace vps::cli {

/// Stable process exit codes.
enum Exit : int {
    kExitOk = 0,
    kExitNotEquivalent = 1,
    kExitUserError = 2,
    kExitEnvError = 3,
};

/// Parses "K" or "last" against a trace of `count` events. Throws
/// std::invalid_argument with a message naming the valid range.
std::size_t parse_step(std::string_view text, std::size_t count);

/// The budget to use: the flag if given, else VPS_MAX_STEPS, else the
/// default. Throws std::invalid_argument for a malformed or zero value.
std::size_t resolve_max_steps(const std::string* flag);

enum class Format { Dot, Svg, Json };

/// Throws std::invalid_argument for anything but dot, svg or json.
Format parse_format(std::string_view text);

struct Response {
    int status = 200;
    std::string contentType;
    std::string body;
};

/// One program and its trace, computed once. Every method is const and the
/// object is immutable after construction, so it can serve concurrent
/// requests without locking.
class Session {
public:
    Session(lang::CheckedProgram program, std::size_t maxSteps);

    const lang::CheckedProgram& program() const { return program_; }
    const machine::Trace& trace() const { return trace_; }
    const std::string& trace_json() const { return traceJson_; }

    /// Diagram text for one step.
    std::string render(std::size_t step, Format format) const;

    Response get_trace() const;
    Response get_program() const;
    Response get_diagram(std::string_view step, std::string_view format) const;
    /// Body: {"step": K | "last", "answer": "<VPS-D text>"}.
    Response post_grade(std::string_view body) const;

private:
    lang::CheckedProgram program_;
    machine::Trace trace_;
    std::string traceJson_;
};

}  // namespace vps::cli
