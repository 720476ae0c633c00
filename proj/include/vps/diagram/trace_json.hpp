#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "vps/machine/interpreter.hpp"

namespace vps::diagram {

/// Malformed trace document. path() locates the offending element, e.g.
/// "events[2].state.heap[0].rows[1].value.t".
class TraceJsonError : public std::runtime_error {
public:
    TraceJsonError(std::string path, const std::string& message)
        : std::runtime_error((path.empty() ? std::string("$") : path) + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

inline constexpr int kTraceJsonVersion = 1;

std::string emit_trace_json(const machine::Trace& trace);

/// Rebuilds events and snapshots. Interpreter bookkeeping is not part of the
/// format, so parsed states can be inspected and rendered but not stepped.
machine::Trace parse_trace_json(std::string_view text);

}  // namespace vps::diagram
