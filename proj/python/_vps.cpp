#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <variant>

#include "vps/diagram/diagram.hpp"
#include "vps/diagram/emit.hpp"
#include "vps/diagram/trace_json.hpp"
#include "vps/feedback/compare.hpp"
#include "vps/feedback/vpsd.hpp"
#include "vps/lang/ast_json.hpp"
#include "vps/lang/parser.hpp"
#include "vps/lang/validator.hpp"
#include "vps/machine/interpreter.hpp"

namespace py = pybind11;
using namespace vps;

namespace {

struct CompileFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnswerFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

py::dict error_dict(int line, int column, std::string_view category, const std::string& message) {
    py::dict d;
    d["line"] = line;
    d["column"] = column;
    d["category"] = std::string(category);
    d["message"] = message;
    return d;
}

/// Every problem with the source: one syntax error, or all validation errors.
py::list check(const std::string& source) {
    py::list out;
    lang::Program program;
    try {
        program = lang::parse_program(source);
    } catch (const lang::PositionedError& e) {
        out.append(error_dict(e.pos().line, e.pos().column, "syntax error", e.message()));
        return out;
    }
    for (const auto& v : lang::check(program)) {
        out.append(error_dict(v.pos.line, v.pos.column, lang::to_string(v.category), v.message));
    }
    return out;
}

lang::CheckedProgram compile(const std::string& source) {
    try {
        return lang::compile(source);
    } catch (const lang::PositionedError& e) {
        throw CompileFailure(e.what());
    } catch (const lang::ValidationFailed& e) {
        std::string msg;
        for (const auto& v : e.errors()) {
            if (!msg.empty()) msg += "\n";
            msg += std::to_string(v.pos.line) + ":" + std::to_string(v.pos.column) + ": " + v.message;
        }
        throw CompileFailure(msg);
    }
}

std::size_t step_index(const py::object& step, std::size_t count) {
    if (count == 0) throw py::index_error("trace has no events");
    if (py::isinstance<py::str>(step)) {
        if (step.cast<std::string>() != "last") throw py::value_error("step must be an index or 'last'");
        return count - 1;
    }
    auto k = step.cast<long long>();
    if (k < 0 || static_cast<std::size_t>(k) >= count) {
        throw py::index_error("step " + std::to_string(k) + " out of range 0.." + std::to_string(count - 1));
    }
    return static_cast<std::size_t>(k);
}

diagram::Diagram step_diagram(const std::string& source, const py::object& step, std::size_t maxSteps) {
    auto trace = machine::run_to_end(compile(source), maxSteps);
    return diagram::state_to_diagram(trace.events[step_index(step, trace.events.size())].state);
}

diagram::Diagram answer_diagram(const std::string& text) {
    try {
        return feedback::parse_vpsd(text);
    } catch (const feedback::VpsdError& e) {
        throw AnswerFailure(e.what());
    }
}

}  // namespace

PYBIND11_MODULE(_vps, m) {
    m.doc() = "Native core of the vps package";
    py::register_exception<CompileFailure>(m, "CompileError", PyExc_ValueError);
    py::register_exception<AnswerFailure>(m, "AnswerError", PyExc_ValueError);
    m.attr("DEFAULT_MAX_STEPS") = machine::kDefaultMaxSteps;

    m.def("check", &check, py::arg("source"), "List of error dicts; empty when the program is valid.");

    m.def(
        "ast_json", [](const std::string& source) { return lang::ast_to_json(compile(source)); }, py::arg("source"));

    m.def(
        "trace_json",
        [](const std::string& source, std::size_t maxSteps) {
            if (maxSteps == 0) throw py::value_error("max_steps must be positive");
            py::gil_scoped_release release;
            return diagram::emit_trace_json(machine::run_to_end(compile(source), maxSteps));
        },
        py::arg("source"), py::arg("max_steps") = machine::kDefaultMaxSteps);

    m.def(
        "render",
        [](const std::string& source, const py::object& step, const std::string& format, std::size_t maxSteps) {
            auto d = step_diagram(source, step, maxSteps);
            if (format == "dot") return diagram::emit_dot(d);
            if (format == "svg") return diagram::emit_svg(d);
            if (format == "json") return diagram::emit_diagram_json(d);
            throw py::value_error("format must be dot, svg or json");
        },
        py::arg("source"), py::arg("step") = "last", py::arg("format") = "svg",
        py::arg("max_steps") = machine::kDefaultMaxSteps);

    m.def(
        "grade",
        [](const std::string& source, const std::string& answer, const py::object& step, std::size_t maxSteps) {
            auto reference = step_diagram(source, step, maxSteps);
            return feedback::report_to_json(feedback::compare(reference, answer_diagram(answer)));
        },
        py::arg("source"), py::arg("answer"), py::arg("step") = "last",
        py::arg("max_steps") = machine::kDefaultMaxSteps);

    m.def(
        "canonical_vpsd", [](const std::string& text) { return feedback::emit_vpsd(diagram::canonicalize(answer_diagram(text))); },
        py::arg("text"), "Re-emits a VPS-D diagram with canonical labels.");

    m.def(
        "step_vpsd",
        [](const std::string& source, const py::object& step, std::size_t maxSteps) {
            return feedback::emit_vpsd(diagram::canonicalize(step_diagram(source, step, maxSteps)));
        },
        py::arg("source"), py::arg("step") = "last", py::arg("max_steps") = machine::kDefaultMaxSteps,
        "The machine's diagram for one step, as canonical VPS-D.");
}
