#include "vps/cli/session.hpp"

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "vps/diagram/diagram.hpp"
#include "vps/diagram/emit.hpp"
#include "vps/diagram/trace_json.hpp"
#include "vps/feedback/compare.hpp"
#include "vps/feedback/vpsd.hpp"

namespace vps::cli {

namespace {

std::optional<std::size_t> parse_count(std::string_view text) {
    if (text.empty() || text.size() > 18) return std::nullopt;
    std::size_t v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

std::string range_text(std::size_t count) {
    if (count == 0) return "the trace is empty";
    return "valid steps are 0.." + std::to_string(count - 1) + " or 'last'";
}

Response json_error(int status, const std::string& message) {
    nlohmann::json j;
    j["error"] = message;
    return {status, "application/json", j.dump() + "\n"};
}

}  // namespace

std::size_t parse_step(std::string_view text, std::size_t count) {
    if (text == "last") {
        if (count == 0) throw std::invalid_argument("no step to show: " + range_text(count));
        return count - 1;
    }
    auto v = parse_count(text);
    if (!v) throw std::invalid_argument("invalid step '" + std::string(text) + "': " + range_text(count));
    if (*v >= count) throw std::invalid_argument("step " + std::to_string(*v) + " is out of range: " + range_text(count));
    return *v;
}

std::size_t resolve_max_steps(const std::string* flag) {
    std::string source = "--max-steps";
    std::string text;
    if (flag != nullptr) {
        text = *flag;
    } else if (const char* env = std::getenv("VPS_MAX_STEPS"); env != nullptr && *env != '\0') {
        text = env;
        source = "VPS_MAX_STEPS";
    } else {
        return machine::kDefaultMaxSteps;
    }
    auto v = parse_count(text);
    if (!v || *v == 0) throw std::invalid_argument(source + " must be a positive integer, got '" + text + "'");
    return *v;
}

Format parse_format(std::string_view text) {
    if (text == "dot") return Format::Dot;
    if (text == "svg") return Format::Svg;
    if (text == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected dot, svg or json)");
}

Session::Session(lang::CheckedProgram program, std::size_t maxSteps)
    : program_(std::move(program)), trace_(machine::run_to_end(program_, maxSteps)),
      traceJson_(diagram::emit_trace_json(trace_)) {}

std::string Session::render(std::size_t step, Format format) const {
    auto d = diagram::state_to_diagram(trace_.events.at(step).state);
    switch (format) {
    case Format::Dot: return diagram::emit_dot(d);
    case Format::Svg: return diagram::emit_svg(d);
    case Format::Json: return diagram::emit_diagram_json(d);
    }
    return {};
}

Response Session::get_trace() const { return {200, "application/json", traceJson_}; }

Response Session::get_program() const { return {200, "text/plain; charset=utf-8", program_.source()}; }

Response Session::get_diagram(std::string_view step, std::string_view format) const {
    std::size_t k = 0;
    Format f = Format::Svg;
    try {
        k = parse_step(step.empty() ? std::string_view("last") : step, trace_.events.size());
        if (!format.empty()) f = parse_format(format);
    } catch (const std::invalid_argument& e) {
        return json_error(400, e.what());
    }
    static constexpr const char* kTypes[] = {"text/vnd.graphviz", "image/svg+xml", "application/json"};
    return {200, kTypes[static_cast<int>(f)], render(k, f)};
}

Response Session::post_grade(std::string_view body) const {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
        return json_error(400, "request body is not valid JSON");
    }
    if (!j.is_object() || !j.contains("answer") || !j["answer"].is_string()) {
        return json_error(400, "request body needs a string field 'answer'");
    }
    std::string step = "last";
    if (j.contains("step")) {
        const auto& s = j["step"];
        if (s.is_number_unsigned()) {
            step = std::to_string(s.get<std::uint64_t>());
        } else if (s.is_string()) {
            step = s.get<std::string>();
        } else {
            return json_error(400, "'step' must be a non-negative integer or \"last\"");
        }
    }
    std::size_t k = 0;
    try {
        k = parse_step(step, trace_.events.size());
    } catch (const std::invalid_argument& e) {
        return json_error(400, e.what());
    }
    diagram::Diagram answer;
    try {
        answer = feedback::parse_vpsd(j["answer"].get<std::string>());
    } catch (const feedback::VpsdError& e) {
        nlohmann::json err;
        err["error"] = e.what();
        err["line"] = e.line();
        return {400, "application/json", err.dump() + "\n"};
    }
    auto reference = diagram::state_to_diagram(trace_.events[k].state);
    return {200, "application/json", feedback::report_to_json(feedback::compare(reference, answer))};
}

}  // namespace vps::cli
