#include "vps/diagram/trace_json.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "vps/text.hpp"

namespace vps::diagram {

using machine::ArrayNode;
using machine::Binding;
using machine::Frame;
using machine::HeapNode;
using machine::MachineState;
using machine::NullV;
using machine::ObjectNode;
using machine::RefV;
using machine::Status;
using machine::Trace;
using machine::TraceEvent;
using machine::Value;
using Json = nlohmann::ordered_json;

namespace {

Json double_json(double d) {
    if (std::isnan(d)) return "NaN";
    if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
    return d;
}

Json value_json(const Value& v) {
    Json j;
    j["t"] = machine::type_tag(v);
    struct Visitor {
        Json& j;
        void operator()(std::int32_t i) const { j["v"] = i; }
        void operator()(double d) const { j["v"] = double_json(d); }
        void operator()(bool b) const { j["v"] = b; }
        void operator()(char16_t c) const {
            // Lone surrogates have no UTF-8 form; they travel as code units.
            if (c >= 0xD800 && c <= 0xDFFF) {
                j["v"] = static_cast<int>(c);
            } else {
                j["v"] = text::utf16_unit_to_utf8(c);
            }
        }
        void operator()(const std::string& s) const { j["v"] = s; }
        void operator()(NullV) const {}
        void operator()(RefV r) const { j["id"] = r.id; }
    };
    std::visit(Visitor{j}, v);
    return j;
}

Json bindings_json(const std::vector<Binding>& bs, const char* key) {
    Json arr = Json::array();
    for (const auto& b : bs) {
        Json e;
        e[key] = b.name;
        e["value"] = value_json(b.value);
        arr.push_back(std::move(e));
    }
    return arr;
}

Json state_json(const MachineState& s) {
    Json j;
    j["status"] = std::string(machine::to_string(s.status));
    if (s.status == Status::Error) j["error"] = s.error;
    j["frames"] = Json::array();
    for (const auto& f : s.frames) {
        Json fj;
        fj["label"] = f.label;
        fj["bindings"] = bindings_json(f.bindings, "name");
        j["frames"].push_back(std::move(fj));
    }
    j["heap"] = Json::array();
    for (auto id : s.heap.ids()) {
        Json nj;
        nj["id"] = id;
        const HeapNode& n = s.heap.at(id);
        if (const auto* arr = std::get_if<ArrayNode>(&n)) {
            nj["kind"] = "array";
            nj["elem"] = arr->elemType;
            nj["rows"] = Json::array();
            for (std::size_t i = 0; i < arr->cells.size(); ++i) {
                nj["rows"].push_back({{"i", i}, {"value", value_json(arr->cells[i])}});
            }
        } else {
            const auto& obj = std::get<ObjectNode>(n);
            nj["kind"] = "object";
            nj["class"] = obj.className;
            nj["rows"] = bindings_json(obj.fields, "name");
        }
        j["heap"].push_back(std::move(nj));
    }
    return j;
}

}  // namespace

std::string emit_trace_json(const Trace& trace) {
    Json j;
    j["version"] = kTraceJsonVersion;
    if (!trace.programName.empty()) j["name"] = trace.programName;
    j["program"] = trace.sourceText;
    j["output"] = trace.output;
    j["events"] = Json::array();
    for (const auto& ev : trace.events) {
        Json e;
        e["step"] = ev.stepIndex;
        e["line"] = ev.line;
        e["kind"] = std::string(machine::to_string(ev.kind));
        e["description"] = ev.description;
        e["state"] = state_json(ev.state);
        j["events"].push_back(std::move(e));
    }
    return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

// ---------------------------------------------------------------- parsing

namespace {

/// A JSON element together with its location in the document.
class Node {
public:
    Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& message) const { throw TraceJsonError(path_, message); }

    Node field(const char* key) const {
        if (!j_.is_object()) fail("expected an object");
        auto it = j_.find(key);
        if (it == j_.end()) throw TraceJsonError(join(key), "missing field");
        return Node(*it, join(key));
    }

    bool is_string() const { return j_.is_string(); }
    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    std::vector<Node> items() const {
        if (!j_.is_array()) fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
        return out;
    }

    std::string str() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    std::int64_t integer(std::int64_t lo, std::int64_t hi) const {
        if (!j_.is_number_integer()) fail("expected an integer");
        std::int64_t v = j_.is_number_unsigned() ? static_cast<std::int64_t>(j_.get<std::uint64_t>()) : j_.get<std::int64_t>();
        if (j_.is_number_unsigned() && j_.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) fail("integer out of range");
        if (v < lo || v > hi) fail("integer out of range");
        return v;
    }

    double number() const {
        if (j_.is_number()) return j_.get<double>();
        if (j_.is_string()) {
            auto s = j_.get<std::string>();
            if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
            if (s == "Infinity") return std::numeric_limits<double>::infinity();
            if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
        }
        fail("expected a number, \"NaN\", \"Infinity\" or \"-Infinity\"");
    }

    bool boolean() const {
        if (!j_.is_boolean()) fail("expected a boolean");
        return j_.get<bool>();
    }

    const std::string& path() const { return path_; }

private:
    std::string join(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

    const Json& j_;
    std::string path_;
};

Value parse_value(const Node& n) {
    std::string t = n.field("t").str();
    if (t == "int") return static_cast<std::int32_t>(n.field("v").integer(INT32_MIN, INT32_MAX));
    if (t == "dbl") return n.field("v").number();
    if (t == "bool") return n.field("v").boolean();
    if (t == "str") return n.field("v").str();
    if (t == "null") return NullV{};
    if (t == "ref") return RefV{static_cast<std::uint32_t>(n.field("id").integer(1, UINT32_MAX))};
    if (t == "char") {
        Node v = n.field("v");
        if (!v.is_string()) return static_cast<char16_t>(v.integer(0, 0xFFFF));
        std::string s = v.str();
        if (text::utf16_length(s) != 1) v.fail("expected exactly one UTF-16 code unit");
        return text::first_utf16_unit(s);
    }
    n.field("t").fail("unknown value tag '" + text::printable(t) + "'");
}

std::vector<Binding> parse_bindings(const Node& arr) {
    std::vector<Binding> out;
    for (const auto& item : arr.items()) out.push_back({item.field("name").str(), parse_value(item.field("value"))});
    return out;
}

MachineState parse_state(const Node& n) {
    MachineState s;
    Node status = n.field("status");
    std::string st = status.str();
    if (st == "running") {
        s.status = Status::Running;
    } else if (st == "finished") {
        s.status = Status::Finished;
    } else if (st == "error") {
        s.status = Status::Error;
        s.error = n.field("error").str();
    } else {
        status.fail("unknown status '" + text::printable(st) + "'");
    }
    for (const auto& f : n.field("frames").items()) {
        Frame frame;
        frame.label = f.field("label").str();
        frame.bindings = parse_bindings(f.field("bindings"));
        s.frames.push_back(std::move(frame));
    }
    std::uint32_t expected = 1;
    for (const auto& h : n.field("heap").items()) {
        Node idNode = h.field("id");
        auto id = idNode.integer(1, UINT32_MAX);
        if (id != expected) idNode.fail("expected id " + std::to_string(expected) + " (ids follow allocation order)");
        ++expected;
        Node kindNode = h.field("kind");
        std::string kind = kindNode.str();
        if (kind == "array") {
            ArrayNode arr;
            arr.elemType = h.field("elem").str();
            std::size_t i = 0;
            for (const auto& row : h.field("rows").items()) {
                Node idx = row.field("i");
                if (static_cast<std::size_t>(idx.integer(0, INT32_MAX)) != i) idx.fail("expected index " + std::to_string(i));
                arr.cells.push_back(parse_value(row.field("value")));
                ++i;
            }
            s.heap.allocate(std::move(arr));
        } else if (kind == "object") {
            ObjectNode obj;
            obj.className = h.field("class").str();
            obj.fields = parse_bindings(h.field("rows"));
            s.heap.allocate(std::move(obj));
        } else {
            kindNode.fail("unknown node kind '" + text::printable(kind) + "'");
        }
    }
    // Every reference must land on a node of this snapshot.
    if (!machine::referentially_closed(s)) n.field("heap").fail("state refers to a heap id that does not exist");
    return s;
}

}  // namespace

Trace parse_trace_json(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw TraceJsonError("", std::string("invalid JSON: ") + e.what());
    }
    Node root(doc, "");
    Node version = root.field("version");
    if (version.integer(INT32_MIN, INT32_MAX) != kTraceJsonVersion) {
        version.fail("unsupported trace version (expected " + std::to_string(kTraceJsonVersion) + ")");
    }
    Trace t;
    t.sourceText = root.field("program").str();
    if (root.has("name")) t.programName = root.field("name").str();
    for (const auto& line : root.field("output").items()) t.output.push_back(line.str());
    std::size_t index = 0;
    for (const auto& e : root.field("events").items()) {
        TraceEvent ev;
        Node step = e.field("step");
        ev.stepIndex = static_cast<std::size_t>(step.integer(0, INT64_MAX));
        if (ev.stepIndex != index) step.fail("expected step " + std::to_string(index));
        ev.line = static_cast<int>(e.field("line").integer(0, INT32_MAX));
        Node kind = e.field("kind");
        auto k = machine::parse_event_kind(kind.str());
        if (!k) kind.fail("unknown event kind '" + text::printable(kind.str()) + "'");
        ev.kind = *k;
        ev.description = e.field("description").str();
        ev.state = parse_state(e.field("state"));
        ev.state.stepIndex = ev.stepIndex;
        ev.state.executed = ev.stepIndex + 1;
        t.events.push_back(std::move(ev));
        ++index;
    }
    return t;
}

}  // namespace vps::diagram
