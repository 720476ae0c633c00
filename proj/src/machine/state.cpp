#include "vps/machine/state.hpp"

#include <cmath>
#include <stdexcept>

#include "vps/text.hpp"

namespace vps::machine {

bool is_ref(const Value& v) { return std::holds_alternative<RefV>(v); }
bool is_null(const Value& v) { return std::holds_alternative<NullV>(v); }

bool value_equal(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    if (const double* x = std::get_if<double>(&a)) {
        double y = std::get<double>(b);
        if (std::isnan(*x) || std::isnan(y)) return std::isnan(*x) && std::isnan(y);
        return *x == y && std::signbit(*x) == std::signbit(y);
    }
    return a == b;
}

std::string literal(const Value& v) {
    struct Visitor {
        std::string operator()(std::int32_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return text::format_double(d); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(char16_t c) const { return text::quote_char(c); }
        std::string operator()(const std::string& s) const { return text::quote_string(s); }
        std::string operator()(NullV) const { return "null"; }
        std::string operator()(RefV r) const { return "@" + std::to_string(r.id); }
    };
    return std::visit(Visitor{}, v);
}

const char* type_tag(const Value& v) {
    static constexpr const char* kTags[] = {"int", "dbl", "bool", "char", "str", "null", "ref"};
    return kTags[v.index()];
}

const Value* ObjectNode::find(const std::string& field) const {
    for (const auto& f : fields) {
        if (f.name == field) return &f.value;
    }
    return nullptr;
}

const Value* Frame::find(const std::string& name) const {
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) {
        if (it->name == name) return &it->value;
    }
    return nullptr;
}

const HeapNode& Heap::at(std::uint32_t id) const {
    if (!contains(id)) throw std::out_of_range("no heap node @" + std::to_string(id));
    return *nodes_[id - 1];
}

std::uint32_t Heap::allocate(HeapNode node) {
    nodes_.push_back(std::make_shared<const HeapNode>(std::move(node)));
    return static_cast<std::uint32_t>(nodes_.size());
}

void Heap::replace(std::uint32_t id, HeapNode node) {
    if (!contains(id)) throw std::out_of_range("no heap node @" + std::to_string(id));
    nodes_[id - 1] = std::make_shared<const HeapNode>(std::move(node));
}

std::vector<std::uint32_t> Heap::ids() const {
    std::vector<std::uint32_t> out(nodes_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint32_t>(i + 1);
    return out;
}

std::string_view to_string(Status status) {
    switch (status) {
    case Status::Running: return "running";
    case Status::Finished: return "finished";
    case Status::Error: return "error";
    }
    return "?";
}

namespace {

bool same_bindings(const std::vector<Binding>& a, const std::vector<Binding>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || !value_equal(a[i].value, b[i].value)) return false;
    }
    return true;
}

bool same_node(const HeapNode& a, const HeapNode& b) {
    if (a.index() != b.index()) return false;
    if (const auto* x = std::get_if<ArrayNode>(&a)) {
        const auto& y = std::get<ArrayNode>(b);
        if (x->elemType != y.elemType || x->cells.size() != y.cells.size()) return false;
        for (std::size_t i = 0; i < x->cells.size(); ++i) {
            if (!value_equal(x->cells[i], y.cells[i])) return false;
        }
        return true;
    }
    const auto& x = std::get<ObjectNode>(a);
    const auto& y = std::get<ObjectNode>(b);
    return x.className == y.className && same_bindings(x.fields, y.fields);
}

template <typename F>
void for_each_value(const MachineState& s, F&& f) {
    for (const auto& fr : s.frames) {
        for (const auto& b : fr.bindings) f(b.value);
    }
    for (auto id : s.heap.ids()) {
        const HeapNode& n = s.heap.at(id);
        if (const auto* arr = std::get_if<ArrayNode>(&n)) {
            for (const auto& c : arr->cells) f(c);
        } else {
            for (const auto& field : std::get<ObjectNode>(n).fields) f(field.value);
        }
    }
}

}  // namespace

bool snapshot_equal(const MachineState& a, const MachineState& b) {
    if (a.frames.size() != b.frames.size() || a.heap.size() != b.heap.size()) return false;
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        if (a.frames[i].label != b.frames[i].label) return false;
        if (!same_bindings(a.frames[i].bindings, b.frames[i].bindings)) return false;
    }
    for (auto id : a.heap.ids()) {
        if (!same_node(a.heap.at(id), b.heap.at(id))) return false;
    }
    return true;
}

std::size_t count_refs(const MachineState& s) {
    std::size_t n = 0;
    for_each_value(s, [&](const Value& v) { n += is_ref(v) ? 1 : 0; });
    return n;
}

bool referentially_closed(const MachineState& s) {
    bool ok = true;
    for_each_value(s, [&](const Value& v) {
        if (const auto* r = std::get_if<RefV>(&v)) ok = ok && s.heap.contains(r->id);
    });
    return ok;
}

}  // namespace vps::machine
