#include "vps/diagram/diagram.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace vps::diagram {

using machine::ArrayNode;
using machine::ObjectNode;
using machine::RefV;
using machine::Value;

std::string_view to_string(NodeKind kind) { return kind == NodeKind::Array ? "array" : "object"; }

const NodeBox* Diagram::find(const std::string& label) const {
    for (const auto& n : nodes) {
        if (n.label == label) return &n;
    }
    return nullptr;
}

std::size_t Diagram::root_count() const {
    std::size_t n = 0;
    for (const auto& f : frames) n += f.roots.size();
    return n;
}

std::size_t Diagram::row_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.rows.size();
    return n;
}

void rebuild_edges(Diagram& d) {
    d.edges.clear();
    for (std::size_t f = 0; f < d.frames.size(); ++f) {
        for (const auto& r : d.frames[f].roots) {
            if (r.slot.kind == SlotKind::Edge) d.edges.push_back({true, f, {}, r.name, r.slot.text});
        }
    }
    for (const auto& n : d.nodes) {
        for (const auto& row : n.rows) {
            if (row.slot.kind == SlotKind::Edge) d.edges.push_back({false, 0, n.label, row.key, row.slot.text});
        }
    }
}

std::string anchor_name(const Diagram& d, const Edge& e) {
    if (e.fromRoot) {
        if (e.frame == 0 || e.frame >= d.frames.size()) return e.key;
        return d.frames[e.frame].label + ":" + e.key;
    }
    const NodeBox* n = d.find(e.node);
    if (n != nullptr && n->kind == NodeKind::Array) return e.node + "[" + e.key + "]";
    return e.node + "." + e.key;
}

namespace {

Slot slot_of(const Value& v) {
    if (const auto* r = std::get_if<RefV>(&v)) return Slot::edge("@" + std::to_string(r->id));
    if (machine::is_null(v)) return Slot::null();
    return Slot::inline_value(machine::literal(v));
}

}  // namespace

Diagram state_to_diagram(const machine::MachineState& state) {
    Diagram d;
    for (const auto& fr : state.frames) {
        FrameBox box{fr.label, {}};
        for (const auto& b : fr.bindings) box.roots.push_back({b.name, slot_of(b.value)});
        d.frames.push_back(std::move(box));
    }
    for (auto id : state.heap.ids()) {
        NodeBox box;
        box.label = "@" + std::to_string(id);
        const auto& node = state.heap.at(id);
        if (const auto* arr = std::get_if<ArrayNode>(&node)) {
            box.kind = NodeKind::Array;
            box.title = arr->elemType + "[]";
            for (std::size_t i = 0; i < arr->cells.size(); ++i) {
                box.rows.push_back({std::to_string(i), slot_of(arr->cells[i])});
            }
        } else {
            const auto& obj = std::get<ObjectNode>(node);
            box.kind = NodeKind::Object;
            box.title = obj.className;
            for (const auto& f : obj.fields) box.rows.push_back({f.name, slot_of(f.value)});
        }
        d.nodes.push_back(std::move(box));
    }
    rebuild_edges(d);
    return d;
}

Diagram rename(const Diagram& d, const std::map<std::string, std::string>& mapping) {
    auto map = [&](const std::string& label) {
        auto it = mapping.find(label);
        return it == mapping.end() ? label : it->second;
    };
    Diagram out = d;
    for (auto& f : out.frames) {
        for (auto& r : f.roots) {
            if (r.slot.kind == SlotKind::Edge) r.slot.text = map(r.slot.text);
        }
    }
    for (auto& n : out.nodes) {
        n.label = map(n.label);
        for (auto& row : n.rows) {
            if (row.slot.kind == SlotKind::Edge) row.slot.text = map(row.slot.text);
        }
    }
    rebuild_edges(out);
    return out;
}

namespace {

constexpr long kUnassigned = -1;

void put(std::string& out, std::string_view s) {
    out += std::to_string(s.size());
    out += ':';
    out += s;
}

/// Canonical labelling: BFS from roots, then unreachable nodes seeded one at
/// a time. Seeds are ordered by a colour refinement of the unreachable
/// subgraph (initial colour = kind, title, row signature), ties broken by
/// the serialisation a BFS from each candidate would produce.
class Canonicalizer {
public:
    explicit Canonicalizer(const Diagram& d) : d_(d), canon_(d.nodes.size(), kUnassigned) {
        for (std::size_t i = 0; i < d.nodes.size(); ++i) index_.emplace(d.nodes[i].label, i);
    }

    CanonicalDiagram run() {
        std::deque<std::size_t> queue;
        for (const auto& f : d_.frames) {
            for (const auto& r : f.roots) discover(r.slot, canon_, next_, order_, queue);
        }
        bfs(queue, canon_, next_, order_, nullptr);
        seed_unreachable();
        return build();
    }

private:
    std::optional<std::size_t> target(const Slot& s) const {
        if (s.kind != SlotKind::Edge) return std::nullopt;
        auto it = index_.find(s.text);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    void discover(const Slot& s, std::vector<long>& canon, long& next, std::vector<std::size_t>& order,
                  std::deque<std::size_t>& queue) const {
        auto t = target(s);
        if (t && canon[*t] == kUnassigned) {
            canon[*t] = next++;
            order.push_back(*t);
            queue.push_back(*t);
        }
    }

    void bfs(std::deque<std::size_t>& queue, std::vector<long>& canon, long& next, std::vector<std::size_t>& order,
             std::string* serial) const {
        while (!queue.empty()) {
            std::size_t i = queue.front();
            queue.pop_front();
            for (const auto& row : d_.nodes[i].rows) discover(row.slot, canon, next, order, queue);
            if (serial != nullptr) *serial += node_signature(i, canon);
        }
    }

    std::string slot_signature(const Slot& s, const std::vector<long>& canon) const {
        switch (s.kind) {
        case SlotKind::Inline: return "v" + std::to_string(s.text.size()) + ":" + s.text;
        case SlotKind::Null: return "n";
        case SlotKind::Edge: {
            auto t = target(s);
            if (!t) return "x" + std::to_string(s.text.size()) + ":" + s.text;
            if (canon[*t] == kUnassigned) return "?";
            return "e" + std::to_string(canon[*t]);
        }
        }
        return {};
    }

    std::string node_signature(std::size_t i, const std::vector<long>& canon) const {
        const auto& n = d_.nodes[i];
        std::string out = n.kind == NodeKind::Array ? "A" : "O";
        put(out, n.title);
        out += std::to_string(n.rows.size());
        out += '{';
        for (const auto& row : n.rows) {
            put(out, row.key);
            out += slot_signature(row.slot, canon);
            out += ';';
        }
        out += '}';
        return out;
    }

    std::vector<long> refine_colours(const std::vector<std::size_t>& pending) const {
        std::vector<long> colour(d_.nodes.size(), -1);
        std::vector<std::string> sig(d_.nodes.size());
        auto rank = [&]() {
            std::vector<std::string> keys;
            for (auto i : pending) keys.push_back(sig[i]);
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            for (auto i : pending) {
                colour[i] = std::lower_bound(keys.begin(), keys.end(), sig[i]) - keys.begin();
            }
            return keys.size();
        };
        for (auto i : pending) sig[i] = node_signature(i, canon_);
        std::size_t classes = rank();

        std::vector<std::vector<std::pair<std::size_t, std::string>>> incoming(d_.nodes.size());
        for (auto i : pending) {
            for (const auto& row : d_.nodes[i].rows) {
                auto t = target(row.slot);
                if (t && canon_[*t] == kUnassigned) incoming[*t].emplace_back(i, row.key);
            }
        }
        for (std::size_t round = 0; round < pending.size(); ++round) {
            for (auto i : pending) {
                // Zero-padded previous rank as prefix keeps each refinement
                // consistent with the ordering before it.
                std::string prev = std::to_string(colour[i]);
                std::string s = std::string(20 - prev.size(), '0') + prev + "|";
                for (const auto& row : d_.nodes[i].rows) {
                    auto t = target(row.slot);
                    if (t && canon_[*t] == kUnassigned) s += "c" + std::to_string(colour[*t]);
                    s += ';';
                }
                std::vector<std::string> in;
                for (const auto& [src, key] : incoming[i]) {
                    std::string e = std::to_string(colour[src]);
                    put(e, key);
                    in.push_back(std::move(e));
                }
                std::sort(in.begin(), in.end());
                s += "|";
                for (const auto& e : in) s += e + ",";
                sig[i] = std::move(s);
            }
            std::size_t now = rank();
            if (now == classes) break;
            classes = now;
        }
        return colour;
    }

    void seed_unreachable() {
        std::vector<std::size_t> pending;
        for (std::size_t i = 0; i < d_.nodes.size(); ++i) {
            if (canon_[i] == kUnassigned) pending.push_back(i);
        }
        if (pending.empty()) return;
        std::vector<long> colour = refine_colours(pending);

        while (true) {
            long best = std::numeric_limits<long>::max();
            for (auto i : pending) {
                if (canon_[i] == kUnassigned) best = std::min(best, colour[i]);
            }
            if (best == std::numeric_limits<long>::max()) break;

            std::optional<std::size_t> chosen;
            std::string chosenSerial;
            std::size_t tied = 0;
            for (auto i : pending) {
                if (canon_[i] == kUnassigned && colour[i] == best) ++tied;
            }
            for (auto i : pending) {
                if (canon_[i] != kUnassigned || colour[i] != best) continue;
                if (tied == 1) {
                    chosen = i;
                    break;
                }
                std::string serial = trial_serial(i);
                if (!chosen || serial < chosenSerial) {
                    chosen = i;
                    chosenSerial = std::move(serial);
                }
            }
            std::deque<std::size_t> queue;
            canon_[*chosen] = next_++;
            order_.push_back(*chosen);
            queue.push_back(*chosen);
            bfs(queue, canon_, next_, order_, nullptr);
        }
    }

    std::string trial_serial(std::size_t seed) const {
        std::vector<long> canon = canon_;
        long next = next_;
        std::vector<std::size_t> order;
        std::deque<std::size_t> queue;
        canon[seed] = next++;
        queue.push_back(seed);
        std::string serial;
        bfs(queue, canon, next, order, &serial);
        return serial;
    }

    CanonicalDiagram build() const {
        std::map<std::string, std::string> relabel;
        CanonicalDiagram out;
        for (std::size_t k = 0; k < order_.size(); ++k) {
            std::string label = "@c" + std::to_string(k + 1);
            relabel[d_.nodes[order_[k]].label] = label;
            out.original[label] = d_.nodes[order_[k]].label;
        }
        Diagram reordered;
        reordered.frames = d_.frames;
        for (auto i : order_) reordered.nodes.push_back(d_.nodes[i]);
        out.diagram = rename(reordered, relabel);
        return out;
    }

    const Diagram& d_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<long> canon_;
    long next_ = 0;
    std::vector<std::size_t> order_;
};

}  // namespace

CanonicalDiagram canonicalize(const Diagram& d) { return Canonicalizer(d).run(); }

}  // namespace vps::diagram
