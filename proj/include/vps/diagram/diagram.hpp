#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "vps/machine/state.hpp"

namespace vps::diagram {

enum class SlotKind { Inline, Edge, Null };

/// Right-hand box of a root or row: an inline literal, an arrow to a node
/// label, or the null marker.
struct Slot {
    SlotKind kind = SlotKind::Null;
    std::string text;  // literal for Inline, target label for Edge

    static Slot inline_value(std::string literal) { return {SlotKind::Inline, std::move(literal)}; }
    static Slot edge(std::string target) { return {SlotKind::Edge, std::move(target)}; }
    static Slot null() { return {SlotKind::Null, {}}; }

    friend bool operator==(const Slot&, const Slot&) = default;
};

struct RootBox {
    std::string name;
    Slot slot;
    friend bool operator==(const RootBox&, const RootBox&) = default;
};

struct FrameBox {
    std::string label;
    std::vector<RootBox> roots;
    friend bool operator==(const FrameBox&, const FrameBox&) = default;
};

enum class NodeKind { Array, Object };

struct Row {
    std::string key;  // field name, or decimal index for arrays
    Slot slot;
    friend bool operator==(const Row&, const Row&) = default;
};

struct NodeBox {
    std::string label;  // "@1" from the machine, "@c1" canonical, anything "@..." from a student
    NodeKind kind = NodeKind::Object;
    std::string title;  // class name or element type + "[]"
    std::vector<Row> rows;
    friend bool operator==(const NodeBox&, const NodeBox&) = default;
};

/// An arrow. Root anchors carry the frame index; row anchors the node label.
struct Edge {
    bool fromRoot = true;
    std::size_t frame = 0;
    std::string node;
    std::string key;
    std::string target;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Diagram {
    std::vector<FrameBox> frames;  // outermost first
    std::vector<NodeBox> nodes;
    std::vector<Edge> edges;

    const NodeBox* find(const std::string& label) const;
    std::size_t root_count() const;
    std::size_t row_count() const;

    friend bool operator==(const Diagram&, const Diagram&) = default;
};

/// Recomputes `edges` from the slots, roots first then node rows.
void rebuild_edges(Diagram& d);

/// Human name of an edge's source: "ref", "Person.Person:this", "@c1.rut", "@c1[0]".
std::string anchor_name(const Diagram& d, const Edge& e);

Diagram state_to_diagram(const machine::MachineState& state);

/// Diagram whose labels are @c1, @c2, ... in canonical traversal order.
struct CanonicalDiagram {
    Diagram diagram;
    std::map<std::string, std::string> original;  // canonical label -> input label

    friend bool operator==(const CanonicalDiagram& a, const CanonicalDiagram& b) { return a.diagram == b.diagram; }
};

CanonicalDiagram canonicalize(const Diagram& d);

/// Relabels nodes through `mapping` (labels not in the map are kept).
/// Node order is unchanged.
Diagram rename(const Diagram& d, const std::map<std::string, std::string>& mapping);

std::string_view to_string(NodeKind kind);

}  // namespace vps::diagram
