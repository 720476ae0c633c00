#include "vps/diagram/emit.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "vps/text.hpp"

namespace vps::diagram {

// ---------------------------------------------------------------- DOT

namespace {

std::string record_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '{': case '}': case '|': case '<': case '>': case '\\':
            out += '\\';
            out += c;
            break;
        default:
            out += c;
        }
    }
    return out;
}

// Backslashes are left alone: record_escape has already doubled them.
std::string dot_id(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string slot_text(const Slot& s) {
    switch (s.kind) {
    case SlotKind::Inline: return s.text;
    case SlotKind::Null: return "null";
    case SlotKind::Edge: return " ";
    }
    return {};
}

}  // namespace

std::string emit_dot(const Diagram& d) {
    std::ostringstream out;
    out << "digraph vps {\n"
        << "  graph [rankdir=LR, nodesep=0.4, ranksep=0.8];\n"
        << "  node [shape=record, fontname=\"Helvetica\", fontsize=11];\n"
        << "  edge [arrowsize=0.8];\n";

    for (std::size_t f = 0; f < d.frames.size(); ++f) {
        const auto& frame = d.frames[f];
        std::string label = record_escape(frame.label);
        for (std::size_t r = 0; r < frame.roots.size(); ++r) {
            const auto& root = frame.roots[r];
            label += "|{" + record_escape(root.name) + "|<r" + std::to_string(r) + ">" +
                     record_escape(slot_text(root.slot)) + "}";
        }
        out << "  " << dot_id("frame" + std::to_string(f)) << " [label=" << dot_id(label) << "];\n";
    }
    for (const auto& n : d.nodes) {
        std::string label = record_escape(n.title + " " + n.label);
        for (std::size_t r = 0; r < n.rows.size(); ++r) {
            const auto& row = n.rows[r];
            std::string key = n.kind == NodeKind::Array ? "[" + row.key + "]" : row.key;
            label += "|{" + record_escape(key) + "|<p" + std::to_string(r) + ">" + record_escape(slot_text(row.slot)) + "}";
        }
        out << "  " << dot_id(n.label) << " [label=" << dot_id(label) << "];\n";
    }
    for (std::size_t f = 0; f < d.frames.size(); ++f) {
        const auto& roots = d.frames[f].roots;
        for (std::size_t r = 0; r < roots.size(); ++r) {
            if (roots[r].slot.kind != SlotKind::Edge) continue;
            out << "  " << dot_id("frame" + std::to_string(f)) << ":r" << r << " -> " << dot_id(roots[r].slot.text)
                << ";\n";
        }
    }
    for (const auto& n : d.nodes) {
        for (std::size_t r = 0; r < n.rows.size(); ++r) {
            if (n.rows[r].slot.kind != SlotKind::Edge) continue;
            out << "  " << dot_id(n.label) << ":p" << r << " -> " << dot_id(n.rows[r].slot.text) << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------- SVG

namespace {

constexpr double kFont = 12;
constexpr double kRowH = 22;
constexpr double kPad = 8;
constexpr double kTitleH = 18;
constexpr double kMargin = 16;
constexpr double kColGap = 72;
constexpr double kNodeGap = 16;
constexpr double kFrameGap = 18;
constexpr double kRootGap = 4;
constexpr double kDotR = 3;
constexpr double kEdgeSlot = 22;  // room reserved at the right of an edge row

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string svg_id(std::string_view label) {
    std::string out = "node-";
    for (char c : label) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (c == '@') continue;
        out += ok ? c : '_';
    }
    return out;
}

struct Point {
    double x = 0;
    double y = 0;
};

struct PendingEdge {
    Point from;
    std::string source;
    std::string target;
};

struct NodePlace {
    double x = 0, y = 0, w = 0, h = 0;
};

std::string row_text(const NodeBox& n, const Row& row) {
    std::string key = n.kind == NodeKind::Array ? "[" + row.key + "]" : row.key;
    switch (row.slot.kind) {
    case SlotKind::Inline: return key + " = " + row.slot.text;
    case SlotKind::Null: return key + " = null";
    case SlotKind::Edge: return key;
    }
    return key;
}

/// Column per node: BFS depth from the roots; unreachable nodes continue
/// from seeds in node order to the right of everything reachable.
std::vector<std::size_t> layers(const Diagram& d) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) index.emplace(d.nodes[i].label, i);
    std::vector<std::size_t> layer(d.nodes.size(), 0);
    std::deque<std::size_t> queue;
    auto visit = [&](const Slot& s, std::size_t depth) {
        if (s.kind != SlotKind::Edge) return;
        auto it = index.find(s.text);
        if (it == index.end() || layer[it->second] != 0) return;
        layer[it->second] = depth;
        queue.push_back(it->second);
    };
    auto drain = [&]() {
        while (!queue.empty()) {
            auto i = queue.front();
            queue.pop_front();
            for (const auto& row : d.nodes[i].rows) visit(row.slot, layer[i] + 1);
        }
    };
    for (const auto& f : d.frames) {
        for (const auto& r : f.roots) visit(r.slot, 1);
    }
    drain();
    std::size_t deepest = 0;
    for (auto l : layer) deepest = std::max(deepest, l);
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        if (layer[i] != 0) continue;
        layer[i] = deepest + 1;
        queue.push_back(i);
        drain();
    }
    return layer;
}

}  // namespace

std::string emit_svg(const Diagram& d) {
    std::ostringstream body;
    std::vector<PendingEdge> edges;

    // Root column.
    double nameW = 40;
    double valueW = 44;
    double labelW = 0;
    for (const auto& f : d.frames) {
        labelW = std::max(labelW, text_width(f.label, kFont));
        for (const auto& r : f.roots) {
            nameW = std::max(nameW, text_width(r.name, kFont) + 2 * kPad);
            valueW = std::max(valueW, text_width(slot_text(r.slot), kFont) + 2 * kPad);
        }
    }
    const double rootX = kMargin;
    double y = kMargin;
    for (std::size_t f = 0; f < d.frames.size(); ++f) {
        const auto& frame = d.frames[f];
        body << "<g class=\"frame\" data-frame=\"" << f << "\">\n";
        body << "<text class=\"frame-label\" x=\"" << num(rootX) << "\" y=\"" << num(y + kFont) << "\">"
             << text::xml_escape(frame.label) << "</text>\n";
        y += kTitleH;
        for (const auto& r : frame.roots) {
            double vx = rootX + nameW;
            body << "<rect class=\"name\" x=\"" << num(rootX) << "\" y=\"" << num(y) << "\" width=\"" << num(nameW)
                 << "\" height=\"" << num(kRowH) << "\"/>\n";
            body << "<text x=\"" << num(rootX + kPad) << "\" y=\"" << num(y + kRowH / 2 + 4) << "\">"
                 << text::xml_escape(r.name) << "</text>\n";
            body << "<rect class=\"value\" x=\"" << num(vx) << "\" y=\"" << num(y) << "\" width=\"" << num(valueW)
                 << "\" height=\"" << num(kRowH) << "\"/>\n";
            if (r.slot.kind == SlotKind::Edge) {
                Point p{vx + valueW / 2, y + kRowH / 2};
                edges.push_back({p, f == 0 ? r.name : frame.label + ":" + r.name, r.slot.text});
            } else {
                body << "<text x=\"" << num(vx + kPad) << "\" y=\"" << num(y + kRowH / 2 + 4) << "\">"
                     << text::xml_escape(slot_text(r.slot)) << "</text>\n";
            }
            y += kRowH + kRootGap;
        }
        body << "</g>\n";
        y += kFrameGap;
    }
    double height = y;
    double columnX = rootX + std::max(labelW, nameW + valueW) + kColGap;
    if (d.frames.empty()) columnX = kMargin;

    // Node columns.
    auto layer = layers(d);
    std::size_t columns = 0;
    for (auto l : layer) columns = std::max(columns, l);
    std::map<std::string, NodePlace> places;
    std::vector<double> widths(d.nodes.size());
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& n = d.nodes[i];
        double w = std::max(60.0, text_width(n.title + " " + n.label, kFont) + 2 * kPad);
        for (const auto& row : n.rows) {
            double extra = row.slot.kind == SlotKind::Edge ? kEdgeSlot : 0;
            w = std::max(w, text_width(row_text(n, row), kFont) + 2 * kPad + extra);
        }
        widths[i] = w;
    }
    double right = columnX;
    for (std::size_t c = 1; c <= columns; ++c) {
        double colW = 0;
        double ny = kMargin;
        for (std::size_t i = 0; i < d.nodes.size(); ++i) {
            if (layer[i] != c) continue;
            colW = std::max(colW, widths[i]);
        }
        for (std::size_t i = 0; i < d.nodes.size(); ++i) {
            if (layer[i] != c) continue;
            const auto& n = d.nodes[i];
            double rows = std::max<double>(1, static_cast<double>(n.rows.size()));
            NodePlace place{columnX, ny, colW, kTitleH + rows * kRowH};
            places[n.label] = place;
            body << "<g class=\"node\" id=\"" << svg_id(n.label) << "\" data-label=\"" << text::xml_escape(n.label)
                 << "\" data-kind=\"" << to_string(n.kind) << "\">\n";
            body << "<text class=\"title\" x=\"" << num(place.x) << "\" y=\"" << num(ny + kFont) << "\">"
                 << text::xml_escape(n.title + " " + n.label) << "</text>\n";
            double ry = ny + kTitleH;
            if (n.rows.empty()) {
                body << "<rect class=\"row\" x=\"" << num(place.x) << "\" y=\"" << num(ry) << "\" width=\"" << num(colW)
                     << "\" height=\"" << num(kRowH) << "\"/>\n";
            }
            for (const auto& row : n.rows) {
                body << "<rect class=\"row\" x=\"" << num(place.x) << "\" y=\"" << num(ry) << "\" width=\""
                     << num(colW) << "\" height=\"" << num(kRowH) << "\"/>\n";
                body << "<text x=\"" << num(place.x + kPad) << "\" y=\"" << num(ry + kRowH / 2 + 4) << "\">"
                     << text::xml_escape(row_text(n, row)) << "</text>\n";
                if (row.slot.kind == SlotKind::Edge) {
                    std::string source = n.kind == NodeKind::Array ? n.label + "[" + row.key + "]" : n.label + "." + row.key;
                    edges.push_back({{place.x + colW - kEdgeSlot / 2, ry + kRowH / 2}, source, row.slot.text});
                }
                ry += kRowH;
            }
            body << "</g>\n";
            ny += place.h + kNodeGap;
        }
        height = std::max(height, ny);
        right = columnX + colW;
        columnX += colW + kColGap;
    }

    // Arrows last so they sit on top of the boxes.
    for (const auto& e : edges) {
        auto it = places.find(e.target);
        if (it == places.end()) continue;
        const NodePlace& t = it->second;
        double tx = t.x;
        double ty = t.y + kTitleH + kRowH / 2;
        std::string path = "M" + num(e.from.x) + "," + num(e.from.y);
        if (tx > e.from.x + kEdgeSlot) {
            double mx = tx - kColGap / 2;
            if (mx < e.from.x) mx = (e.from.x + tx) / 2;
            path += " L" + num(mx) + "," + num(e.from.y) + " L" + num(mx) + "," + num(ty) + " L" + num(tx) + "," + num(ty);
        } else {
            // Backward or self reference: loop over the top of the target.
            double out = e.from.x + kEdgeSlot;
            double top = t.y - kPad;
            double in = tx - kPad * 2;
            path += " L" + num(out) + "," + num(e.from.y) + " L" + num(out) + "," + num(top) + " L" + num(in) + "," +
                    num(top) + " L" + num(in) + "," + num(ty) + " L" + num(tx) + "," + num(ty);
            right = std::max(right, out);
        }
        body << "<circle class=\"anchor\" cx=\"" << num(e.from.x) << "\" cy=\"" << num(e.from.y) << "\" r=\""
             << num(kDotR) << "\"/>\n";
        body << "<path class=\"edge\" d=\"" << path << "\" data-source=\"" << text::xml_escape(e.source)
             << "\" data-target=\"" << text::xml_escape(e.target) << "\" marker-end=\"url(#arrow)\"/>\n";
    }

    double width = std::max(right, rootX + nameW + valueW) + kMargin;
    height += kMargin;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << " " << num(height)
        << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"" << num(kFont) << "\">\n"
        << "<defs>\n"
        << "<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" "
           "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker>\n"
        << "<style>rect{fill:#fff;stroke:#333;stroke-width:1}.edge{fill:none;stroke:#333;stroke-width:1.2}"
           ".anchor{fill:#333}.frame-label,.title{font-weight:bold}</style>\n"
        << "</defs>\n"
        << body.str() << "</svg>\n";
    return out.str();
}

// ---------------------------------------------------------------- JSON

namespace {

nlohmann::ordered_json slot_json(const Slot& s) {
    nlohmann::ordered_json j;
    switch (s.kind) {
    case SlotKind::Inline:
        j["kind"] = "inline";
        j["text"] = s.text;
        break;
    case SlotKind::Null: j["kind"] = "null"; break;
    case SlotKind::Edge:
        j["kind"] = "edge";
        j["target"] = s.text;
        break;
    }
    return j;
}

}  // namespace

std::string emit_diagram_json(const Diagram& d) {
    nlohmann::ordered_json j;
    j["frames"] = nlohmann::ordered_json::array();
    for (const auto& f : d.frames) {
        nlohmann::ordered_json fj;
        fj["label"] = f.label;
        fj["roots"] = nlohmann::ordered_json::array();
        for (const auto& r : f.roots) fj["roots"].push_back({{"name", r.name}, {"slot", slot_json(r.slot)}});
        j["frames"].push_back(std::move(fj));
    }
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : d.nodes) {
        nlohmann::ordered_json nj;
        nj["label"] = n.label;
        nj["kind"] = to_string(n.kind);
        nj["title"] = n.title;
        nj["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : n.rows) nj["rows"].push_back({{"key", row.key}, {"slot", slot_json(row.slot)}});
        j["nodes"].push_back(std::move(nj));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : d.edges) j["edges"].push_back({{"from", anchor_name(d, e)}, {"target", e.target}});
    return j.dump(2) + "\n";
}

}  // namespace vps::diagram
