#include "vps/feedback/compare.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "vps/feedback/vpsd.hpp"

namespace vps::feedback {

using diagram::CanonicalDiagram;
using diagram::Diagram;
using diagram::NodeBox;
using diagram::NodeKind;
using diagram::Slot;
using diagram::SlotKind;

namespace {

constexpr std::pair<DiscrepancyKind, std::string_view> kKindNames[] = {
    {DiscrepancyKind::MissingReference, "MissingReference"},
    {DiscrepancyKind::ExtraReference, "ExtraReference"},
    {DiscrepancyKind::WrongTarget, "WrongTarget"},
    {DiscrepancyKind::WrongPrimitiveValue, "WrongPrimitiveValue"},
    {DiscrepancyKind::MissingNode, "MissingNode"},
    {DiscrepancyKind::ExtraNode, "ExtraNode"},
    {DiscrepancyKind::WrongNodeType, "WrongNodeType"},
    {DiscrepancyKind::MissingRow, "MissingRow"},
    {DiscrepancyKind::ExtraRow, "ExtraRow"},
    {DiscrepancyKind::WrongArrayLength, "WrongArrayLength"},
    {DiscrepancyKind::WrongCellValue, "WrongCellValue"},
    {DiscrepancyKind::BrokenAliasing, "BrokenAliasing"},
};

constexpr long kNone = -1;

/// Canonical diagram plus label lookup.
struct Side {
    CanonicalDiagram canon;
    std::map<std::string, std::size_t> index;

    explicit Side(const Diagram& d) : canon(diagram::canonicalize(d)) {
        for (std::size_t i = 0; i < nodes().size(); ++i) index.emplace(nodes()[i].label, i);
    }
    const Diagram& dia() const { return canon.diagram; }
    const std::vector<NodeBox>& nodes() const { return canon.diagram.nodes; }

    long target(const Slot& s) const {
        if (s.kind != SlotKind::Edge) return kNone;
        auto it = index.find(s.text);
        return it == index.end() ? kNone : static_cast<long>(it->second);
    }
    /// Label as the author wrote it.
    std::string original(const std::string& label) const {
        auto it = canon.original.find(label);
        return it == canon.original.end() ? label : it->second;
    }
};

std::string row_anchor(const NodeBox& n, const std::string& label, const std::string& key) {
    return n.kind == NodeKind::Array ? label + "[" + key + "]" : label + "." + key;
}

std::string root_anchor(const Diagram& d, std::size_t frame, const std::string& name) {
    return frame == 0 ? name : d.frames[frame].label + ":" + name;
}

const diagram::Row* find_row(const NodeBox& n, const std::string& key) {
    for (const auto& r : n.rows) {
        if (r.key == key) return &r;
    }
    return nullptr;
}

/// Label-free shape of a node, used to prefer look-alike partners when
/// pairing nodes that are not reached through matching anchors.
std::string shape(const NodeBox& n) {
    std::string out = n.title + "|";
    for (const auto& r : n.rows) {
        out += r.key + (r.slot.kind == SlotKind::Inline ? "=" + r.slot.text : r.slot.kind == SlotKind::Null ? "~" : ">");
        out += ';';
    }
    return out;
}

class Grader {
public:
    Grader(const Diagram& reference, const Diagram& answer)
        : ref_(reference), ans_(answer), toAns_(ref_.nodes().size(), kNone), toRef_(ans_.nodes().size(), kNone) {}

    FeedbackReport run() {
        FeedbackReport report;
        const Diagram& rd = ref_.dia();
        report.total = rd.root_count() + rd.nodes.size() + rd.row_count() + rd.edges.size();

        if (ref_.canon == ans_.canon) {
            report.equivalent = true;
            report.matched = report.total;
            report.score = 1;
            report.messages = render_feedback(report);
            return report;
        }

        match_frames();
        pair_nodes();
        index_anchors();
        grade_roots();
        grade_nodes();

        report.matched = matched_;
        report.extras = extras_;
        report.discrepancies = std::move(out_);
        report.equivalent = report.discrepancies.empty();
        if (report.total == 0) {
            report.score = extras_ == 0 ? 1.0 : 0.0;
        } else {
            double net = matched_ > extras_ ? static_cast<double>(matched_ - extras_) : 0.0;
            report.score = std::clamp(net / static_cast<double>(report.total), 0.0, 1.0);
        }
        if (report.equivalent) report.score = 1;
        report.messages = render_feedback(report);
        return report;
    }

private:
    // ---- structure matching

    /// The k-th frame labelled L in the reference matches the k-th frame
    /// labelled L in the answer.
    void match_frames() {
        const auto& rf = ref_.dia().frames;
        const auto& af = ans_.dia().frames;
        frameToAns_.assign(rf.size(), kNone);
        std::vector<bool> used(af.size(), false);
        for (std::size_t i = 0; i < rf.size(); ++i) {
            for (std::size_t j = 0; j < af.size(); ++j) {
                if (!used[j] && af[j].label == rf[i].label) {
                    used[j] = true;
                    frameToAns_[i] = static_cast<long>(j);
                    break;
                }
            }
        }
        frameToRef_.assign(af.size(), kNone);
        for (std::size_t i = 0; i < rf.size(); ++i) {
            if (frameToAns_[i] != kNone) frameToRef_[frameToAns_[i]] = static_cast<long>(i);
        }
    }

    const diagram::RootBox* answer_root(std::size_t refFrame, const std::string& name) const {
        if (frameToAns_[refFrame] == kNone) return nullptr;
        for (const auto& r : ans_.dia().frames[frameToAns_[refFrame]].roots) {
            if (r.name == name) return &r;
        }
        return nullptr;
    }

    void link(long r, long a) {
        if (r == kNone || a == kNone || toAns_[r] != kNone || toRef_[a] != kNone) return;
        toAns_[r] = a;
        toRef_[a] = r;
        queue_.emplace_back(r, a);
    }

    void drain() {
        while (!queue_.empty()) {
            auto [r, a] = queue_.front();
            queue_.pop_front();
            const NodeBox& rn = ref_.nodes()[r];
            const NodeBox& an = ans_.nodes()[a];
            if (rn.kind != an.kind) continue;
            for (const auto& row : rn.rows) {
                const auto* other = find_row(an, row.key);
                if (other != nullptr) link(ref_.target(row.slot), ans_.target(other->slot));
            }
        }
    }

    void pair_nodes() {
        const auto& rf = ref_.dia().frames;
        for (std::size_t f = 0; f < rf.size(); ++f) {
            for (const auto& root : rf[f].roots) {
                const auto* other = answer_root(f, root.name);
                if (other != nullptr) link(ref_.target(root.slot), ans_.target(other->slot));
            }
        }
        drain();
        // Leftovers: look-alikes first, then anything of the same type.
        for (int strict = 1; strict >= 0; --strict) {
            bool progress = true;
            while (progress) {
                progress = false;
                for (std::size_t r = 0; r < ref_.nodes().size(); ++r) {
                    if (toAns_[r] != kNone) continue;
                    const NodeBox& rn = ref_.nodes()[r];
                    for (std::size_t a = 0; a < ans_.nodes().size(); ++a) {
                        if (toRef_[a] != kNone) continue;
                        const NodeBox& an = ans_.nodes()[a];
                        bool ok = strict ? shape(rn) == shape(an) : (rn.kind == an.kind && rn.title == an.title);
                        if (!ok) continue;
                        link(static_cast<long>(r), static_cast<long>(a));
                        drain();
                        progress = true;
                        break;
                    }
                }
            }
        }
    }

    /// Who points at each node, with answer anchors named in the reference's
    /// vocabulary so the two sides can be compared.
    void index_anchors() {
        const Diagram& rd = ref_.dia();
        refAnchors_.assign(ref_.nodes().size(), {});
        for (std::size_t f = 0; f < rd.frames.size(); ++f) {
            for (const auto& root : rd.frames[f].roots) {
                long t = ref_.target(root.slot);
                if (t != kNone) refAnchors_[t].push_back(root_anchor(rd, f, root.name));
            }
        }
        for (const auto& n : rd.nodes) {
            for (const auto& row : n.rows) {
                long t = ref_.target(row.slot);
                if (t != kNone) refAnchors_[t].push_back(row_anchor(n, n.label, row.key));
            }
        }
        const Diagram& ad = ans_.dia();
        ansAnchors_.assign(ans_.nodes().size(), {});
        for (std::size_t f = 0; f < ad.frames.size(); ++f) {
            for (const auto& root : ad.frames[f].roots) {
                long t = ans_.target(root.slot);
                if (t == kNone) continue;
                long rf = frameToRef_[f];
                ansAnchors_[t].push_back(rf == kNone ? "?" + ad.frames[f].label + ":" + root.name
                                                     : root_anchor(rd, static_cast<std::size_t>(rf), root.name));
            }
        }
        for (std::size_t a = 0; a < ad.nodes.size(); ++a) {
            const NodeBox& n = ad.nodes[a];
            for (const auto& row : n.rows) {
                long t = ans_.target(row.slot);
                if (t == kNone) continue;
                long r = toRef_[a];
                ansAnchors_[t].push_back(r == kNone ? "?" + row_anchor(n, n.label, row.key)
                                                    : row_anchor(n, ref_.nodes()[r].label, row.key));
            }
        }
    }

    // ---- classification

    std::string actual(const Slot& s) const {
        if (s.kind == SlotKind::Edge) return "-> " + ans_.original(s.text);
        return render_slot(s);
    }

    void report(DiscrepancyKind kind, std::string subject, std::string expected, std::string actual,
                AliasRelation relation = AliasRelation::None) {
        out_.push_back({kind, std::move(subject), std::move(expected), std::move(actual), relation});
    }

    /// Compares one anchor's slot on both sides; true when it matches.
    bool grade_slot(const std::string& subject, const Slot& rs, const Slot& as, bool cell) {
        DiscrepancyKind valueKind = cell ? DiscrepancyKind::WrongCellValue : DiscrepancyKind::WrongPrimitiveValue;
        if (rs.kind == SlotKind::Inline || as.kind == SlotKind::Inline) {
            if (rs == as) return true;
            report(valueKind, subject, render_slot(rs), actual(as));
            return false;
        }
        if (rs.kind == SlotKind::Null && as.kind == SlotKind::Null) return true;
        if (rs.kind != as.kind) {
            report(DiscrepancyKind::WrongTarget, subject, render_slot(rs), actual(as));
            return false;
        }
        long rt = ref_.target(rs);
        long at = ans_.target(as);
        if (rt != kNone && at != kNone && toAns_[rt] == at) return true;

        auto partners = [&](const std::vector<std::string>& all) {
            std::vector<std::string> out;
            for (const auto& p : all) {
                if (p != subject) out.push_back(p);
            }
            return out;
        };
        std::vector<std::string> refPartners = rt == kNone ? std::vector<std::string>{} : partners(refAnchors_[rt]);
        std::vector<std::string> ansPartners = at == kNone ? std::vector<std::string>{} : partners(ansAnchors_[at]);
        auto contains = [](const std::vector<std::string>& v, const std::string& s) {
            return std::find(v.begin(), v.end(), s) != v.end();
        };
        for (const auto& p : refPartners) {
            if (!contains(ansPartners, p)) {
                alias(p, subject, AliasRelation::Shared, render_slot(rs), actual(as));
                return false;
            }
        }
        for (const auto& p : ansPartners) {
            if (p[0] != '?' && !contains(refPartners, p)) {
                alias(subject, p, AliasRelation::Distinct, render_slot(rs), actual(as));
                return false;
            }
        }
        report(DiscrepancyKind::WrongTarget, subject, render_slot(rs), actual(as));
        return false;
    }

    void alias(const std::string& a, const std::string& b, AliasRelation rel, std::string expected, std::string act) {
        auto key = std::make_tuple(rel, std::min(a, b), std::max(a, b));
        if (!aliasSeen_.insert(key).second) return;
        report(DiscrepancyKind::BrokenAliasing, a + ", " + b, std::move(expected), std::move(act), rel);
    }

    void grade_roots() {
        const Diagram& rd = ref_.dia();
        for (std::size_t f = 0; f < rd.frames.size(); ++f) {
            for (const auto& root : rd.frames[f].roots) {
                std::string subject = root_anchor(rd, f, root.name);
                const auto* other = answer_root(f, root.name);
                if (other == nullptr) {
                    report(DiscrepancyKind::MissingReference, subject, render_slot(root.slot), "");
                    continue;
                }
                if (grade_slot(subject, root.slot, other->slot, false)) {
                    matched_ += root.slot.kind == SlotKind::Edge ? 2 : 1;
                }
            }
        }
        const Diagram& ad = ans_.dia();
        for (std::size_t f = 0; f < ad.frames.size(); ++f) {
            long rf = frameToRef_[f];
            for (const auto& root : ad.frames[f].roots) {
                bool known = false;
                if (rf != kNone) {
                    for (const auto& r : rd.frames[rf].roots) known = known || r.name == root.name;
                }
                if (known) continue;
                std::string subject = rf == kNone ? (f == 0 ? root.name : ad.frames[f].label + ":" + root.name)
                                                  : root_anchor(rd, static_cast<std::size_t>(rf), root.name);
                report(DiscrepancyKind::ExtraReference, subject, "", actual(root.slot));
                ++extras_;
            }
        }
    }

    void grade_nodes() {
        for (std::size_t r = 0; r < ref_.nodes().size(); ++r) {
            const NodeBox& rn = ref_.nodes()[r];
            if (toAns_[r] == kNone) {
                report(DiscrepancyKind::MissingNode, rn.label, render_node_body(rn), "");
                continue;
            }
            const NodeBox& an = ans_.nodes()[toAns_[r]];
            if (rn.kind != an.kind || rn.title != an.title) {
                report(DiscrepancyKind::WrongNodeType, rn.label, rn.title, an.title);
                continue;
            }
            ++matched_;
            if (rn.kind == NodeKind::Array) {
                grade_array(rn, an);
            } else {
                grade_object(rn, an);
            }
        }
        for (std::size_t a = 0; a < ans_.nodes().size(); ++a) {
            if (toRef_[a] != kNone) continue;
            const NodeBox& an = ans_.nodes()[a];
            report(DiscrepancyKind::ExtraNode, ans_.original(an.label), "", render_node_body(an));
            ++extras_;
        }
    }

    void grade_array(const NodeBox& rn, const NodeBox& an) {
        if (rn.rows.size() != an.rows.size()) {
            report(DiscrepancyKind::WrongArrayLength, rn.label, std::to_string(rn.rows.size()),
                   std::to_string(an.rows.size()));
            if (an.rows.size() > rn.rows.size()) extras_ += an.rows.size() - rn.rows.size();
        }
        std::size_t common = std::min(rn.rows.size(), an.rows.size());
        for (std::size_t i = 0; i < common; ++i) {
            const auto& row = rn.rows[i];
            if (grade_slot(row_anchor(rn, rn.label, row.key), row.slot, an.rows[i].slot, true)) {
                matched_ += row.slot.kind == SlotKind::Edge ? 2 : 1;
            }
        }
    }

    void grade_object(const NodeBox& rn, const NodeBox& an) {
        for (const auto& row : rn.rows) {
            std::string subject = row_anchor(rn, rn.label, row.key);
            const auto* other = find_row(an, row.key);
            if (other == nullptr) {
                report(DiscrepancyKind::MissingRow, subject, render_slot(row.slot), "");
                continue;
            }
            if (grade_slot(subject, row.slot, other->slot, false)) {
                matched_ += row.slot.kind == SlotKind::Edge ? 2 : 1;
            }
        }
        for (const auto& row : an.rows) {
            if (find_row(rn, row.key) != nullptr) continue;
            report(DiscrepancyKind::ExtraRow, row_anchor(rn, rn.label, row.key), "", actual(row.slot));
            ++extras_;
        }
    }

    Side ref_;
    Side ans_;
    std::vector<long> toAns_;
    std::vector<long> toRef_;
    std::vector<long> frameToAns_;
    std::vector<long> frameToRef_;
    std::deque<std::pair<long, long>> queue_;
    std::vector<std::vector<std::string>> refAnchors_;
    std::vector<std::vector<std::string>> ansAnchors_;
    std::set<std::tuple<AliasRelation, std::string, std::string>> aliasSeen_;
    std::vector<Discrepancy> out_;
    std::size_t matched_ = 0;
    std::size_t extras_ = 0;
};

/// "@c1.rut" -> ("@c1", "rut"); "@c1[3]" -> ("@c1", "3").
std::pair<std::string, std::string> split_row(const std::string& subject) {
    auto bracket = subject.find('[');
    if (bracket != std::string::npos && subject.back() == ']') {
        return {subject.substr(0, bracket), subject.substr(bracket + 1, subject.size() - bracket - 2)};
    }
    auto dot = subject.find('.');
    if (dot == std::string::npos) return {subject, ""};
    return {subject.substr(0, dot), subject.substr(dot + 1)};
}

std::pair<std::string, std::string> split_pair(const std::string& subject) {
    auto comma = subject.find(", ");
    if (comma == std::string::npos) return {subject, ""};
    return {subject.substr(0, comma), subject.substr(comma + 2)};
}

}  // namespace

std::string_view to_string(DiscrepancyKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "?";
}

std::optional<DiscrepancyKind> parse_discrepancy_kind(std::string_view text) {
    for (const auto& [k, name] : kKindNames) {
        if (name == text) return k;
    }
    return std::nullopt;
}

std::string_view message_code(const Discrepancy& d) {
    switch (d.kind) {
    case DiscrepancyKind::MissingReference: return "VPS-R01";
    case DiscrepancyKind::ExtraReference: return "VPS-R02";
    case DiscrepancyKind::WrongTarget: return "VPS-R03";
    case DiscrepancyKind::WrongPrimitiveValue: return "VPS-V01";
    case DiscrepancyKind::WrongCellValue: return "VPS-V02";
    case DiscrepancyKind::MissingNode: return "VPS-N01";
    case DiscrepancyKind::ExtraNode: return "VPS-N02";
    case DiscrepancyKind::WrongNodeType: return "VPS-N03";
    case DiscrepancyKind::WrongArrayLength: return "VPS-N04";
    case DiscrepancyKind::MissingRow: return "VPS-W01";
    case DiscrepancyKind::ExtraRow: return "VPS-W02";
    case DiscrepancyKind::BrokenAliasing: return d.relation == AliasRelation::Distinct ? "VPS-L02" : "VPS-L01";
    }
    return "VPS-X00";
}

FeedbackReport compare(const Diagram& reference, const Diagram& answer) { return Grader(reference, answer).run(); }

std::vector<std::string> render_feedback(const FeedbackReport& report) {
    std::vector<std::string> out;
    std::string summary = "Your diagram matches " + std::to_string(report.matched) + " of " +
                          std::to_string(report.total) + " elements.";
    if (report.equivalent) summary += " It is equivalent to the machine's representation.";
    out.push_back(std::move(summary));

    for (const auto& d : report.discrepancies) {
        const std::string& s = d.subject;
        const std::string& e = d.expected;
        const std::string& a = d.actual;
        std::string text;
        switch (d.kind) {
        case DiscrepancyKind::MissingReference:
            text = "'" + s + "' is missing from your diagram; it should be " + e + ".";
            break;
        case DiscrepancyKind::ExtraReference:
            text = "'" + s + "' does not exist at this step; remove it from your diagram.";
            break;
        case DiscrepancyKind::WrongTarget:
            text = "'" + s + "' points to the wrong place: expected " + e + ", but your diagram shows " + a + ".";
            break;
        case DiscrepancyKind::WrongPrimitiveValue:
            text = "'" + s + "' should hold " + e + ", but your diagram shows " + a + ".";
            break;
        case DiscrepancyKind::WrongCellValue: {
            auto [node, index] = split_row(s);
            text = "Cell " + index + " of array " + node + " should hold " + e + ", but your diagram shows " + a + ".";
            break;
        }
        case DiscrepancyKind::MissingNode:
            text = "Memory area " + s + " (" + e + ") is missing from your diagram.";
            break;
        case DiscrepancyKind::ExtraNode:
            text = "Memory area " + s + " (" + a + ") does not exist at this step.";
            break;
        case DiscrepancyKind::WrongNodeType:
            text = "Memory area " + s + " should hold a " + e + ", but your diagram shows a " + a + ".";
            break;
        case DiscrepancyKind::WrongArrayLength:
            text = "Array " + s + " should have " + e + " cells, but your diagram shows " + a + ".";
            break;
        case DiscrepancyKind::MissingRow: {
            auto [node, key] = split_row(s);
            text = "Field '" + key + "' of memory area " + node + " is missing; it should be " + e + ".";
            break;
        }
        case DiscrepancyKind::ExtraRow: {
            auto [node, key] = split_row(s);
            text = "Memory area " + node + " has no field '" + key + "'.";
            break;
        }
        case DiscrepancyKind::BrokenAliasing: {
            auto [first, second] = split_pair(s);
            text = "'" + first + "' and '" + second + "' should point to " +
                   (d.relation == AliasRelation::Distinct ? "different memory areas." : "the same memory area.");
            break;
        }
        }
        out.push_back("[" + std::string(message_code(d)) + "] " + text);
    }
    return out;
}

std::string report_to_json(const FeedbackReport& report) {
    nlohmann::ordered_json j;
    j["equivalent"] = report.equivalent;
    j["score"] = report.score;
    j["matched"] = report.matched;
    j["total"] = report.total;
    j["discrepancies"] = nlohmann::ordered_json::array();
    for (const auto& d : report.discrepancies) {
        nlohmann::ordered_json dj;
        dj["kind"] = std::string(to_string(d.kind));
        dj["subject"] = d.subject;
        dj["expected"] = d.expected;
        dj["actual"] = d.actual;
        if (d.relation != AliasRelation::None) dj["relation"] = d.relation == AliasRelation::Shared ? "shared" : "distinct";
        dj["code"] = std::string(message_code(d));
        j["discrepancies"].push_back(std::move(dj));
    }
    j["messages"] = report.messages;
    return j.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace vps::feedback
