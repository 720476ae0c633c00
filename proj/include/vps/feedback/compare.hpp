#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vps/diagram/diagram.hpp"

namespace vps::feedback {

enum class DiscrepancyKind {
    MissingReference,
    ExtraReference,
    WrongTarget,
    WrongPrimitiveValue,
    MissingNode,
    ExtraNode,
    WrongNodeType,
    MissingRow,
    ExtraRow,
    WrongArrayLength,
    WrongCellValue,
    BrokenAliasing,
};

std::string_view to_string(DiscrepancyKind kind);
std::optional<DiscrepancyKind> parse_discrepancy_kind(std::string_view text);

/// For BrokenAliasing: whether the two anchors should share a target or not.
enum class AliasRelation { None, Shared, Distinct };

/// One mismatch. Subjects and expected values use the reference's canonical
/// labels (`@c1.rut`); actual values use the labels written in the answer.
/// For BrokenAliasing the subject is "first, second".
struct Discrepancy {
    DiscrepancyKind kind;
    std::string subject;
    std::string expected;
    std::string actual;
    AliasRelation relation = AliasRelation::None;
};

struct FeedbackReport {
    bool equivalent = false;
    double score = 0;
    std::size_t matched = 0;  // reference elements found correct in the answer
    std::size_t extras = 0;   // answer elements with no reference counterpart
    std::size_t total = 0;    // roots + nodes + rows + edges of the reference
    std::vector<Discrepancy> discrepancies;
    std::vector<std::string> messages;  // summary line first
};

/// Grades `answer` against `reference` up to renaming of heap labels.
/// Score is (matched - extras) / total, clamped to [0, 1].
FeedbackReport compare(const diagram::Diagram& reference, const diagram::Diagram& answer);

/// Summary line followed by one sentence per discrepancy. Each sentence
/// starts with its message code in brackets, e.g. "[VPS-V01] ...".
std::vector<std::string> render_feedback(const FeedbackReport& report);

/// Stable message code for a discrepancy, e.g. "VPS-V01".
std::string_view message_code(const Discrepancy& d);

/// {"equivalent":..,"score":..,"discrepancies":[..],"messages":[..]}
std::string report_to_json(const FeedbackReport& report);

}  // namespace vps::feedback
