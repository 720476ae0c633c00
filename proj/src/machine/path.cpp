#include "vps/machine/path.hpp"

#include <cctype>
#include <charconv>

namespace vps::machine {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

std::string_view take_ident(std::string_view path, std::size_t& i) {
    std::size_t start = i;
    while (i < path.size() && ident_char(path[i])) ++i;
    if (i == start) throw PathError(PathErrorKind::Malformed, "malformed path '" + std::string(path) + "'");
    return path.substr(start, i - start);
}

}  // namespace

Value read_path(const MachineState& state, std::string_view path) {
    if (state.frames.empty()) throw PathError(PathErrorKind::UnknownBinding, "no frames");
    std::size_t i = 0;
    std::string root(take_ident(path, i));
    const Value* found = state.top().find(root);
    if (!found) throw PathError(PathErrorKind::UnknownBinding, "no binding named '" + root + "'");
    Value v = *found;
    std::string walked = root;

    while (i < path.size()) {
        char c = path[i++];
        if (c != '.' && c != '[') throw PathError(PathErrorKind::Malformed, "malformed path '" + std::string(path) + "'");
        if (is_null(v)) throw PathError(PathErrorKind::NullTraversal, "'" + walked + "' is null");
        const auto* ref = std::get_if<RefV>(&v);
        if (!ref) throw PathError(PathErrorKind::UnknownField, "'" + walked + "' is not a reference");
        const HeapNode& node = state.heap.at(ref->id);

        if (c == '.') {
            std::string field(take_ident(path, i));
            walked += "." + field;
            if (const auto* arr = std::get_if<ArrayNode>(&node)) {
                if (field != "length") throw PathError(PathErrorKind::UnknownField, "arrays have no field '" + field + "'");
                v = static_cast<std::int32_t>(arr->cells.size());
                continue;
            }
            const Value* fv = std::get<ObjectNode>(node).find(field);
            if (!fv) throw PathError(PathErrorKind::UnknownField, "no field '" + field + "' at '" + walked + "'");
            v = *fv;
        } else {
            std::size_t close = path.find(']', i);
            if (close == std::string_view::npos) throw PathError(PathErrorKind::Malformed, "missing ']' in path");
            long long idx = 0;
            auto digits = path.substr(i, close - i);
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
            if (ec != std::errc{} || p != digits.data() + digits.size()) {
                throw PathError(PathErrorKind::Malformed, "bad index '" + std::string(digits) + "'");
            }
            i = close + 1;
            walked += "[" + std::string(digits) + "]";
            const auto* arr = std::get_if<ArrayNode>(&node);
            if (!arr) throw PathError(PathErrorKind::UnknownField, "'" + walked + "' indexes a non-array");
            if (idx < 0 || static_cast<std::size_t>(idx) >= arr->cells.size()) {
                throw PathError(PathErrorKind::IndexOutOfBounds, "index " + std::to_string(idx) +
                                                                     " out of bounds for length " +
                                                                     std::to_string(arr->cells.size()));
            }
            v = arr->cells[static_cast<std::size_t>(idx)];
        }
    }
    return v;
}

}  // namespace vps::machine
