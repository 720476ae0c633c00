#include "vps/diagram/emit.hpp"

#include <array>
#include <cstdint>

namespace vps::diagram {

namespace {

// Helvetica advance widths (1/1000 em) for printable ASCII 32..126.
constexpr std::array<std::uint16_t, 95> kHelvetica = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278,  // ' ' .. '/'
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556,                                // '0' .. '9'
    278, 278, 584, 584, 584, 556, 1015,                                              // ':' .. '@'
    667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833,                 // 'A' .. 'M'
    722, 778, 667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611,                 // 'N' .. 'Z'
    278, 278, 278, 469, 556, 333,                                                    // '[' .. '`'
    556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833,                 // 'a' .. 'm'
    556, 556, 556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500,                 // 'n' .. 'z'
    334, 260, 334, 584,                                                              // '{' .. '~'
};

constexpr std::uint16_t kFallback = 556;

}  // namespace

double text_width(std::string_view utf8, double fontSize) {
    long units = 0;
    for (std::size_t i = 0; i < utf8.size(); ++i) {
        auto c = static_cast<unsigned char>(utf8[i]);
        if ((c & 0xC0) == 0x80) continue;  // continuation byte
        units += (c >= 32 && c <= 126) ? kHelvetica[c - 32] : kFallback;
    }
    return static_cast<double>(units) * fontSize / 1000.0;
}

}  // namespace vps::diagram
