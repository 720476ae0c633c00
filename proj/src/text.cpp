#include "vps/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace vps::text {

void append_utf8(std::string& out, char32_t code) {
    if (code < 0x80) {
        out.push_back(static_cast<char>(code));
    } else if (code < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (code >> 6)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else if (code < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (code >> 12)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (code >> 18)));
        out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    }
}

namespace {

// Decodes one code point starting at i; malformed bytes decode as themselves.
char32_t decode_at(std::string_view s, std::size_t& i) {
    auto b = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t code = b;
    if (b >= 0xF0) {
        extra = 3;
        code = b & 0x07;
    } else if (b >= 0xE0) {
        extra = 2;
        code = b & 0x0F;
    } else if (b >= 0xC0) {
        extra = 1;
        code = b & 0x1F;
    }
    ++i;
    for (int k = 0; k < extra && i < s.size(); ++k, ++i) {
        code = (code << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
    }
    return code;
}

std::string escape_body(std::string_view utf8, char quote) {
    std::string out;
    for (std::size_t i = 0; i < utf8.size();) {
        char32_t code = decode_at(utf8, i);
        switch (code) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        case '\\': out += "\\\\"; break;
        default:
            if (code == static_cast<char32_t>(quote)) {
                out.push_back('\\');
                out.push_back(quote);
            } else if (code < 0x20 || code == 0x7F || (code >= 0xD800 && code < 0xE000)) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(code));
                out += buf;
            } else {
                append_utf8(out, code);
            }
        }
    }
    return out;
}

}  // namespace

std::size_t utf16_length(std::string_view utf8) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < utf8.size();) {
        n += decode_at(utf8, i) >= 0x10000 ? 2 : 1;
    }
    return n;
}

char16_t first_utf16_unit(std::string_view utf8) {
    if (utf8.empty()) return 0;
    std::size_t i = 0;
    char32_t code = decode_at(utf8, i);
    if (code >= 0x10000) return static_cast<char16_t>(0xD800 + ((code - 0x10000) >> 10));
    return static_cast<char16_t>(code);
}

std::string utf16_unit_to_utf8(char16_t unit) {
    std::string out;
    append_utf8(out, unit);
    return out;
}

std::string quote_string(std::string_view utf8) { return "\"" + escape_body(utf8, '"') + "\""; }

std::string quote_char(char16_t unit) {
    return "'" + escape_body(utf16_unit_to_utf8(unit), '\'') + "'";
}

std::string format_double(double value) {
    if (std::isnan(value)) return "NaN";
    if (std::isinf(value)) return value > 0 ? "Infinity" : "-Infinity";
    if (value == 0.0) return std::signbit(value) ? "-0.0" : "0.0";

    const double magnitude = std::fabs(value);
    char buf[64];
    if (magnitude >= 1e-3 && magnitude < 1e7) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
        std::string s(buf, end);
        if (s.find('.') == std::string::npos) s += ".0";
        return s;
    }
    // scientific, rewritten to Java's d.dddE±n shape
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    std::string s(buf, end);
    auto e = s.find('e');
    std::string mantissa = s.substr(0, e);
    std::string exponent = s.substr(e + 1);
    if (mantissa.find('.') == std::string::npos) mantissa += ".0";
    bool negative = !exponent.empty() && exponent[0] == '-';
    std::size_t first = exponent.find_first_not_of("+-0");
    std::string digits = first == std::string::npos ? "0" : exponent.substr(first);
    return mantissa + "E" + (negative ? "-" : "") + digits;
}

std::string printable(std::string_view raw) {
    std::string out;
    for (char c : raw) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x20 || u >= 0x7F) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\x%02X", u);
            out += buf;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string xml_escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace vps::text
