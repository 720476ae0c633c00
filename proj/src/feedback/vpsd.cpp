#include "vps/feedback/vpsd.hpp"

#include <cerrno>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "vps/lang/token.hpp"
#include "vps/machine/value.hpp"
#include "vps/text.hpp"

namespace vps::feedback {

using diagram::Diagram;
using diagram::FrameBox;
using diagram::NodeBox;
using diagram::NodeKind;
using diagram::Row;
using diagram::Slot;
using diagram::SlotKind;

namespace {

enum class Tok { Word, Label, Arrow, Punct, Number, String, Char, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // raw lexeme; decoded body for String and Char
};

bool word_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$'; }
bool word_char(char c) { return word_start(c) || (c >= '0' && c <= '9') || c == '.'; }
bool digit(char c) { return c >= '0' && c <= '9'; }
bool label_char(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || digit(c) || c == '_'; }

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End: return "end of line";
    case Tok::String: return "string literal";
    case Tok::Char: return "char literal";
    default: return "'" + text::printable(t.text) + "'";
    }
}

std::vector<Token> scan(std::string_view line, int lineNo) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (c == '#' && out.empty()) break;  // comment line
        std::size_t start = i;
        if (word_start(c)) {
            while (i < line.size() && word_char(line[i])) ++i;
            out.push_back({Tok::Word, std::string(line.substr(start, i - start))});
        } else if (c == '@') {
            ++i;
            while (i < line.size() && label_char(line[i])) ++i;
            if (i == start + 1) throw VpsdError(lineNo, "expected a label name after '@'");
            out.push_back({Tok::Label, std::string(line.substr(start, i - start))});
        } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            i += 2;
            out.push_back({Tok::Arrow, "->"});
        } else if (digit(c) || (c == '-' && i + 1 < line.size() && (digit(line[i + 1]) || line[i + 1] == 'I'))) {
            if (c == '-') ++i;
            if (line.substr(i, 8) == "Infinity") {
                i += 8;
            } else {
                while (i < line.size() && digit(line[i])) ++i;
                if (i < line.size() && line[i] == '.') {
                    ++i;
                    while (i < line.size() && digit(line[i])) ++i;
                }
                if (i < line.size() && (line[i] == 'e' || line[i] == 'E')) {
                    ++i;
                    if (i < line.size() && (line[i] == '+' || line[i] == '-')) ++i;
                    if (i >= line.size() || !digit(line[i])) throw VpsdError(lineNo, "malformed number");
                    while (i < line.size() && digit(line[i])) ++i;
                }
            }
            out.push_back({Tok::Number, std::string(line.substr(start, i - start))});
        } else if (c == '"' || c == '\'') {
            ++i;
            while (i < line.size() && line[i] != c) i += line[i] == '\\' ? 2 : 1;
            if (i >= line.size()) {
                throw VpsdError(lineNo, c == '"' ? "unterminated string literal" : "unterminated char literal");
            }
            ++i;
            std::string_view body = line.substr(start + 1, i - start - 2);
            try {
                out.push_back({c == '"' ? Tok::String : Tok::Char,
                               lang::decode_escapes(body, {lineNo, static_cast<int>(start) + 1})});
            } catch (const lang::PositionedError& e) {
                throw VpsdError(lineNo, e.message());
            }
        } else if (c == '=' || c == '{' || c == '}' || c == '[' || c == ']' || c == ',') {
            ++i;
            out.push_back({Tok::Punct, std::string(1, c)});
        } else {
            throw VpsdError(lineNo, "unexpected character '" + text::printable(line.substr(i, 1)) + "'");
        }
    }
    return out;
}

class LineParser {
public:
    LineParser(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

    const Token& peek(std::size_t ahead = 0) const {
        static const Token kEnd{};
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : kEnd;
    }
    bool at_punct(char c, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Punct && peek(ahead).text[0] == c;
    }
    bool at_word(std::string_view w) const { return peek().kind == Tok::Word && peek().text == w; }

    Token take() { return pos_ < toks_.size() ? toks_[pos_++] : Token{}; }

    [[noreturn]] void fail(const std::string& expected) const {
        throw VpsdError(line_, "expected " + expected + " but found " + describe(peek()));
    }

    Token expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) fail(what);
        return take();
    }
    void expect_punct(char c) {
        if (!at_punct(c)) fail(std::string("'") + c + "'");
        take();
    }
    void expect_end() {
        if (peek().kind != Tok::End) fail("end of line");
    }

    /// literal := number | string | char | true | false
    std::string literal() {
        const Token& t = peek();
        machine::Value v;
        switch (t.kind) {
        case Tok::String: v = t.text; break;
        case Tok::Char:
            if (text::utf16_length(t.text) != 1) throw VpsdError(line_, "char literal must contain exactly one character");
            v = text::first_utf16_unit(t.text);
            break;
        case Tok::Number: v = number(t.text); break;
        case Tok::Word:
            if (t.text == "true" || t.text == "false") {
                v = t.text == "true";
            } else if (t.text == "NaN" || t.text == "Infinity") {
                v = number(t.text);
            } else {
                fail("a literal");
            }
            break;
        default: fail("a literal");
        }
        take();
        return machine::literal(v);
    }

    /// "=" literal | "=" "null" | "->" LABEL, after the name.
    Slot slot(bool allowLiteral, bool allowRef) {
        if (allowRef && peek().kind == Tok::Arrow) {
            take();
            return Slot::edge(expect(Tok::Label, "a label").text);
        }
        expect_punct('=');
        if (at_word("null")) {
            if (!allowRef) throw VpsdError(line_, "null is written 'ref NAME = null'");
            take();
            return Slot::null();
        }
        if (!allowLiteral) fail("'null' or '->'");
        return Slot::inline_value(literal());
    }

    /// cell := literal | "->" LABEL | "null"
    Slot cell() {
        if (peek().kind == Tok::Arrow) {
            take();
            return Slot::edge(expect(Tok::Label, "a label").text);
        }
        if (at_word("null")) {
            take();
            return Slot::null();
        }
        return Slot::inline_value(literal());
    }

    int line() const { return line_; }

private:
    machine::Value number(const std::string& s) const {
        if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
        if (s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
        if (s.find_first_of(".eE") != std::string::npos) return std::strtod(s.c_str(), nullptr);
        errno = 0;
        long long v = std::strtoll(s.c_str(), nullptr, 10);
        if (errno == ERANGE || v < INT32_MIN || v > INT32_MAX) throw VpsdError(line_, "integer literal out of range");
        return static_cast<std::int32_t>(v);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
};

struct EdgeUse {
    std::string label;
    int line;
};

}  // namespace

Diagram parse_vpsd(std::string_view text) {
    Diagram d;
    enum class Phase { Start, Frames, Heap } phase = Phase::Start;
    std::vector<EdgeUse> uses;
    std::set<std::string> seenBindings;
    std::map<std::string, int> labels;
    int lineNo = 0;
    int lastContent = 1;  // end-of-input errors point here

    auto note = [&](const Slot& s, int line) {
        if (s.kind == SlotKind::Edge) uses.push_back({s.text, line});
    };

    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        start = end + 1;
        ++lineNo;

        LineParser p(scan(raw, lineNo), lineNo);
        if (p.peek().kind == Tok::End) continue;
        lastContent = lineNo;

        if (p.at_word("frame")) {
            if (phase == Phase::Heap) throw VpsdError(lineNo, "frame section after the heap section");
            p.take();
            std::string name = p.expect(Tok::Word, "a frame name").text;
            p.expect_end();
            d.frames.push_back({name, {}});
            seenBindings.clear();
            phase = Phase::Frames;
        } else if (p.at_word("heap")) {
            if (phase == Phase::Start) throw VpsdError(lineNo, "expected a 'frame' section before 'heap'");
            if (phase == Phase::Heap) throw VpsdError(lineNo, "duplicate heap section");
            p.take();
            p.expect_end();
            phase = Phase::Heap;
        } else if (p.at_word("var") || p.at_word("ref")) {
            if (phase != Phase::Frames) {
                throw VpsdError(lineNo, phase == Phase::Start ? "expected 'frame NAME' before bindings"
                                                               : "bindings belong in a frame section, before 'heap'");
            }
            bool isRef = p.take().text == "ref";
            std::string name = p.expect(Tok::Word, "a variable name").text;
            Slot s = p.slot(!isRef, isRef);
            p.expect_end();
            if (!seenBindings.insert(name).second) throw VpsdError(lineNo, "duplicate binding '" + name + "'");
            note(s, lineNo);
            d.frames.back().roots.push_back({name, s});
        } else if (p.peek().kind == Tok::Label) {
            if (phase != Phase::Heap) throw VpsdError(lineNo, "node lines belong after 'heap'");
            NodeBox n;
            n.label = p.take().text;
            if (labels.count(n.label) != 0) {
                throw VpsdError(lineNo, "duplicate node label '" + n.label + "' (first declared on line " +
                                            std::to_string(labels[n.label]) + ")");
            }
            labels[n.label] = lineNo;
            std::string type = p.expect(Tok::Word, "a class name or element type").text;
            if (p.at_punct('[') && p.at_punct(']', 1) && p.at_punct('[', 2)) {
                p.take();
                p.take();
            }
            if (p.at_punct('{')) {
                p.take();
                n.kind = NodeKind::Object;
                n.title = type;
                std::set<std::string> keys;
                if (p.at_punct('}')) {
                    p.take();
                } else {
                    while (true) {
                        std::string key = p.expect(Tok::Word, "a field name").text;
                        if (!keys.insert(key).second) throw VpsdError(lineNo, "duplicate field '" + key + "'");
                        Slot s = p.slot(true, true);
                        note(s, lineNo);
                        n.rows.push_back({key, s});
                        if (p.at_punct('}')) {
                            p.take();
                            break;
                        }
                        p.expect_punct(',');
                    }
                }
            } else if (p.at_punct('[')) {
                p.take();
                n.kind = NodeKind::Array;
                n.title = type + "[]";
                if (p.at_punct(']')) {
                    p.take();
                } else {
                    while (true) {
                        Slot s = p.cell();
                        note(s, lineNo);
                        n.rows.push_back({std::to_string(n.rows.size()), s});
                        if (p.at_punct(']')) {
                            p.take();
                            break;
                        }
                        p.expect_punct(',');
                    }
                }
            } else {
                p.fail("'{' or '['");
            }
            p.expect_end();
            d.nodes.push_back(std::move(n));
        } else {
            p.fail("'frame', 'var', 'ref', 'heap' or a node label");
        }
    }
    if (phase == Phase::Start) throw VpsdError(lastContent, "expected 'frame NAME'");
    if (phase != Phase::Heap) throw VpsdError(lastContent, "missing 'heap' section");
    for (const auto& u : uses) {
        if (labels.count(u.label) == 0) throw VpsdError(u.line, "edge to undeclared node '" + u.label + "'");
    }
    diagram::rebuild_edges(d);
    return d;
}

std::string render_slot(const Slot& s) {
    switch (s.kind) {
    case SlotKind::Inline: return s.text;
    case SlotKind::Null: return "null";
    case SlotKind::Edge: return "-> " + s.text;
    }
    return {};
}

std::string render_node_body(const NodeBox& n) {
    std::string out = n.title;
    if (n.kind == NodeKind::Array) {
        out += " [";
        for (std::size_t i = 0; i < n.rows.size(); ++i) {
            if (i > 0) out += ", ";
            out += render_slot(n.rows[i].slot);
        }
        return out + "]";
    }
    if (n.rows.empty()) return out + " { }";
    out += " { ";
    for (std::size_t i = 0; i < n.rows.size(); ++i) {
        if (i > 0) out += ", ";
        const Slot& s = n.rows[i].slot;
        out += n.rows[i].key + (s.kind == SlotKind::Edge ? " " : " = ") + render_slot(s);
    }
    return out + " }";
}

std::string emit_vpsd(const Diagram& d) {
    std::ostringstream out;
    if (d.frames.empty()) out << "frame main\n";
    for (const auto& f : d.frames) {
        out << "frame " << f.label << "\n";
        for (const auto& r : f.roots) {
            switch (r.slot.kind) {
            case SlotKind::Inline: out << "var " << r.name << " = " << r.slot.text << "\n"; break;
            case SlotKind::Null: out << "ref " << r.name << " = null\n"; break;
            case SlotKind::Edge: out << "ref " << r.name << " -> " << r.slot.text << "\n"; break;
            }
        }
    }
    out << "heap\n";
    for (const auto& n : d.nodes) out << n.label << " " << render_node_body(n) << "\n";
    return out.str();
}

}  // namespace vps::feedback
