#include "vps/lang/token.hpp"

#include <array>
#include <cctype>

#include "vps/text.hpp"

namespace vps::lang {

namespace {

constexpr std::array<std::string_view, 18> kKeywords = {
    "class", "public", "static", "void",  "int",  "double", "boolean",
    "char",  "String", "new",    "null",  "true", "false",  "if",
    "else",  "while",  "return", "this"};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_part(char c) {
    return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_trivia();
            if (at_end()) break;
            out.push_back(next_token());
        }
        return out;
    }

private:
    bool at_end() const { return i_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
    }

    void advance() {
        char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            // continuation bytes do not start a new column
            ++col_;
        }
    }

    SourcePos here() const { return {line_, col_}; }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                SourcePos start = here();
                advance();
                advance();
                while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
                if (at_end()) throw LexError("unterminated block comment", start);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    Token make(TokenKind kind, std::size_t start, SourcePos pos) const {
        return Token{kind, std::string(src_.substr(start, i_ - start)), pos.line, pos.column,
                     start};
    }

    Token next_token() {
        const std::size_t start = i_;
        const SourcePos pos = here();
        const char c = peek();

        if (is_ident_start(c)) {
            while (!at_end() && is_ident_part(peek())) advance();
            auto word = src_.substr(start, i_ - start);
            return make(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, start, pos);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number(start, pos);
        if (c == '"' || c == '\'') return quoted(c, start, pos);

        switch (c) {
        case '(': case ')': case '{': case '}': case '[': case ']':
        case ';': case ',': case '.':
            advance();
            return make(TokenKind::Punctuation, start, pos);
        case '+': case '-': case '*': case '/': case '%':
            advance();
            return make(TokenKind::Operator, start, pos);
        case '=': case '!': case '<': case '>':
            advance();
            if (peek() == '=') advance();
            return make(TokenKind::Operator, start, pos);
        case '&': case '|':
            if (peek(1) == c) {
                advance();
                advance();
                return make(TokenKind::Operator, start, pos);
            }
            break;
        default:
            break;
        }
        throw LexError("illegal character '" + text::printable(src_.substr(start, 1)) + "'", pos);
    }

    Token number(std::size_t start, SourcePos pos) {
        auto digits = [&] {
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        };
        digits();
        bool is_double = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            is_double = true;
            advance();
            digits();
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t ahead = (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
            if (std::isdigit(static_cast<unsigned char>(peek(ahead)))) {
                is_double = true;
                for (std::size_t k = 0; k < ahead; ++k) advance();
                digits();
            }
        }
        if (is_ident_start(peek())) {
            throw LexError("malformed number literal", pos);
        }
        return make(is_double ? TokenKind::DoubleLiteral : TokenKind::IntLiteral, start, pos);
    }

    Token quoted(char quote, std::size_t start, SourcePos pos) {
        advance();
        while (true) {
            if (at_end() || peek() == '\n') {
                throw LexError(quote == '"' ? "unterminated string literal"
                                            : "unterminated char literal",
                               pos);
            }
            char c = peek();
            if (c == '\\') {
                advance();
                if (at_end() || peek() == '\n') continue;
                advance();
            } else if (c == quote) {
                advance();
                break;
            } else {
                advance();
            }
        }
        Token t = make(quote == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, start, pos);
        // validate escapes and, for chars, the single-unit rule
        std::string body = decode_escapes(std::string_view(t.lexeme).substr(1, t.lexeme.size() - 2), pos);
        if (quote == '\'' && text::utf16_length(body) != 1) {
            throw LexError("char literal must contain exactly one character", pos);
        }
        return t;
    }

    std::string_view src_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "int-literal";
    case TokenKind::DoubleLiteral: return "double-literal";
    case TokenKind::StringLiteral: return "string-literal";
    case TokenKind::CharLiteral: return "char-literal";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Operator: return "operator";
    }
    return "?";
}

PositionedError::PositionedError(const std::string& message, SourcePos pos)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                         message),
      message_(message),
      pos_(pos) {}

bool is_keyword(std::string_view word) {
    for (auto k : kKeywords) {
        if (k == word) return true;
    }
    return false;
}

std::string decode_escapes(std::string_view body, SourcePos pos) {
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '\\') {
            out.push_back(c);
            continue;
        }
        if (++i >= body.size()) throw LexError("dangling escape", pos);
        switch (body[i]) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '0': out.push_back('\0'); break;
        case '\\': out.push_back('\\'); break;
        case '\'': out.push_back('\''); break;
        case '"': out.push_back('"'); break;
        case 'u': {
            if (i + 4 >= body.size()) {
                throw LexError("malformed \\u escape", pos);
            }
            unsigned code = 0;
            for (int k = 1; k <= 4; ++k) {
                char h = body[i + k];
                code <<= 4;
                if (h >= '0' && h <= '9') code |= static_cast<unsigned>(h - '0');
                else if (h >= 'a' && h <= 'f') code |= static_cast<unsigned>(h - 'a' + 10);
                else if (h >= 'A' && h <= 'F') code |= static_cast<unsigned>(h - 'A' + 10);
                else throw LexError("malformed \\u escape", pos);
            }
            i += 4;
            text::append_utf8(out, static_cast<char32_t>(code));
            break;
        }
        default:
            throw LexError(std::string("unknown escape '\\") + body[i] + "'", pos);
        }
    }
    return out;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace vps::lang
