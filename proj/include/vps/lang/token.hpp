#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vps::lang {

struct SourcePos {
    int line = 0;    // 1-based
    int column = 0;  // 1-based, counted in code points

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    DoubleLiteral,
    StringLiteral,
    CharLiteral,
    Punctuation,
    Operator,
};

std::string_view to_string(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string lexeme;  // exact source text, quotes and escapes included
    int line = 0;
    int column = 0;
    std::size_t offset = 0;  // byte offset of the first character

    SourcePos pos() const { return {line, column}; }
    bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
};

/// Error raised by the lexer, parser, or path reader at a single source position.
class PositionedError : public std::runtime_error {
public:
    PositionedError(const std::string& message, SourcePos pos);

    const std::string& message() const { return message_; }
    SourcePos pos() const { return pos_; }

private:
    std::string message_;
    SourcePos pos_;
};

class LexError : public PositionedError {
public:
    using PositionedError::PositionedError;
};

class ParseError : public PositionedError {
public:
    using PositionedError::PositionedError;
};

/// Splits MiniJava-VPS source into tokens. Whitespace and comments are dropped.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

/// Decodes the body of a string or char literal lexeme (without the quotes)
/// into UTF-8. Throws LexError on a malformed escape.
std::string decode_escapes(std::string_view body, SourcePos pos);

}  // namespace vps::lang
