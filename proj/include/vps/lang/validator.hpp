#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vps/lang/ast.hpp"

namespace vps::lang {

enum class ErrorCategory {
    UnknownType,
    UnknownField,
    UnknownMethod,
    UnknownVariable,
    ArityMismatch,
    TypeMismatch,
    MissingMain,
    DuplicateMain,
    DuplicateDeclaration,
    InvalidConstructor,
    MissingReturn,
    NotAStatement,
    LiteralOutOfRange,
    InvalidAssignment,
};

std::string_view to_string(ErrorCategory category);

struct ValidationError {
    ErrorCategory category;
    std::string message;
    SourcePos pos;

    friend bool operator==(const ValidationError&, const ValidationError&) = default;
};

/// Carries every problem found by validate(), in source order.
class ValidationFailed : public std::runtime_error {
public:
    explicit ValidationFailed(std::vector<ValidationError> errors);
    const std::vector<ValidationError>& errors() const { return errors_; }

private:
    std::vector<ValidationError> errors_;
};

/// Collects all validation errors without throwing.
std::vector<ValidationError> check(const Program& program);

/// Resolves names and types, annotates every expression with its static
/// type and returns the checked program. Throws ValidationFailed.
CheckedProgram validate(Program program, std::string source = {});

/// parse_program followed by validate.
CheckedProgram compile(std::string_view source);

}  // namespace vps::lang
