#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmg {

enum class ErrorKind {
    SinkVertex,
    DanglingEdge,
    DuplicateVertex,
    UnknownVertex,
    AnchorMismatch,
    EdgeViolation,
    NonPositiveWeight,
    MissingWeight,
    BudgetExceeded,
    LoopNotClosed,
    MissingTableEntry,
    ExplosionGuard,
    OutputEscapesBSCC,
    NoBSCCPath,
    TableMismatch,
    IllegalSetMove,
    LevelStuck,
    NotSubProbOne,
    SelectionFailure,
    SearchCapReached,
    UnknownBundle,
    InvalidArgument,
    Parse,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so callers
/// (tests, the CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace bmg
