#include "bmgame/error.hpp"

namespace bmg {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::SinkVertex: return "SinkVertex";
    case ErrorKind::DanglingEdge: return "DanglingEdge";
    case ErrorKind::DuplicateVertex: return "DuplicateVertex";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::AnchorMismatch: return "AnchorMismatch";
    case ErrorKind::EdgeViolation: return "EdgeViolation";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::MissingWeight: return "MissingWeight";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::LoopNotClosed: return "LoopNotClosed";
    case ErrorKind::MissingTableEntry: return "MissingTableEntry";
    case ErrorKind::ExplosionGuard: return "ExplosionGuard";
    case ErrorKind::OutputEscapesBSCC: return "OutputEscapesBSCC";
    case ErrorKind::NoBSCCPath: return "NoBSCCPath";
    case ErrorKind::TableMismatch: return "TableMismatch";
    case ErrorKind::IllegalSetMove: return "IllegalSetMove";
    case ErrorKind::LevelStuck: return "LevelStuck";
    case ErrorKind::NotSubProbOne: return "NotSubProbOne";
    case ErrorKind::SelectionFailure: return "SelectionFailure";
    case ErrorKind::SearchCapReached: return "SearchCapReached";
    case ErrorKind::UnknownBundle: return "UnknownBundle";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    }
    return "Error";
}

} // namespace bmg
