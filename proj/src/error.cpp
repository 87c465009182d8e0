#include "uncover/error.hpp"

namespace uncover {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::DanglingEndpoint: return "DanglingEndpoint";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::NotDirectedGraph: return "NotDirectedGraph";
    case Errc::LabelMismatch: return "LabelMismatch";
    case Errc::ConnMismatch: return "ConnMismatch";
    case Errc::IncidentNodeUndefined: return "IncidentNodeUndefined";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::NotConflictFree: return "NotConflictFree";
    case Errc::NacViolated: return "NacViolated";
    case Errc::UnsupportedOrder: return "UnsupportedOrder";
    case Errc::BudgetTooLarge: return "BudgetTooLarge";
    case Errc::IterationBudgetExhausted: return "IterationBudgetExhausted";
    case Errc::InvalidProblem: return "InvalidProblem";
    case Errc::ParseError: return "ParseError";
    case Errc::UndeclaredReference: return "UndeclaredReference";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::MissingOrder: return "MissingOrder";
    }
    return "UnknownError";
}

} // namespace uncover
