#include "banknet/error.hpp"

namespace banknet {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::UnparseableAmount: return "UnparseableAmount";
    case ErrorKind::UnparseableRecord: return "UnparseableRecord";
    case ErrorKind::YearOrderViolation: return "YearOrderViolation";
    case ErrorKind::DuplicatePeriod: return "DuplicatePeriod";
    case ErrorKind::SameNode: return "SameNode";
    case ErrorKind::SetTooSmall: return "SetTooSmall";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::KeyMismatch: return "KeyMismatch";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

} // namespace banknet
