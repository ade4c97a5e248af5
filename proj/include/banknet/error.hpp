#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace banknet {

enum class ErrorKind {
    DuplicateEdge,
    NonPositiveWeight,
    SelfLoop,
    DuplicateLabel,
    UnknownNode,
    MalformedRow,
    UnparseableAmount,
    UnparseableRecord,
    YearOrderViolation,
    DuplicatePeriod,
    SameNode,
    SetTooSmall,
    EmptyInput,
    KeyMismatch,
    EmptyGraph,
    InvalidConfig,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// All library failures are reported as banknet::Error; kind() identifies the
/// contract that was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace banknet
