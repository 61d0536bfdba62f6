#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phisig {

enum class ErrorKind {
    domain,
    out_of_range,
    overflow,
    resource,
    truncation,
    format,
    usage,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::resource: return "resource_error";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::format: return "format_error";
    case ErrorKind::usage: return "usage_error";
    }
    return "error";
}

/// Base of every error raised by the library. `kind()` is stable and is
/// what the command-line tool reports on failure.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Raised when a preimage enumeration exceeds its size cap. Holds the
/// (sorted) elements found before the cap was hit.
class TruncationError : public Error {
  public:
    TruncationError(const std::string& what, std::vector<std::uint64_t> partial)
        : Error(ErrorKind::truncation, what), partial_(std::move(partial)) {}

    const std::vector<std::uint64_t>& partial() const noexcept { return partial_; }

  private:
    std::vector<std::uint64_t> partial_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace phisig
