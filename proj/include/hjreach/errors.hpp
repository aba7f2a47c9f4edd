#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hjreach {

/// Malformed or truncated file content. `offset` is the byte position at
/// which the problem was detected.
class format_error : public std::runtime_error {
public:
    format_error(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
          offset_(offset)
    {
    }

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// The numerical scheme left its stability envelope (NaN/Inf values or a
/// diverging sup-norm). Carries no recovery hint: the run must be redone
/// with a valid time step or parameter set.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hjreach
