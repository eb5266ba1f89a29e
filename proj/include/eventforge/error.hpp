#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace eventforge {

/// Raised for malformed or inconsistent input data (files, streams, frames).
/// When the failure has a position, `location()` carries the byte offset or
/// element index and the message names it as well.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what,
                     std::optional<std::uint64_t> location = std::nullopt);

  std::optional<std::uint64_t> location() const noexcept { return location_; }

 private:
  std::optional<std::uint64_t> location_;
};

}  // namespace eventforge
