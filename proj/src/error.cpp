#include "eventforge/error.hpp"

namespace eventforge {

DataError::DataError(const std::string& what, std::optional<std::uint64_t> location)
    : std::runtime_error(what), location_(location) {}

}  // namespace eventforge
