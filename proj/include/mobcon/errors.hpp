#pragma once

#include <stdexcept>
#include <string>

namespace mobcon {

// Error taxonomy mirrored by the CLI exit codes: config errors exit 2,
// data errors 3, seeding errors 4. Everything else is a plain exception.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct SeedError : std::runtime_error {
  explicit SeedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mobcon
