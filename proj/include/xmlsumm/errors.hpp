#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xmlsumm {

/// Base class for all errors raised by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed XML input. Carries the byte offset of the failure.
class parse_error : public error {
 public:
  parse_error(const std::string& msg, std::size_t offset)
      : error("parse error at byte " + std::to_string(offset) + ": " + msg),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid configuration value (alpha out of range, size < 1, ...).
struct config_error : error {
  using error::error;
};

/// Stats file could not be read or violates its invariants.
struct stats_error : error {
  using error::error;
};

}  // namespace xmlsumm
