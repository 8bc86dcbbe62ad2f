#pragma once

#include <stdexcept>
#include <string>

namespace dynpin {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the remaining failure classes callers may want to tell apart.

/// A game or scenario whose parameters break the learning contract
/// (e.g. a pure profile with non-positive utility).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A game too large for exhaustive enumeration. Callers should sample instead.
class SizeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A speed measurement the learner cannot use (non-positive or non-finite).
class MeasurementError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario document. `field()` is the JSON path of the offending value.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string field, std::string detail)
        : std::runtime_error(field.empty() ? detail : field + ": " + detail),
          field_(std::move(field)),
          detail_(std::move(detail)) {}

    const std::string& field() const noexcept { return field_; }
    /// The message without the field prefix.
    const std::string& detail() const noexcept { return detail_; }

  private:
    std::string field_;
    std::string detail_;
};

}  // namespace dynpin
