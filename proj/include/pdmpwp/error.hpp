#pragma once

#include <stdexcept>
#include <string>

namespace pdmpwp {

/// Malformed or out-of-range user input (bad parameter, bad config value).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A realized event rate exceeded the thinning envelope along a segment.
class EnvelopeViolation : public NumericalError {
 public:
  EnvelopeViolation(int channel, double rate, double bound)
      : NumericalError("envelope violation on channel " + std::to_string(channel) +
                       ": rate " + std::to_string(rate) + " > bound " +
                       std::to_string(bound)),
        channel_(channel), rate_(rate), bound_(bound) {}

  int channel() const noexcept { return channel_; }
  double rate() const noexcept { return rate_; }
  double bound() const noexcept { return bound_; }

 private:
  int channel_;
  double rate_;
  double bound_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdmpwp
