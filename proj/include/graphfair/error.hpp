#pragma once

#include <stdexcept>
#include <string>

namespace graphfair {

// Malformed input: bad files, unknown ids, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured search or size cap would be exceeded.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string cap, std::size_t limit, std::size_t requested)
      : std::runtime_error("cap exceeded: " + cap + " limit " + std::to_string(limit) +
                           ", requested " + std::to_string(requested)),
        cap_(std::move(cap)),
        limit_(limit),
        requested_(requested) {}
  const std::string& cap() const noexcept { return cap_; }
  std::size_t limit() const noexcept { return limit_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::string cap_;
  std::size_t limit_;
  std::size_t requested_;
};

// An internal guarantee failed. Carries a state dump for diagnosis.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace graphfair
