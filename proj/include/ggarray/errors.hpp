#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggarray {

// A structure ran out of addressable slots (bucket table full, static
// capacity exceeded, or an insert that needs a resize first).
class CapacityExhausted : public std::length_error {
 public:
  using std::length_error::length_error;
};

class OutOfBounds : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller broke a documented precondition (bad bucket index, zero shards,
// non power-of-two bucket size, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ShardFailure {
  std::size_t shard;
  std::string message;
};

// Raised by shard-parallel operations when one or more shards fail. The
// shards listed in `succeeded` completed their part of the operation.
class ShardErrors : public std::runtime_error {
 public:
  ShardErrors(std::vector<ShardFailure> failures, std::vector<std::size_t> succeeded)
      : std::runtime_error(summarize(failures)),
        failures_(std::move(failures)),
        succeeded_(std::move(succeeded)) {}

  const std::vector<ShardFailure>& failures() const noexcept { return failures_; }
  const std::vector<std::size_t>& succeeded() const noexcept { return succeeded_; }

 private:
  static std::string summarize(const std::vector<ShardFailure>& failures) {
    std::string msg = std::to_string(failures.size()) + " shard(s) failed";
    if (!failures.empty()) {
      msg += "; first: shard " + std::to_string(failures.front().shard) + ": " +
             failures.front().message;
    }
    return msg;
  }

  std::vector<ShardFailure> failures_;
  std::vector<std::size_t> succeeded_;
};

}  // namespace ggarray
