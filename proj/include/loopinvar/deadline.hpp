#pragma once

// Cooperative deadline passed down through long-running pipeline stages.
// Stages poll at loop boundaries; an expired deadline raises TimeoutError.

#include <chrono>
#include <optional>

#include "loopinvar/errors.hpp"

namespace loopinvar {

class Deadline {
public:
  Deadline() = default;

  /// Deadline expiring the given number of seconds from now.
  static Deadline after_seconds(double secs) {
    Deadline d;
    d.at_ = std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(secs));
    return d;
  }

  bool active() const { return at_.has_value(); }

  bool expired() const {
    return at_.has_value() && std::chrono::steady_clock::now() > *at_;
  }

  /// Throws TimeoutError when the deadline has passed; cheap no-op otherwise.
  void poll() const {
    if (expired()) throw TimeoutError("deadline exceeded");
  }

private:
  std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace loopinvar
