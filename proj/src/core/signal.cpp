#include "leaderlab/core.hpp"

#include <cmath>

namespace leaderlab {

void Signal::validate() const {
  if (samples.size() < 2) {
    throw InvalidArgument("signal: length must be at least 2, got " + std::to_string(samples.size()));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("signal: dt must be finite and > 0");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw InvalidArgument("signal: sample " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace leaderlab
