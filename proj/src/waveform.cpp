#include "rppg/waveform.hpp"

#include <cmath>
#include <string>

#include "rppg/errors.hpp"

namespace rppg {

void validate_waveform(const Waveform& w, const char* name) {
  if (w.samples.size() < 2) {
    throw InvariantViolation(std::string(name) + ": waveform needs at least 2 samples");
  }
  if (!(w.fs > 0.0) || !std::isfinite(w.fs)) {
    throw InvariantViolation(std::string(name) + ": sampling rate must be a positive real");
  }
  if (!w.samples.isFinite().all()) {
    throw InvariantViolation(std::string(name) + ": all samples must be finite");
  }
}

}  // namespace rppg
