#include "rppg/estimators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rppg/dsp.hpp"
#include "rppg/errors.hpp"

namespace rppg {

const char* to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::G: return "G";
    case EstimatorId::CHROM: return "CHROM";
    case EstimatorId::POS: return "POS";
  }
  return "?";
}

EstimatorId estimator_from_string(std::string_view name) {
  if (name == "G" || name == "g") return EstimatorId::G;
  if (name == "CHROM" || name == "chrom") return EstimatorId::CHROM;
  if (name == "POS" || name == "pos") return EstimatorId::POS;
  throw Error("unknown estimator '" + std::string(name) + "' (expected G, CHROM or POS)");
}

namespace {

void validate_trace(const RgbTrace& trace) {
  if (trace.r.size() != trace.g.size() || trace.r.size() != trace.b.size()) {
    throw InvariantViolation("trace channels must have equal length");
  }
  if (trace.size() < 2) {
    throw InvariantViolation("trace must contain at least 2 samples");
  }
  if (!(trace.fs > 0.0)) {
    throw InvariantViolation("trace sampling rate must be positive");
  }
}

Eigen::Index window_length(const RgbTrace& trace, double window_s) {
  const auto len = static_cast<Eigen::Index>(std::lround(window_s * trace.fs));
  if (len < 2) {
    throw InvariantViolation("analysis window must span at least 2 samples");
  }
  if (trace.size() < len) {
    throw InvariantViolation("trace shorter than the analysis window");
  }
  return len;
}

}  // namespace

Waveform estimate_g(const RgbTrace& trace) {
  validate_trace(trace);
  return {-standardize(trace.g), trace.fs};
}

Waveform estimate_chrom(const RgbTrace& trace, double window_s) {
  validate_trace(trace);
  const Eigen::Index n = trace.size();
  const Eigen::Index len = window_length(trace, window_s);
  const Eigen::Index step = std::max<Eigen::Index>(1, len / 2);
  const Eigen::ArrayXd hann = hann_window(len);

  std::vector<Eigen::Index> starts;
  for (Eigen::Index s = 0; s + len <= n; s += step) starts.push_back(s);
  if (starts.back() != n - len) starts.push_back(n - len);  // cover the tail

  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  for (const Eigen::Index s : starts) {
    const auto r = trace.r.segment(s, len);
    const auto g = trace.g.segment(s, len);
    const auto b = trace.b.segment(s, len);
    const double mr = r.mean(), mg = g.mean(), mb = b.mean();
    if (mr == 0.0 || mg == 0.0 || mb == 0.0) continue;  // degenerate window

    const Eigen::ArrayXd rn = r / mr;
    const Eigen::ArrayXd gn = g / mg;
    const Eigen::ArrayXd bn = b / mb;
    const Eigen::ArrayXd xs = 3.0 * rn - 2.0 * gn;
    const Eigen::ArrayXd ys = 1.5 * rn + gn - 1.5 * bn;
    const double sy = pop_std(ys);
    if (sy == 0.0) continue;  // degenerate window contributes zeros

    Eigen::ArrayXd sw = xs - (pop_std(xs) / sy) * ys;
    sw -= sw.mean();
    out.segment(s, len) += sw * hann;
  }
  return {standardize(out), trace.fs};
}

Waveform estimate_pos(const RgbTrace& trace, double window_s) {
  validate_trace(trace);
  const Eigen::Index n = trace.size();
  const Eigen::Index len = window_length(trace, window_s);

  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index end = len - 1; end < n; ++end) {
    const Eigen::Index s = end - len + 1;
    const auto r = trace.r.segment(s, len);
    const auto g = trace.g.segment(s, len);
    const auto b = trace.b.segment(s, len);
    const double mr = r.mean(), mg = g.mean(), mb = b.mean();
    if (mr == 0.0 || mg == 0.0 || mb == 0.0) continue;

    const Eigen::ArrayXd rn = r / mr;
    const Eigen::ArrayXd gn = g / mg;
    const Eigen::ArrayXd bn = b / mb;
    const Eigen::ArrayXd s1 = gn - bn;
    const Eigen::ArrayXd s2 = gn + bn - 2.0 * rn;
    const double sd2 = pop_std(s2);
    if (sd2 == 0.0) continue;  // degenerate window contributes zeros

    Eigen::ArrayXd h = s1 + (pop_std(s1) / sd2) * s2;
    h -= h.mean();
    out.segment(s, len) += h;
  }
  return {standardize(out), trace.fs};
}

Waveform estimate_resp_from_landmarks(const VideoChunk& chunk) {
  if (!chunk.has_landmarks()) {
    throw NoLandmarks("respiration estimation requires landmarks");
  }
  const Eigen::Index n = chunk.frame_count();
  if (chunk.landmarks.size() != static_cast<std::size_t>(n) || n < 2) {
    throw InvariantViolation("landmarks must cover every frame");
  }

  Eigen::ArrayXd y(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    y[t] = chunk.landmarks[static_cast<std::size_t>(t)].col(1).mean();
  }

  const auto width = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::lround(2.0 * chunk.fps)));
  Eigen::ArrayXd trend(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    Eigen::Index lo = t - (width - 1) / 2;
    Eigen::Index hi = lo + width - 1;
    lo = std::max<Eigen::Index>(lo, 0);
    hi = std::min(hi, n - 1);
    trend[t] = y.segment(lo, hi - lo + 1).mean();
  }
  return {standardize(y - trend), chunk.fps};
}

EstimationResult run_estimator(EstimatorId id, const RgbTrace& trace,
                               const VideoChunk& chunk) {
  EstimationResult result;
  switch (id) {
    case EstimatorId::G: result.pulse_wave = estimate_g(trace); break;
    case EstimatorId::CHROM: result.pulse_wave = estimate_chrom(trace); break;
    case EstimatorId::POS: result.pulse_wave = estimate_pos(trace); break;
  }
  if (chunk.has_landmarks()) {
    result.resp_wave = estimate_resp_from_landmarks(chunk);
  }
  return result;
}

}  // namespace rppg
