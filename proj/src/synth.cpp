#include "rppg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rppg/rates.hpp"
#include "rppg/trace.hpp"
#include "rppg/errors.hpp"

namespace rppg {

namespace {

// Per-channel pulse strengths, green strongest.
constexpr double kPulseR = 0.33 / 0.77;
constexpr double kPulseG = 1.0;
constexpr double kPulseB = 0.53 / 0.77;
constexpr double kDriftHz = 0.05;  // below both passbands

std::uint8_t quantize(double v) {
  const long q = std::lround(v);
  return static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
}

}  // namespace

void validate_spec(const SynthSpec& spec) {
  auto fail = [](const std::string& msg) { throw SpecInvalid(msg); };
  if (!(spec.duration_s >= 5.0 && spec.duration_s <= 20.0)) {
    fail("duration_s must lie in [5, 20]");
  }
  if (!(spec.fps > 0.0)) fail("fps must be positive");
  if (spec.width < 2 || spec.height < 2) fail("frame size must be at least 2x2");
  for (const double c : {spec.base_r, spec.base_g, spec.base_b}) {
    if (!(c >= 0.0 && c <= 255.0)) fail("base color channels must lie in [0, 255]");
  }
  const FrequencyBand hr = hr_band();
  if (!(spec.hr_bpm >= hr.lo_hz * 60.0 && spec.hr_bpm <= hr.hi_hz * 60.0)) {
    std::ostringstream os;
    os << "hr_bpm must lie inside the HR passband [" << hr.lo_hz * 60.0 << ", "
       << hr.hi_hz * 60.0 << "]";
    fail(os.str());
  }
  const FrequencyBand rr = rr_band();
  if (!(spec.rr_bpm >= rr.lo_hz * 60.0 && spec.rr_bpm <= rr.hi_hz * 60.0)) {
    std::ostringstream os;
    os << "rr_bpm must lie inside the RR passband [" << rr.lo_hz * 60.0 << ", "
       << rr.hi_hz * 60.0 << "]";
    fail(os.str());
  }
  if (!(spec.pulse_amplitude >= 0.0 && spec.pulse_amplitude <= 0.1)) {
    fail("pulse_amplitude must lie in [0, 0.1]");
  }
  if (!(spec.resp_motion_px >= 0.0)) fail("resp_motion_px must be non-negative");
  if (!(spec.illum_drift_amplitude >= 0.0)) fail("illum_drift_amplitude must be non-negative");
  if (!(spec.pixel_noise_sd >= 0.0)) fail("pixel_noise_sd must be non-negative");
}

VideoChunk generate(const SynthSpec& spec) {
  validate_spec(spec);

  const Eigen::Index n = static_cast<Eigen::Index>(std::lround(spec.duration_s * spec.fps));
  const int w = spec.width;
  const int h = spec.height;
  const std::size_t npix = static_cast<std::size_t>(w) * h;

  VideoChunk chunk;
  chunk.width = w;
  chunk.height = h;
  chunk.fps = spec.fps;
  chunk.pixels.resize(static_cast<std::size_t>(n) * npix * 3);
  chunk.face_boxes.assign(static_cast<std::size_t>(n), FaceBox{0, 0, w, h});

  // Five landmarks: inset corners plus center, oscillating vertically.
  Eigen::MatrixX2d base_points(5, 2);
  base_points << 0.3 * w, 0.3 * h,
                 0.7 * w, 0.3 * h,
                 0.5 * w, 0.5 * h,
                 0.3 * w, 0.7 * h,
                 0.7 * w, 0.7 * h;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, spec.pixel_noise_sd > 0.0 ? spec.pixel_noise_sd : 1.0);

  Eigen::ArrayXd ppg(n);
  Eigen::ArrayXd resp(n);
  chunk.landmarks.reserve(static_cast<std::size_t>(n));

  for (Eigen::Index t = 0; t < n; ++t) {
    const double ts = static_cast<double>(t) / spec.fps;
    const double p = std::sin(2.0 * M_PI * spec.hr_bpm / 60.0 * ts);
    const double d = spec.illum_drift_amplitude * std::sin(2.0 * M_PI * kDriftHz * ts);
    ppg[t] = p;
    resp[t] = spec.resp_motion_px * std::sin(2.0 * M_PI * spec.rr_bpm / 60.0 * ts);

    const double vr = spec.base_r * (1.0 + spec.pulse_amplitude * kPulseR * p) * (1.0 + d);
    const double vg = spec.base_g * (1.0 + spec.pulse_amplitude * kPulseG * p) * (1.0 + d);
    const double vb = spec.base_b * (1.0 + spec.pulse_amplitude * kPulseB * p) * (1.0 + d);

    std::uint8_t* f = chunk.pixels.data() + static_cast<std::size_t>(t) * npix * 3;
    if (spec.pixel_noise_sd > 0.0) {
      // One draw per pixel, added to all three channels.
      for (std::size_t i = 0; i < npix; ++i) {
        const double nz = gauss(rng);
        f[3 * i + 0] = quantize(vr + nz);
        f[3 * i + 1] = quantize(vg + nz);
        f[3 * i + 2] = quantize(vb + nz);
      }
    } else {
      const std::uint8_t qr = quantize(vr);
      const std::uint8_t qg = quantize(vg);
      const std::uint8_t qb = quantize(vb);
      for (std::size_t i = 0; i < npix; ++i) {
        f[3 * i + 0] = qr;
        f[3 * i + 1] = qg;
        f[3 * i + 2] = qb;
      }
    }

    Eigen::MatrixX2d pts = base_points;
    pts.col(1).array() += resp[t];
    chunk.landmarks.push_back(std::move(pts));
  }

  chunk.labels.pulse_wave = {std::move(ppg), spec.fps};
  chunk.labels.resp_wave = {std::move(resp), spec.fps};
  chunk.labels.hr_bpm = spec.hr_bpm;
  chunk.labels.rr_bpm = spec.rr_bpm;

  chunk.metadata.age = 30;
  chunk.metadata.gender_male = false;
  chunk.metadata.skin_type = 3;
  chunk.metadata.camera_stationary = true;
  chunk.metadata.movement = movement_score(chunk);
  chunk.metadata.illuminance_var = illuminance_variation(luma_series(chunk));
  return chunk;
}

}  // namespace rppg
