#include "rppg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rppg/csv.hpp"
#include "rppg/dsp.hpp"
#include "rppg/errors.hpp"

namespace rppg {

double absolute_error(double est_bpm, double true_bpm) {
  if (!std::isfinite(est_bpm) || !std::isfinite(true_bpm)) {
    throw InvariantViolation("absolute_error requires finite rates");
  }
  return std::abs(est_bpm - true_bpm);
}

double snr_db(const Waveform& est, double true_rate_bpm, const FrequencyBand& band,
              int harmonics, double half_width_hz) {
  validate_waveform(est, "snr_db input");
  if (!(band.lo_hz > 0.0) || !(band.hi_hz > band.lo_hz)) {
    throw InvariantViolation("frequency band requires 0 < lo < hi");
  }
  if (harmonics < 1) throw InvariantViolation("snr_db requires at least one harmonic");
  if (!(half_width_hz > 0.0)) throw InvariantViolation("snr_db requires a positive window half width");
  const double f0 = true_rate_bpm / 60.0;
  if (f0 < band.lo_hz || f0 > band.hi_hz) {
    throw InvariantViolation("true rate must lie inside the band");
  }

  const Spectrum sp = analysis_spectrum(est);
  const Eigen::Index last = sp.size() - 1;
  Eigen::Index klo = static_cast<Eigen::Index>(std::ceil(band.lo_hz / sp.bin_hz));
  Eigen::Index khi = static_cast<Eigen::Index>(std::floor(band.hi_hz / sp.bin_hz));
  klo = std::max<Eigen::Index>(klo, 0);
  khi = std::min(khi, last);
  if (klo > khi) throw EmptyBand("no spectral bins fall inside the band");

  double signal = 0.0;
  double noise = 0.0;
  for (Eigen::Index k = klo; k <= khi; ++k) {
    const double f = sp.freq(k);
    bool in_window = false;
    for (int h = 1; h <= harmonics; ++h) {
      if (std::abs(f - static_cast<double>(h) * f0) <= half_width_hz) {
        in_window = true;
        break;
      }
    }
    const double p = sp.magnitude[k] * sp.magnitude[k];
    (in_window ? signal : noise) += p;
  }

  if (signal == 0.0 && noise == 0.0) {
    throw FlatSignal("spectrum is zero everywhere inside the band");
  }
  if (noise == 0.0) return 60.0;  // zero-noise cap keeps means finite
  if (signal == 0.0) return -60.0;
  return 10.0 * std::log10(signal / noise);
}

double pearson_r(const Waveform& est, const Waveform& truth) {
  validate_waveform(est, "pearson_r est");
  validate_waveform(truth, "pearson_r truth");
  if (est.size() != truth.size()) {
    throw InvariantViolation("pearson_r requires equal-length waveforms");
  }
  const double se = pop_std(est.samples);
  const double st = pop_std(truth.samples);
  if (se == 0.0 || st == 0.0) {
    throw ConstantInput("pearson_r requires non-constant inputs");
  }
  const double cov =
      ((est.samples - est.samples.mean()) * (truth.samples - truth.samples.mean())).mean();
  return std::clamp(cov / (se * st), -1.0, 1.0);
}

ChunkMetrics evaluate_chunk(const VideoChunk& chunk, const EstimationResult& result,
                            const FrequencyBand& hr, const FrequencyBand& rr) {
  if (result.pulse_wave.fs != chunk.fps ||
      result.pulse_wave.size() != chunk.frame_count()) {
    throw InvariantViolation("estimated pulse must share the chunk time base");
  }

  ChunkMetrics m;
  const double est_hr = rate_from_waveform(result.pulse_wave, hr);
  m.hr_ae = absolute_error(est_hr, chunk.labels.hr_bpm);
  m.pulse_snr = snr_db(result.pulse_wave, chunk.labels.hr_bpm, hr, 2);
  m.pulse_r = pearson_r(bandpass(result.pulse_wave, hr),
                        bandpass(chunk.labels.pulse_wave, hr));

  if (result.resp_wave) {
    if (result.resp_wave->fs != chunk.fps ||
        result.resp_wave->size() != chunk.frame_count()) {
      throw InvariantViolation("estimated respiration must share the chunk time base");
    }
    const double est_rr = rate_from_waveform(*result.resp_wave, rr);
    m.rr_ae = absolute_error(est_rr, chunk.labels.rr_bpm);
    // Single harmonic: the respiration harmonic usually exceeds the RR band.
    m.resp_snr = snr_db(*result.resp_wave, chunk.labels.rr_bpm, rr, 1);
    m.resp_r = pearson_r(bandpass(*result.resp_wave, rr),
                         bandpass(chunk.labels.resp_wave, rr));
  }
  return m;
}

DatasetReport aggregate(const std::vector<ChunkMetrics>& metrics,
                        const std::string& method,
                        std::optional<double> inference_ms) {
  if (metrics.empty()) throw EmptyList("aggregate requires at least one chunk");

  DatasetReport rep;
  rep.method = method;
  rep.n_chunks = static_cast<int>(metrics.size());
  rep.inference_ms = inference_ms;

  double hr_sum = 0.0, psnr_sum = 0.0, pr_sum = 0.0;
  double rr_sum = 0.0, rsnr_sum = 0.0, rr_r_sum = 0.0;
  int rr_n = 0, rsnr_n = 0, rr_r_n = 0;
  for (const ChunkMetrics& m : metrics) {
    hr_sum += m.hr_ae;
    psnr_sum += m.pulse_snr;
    pr_sum += m.pulse_r;
    if (m.rr_ae) { rr_sum += *m.rr_ae; ++rr_n; }
    if (m.resp_snr) { rsnr_sum += *m.resp_snr; ++rsnr_n; }
    if (m.resp_r) { rr_r_sum += *m.resp_r; ++rr_r_n; }
  }
  const double n = static_cast<double>(metrics.size());
  rep.hr_mae = hr_sum / n;
  rep.pulse_snr = psnr_sum / n;
  rep.pulse_r = pr_sum / n;
  if (rr_n > 0) rep.rr_mae = rr_sum / rr_n;
  if (rsnr_n > 0) rep.resp_snr = rsnr_sum / rsnr_n;
  if (rr_r_n > 0) rep.resp_r = rr_r_sum / rr_r_n;
  return rep;
}

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string dataset_report_csv(const std::vector<DatasetReport>& reports) {
  std::ostringstream os;
  os << "method,hr_mae,pulse_snr,pulse_r,rr_mae,resp_snr,resp_r,inference_ms\n";
  for (const DatasetReport& r : reports) {
    os << r.method << ',' << format_double(r.hr_mae) << ',' << format_double(r.pulse_snr)
       << ',' << format_double(r.pulse_r) << ',' << opt_field(r.rr_mae) << ','
       << opt_field(r.resp_snr) << ',' << opt_field(r.resp_r) << ','
       << opt_field(r.inference_ms) << '\n';
  }
  return os.str();
}

}  // namespace rppg
