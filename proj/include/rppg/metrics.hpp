#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rppg/chunk.hpp"
#include "rppg/estimators.hpp"
#include "rppg/rates.hpp"
#include "rppg/waveform.hpp"

namespace rppg {

struct ChunkMetrics {
  double hr_ae = 0.0;      // bpm
  double pulse_snr = 0.0;  // dB
  double pulse_r = 0.0;    // [-1, 1]
  std::optional<double> rr_ae;
  std::optional<double> resp_snr;
  std::optional<double> resp_r;
};

struct DatasetReport {
  std::string method;
  double hr_mae = 0.0;
  double pulse_snr = 0.0;
  double pulse_r = 0.0;
  std::optional<double> rr_mae;
  std::optional<double> resp_snr;
  std::optional<double> resp_r;
  std::optional<double> inference_ms;
  int n_chunks = 0;
};

double absolute_error(double est_bpm, double true_bpm);

// Decibel ratio of spectral power inside half_width_hz windows around the
// first `harmonics` multiples of the true rate to all other in-band power.
// A zero noise denominator is reported as the +60 dB cap.
double snr_db(const Waveform& est, double true_rate_bpm,
              const FrequencyBand& band, int harmonics = 2,
              double half_width_hz = 0.1);

// Pearson product-moment correlation at zero lag.
double pearson_r(const Waveform& est, const Waveform& truth);

// hr_ae via rate_from_waveform, pulse_snr at the label rate, pulse_r between
// the bandpassed estimate and the bandpassed gold wave; respiration metrics
// analogously when resp_wave is present (with a single harmonic window).
ChunkMetrics evaluate_chunk(const VideoChunk& chunk,
                            const EstimationResult& result,
                            const FrequencyBand& hr = hr_band(),
                            const FrequencyBand& rr = rr_band());

// Arithmetic means; chunks missing an optional metric are excluded from that
// metric's mean only.
DatasetReport aggregate(const std::vector<ChunkMetrics>& metrics,
                        const std::string& method,
                        std::optional<double> inference_ms = {});

// header: method,hr_mae,pulse_snr,pulse_r,rr_mae,resp_snr,resp_r,inference_ms
std::string dataset_report_csv(const std::vector<DatasetReport>& reports);

}  // namespace rppg
