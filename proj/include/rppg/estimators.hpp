#pragma once

#include <optional>
#include <string_view>

#include "rppg/chunk.hpp"
#include "rppg/trace.hpp"
#include "rppg/waveform.hpp"

namespace rppg {

enum class EstimatorId { G, CHROM, POS };

const char* to_string(EstimatorId id);
EstimatorId estimator_from_string(std::string_view name);

struct EstimationResult {
  Waveform pulse_wave;                // unitless, zero-mean
  std::optional<Waveform> resp_wave;  // unitless, zero-mean
};

// Standardized negated green channel. Negation aligns blood-volume peaks
// with gold PPG peaks: green absorption dips at systole.
Waveform estimate_g(const RgbTrace& trace);

// Chrominance method: sliding Hann windows with 50% overlap; per window the
// channels are normalized by their means, projected to X = 3Rn - 2Gn and
// Y = 1.5Rn + Gn - 1.5Bn, combined as X - (sd(X)/sd(Y)) Y, mean-removed and
// overlap-added. Windows with sd(Y) = 0 contribute zeros.
Waveform estimate_chrom(const RgbTrace& trace, double window_s = 1.6);

// Plane-orthogonal-to-skin method: stride-1 sliding windows; per window the
// channels are normalized by their means, projected to S1 = Gn - Bn and
// S2 = Gn + Bn - 2Rn, combined as S1 + (sd(S1)/sd(S2)) S2, mean-removed and
// overlap-added. Windows with sd(S2) = 0 contribute zeros.
Waveform estimate_pos(const RgbTrace& trace, double window_s = 1.6);

// Standardized per-frame mean vertical landmark coordinate, detrended by a
// centered moving average of width round(2 fs) samples.
Waveform estimate_resp_from_landmarks(const VideoChunk& chunk);

// Pulse via the selected method plus the landmark respiration estimate when
// landmarks are available.
EstimationResult run_estimator(EstimatorId id, const RgbTrace& trace,
                               const VideoChunk& chunk);

}  // namespace rppg
