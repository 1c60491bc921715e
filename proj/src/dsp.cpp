#include "rppg/dsp.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace rppg {

double pop_std(const Eigen::ArrayXd& x) {
  if (x.size() == 0) return 0.0;
  const double m = x.mean();
  return std::sqrt((x - m).square().mean());
}

Eigen::ArrayXd standardize(const Eigen::ArrayXd& x) {
  const double s = pop_std(x);
  if (s == 0.0 || !std::isfinite(s)) return Eigen::ArrayXd::Zero(x.size());
  return (x - x.mean()) / s;
}

Eigen::ArrayXd hann_window(Eigen::Index n) {
  Eigen::ArrayXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n)));
  }
  return w;
}

Spectrum analysis_spectrum(const Waveform& w, double max_bin_hz) {
  validate_waveform(w, "analysis_spectrum input");
  const Eigen::Index n = w.size();
  Eigen::ArrayXd x = w.samples - w.samples.mean();
  // Peak normalization keeps the spectrum stable under amplitude scaling.
  const double peak = x.abs().maxCoeff();
  if (peak > 0.0) x /= peak;
  x *= hann_window(n);

  Eigen::Index nfft = 1;
  while (nfft < n || w.fs / static_cast<double>(nfft) > max_bin_hz) nfft <<= 1;

  std::vector<double> padded(static_cast<std::size_t>(nfft), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) padded[static_cast<std::size_t>(i)] = x[i];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> bins;
  fft.fwd(bins, padded);

  Spectrum out;
  out.bin_hz = w.fs / static_cast<double>(nfft);
  out.magnitude.resize(nfft / 2 + 1);
  for (Eigen::Index k = 0; k <= nfft / 2; ++k) {
    out.magnitude[k] = std::abs(bins[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace rppg
