#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rppg/metrics.hpp"

namespace rppg {

// Named regressors, intercept included as a column of ones.
struct DesignMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd cols;  // n observations x p columns
};

// Throws unless n > p, names are unique, and no column other than the
// intercept is constant.
void validate_design(const DesignMatrix& design);

struct CoefficientStats {
  std::string name;
  double coef = 0.0;
  double std_err = 0.0;
  double t = 0.0;
  double p_value = 0.0;
  double ci_lo = 0.0;  // 95% interval
  double ci_hi = 0.0;
};

struct RegressionReport {
  std::vector<CoefficientStats> coefficients;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double f_statistic = 0.0;
  double prob_f = 0.0;
  int n_obs = 0;
  int df_resid = 0;
  int df_model = 0;
  double aic = 0.0;
  double bic = 0.0;
};

// Ordinary least squares through the normal equations (Cholesky inverse with
// an eigenvalue condition-number guard at 1e12), with t-based inference and
// Gaussian-likelihood AIC/BIC.
RegressionReport fit_ols(const DesignMatrix& design, const Eigen::VectorXd& y);

// One-sided survival function of Student's t via the regularized incomplete
// beta function; the two-sided p-value is 2 * sf(|t|).
double student_t_sf(double t, double df);

// Smallest t >= 0 with sf(t, df) == tail_prob, tail_prob in (0, 0.5].
double student_t_upper_quantile(double tail_prob, double df);

// Survival function of the F distribution.
double fisher_f_sf(double f, double df1, double df2);

// I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

struct BucketRow {
  std::string label;
  std::optional<double> pulse_snr_mean;
  std::optional<double> pulse_snr_sd;
  std::optional<double> resp_snr_mean;
  std::optional<double> resp_snr_sd;
  int n = 0;
};

struct BucketReport {
  std::vector<BucketRow> rows;
};

// Per-bin mean and population SD of pulse and respiration SNR. Bins are
// [e_i, e_i+1) with the last bin closed on the right; empty bins yield rows
// with n = 0 and absent means.
BucketReport bucket_analysis(
    const std::vector<std::pair<double, ChunkMetrics>>& observations,
    const std::vector<double>& edges);

// header: bin,pulse_snr_mean,pulse_snr_sd,resp_snr_mean,resp_snr_sd,n
std::string bucket_report_csv(const BucketReport& report);

std::string regression_report_json(const RegressionReport& report,
                                   const std::string& dep_variable);
std::string regression_report_text(const RegressionReport& report,
                                   const std::string& dep_variable);

}  // namespace rppg
