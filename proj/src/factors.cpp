#include "rppg/factors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "rppg/errors.hpp"

namespace rppg {

namespace {

constexpr double kConditionLimit = 1e12;

// Continued-fraction kernel for the regularized incomplete beta function
// (modified Lentz iteration).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Names near-duplicate column pairs for singular-design diagnostics.
std::string collinear_hint(const DesignMatrix& design) {
  std::string hint;
  const Eigen::Index p = design.cols.cols();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const Eigen::VectorXd a = design.cols.col(i);
      const Eigen::VectorXd b = design.cols.col(j);
      const Eigen::VectorXd ac = a.array() - a.mean();
      const Eigen::VectorXd bc = b.array() - b.mean();
      const double na = ac.norm();
      const double nb = bc.norm();
      double corr;
      if (na == 0.0 || nb == 0.0) {
        corr = (na == 0.0 && nb == 0.0) ? 1.0 : 0.0;
      } else {
        corr = std::abs(ac.dot(bc)) / (na * nb);
      }
      if (corr > 0.9999) {
        hint += "; columns '" + design.names[static_cast<std::size_t>(i)] + "' and '" +
                design.names[static_cast<std::size_t>(j)] + "' are collinear";
      }
    }
  }
  return hint;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvariantViolation("incomplete beta requires positive shape parameters");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
  if (!(df > 0.0)) throw InvariantViolation("student_t_sf requires df > 0");
  if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? tail : 1.0 - tail;
}

double student_t_upper_quantile(double tail_prob, double df) {
  if (!(tail_prob > 0.0) || !(tail_prob <= 0.5)) {
    throw InvariantViolation("tail probability must lie in (0, 0.5]");
  }
  if (tail_prob == 0.5) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_sf(hi, df) > tail_prob && hi < 1e12) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_sf(mid, df) > tail_prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double fisher_f_sf(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) {
    throw InvariantViolation("fisher_f_sf requires positive degrees of freedom");
  }
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

void validate_design(const DesignMatrix& design) {
  const Eigen::Index n = design.cols.rows();
  const Eigen::Index p = design.cols.cols();
  if (design.names.size() != static_cast<std::size_t>(p)) {
    throw InvariantViolation("design matrix needs one name per column");
  }
  if (p < 1) throw InvariantViolation("design matrix needs at least one column");
  if (n <= p) {
    std::ostringstream os;
    os << "need more observations than columns (n=" << n << ", p=" << p << ")";
    throw TooFewObservations(os.str());
  }
  for (std::size_t i = 0; i < design.names.size(); ++i) {
    for (std::size_t j = i + 1; j < design.names.size(); ++j) {
      if (design.names[i] == design.names[j]) {
        throw SingularDesign("duplicate design column '" + design.names[i] +
                             "' and '" + design.names[j] + "'");
      }
    }
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto col = design.cols.col(j);
    if (col.maxCoeff() == col.minCoeff() && design.names[static_cast<std::size_t>(j)] != "intercept") {
      throw InvariantViolation("column '" + design.names[static_cast<std::size_t>(j)] +
                               "' is constant (only the intercept may be constant)");
    }
  }
}

RegressionReport fit_ols(const DesignMatrix& design, const Eigen::VectorXd& y) {
  validate_design(design);
  const Eigen::Index n = design.cols.rows();
  const Eigen::Index p = design.cols.cols();
  if (y.size() != n) {
    throw InvariantViolation("response length must match the design row count");
  }
  if (!y.array().isFinite().all()) {
    throw InvariantViolation("response values must be finite");
  }

  const Eigen::MatrixXd xtx = design.cols.transpose() * design.cols;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xtx);
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().maxCoeff();
  if (!(lam_min > 0.0) || lam_max / lam_min > kConditionLimit) {
    std::ostringstream os;
    os << "design matrix is numerically singular (condition "
       << (lam_min > 0.0 ? lam_max / lam_min : std::numeric_limits<double>::infinity())
       << ")" << collinear_hint(design);
    throw SingularDesign(os.str());
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(xtx);
  const Eigen::MatrixXd xtx_inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd beta = xtx_inv * (design.cols.transpose() * y);
  const Eigen::VectorXd resid = y - design.cols * beta;
  const double rss = resid.squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();

  RegressionReport rep;
  rep.n_obs = static_cast<int>(n);
  rep.df_resid = static_cast<int>(n - p);
  rep.df_model = static_cast<int>(p - 1);

  const double s2 = rss / static_cast<double>(rep.df_resid);
  const double tq = student_t_upper_quantile(0.025, static_cast<double>(rep.df_resid));
  for (Eigen::Index j = 0; j < p; ++j) {
    CoefficientStats cs;
    cs.name = design.names[static_cast<std::size_t>(j)];
    cs.coef = beta[j];
    cs.std_err = std::sqrt(s2 * xtx_inv(j, j));
    if (cs.std_err > 0.0) {
      cs.t = cs.coef / cs.std_err;
    } else {
      cs.t = cs.coef == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), cs.coef);
    }
    cs.p_value = std::min(1.0, 2.0 * student_t_sf(std::abs(cs.t), static_cast<double>(rep.df_resid)));
    cs.ci_lo = cs.coef - tq * cs.std_err;
    cs.ci_hi = cs.coef + tq * cs.std_err;
    rep.coefficients.push_back(std::move(cs));
  }

  rep.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
  rep.adj_r_squared = 1.0 - (1.0 - rep.r_squared) * static_cast<double>(n - 1) /
                                static_cast<double>(n - p);
  if (rep.df_model > 0) {
    rep.f_statistic = (rep.r_squared / rep.df_model) /
                      ((1.0 - rep.r_squared) / rep.df_resid);
    rep.prob_f = fisher_f_sf(rep.f_statistic, rep.df_model, rep.df_resid);
  } else {
    rep.f_statistic = std::numeric_limits<double>::quiet_NaN();
    rep.prob_f = std::numeric_limits<double>::quiet_NaN();
  }

  const double ll = -0.5 * static_cast<double>(n) *
                    (std::log(2.0 * M_PI) + std::log(rss / static_cast<double>(n)) + 1.0);
  rep.aic = 2.0 * static_cast<double>(p) - 2.0 * ll;
  rep.bic = static_cast<double>(p) * std::log(static_cast<double>(n)) - 2.0 * ll;
  return rep;
}

BucketReport bucket_analysis(
    const std::vector<std::pair<double, ChunkMetrics>>& observations,
    const std::vector<double>& edges) {
  if (edges.size() < 2) {
    throw InvariantViolation("bucket analysis needs at least two edges");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw InvariantViolation("bucket edges must be strictly increasing");
    }
  }

  const std::size_t nbins = edges.size() - 1;
  std::vector<std::vector<const ChunkMetrics*>> bins(nbins);
  for (const auto& [value, metrics] : observations) {
    if (value < edges.front() || value > edges.back()) {
      std::ostringstream os;
      os << "observation " << value << " falls outside the bucket edges";
      throw InvariantViolation(os.str());
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), value);
    std::size_t idx = static_cast<std::size_t>(it - edges.begin());
    idx = idx == 0 ? 0 : idx - 1;
    if (idx >= nbins) idx = nbins - 1;  // right edge closes the last bin
    bins[idx].push_back(&metrics);
  }

  auto mean_sd = [](const std::vector<double>& xs) -> std::pair<double, double> {
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (const double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return {mean, std::sqrt(var)};
  };

  BucketReport report;
  for (std::size_t i = 0; i < nbins; ++i) {
    BucketRow row;
    char label[64];
    // No comma in the label: it doubles as a CSV cell.
    std::snprintf(label, sizeof(label), "[%g..%g%c", edges[i], edges[i + 1],
                  i + 1 == nbins ? ']' : ')');
    row.label = label;
    row.n = static_cast<int>(bins[i].size());
    if (!bins[i].empty()) {
      std::vector<double> pulse;
      std::vector<double> resp;
      for (const ChunkMetrics* m : bins[i]) {
        pulse.push_back(m->pulse_snr);
        if (m->resp_snr) resp.push_back(*m->resp_snr);
      }
      const auto [pm, psd] = mean_sd(pulse);
      row.pulse_snr_mean = pm;
      row.pulse_snr_sd = psd;
      if (!resp.empty()) {
        const auto [rm, rsd] = mean_sd(resp);
        row.resp_snr_mean = rm;
        row.resp_snr_sd = rsd;
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

std::string csv_opt(const std::optional<double>& v) {
  if (!v) return {};
  std::ostringstream os;
  os << std::setprecision(17) << *v;
  return os.str();
}

nlohmann::ordered_json json_number(double v) {
  // nlohmann serializes non-finite values as null.
  return v;
}

}  // namespace

std::string bucket_report_csv(const BucketReport& report) {
  std::ostringstream os;
  os << "bin,pulse_snr_mean,pulse_snr_sd,resp_snr_mean,resp_snr_sd,n\n";
  for (const BucketRow& row : report.rows) {
    os << row.label << ',' << csv_opt(row.pulse_snr_mean) << ','
       << csv_opt(row.pulse_snr_sd) << ',' << csv_opt(row.resp_snr_mean) << ','
       << csv_opt(row.resp_snr_sd) << ',' << row.n << '\n';
  }
  return os.str();
}

std::string regression_report_json(const RegressionReport& report,
                                   const std::string& dep_variable) {
  nlohmann::ordered_json j;
  j["dep_variable"] = dep_variable;
  j["n_obs"] = report.n_obs;
  j["df_resid"] = report.df_resid;
  j["df_model"] = report.df_model;
  j["r_squared"] = json_number(report.r_squared);
  j["adj_r_squared"] = json_number(report.adj_r_squared);
  j["f_statistic"] = json_number(report.f_statistic);
  j["prob_f"] = json_number(report.prob_f);
  j["aic"] = json_number(report.aic);
  j["bic"] = json_number(report.bic);
  auto coefs = nlohmann::ordered_json::array();
  for (const CoefficientStats& c : report.coefficients) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["coef"] = json_number(c.coef);
    e["std_err"] = json_number(c.std_err);
    e["t"] = json_number(c.t);
    e["p_value"] = json_number(c.p_value);
    e["ci_lo"] = json_number(c.ci_lo);
    e["ci_hi"] = json_number(c.ci_hi);
    coefs.push_back(std::move(e));
  }
  j["coefficients"] = std::move(coefs);
  return j.dump(2) + "\n";
}

std::string regression_report_text(const RegressionReport& report,
                                   const std::string& dep_variable) {
  std::ostringstream os;
  auto stat = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };

  const std::string rule(78, '=');
  os << std::string(26, ' ') << "OLS Regression Results\n" << rule << '\n';
  auto line = [&os](const std::string& lk, const std::string& lv,
                    const std::string& rk, const std::string& rv) {
    os << std::left << std::setw(20) << lk << std::right << std::setw(18) << lv
       << "   " << std::left << std::setw(21) << rk << std::right << std::setw(14)
       << rv << '\n';
  };
  line("Dep. Variable:", dep_variable, "R-squared:", stat(report.r_squared));
  line("Model:", "OLS", "Adj. R-squared:", stat(report.adj_r_squared));
  line("Method:", "Least Squares", "F-statistic:", stat(report.f_statistic));
  line("No. Observations:", std::to_string(report.n_obs),
       "Prob (F-statistic):", stat(report.prob_f));
  line("Df Residuals:", std::to_string(report.df_resid), "AIC:", stat(report.aic));
  line("Df Model:", std::to_string(report.df_model), "BIC:", stat(report.bic));
  os << rule << '\n';

  os << std::left << std::setw(18) << "" << std::right << std::setw(10) << "coef"
     << std::setw(10) << "std err" << std::setw(10) << "t" << std::setw(10)
     << "P>|t|" << std::setw(10) << "[0.025" << std::setw(10) << "0.975]" << '\n';
  os << std::string(78, '-') << '\n';
  auto cell = [](double v, const char* fixed) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), fixed, v);
    if (std::string(buf).size() > 10) std::snprintf(buf, sizeof(buf), "%10.3g", v);
    return std::string(buf);
  };
  for (const CoefficientStats& c : report.coefficients) {
    char name_buf[40];
    std::snprintf(name_buf, sizeof(name_buf), "%-18s", c.name.c_str());
    os << name_buf << cell(c.coef, "%10.4f") << cell(c.std_err, "%10.3f")
       << cell(c.t, "%10.3f") << cell(c.p_value, "%10.3f") << cell(c.ci_lo, "%10.3f")
       << cell(c.ci_hi, "%10.3f") << '\n';
  }
  os << rule << '\n';
  return os.str();
}

}  // namespace rppg
