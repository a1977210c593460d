#include "tabrl/stats.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tabrl {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

/// Adaptive Simpson with a simple error estimate.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

/// CDF of the range of k independent standard normals.
double normal_range_cdf(double w, int k) {
  if (w <= 0.0) return 0.0;
  const auto integrand = [w, k](double z) {
    const double window = normal_cdf(z) - normal_cdf(z - w);
    return normal_pdf(z) * std::pow(window, k - 1);
  };
  return static_cast<double>(k) * integrate(integrand, -9.0, 9.0, 1e-10);
}

/// log density of S = chi_df / sqrt(df).
double log_scaled_chi_pdf(double s, int df) {
  const double v = static_cast<double>(df);
  return 0.5 * v * std::log(v) + (v - 1.0) * std::log(s) - 0.5 * v * s * s -
         (0.5 * v - 1.0) * std::log(2.0) - std::lgamma(0.5 * v);
}

}  // namespace

double f_upper_tail(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1) {
    throw std::invalid_argument("f_upper_tail: degrees of freedom must be >= 1");
  }
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  const boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

double studentized_range_upper_tail(double q, int k, int df) {
  if (k < 2 || df < 1) {
    throw std::invalid_argument("studentized_range_upper_tail: bad parameters");
  }
  if (q <= 0.0) return 1.0;
  if (std::isinf(q)) return 0.0;

  // Integrate the range CDF at q*s against the density of the scale
  // estimate. The density mass sits around s = 1 with spread ~1/sqrt(2 df);
  // splitting at the mode keeps the peak on a quadrature probe.
  const double spread = 1.0 / std::sqrt(2.0 * df);
  const double lo = std::max(1e-12, 1.0 - 14.0 * spread);
  const double hi = 1.0 + std::max(14.0 * spread, 6.0 * spread + 2.0 / df);
  const double mode =
      df > 1 ? std::sqrt(static_cast<double>(df - 1) / df) : 0.5 * (lo + hi);

  const auto integrand = [q, k, df](double s) {
    return std::exp(log_scaled_chi_pdf(s, df)) * normal_range_cdf(q * s, k);
  };
  double cdf;
  if (mode > 2.0 * lo && mode < hi) {
    cdf = integrate(integrand, lo, mode, 5e-10) +
          integrate(integrand, mode, hi, 5e-10);
  } else {
    cdf = integrate(integrand, lo, hi, 1e-9);
  }
  const double p = 1.0 - cdf;
  return std::min(1.0, std::max(0.0, p));
}

namespace {

void check_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw std::invalid_argument("need at least 2 groups");
  }
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw std::invalid_argument("every group needs at least 2 samples");
    }
  }
}

std::string inference_label(double p) {
  if (p < 0.01) return "p<0.01";
  if (p < 0.05) return "p<0.05";
  return "";
}

}  // namespace

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  std::size_t n_total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    for (const double v : g) grand_sum += v;
    n_total += g.size();
  }
  const double grand_mean = grand_sum / static_cast<double>(n_total);

  AnovaResult r;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (const double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    r.ss_between += static_cast<double>(g.size()) * (mean - grand_mean) *
                    (mean - grand_mean);
    for (const double v : g) r.ss_within += (v - mean) * (v - mean);
  }
  r.ss_total = r.ss_between + r.ss_within;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(n_total) - static_cast<int>(groups.size());
  r.ms_between = r.ss_between / r.df_between;
  r.ms_within = r.ss_within / r.df_within;
  if (r.ms_within == 0.0) {
    if (r.ms_between == 0.0) {
      r.f = 0.0;
      r.p = 1.0;
    } else {
      r.f = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
  } else {
    r.f = r.ms_between / r.ms_within;
    r.p = f_upper_tail(r.f, r.df_between, r.df_within);
  }
  return r;
}

AnovaResult anova_from_sums(double ss_between, int df_between,
                            double ss_within, int df_within) {
  if (df_between < 1 || df_within < 1) {
    throw std::invalid_argument("anova_from_sums: df must be >= 1");
  }
  if (ss_between < 0.0 || ss_within < 0.0) {
    throw std::invalid_argument("anova_from_sums: sums of squares must be >= 0");
  }
  AnovaResult r;
  r.ss_between = ss_between;
  r.ss_within = ss_within;
  r.ss_total = ss_between + ss_within;
  r.df_between = df_between;
  r.df_within = df_within;
  r.ms_between = ss_between / df_between;
  r.ms_within = ss_within / df_within;
  if (r.ms_within == 0.0) {
    r.f = r.ms_between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.p = r.ms_between == 0.0 ? 1.0 : 0.0;
  } else {
    r.f = r.ms_between / r.ms_within;
    r.p = f_upper_tail(r.f, df_between, df_within);
  }
  return r;
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups) {
  const AnovaResult anova = one_way_anova(groups);
  const int k = static_cast<int>(groups.size());

  std::vector<double> means(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    double m = 0.0;
    for (const double v : groups[i]) m += v;
    means[i] = m / static_cast<double>(groups[i].size());
  }

  TukeyResult result;
  result.ms_within = anova.ms_within;
  result.df_within = anova.df_within;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      TukeyPair pair;
      pair.group_a = i;
      pair.group_b = j;
      pair.mean_difference = means[i] - means[j];
      const double n_h =
          2.0 / (1.0 / static_cast<double>(groups[i].size()) +
                 1.0 / static_cast<double>(groups[j].size()));
      const double diff = std::fabs(pair.mean_difference);
      if (anova.ms_within == 0.0) {
        pair.q_statistic =
            diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        pair.p = diff == 0.0 ? 1.0 : 0.0;
      } else {
        pair.q_statistic = diff / std::sqrt(anova.ms_within / n_h);
        pair.p = studentized_range_upper_tail(pair.q_statistic, k,
                                              anova.df_within);
      }
      pair.inference = inference_label(pair.p);
      result.pairs.push_back(std::move(pair));
    }
  }
  return result;
}

}  // namespace tabrl
