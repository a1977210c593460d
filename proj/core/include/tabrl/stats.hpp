#pragma once

#include <string>
#include <vector>

namespace tabrl {

struct AnovaResult {
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ss_total = 0.0;
  int df_between = 0;
  int df_within = 0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  double f = 0.0;  // +inf sentinel when within-group variance is zero
  double p = 1.0;
};

struct TukeyPair {
  int group_a = 0;
  int group_b = 0;
  double mean_difference = 0.0;
  double q_statistic = 0.0;
  double p = 1.0;
  std::string inference;  // "p<0.01", "p<0.05", or empty
};

struct TukeyResult {
  std::vector<TukeyPair> pairs;
  double ms_within = 0.0;
  int df_within = 0;
};

/// One-way ANOVA over >= 2 groups of >= 2 samples each.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

/// ANOVA table row from summary quantities alone.
AnovaResult anova_from_sums(double ss_between, int df_between,
                            double ss_within, int df_within);

/// All pairwise comparisons with the studentized range statistic;
/// unequal group sizes use the harmonic-mean adjustment.
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups);

/// Upper tail of the F distribution.
double f_upper_tail(double f, int df1, int df2);

/// Upper tail of the studentized range distribution for k groups and df
/// error degrees of freedom, by direct numerical integration of its CDF.
/// Absolute accuracy around 1e-6.
double studentized_range_upper_tail(double q, int k, int df);

}  // namespace tabrl
