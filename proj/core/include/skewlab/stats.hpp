#pragma once

#include <span>
#include <vector>

namespace skewlab::stats {

double normal_cdf(double z);

/// sup_z |F_n(z) - Phi(z)| for the empirical law of `values`.
double ks_distance_normal(std::vector<double> values);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and its standard error (sample sd / sqrt(n)).
MeanSe mean_se(std::span<const double> values);

/// Pearson correlation; 0 when either sample is constant.
double correlation(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * x (at least two points).
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace skewlab::stats
