#pragma once

#include "trinfo/distributions.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <utility>

namespace trinfo {

struct SignificanceConfig {
  double alpha = 0.001;        // significance level, 0 < alpha < 1
  std::int64_t samples = 512;  // N
  int dof = 1;                 // degrees of freedom of the nested comparison
};

/// Likelihood-ratio rejection level for a divergence estimated from N
/// samples. `bits` carries the nat-correct conversion chi2/(2 N ln 2);
/// `literal_bits` is the chi2/(2N) ratio read directly in bits, the
/// convention used for the 0.01-bit rule of thumb at N=512, alpha=0.1%.
struct SignificanceThreshold {
  double chi2_quantile = 0.0;
  double bits = 0.0;
  double literal_bits = 0.0;
};

SignificanceThreshold significance_threshold(const SignificanceConfig& config);

/// Inverse CDF of the chi-squared distribution, computed by bisecting the
/// regularized incomplete gamma. p in (0, 1), dof >= 1.
double chi_squared_quantile(double p, int dof);

/// Regularized lower incomplete gamma P(a, x); exposed for testing.
double regularized_gamma_p(double a, double x);

/// Probability that a word with `occurrences` total occurrences, placed
/// binomially, shows up at least once in a given part: 1 - (1 - 1/parts)^n.
double binomial_presence_probability(std::int64_t occurrences,
                                     std::int64_t parts);

/// Presence entropy of the binomial placement model.
double binomial_entropy(std::int64_t occurrences, std::int64_t parts);

struct EntropyBand {
  std::int64_t occurrences = 0;
  double expected_bits = 0.0;  // binomial_entropy
  double lo = 0.0;             // lower percentile of the sampled entropies
  double hi = 0.0;             // upper percentile
  int trials = 0;
};

/// Monte Carlo dispersion of the plug-in presence entropy under random
/// placement: `occurrences` balls dropped uniformly into `parts` bins per
/// trial. Percentiles use linear interpolation between closest ranks on the
/// sorted trial values (rank = q/100 * (trials-1)). Deterministic under seed.
/// Requires trials >= 100.
EntropyBand entropy_band(std::int64_t occurrences, std::int64_t parts,
                         std::pair<double, double> percentiles, int trials,
                         std::uint64_t seed);

using TripletFunctional = std::function<double(const TripletDistribution&)>;

struct BayesianStdResult {
  double sigma = 0.0;
  int shrunk_directions = 0;  // directions where epsilon had to shrink
};

/// Posterior standard deviation of a functional of the 8 state probabilities,
/// from the multinomial covariance of the observed frequencies: the
/// covariance is eigen-decomposed, the direction normal to the simplex is
/// dropped, and the functional's response to an epsilon step along each
/// remaining eigendirection converts probability variance into functional
/// variance. Steps that would leave the simplex are flipped inward and
/// shrunk.
BayesianStdResult bayesian_std_detailed(
    const std::array<std::int64_t, 8>& counts,
    const TripletFunctional& functional, double epsilon = 1e-4);

double bayesian_std(const std::array<std::int64_t, 8>& counts,
                    const TripletFunctional& functional,
                    double epsilon = 1e-4);

/// Functional adapters for the two quantities whose error bars the pipeline
/// reports.
TripletFunctional triple_interaction_functional();
TripletFunctional chain_divergence_functional(std::pair<int, int> target_pair,
                                              int mediator);

}  // namespace trinfo
