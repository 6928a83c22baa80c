#include "trinfo/stats.hpp"

#include "trinfo/errors.hpp"
#include "trinfo/infocore.hpp"
#include "trinfo/irreducible.hpp"
#include "trinfo/maxent.hpp"
#include "trinfo/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace trinfo {

namespace {

// Lower incomplete gamma by series expansion, valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz continued fraction, valid for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) {
    throw std::domain_error("regularized_gamma_p: invalid arguments");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi_squared_quantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("chi_squared_quantile: p must be in (0, 1)");
  }
  if (dof < 1) {
    throw std::domain_error("chi_squared_quantile: dof must be >= 1");
  }
  const double a = 0.5 * dof;
  const auto cdf = [a](double x) { return regularized_gamma_p(a, 0.5 * x); };
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(dof));
  while (cdf(hi) < p) {
    hi *= 2.0;
    if (hi > 1e8) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SignificanceThreshold significance_threshold(const SignificanceConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw std::invalid_argument("significance level must be in (0, 1)");
  }
  if (cfg.samples < 1) {
    throw std::invalid_argument("sample count must be >= 1");
  }
  SignificanceThreshold out;
  out.chi2_quantile = chi_squared_quantile(1.0 - cfg.alpha, cfg.dof);
  const double n = static_cast<double>(cfg.samples);
  out.bits = out.chi2_quantile / (2.0 * n * std::log(2.0));
  out.literal_bits = out.chi2_quantile / (2.0 * n);
  return out;
}

double binomial_presence_probability(std::int64_t occurrences,
                                     std::int64_t parts) {
  if (occurrences < 0 || parts < 1) {
    throw std::invalid_argument("binomial_presence_probability: bad counts");
  }
  // 1 - (1 - 1/P)^n via log1p to stay accurate for large n.
  return -std::expm1(static_cast<double>(occurrences) *
                     std::log1p(-1.0 / static_cast<double>(parts)));
}

double binomial_entropy(std::int64_t occurrences, std::int64_t parts) {
  return entropy_binary(binomial_presence_probability(occurrences, parts));
}

namespace {

double percentile_sorted(const std::vector<double>& sorted, double q) {
  const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

EntropyBand entropy_band(std::int64_t occurrences, std::int64_t parts,
                         std::pair<double, double> percentiles, int trials,
                         std::uint64_t seed) {
  if (trials < 100) {
    throw std::invalid_argument("entropy_band: need at least 100 trials");
  }
  if (parts < 1 || occurrences < 0) {
    throw std::invalid_argument("entropy_band: bad counts");
  }
  Xoshiro256StarStar rng(seed);
  std::vector<double> samples(static_cast<std::size_t>(trials));
  std::vector<std::uint8_t> occupied(static_cast<std::size_t>(parts));
  for (int t = 0; t < trials; ++t) {
    std::fill(occupied.begin(), occupied.end(), 0);
    std::int64_t hit = 0;
    for (std::int64_t b = 0; b < occurrences; ++b) {
      auto bin = static_cast<std::size_t>(
          rng.next_below(static_cast<std::uint64_t>(parts)));
      if (!occupied[bin]) {
        occupied[bin] = 1;
        ++hit;
      }
    }
    samples[static_cast<std::size_t>(t)] = entropy_binary(
        static_cast<double>(hit) / static_cast<double>(parts));
  }
  std::sort(samples.begin(), samples.end());
  EntropyBand band;
  band.occurrences = occurrences;
  band.expected_bits = binomial_entropy(occurrences, parts);
  band.lo = percentile_sorted(samples, percentiles.first);
  band.hi = percentile_sorted(samples, percentiles.second);
  band.trials = trials;
  return band;
}

BayesianStdResult bayesian_std_detailed(
    const std::array<std::int64_t, 8>& counts,
    const TripletFunctional& functional, double epsilon) {
  if (epsilon <= 0.0) {
    throw std::invalid_argument("bayesian_std: epsilon must be positive");
  }
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("bayesian_std: negative count");
    total += c;
  }
  if (total < 1) {
    throw std::invalid_argument("bayesian_std: empty counts");
  }
  const double n = static_cast<double>(total);
  Vector8 f;
  for (int s = 0; s < kTripletStates; ++s) {
    f[s] = static_cast<double>(counts[static_cast<std::size_t>(s)]) / n;
  }

  // Multinomial covariance of the frequencies.
  Matrix8 covariance;
  for (int i = 0; i < kTripletStates; ++i) {
    for (int j = 0; j < kTripletStates; ++j) {
      covariance(i, j) = (i == j) ? f[i] * (1.0 - f[i]) / n : -f[i] * f[j] / n;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix8> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw NumericError("bayesian_std: eigen-decomposition failed");
  }
  const Vector8& eigenvalues = solver.eigenvalues();
  const Matrix8& eigenvectors = solver.eigenvectors();

  // The all-ones direction is normal to the simplex and carries no variance;
  // drop the eigenvector with the largest overlap with it.
  int normal_index = 0;
  double best_overlap = -1.0;
  for (int k = 0; k < kTripletStates; ++k) {
    const double overlap = std::abs(eigenvectors.col(k).sum());
    if (overlap > best_overlap) {
      best_overlap = overlap;
      normal_index = k;
    }
  }

  TripletDistribution base;
  base.probs = f;
  base.sample_count = n;
  const double w0 = functional(base);

  BayesianStdResult result;
  double variance = 0.0;
  for (int k = 0; k < kTripletStates; ++k) {
    if (k == normal_index) continue;
    const double lambda = eigenvalues[k];
    if (lambda <= 1e-18) continue;
    Vector8 direction = eigenvectors.col(k);
    double step = epsilon;
    // Perturb inward: flip rather than cross the simplex boundary, then
    // shrink if even the flipped step escapes.
    if ((f + step * direction).minCoeff() < 0.0) {
      direction = -direction;
    }
    bool shrunk = false;
    while ((f + step * direction).minCoeff() < 0.0 && step > 1e-12) {
      step *= 0.5;
      shrunk = true;
    }
    if (shrunk) ++result.shrunk_directions;
    TripletDistribution moved;
    moved.probs = f + step * direction;
    moved.sample_count = n;
    const double dw = (functional(moved) - w0) / step;
    variance += dw * dw * lambda;
  }
  result.sigma = std::sqrt(variance);
  return result;
}

double bayesian_std(const std::array<std::int64_t, 8>& counts,
                    const TripletFunctional& functional, double epsilon) {
  return bayesian_std_detailed(counts, functional, epsilon).sigma;
}

TripletFunctional triple_interaction_functional() {
  return [](const TripletDistribution& dist) {
    return triple_interaction(dist);
  };
}

TripletFunctional chain_divergence_functional(std::pair<int, int> target_pair,
                                              int mediator) {
  return [target_pair, mediator](const TripletDistribution& dist) {
    return chain_divergence(dist, target_pair, mediator);
  };
}

}  // namespace trinfo
