#pragma once

#include "trinfo/distributions.hpp"
#include "trinfo/presence_matrix.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trinfo {

// Closed-form generator distributions with known interaction content, used as
// ground truth for the estimators.

/// Uniform mass on the four states whose spin product is -sign, zero on the
/// others. sign=+1 is the parity gate with maximal third-order interaction
/// (1 bit); sign=-1 is its complement.
TripletDistribution xor_distribution(int sign);

/// p(x) = (1 + x0*x1*x2 * tanh(theta)) / 8: interpolates between the uniform
/// distribution (theta = 0) and a pure parity gate (theta -> +/-inf). Every
/// bivariate marginal is uniform for every theta.
TripletDistribution theta_distribution(double theta);

/// Closed form of the triple interaction of theta_distribution:
/// 0.5 * [(1+t) log2(1+t) + (1-t) log2(1-t)] with t = tanh(theta).
double theta_triple_information(double theta);

/// Three visible spins driven by a hidden fourth spin under field beta, with
/// the hidden spin marginalized out: p(x0,x1,x2) proportional to
/// cosh(beta + x0 + x1 + x2). Symmetric under permutation of the three
/// variables.
TripletDistribution spin_marginal(double beta);

struct BetaSweepRow {
  double beta = 0.0;
  double multi_information = 0.0;
  double pairwise_total = 0.0;
  double triple_interaction = 0.0;
};

std::vector<BetaSweepRow> beta_sweep(std::span<const double> betas);

/// 81 evenly spaced field values on [-8, 0].
std::vector<double> default_beta_grid();

/// Draws `parts` i.i.d. samples from the distribution and lays them out as a
/// three-column presence matrix (+1 -> 1). Deterministic under seed.
PresenceMatrix sample_corpus(const TripletDistribution& dist,
                             Eigen::Index parts, std::uint64_t seed,
                             std::array<std::string, 3> labels = {"w0", "w1",
                                                                  "w2"});

}  // namespace trinfo
