#pragma once

#include "trinfo/distributions.hpp"
#include "trinfo/presence_matrix.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace trinfo {

/// How much of the statistical structure among all three variables is missed
/// by the chain model that links target_pair = (a, c) only through the
/// mediator b: the entropy gap between the maxent model constrained by
/// {ab, bc} and the one constrained by all three bivariate marginals.
/// Non-negative; zero iff the chain explains the pair.
double chain_divergence(const TripletDistribution& dist,
                        std::pair<int, int> target_pair, int mediator);

/// Diagnostic pair of algebraically equal routes to the chain divergence:
/// first the entropy-gap route above, second the conditional mutual
/// information between the target pair given the mediator minus the triple
/// interaction. They must agree within 1e-9 bits.
std::pair<double, double> chain_divergence_routes(
    const TripletDistribution& dist, std::pair<int, int> target_pair,
    int mediator);

struct MediatorResult {
  int i = 0;
  int j = 0;
  double mutual_information = 0.0;  // I_ij
  double irreducible = 0.0;         // part of I_ij no single chain explains
  std::optional<int> best_mediator; // argmin chain divergence, lowest index on ties
  std::vector<std::pair<int, double>> chain_divergences;  // per candidate
};

/// Evaluates the chain through every candidate mediator and keeps the best.
/// The irreducible interaction is min(I_ij, best chain divergence); with no
/// candidates it degenerates to I_ij.
MediatorResult irreducible_interaction(const PresenceMatrix& matrix,
                                       Eigen::Index i, Eigen::Index j,
                                       std::span<const int> candidates);

}  // namespace trinfo
