#include "trinfo/irreducible.hpp"

#include "trinfo/infocore.hpp"
#include "trinfo/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trinfo {

double chain_divergence(const TripletDistribution& dist,
                        std::pair<int, int> target_pair, int mediator) {
  const auto [a, c] = target_pair;
  if (mediator < 0 || mediator > 2 || mediator == a || mediator == c) {
    throw std::invalid_argument(
        "chain_divergence: mediator must be the remaining variable");
  }
  const double h_chain = chain_entropy(dist, target_pair);
  const double h_full = entropy(pairwise_maxent(dist).model);
  double value = h_chain - h_full;
  if (value < 0.0 && value > -1e-12) value = 0.0;
  return value;
}

std::pair<double, double> chain_divergence_routes(
    const TripletDistribution& dist, std::pair<int, int> target_pair,
    int mediator) {
  const double direct = chain_divergence(dist, target_pair, mediator);
  const double via_conditional =
      conditional_mi(dist, mediator) - triple_interaction(dist);
  return {direct, via_conditional};
}

MediatorResult irreducible_interaction(const PresenceMatrix& matrix,
                                       Eigen::Index i, Eigen::Index j,
                                       std::span<const int> candidates) {
  if (i == j || i < 0 || j < 0 || i >= matrix.word_count() ||
      j >= matrix.word_count()) {
    throw std::invalid_argument(
        "irreducible_interaction: need two distinct valid columns");
  }
  MediatorResult result;
  result.i = static_cast<int>(i);
  result.j = static_cast<int>(j);
  result.mutual_information = mutual_information(empirical_pair(matrix, i, j));
  result.chain_divergences.reserve(candidates.size());

  double best = std::numeric_limits<double>::infinity();
  for (int k : candidates) {
    if (k == i || k == j) {
      throw std::invalid_argument(
          "irreducible_interaction: candidates must exclude the pair");
    }
    if (k < 0 || k >= matrix.word_count()) {
      throw std::invalid_argument(
          "irreducible_interaction: candidate index out of range");
    }
    // Variables of the local triplet: 0 = column i, 1 = column j,
    // 2 = candidate mediator.
    const TripletDistribution dist = empirical_triplet(matrix, i, j, k);
    const double divergence = chain_divergence(dist, {0, 1}, 2);
    result.chain_divergences.emplace_back(k, divergence);
    if (divergence < best ||
        (divergence == best && result.best_mediator && k < *result.best_mediator)) {
      best = divergence;
      result.best_mediator = k;
    }
  }
  result.irreducible = result.best_mediator
                           ? std::min(result.mutual_information, best)
                           : result.mutual_information;
  return result;
}

}  // namespace trinfo
