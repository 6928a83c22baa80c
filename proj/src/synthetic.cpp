#include "trinfo/synthetic.hpp"

#include "trinfo/infocore.hpp"
#include "trinfo/maxent.hpp"
#include "trinfo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace trinfo {

TripletDistribution xor_distribution(int sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("xor_distribution: sign must be +1 or -1");
  }
  TripletDistribution out;
  for (int s = 0; s < kTripletStates; ++s) {
    out.probs[s] = triple_product(s) == -sign ? 0.25 : 0.0;
  }
  return out;
}

TripletDistribution theta_distribution(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("theta_distribution: theta must be finite");
  }
  const double t = std::tanh(theta);
  TripletDistribution out;
  for (int s = 0; s < kTripletStates; ++s) {
    out.probs[s] = (1.0 + triple_product(s) * t) / 8.0;
  }
  return out;
}

double theta_triple_information(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument(
        "theta_triple_information: theta must be finite");
  }
  const double t = std::tanh(theta);
  return 0.5 * (plogp(1.0 + t) + plogp(1.0 - t));
}

TripletDistribution spin_marginal(double beta) {
  if (!std::isfinite(beta)) {
    throw std::invalid_argument("spin_marginal: beta must be finite");
  }
  TripletDistribution out;
  double z = 0.0;
  for (int s = 0; s < kTripletStates; ++s) {
    const double field = beta + spin(s, 0) + spin(s, 1) + spin(s, 2);
    out.probs[s] = std::cosh(field);
    z += out.probs[s];
  }
  out.probs /= z;
  return out;
}

std::vector<BetaSweepRow> beta_sweep(std::span<const double> betas) {
  std::vector<BetaSweepRow> rows;
  rows.reserve(betas.size());
  for (double beta : betas) {
    const TripletDistribution dist = spin_marginal(beta);
    BetaSweepRow row;
    row.beta = beta;
    row.multi_information = multi_information(dist);
    row.triple_interaction = triple_interaction(dist);
    row.pairwise_total = row.multi_information - row.triple_interaction;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> default_beta_grid() {
  std::vector<double> grid(81);
  for (int i = 0; i < 81; ++i) grid[i] = -8.0 + 0.1 * i;
  return grid;
}

PresenceMatrix sample_corpus(const TripletDistribution& dist,
                             Eigen::Index parts, std::uint64_t seed,
                             std::array<std::string, 3> labels) {
  if (parts < 1) {
    throw std::invalid_argument("sample_corpus: parts must be positive");
  }
  dist.validate();
  // Cumulative table over the 8 states; inverse-CDF sampling.
  std::array<double, kTripletStates> cumulative{};
  double acc = 0.0;
  for (int s = 0; s < kTripletStates; ++s) {
    acc += dist.probs[s];
    cumulative[s] = acc;
  }
  cumulative[kTripletStates - 1] = 1.0;

  Xoshiro256StarStar rng(seed);
  BitMatrix bits(parts, 3);
  for (Eigen::Index p = 0; p < parts; ++p) {
    const double u = rng.next_double();
    int state = 0;
    while (state < kTripletStates - 1 && u >= cumulative[state]) ++state;
    bits(p, 0) = static_cast<std::uint8_t>((state >> 0) & 1);
    bits(p, 1) = static_cast<std::uint8_t>((state >> 1) & 1);
    bits(p, 2) = static_cast<std::uint8_t>((state >> 2) & 1);
  }
  return PresenceMatrix(std::move(bits),
                        {labels[0], labels[1], labels[2]});
}

}  // namespace trinfo
