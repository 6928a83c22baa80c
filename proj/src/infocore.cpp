#include "trinfo/infocore.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace trinfo {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double entropy_binary(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("entropy_binary: probability outside [0, 1]");
  }
  return -plogp(p) - plogp(1.0 - p);
}

double entropy(const PairDistribution& dist) {
  double h = 0.0;
  for (int s = 0; s < kPairStates; ++s) h -= plogp(dist.probs[s]);
  return h;
}

double entropy(const TripletDistribution& dist) {
  double h = 0.0;
  for (int s = 0; s < kTripletStates; ++s) h -= plogp(dist.probs[s]);
  return h;
}

double mutual_information(const PairDistribution& dist) {
  const Vector2 m0 = dist.marginal(0);
  const Vector2 m1 = dist.marginal(1);
  double h = 0.0;
  for (int s = 0; s < 2; ++s) h -= plogp(m0[s]) + plogp(m1[s]);
  for (int s = 0; s < kPairStates; ++s) h += plogp(dist.probs[s]);
  // I = H0 + H1 - H01, clipped against roundoff.
  return h < 0.0 ? 0.0 : h;
}

double conditional_mi(const TripletDistribution& dist, int conditioned_on) {
  if (conditioned_on < 0 || conditioned_on > 2) {
    throw std::invalid_argument("conditional_mi: variable index must be 0-2");
  }
  const int c = conditioned_on;
  const int a = c == 0 ? 1 : 0;
  const int b = c == 2 ? 1 : 2;
  // I(Xa; Xb | Xc) = H_ac + H_bc - H_c - H_abc
  const Vector4 pac = dist.pair_marginal(a, c);
  const Vector4 pbc = dist.pair_marginal(b, c);
  double hac = 0.0, hbc = 0.0;
  for (int s = 0; s < kPairStates; ++s) {
    hac -= plogp(pac[s]);
    hbc -= plogp(pbc[s]);
  }
  const Vector2 mc = dist.marginal(c);
  const double hc = -plogp(mc[0]) - plogp(mc[1]);
  const double cmi = hac + hbc - hc - entropy(dist);
  return cmi < 0.0 ? 0.0 : cmi;
}

double co_information(const TripletDistribution& dist) {
  const double routes[3] = {
      mutual_information(dist.pair(0, 1)) - conditional_mi(dist, 2),
      mutual_information(dist.pair(1, 2)) - conditional_mi(dist, 0),
      mutual_information(dist.pair(2, 0)) - conditional_mi(dist, 1),
  };
  const double spread = std::max({routes[0], routes[1], routes[2]}) -
                        std::min({routes[0], routes[1], routes[2]});
  if (!(spread < 1e-9)) {
    throw std::logic_error("co_information: conditioning routes disagree");
  }
  return routes[0];
}

double multi_information(const TripletDistribution& dist) {
  double h = 0.0;
  for (int v = 0; v < 3; ++v) {
    const Vector2 m = dist.marginal(v);
    h += entropy_binary(std::clamp(m[1], 0.0, 1.0));
  }
  const double value = h - entropy(dist);
  return value < 0.0 ? 0.0 : value;
}

namespace {

void check_columns(const PresenceMatrix& matrix,
                   std::initializer_list<Eigen::Index> columns) {
  const auto* data = columns.begin();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (data[i] < 0 || data[i] >= matrix.word_count()) {
      throw std::invalid_argument("column index out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (data[i] == data[j]) {
        throw std::invalid_argument("column indices must be distinct");
      }
    }
  }
}

}  // namespace

PairDistribution empirical_pair(const PresenceMatrix& matrix, Eigen::Index i,
                                Eigen::Index j) {
  check_columns(matrix, {i, j});
  const auto counts = matrix.pair_counts(i, j);
  const double parts = static_cast<double>(matrix.part_count());
  PairDistribution out;
  out.sample_count = parts;
  for (int s = 0; s < kPairStates; ++s) {
    out.probs[s] = static_cast<double>(counts[static_cast<std::size_t>(s)]) / parts;
  }
  return out;
}

TripletDistribution empirical_triplet(const PresenceMatrix& matrix,
                                      Eigen::Index i, Eigen::Index j,
                                      Eigen::Index k) {
  check_columns(matrix, {i, j, k});
  const auto counts = matrix.joint_counts(i, j, k);
  const double parts = static_cast<double>(matrix.part_count());
  TripletDistribution out;
  out.sample_count = parts;
  for (int s = 0; s < kTripletStates; ++s) {
    out.probs[s] = static_cast<double>(counts[static_cast<std::size_t>(s)]) / parts;
  }
  return out;
}

}  // namespace trinfo
