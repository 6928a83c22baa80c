#pragma once

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cstdint>
#include <string>

namespace trinfo {

using Vector2 = Eigen::Vector2d;
using Vector4 = Eigen::Vector4d;
using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

// Variables take values in {-1,+1}. A joint state of n variables is encoded
// as an index in [0, 2^n): bit t is (x_t + 1)/2, bit 0 least significant.
// This encoding is fixed: file formats and tests depend on it.

inline constexpr int kPairStates = 4;
inline constexpr int kTripletStates = 8;

/// Value (+1 or -1) of variable `var` in encoded state `state`.
inline constexpr int spin(int state, int var) {
  return ((state >> var) & 1) ? +1 : -1;
}

/// Product x0*x1*x2 of the encoded triplet state.
inline constexpr int triple_product(int state) {
  return (std::popcount(static_cast<unsigned>(state) & 7u) & 1) ? +1 : -1;
}

struct PairDistribution {
  Vector4 probs = Vector4::Zero();
  double sample_count = 0.0;

  double operator()(int xi, int xj) const {
    return probs[(xi > 0 ? 1 : 0) | ((xj > 0 ? 1 : 0) << 1)];
  }

  Vector2 marginal(int var) const;

  /// Throws std::invalid_argument unless probabilities are non-negative and
  /// sum to 1 within 1e-12.
  void validate() const;
};

struct TripletDistribution {
  Vector8 probs = Vector8::Zero();
  double sample_count = 0.0;

  double operator()(int x0, int x1, int x2) const {
    return probs[(x0 > 0 ? 1 : 0) | ((x1 > 0 ? 1 : 0) << 1) |
                 ((x2 > 0 ? 1 : 0) << 2)];
  }

  Vector2 marginal(int var) const;

  /// Bivariate marginal over (a, b); the result indexes x_a as bit 0 and
  /// x_b as bit 1.
  Vector4 pair_marginal(int a, int b) const;
  PairDistribution pair(int a, int b) const;

  /// Relabels variables: variable t of this distribution becomes variable
  /// perm[t] of the result.
  TripletDistribution permuted(const std::array<int, 3>& perm) const;

  void validate() const;

  /// JSON array of the 8 probabilities in encoded state order.
  std::string to_json() const;
  static TripletDistribution from_json(const std::string& text);
};

TripletDistribution uniform_triplet();

}  // namespace trinfo
