#pragma once

#include "trinfo/distributions.hpp"
#include "trinfo/presence_matrix.hpp"

namespace trinfo {

// All quantities are in bits (logarithms base 2) with the convention
// 0*log(0) = 0.

/// Entropy of a binary variable with success probability p.
/// Throws std::domain_error if p is outside [0, 1].
double entropy_binary(double p);

double entropy(const PairDistribution& dist);
double entropy(const TripletDistribution& dist);

/// Contribution sum over states of p*log2(p), zero for p = 0. Exposed because
/// several modules assemble entropies from marginal slices.
double plogp(double p);

/// I(X_i; X_j) >= 0; zero iff the pair is independent.
double mutual_information(const PairDistribution& dist);

/// I(X_a; X_b | X_c) where c = conditioned_on and {a, b} are the other two
/// variables. conditioned_on is 0, 1 or 2.
double conditional_mi(const TripletDistribution& dist, int conditioned_on);

/// Symmetric three-way quantity I(X0; X1; X2) = I(X0; X1) - I(X0; X1 | X2).
/// The three equivalent conditioning routes are evaluated and must agree
/// within 1e-9 bits.
double co_information(const TripletDistribution& dist);

/// Divergence from the product of the univariate marginals; total amount of
/// statistical dependence of any order.
double multi_information(const TripletDistribution& dist);

/// Everything this library measures about one triplet of binary variables.
struct TripletMetrics {
  double h1 = 0, h2 = 0, h3 = 0;      // univariate entropies
  double i12 = 0, i23 = 0, i31 = 0;   // pairwise mutual informations
  double co_information = 0;          // I_123
  double multi_information = 0;       // total dependence
  double pairwise_total = 0;          // second-order share
  double triple_interaction = 0;      // third-order share
  double delta_shift = 0;             // probability moved between parities
  int xor_sign = 0;                   // +1 XOR-like, -1 anti, 0 none
  bool significant = false;
  double sigma_triple = 0.0;          // error bar on triple_interaction
};

/// Plug-in (maximum likelihood) distribution of a column pair.
/// Throws std::invalid_argument on repeated or out-of-range indices.
PairDistribution empirical_pair(const PresenceMatrix& matrix, Eigen::Index i,
                                Eigen::Index j);

/// Plug-in distribution of a column triplet, bit 0 of the state taken from
/// column i, bit 1 from j, bit 2 from k.
TripletDistribution empirical_triplet(const PresenceMatrix& matrix,
                                      Eigen::Index i, Eigen::Index j,
                                      Eigen::Index k);

}  // namespace trinfo
