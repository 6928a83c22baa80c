#pragma once

#include "trinfo/distributions.hpp"
#include "trinfo/rng.hpp"

#include <algorithm>
#include <cmath>

namespace trinfo::testing {

// Uniform draw from the 8-state probability simplex (flat Dirichlet via
// normalized exponentials).
inline TripletDistribution random_triplet(Xoshiro256StarStar& rng) {
  TripletDistribution d;
  double sum = 0.0;
  for (int s = 0; s < kTripletStates; ++s) {
    double u = rng.next_double();
    if (u <= 0.0) u = 1e-300;
    d.probs[s] = -std::log(u);
    sum += d.probs[s];
  }
  d.probs /= sum;
  return d;
}

// Sparse draw: exponentiating the flat weights pushes mass onto few states,
// exercising the near-boundary paths.
inline TripletDistribution random_sparse_triplet(Xoshiro256StarStar& rng,
                                                 double power = 4.0) {
  TripletDistribution d = random_triplet(rng);
  double sum = 0.0;
  for (int s = 0; s < kTripletStates; ++s) {
    d.probs[s] = std::pow(d.probs[s], power);
    sum += d.probs[s];
  }
  d.probs /= sum;
  return d;
}

// Draw with hard zero states (at least two states keep mass).
inline TripletDistribution random_zeroed_triplet(Xoshiro256StarStar& rng) {
  TripletDistribution d = random_triplet(rng);
  int alive = kTripletStates;
  for (int s = 0; s < kTripletStates && alive > 2; ++s) {
    if (rng.next_double() < 0.4) {
      d.probs[s] = 0.0;
      --alive;
    }
  }
  d.probs /= d.probs.sum();
  return d;
}

inline double total_variation(const Vector8& a, const Vector8& b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

inline double entropy_of(const Vector8& p) {
  double h = 0.0;
  for (int s = 0; s < kTripletStates; ++s) {
    if (p[s] > 0.0) h -= p[s] * std::log2(p[s]);
  }
  return h;
}

// Independent maxent oracle: the distributions sharing all bivariate
// marginals with p form the one-parameter family p - d * parity; golden
// section search maximizes the (strictly concave) entropy along it directly,
// with no use of the production solver's balance condition.
inline Vector8 brute_force_pairwise_maxent(const Vector8& p) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int s = 0; s < kTripletStates; ++s) {
    if (triple_product(s) > 0) {
      hi = std::min(hi, p[s]);
    } else {
      lo = std::min(lo, p[s]);
    }
  }
  lo = -lo;
  const auto shifted = [&](double d) {
    Vector8 q;
    for (int s = 0; s < kTripletStates; ++s) {
      q[s] = std::max(p[s] - d * triple_product(s), 0.0);
    }
    return q;
  };
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = entropy_of(shifted(x1));
  double f2 = entropy_of(shifted(x2));
  for (int it = 0; it < 300 && (b - a) > 1e-15; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = entropy_of(shifted(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = entropy_of(shifted(x1));
    }
  }
  return shifted(0.5 * (a + b));
}

}  // namespace trinfo::testing
