#pragma once

#include "trinfo/distributions.hpp"
#include "trinfo/infocore.hpp"

#include <string>
#include <utility>
#include <vector>

namespace trinfo {

enum class SolveMethod { cubic, ipf };

/// Maximum-entropy model constrained by all three bivariate marginals of a
/// source triplet distribution, plus solver diagnostics. The model always has
/// the form p - delta * x0*x1*x2: moving probability `delta` between the two
/// parity classes is the only change that keeps every bivariate marginal
/// fixed, so the bivariate constraints hold by construction and `residual`
/// only reports floating-point error.
struct MaxEntSolution {
  TripletDistribution model;
  double delta = 0.0;
  SolveMethod method = SolveMethod::cubic;
  int iterations = 0;
  double residual = 0.0;  // max absolute bivariate marginal violation

  std::string to_json() const;
};

struct MarginalConstraint {
  std::vector<int> vars;      // distinct variable indices in {0, 1, 2}
  Eigen::VectorXd target;     // marginal over 2^|vars| states, var[0] = bit 0
};

struct MarginalConstraintSet {
  std::vector<MarginalConstraint> groups;

  static MarginalConstraintSet univariate(const TripletDistribution& dist);
  static MarginalConstraintSet bivariate(const TripletDistribution& dist);

  void validate() const;
};

/// Iterative proportional fitting toward the unique maximum-entropy
/// distribution matching all constraint-group marginals. One iteration is a
/// full cycle over the groups. Throws IpfError when max_iter cycles leave the
/// largest marginal violation above tol.
TripletDistribution ipf(const TripletDistribution& start,
                        const MarginalConstraintSet& constraints,
                        double tol = 1e-10, int max_iter = 100000);

/// ipf starting from the uniform distribution.
TripletDistribution ipf(const MarginalConstraintSet& constraints,
                        double tol = 1e-10, int max_iter = 100000);

/// Closed-form maximum-entropy model when the bivariate constraint on
/// free_pair is dropped: p(x_a, x_m) p(x_m, x_c) / p(x_m) with m the
/// remaining variable.
TripletDistribution chain_maxent(const TripletDistribution& dist,
                                 std::pair<int, int> free_pair);

/// Entropy of chain_maxent without building it: H_am + H_mc - H_m.
double chain_entropy(const TripletDistribution& dist,
                     std::pair<int, int> free_pair);

/// Maximum-entropy model under all three bivariate marginals. delta is the
/// root of the parity product-balance condition inside the interval that
/// keeps all eight probabilities in [0, 1]; solved by bisection plus Newton
/// polish. Falls back to ipf on numerically pathological input.
MaxEntSolution pairwise_maxent(const TripletDistribution& dist);

/// Third-order interaction strength: entropy gap between pairwise_maxent's
/// model and the distribution itself. Also evaluated as the divergence
/// between the two; the routes must agree within 1e-9 bits.
double triple_interaction(const TripletDistribution& dist);

/// Second-order share of the total dependence.
double pairwise_interaction_total(const TripletDistribution& dist);

/// Overlap among the three pairwise informations: sum of mutual informations
/// minus the pairwise share. Positive values mean redundant pair links.
double redundancy(const TripletDistribution& dist);

/// Assembles every per-triplet quantity. significant and sigma_triple are
/// left at their defaults; callers with a threshold and error-bar machinery
/// fill them in.
TripletMetrics compute_triplet_metrics(const TripletDistribution& dist);

struct BoundViolation {
  std::string bound;   // short identifier of the violated inequality
  double excess;       // amount in bits beyond the 1e-9 tolerance
};

/// Checks the inequalities every valid triplet must satisfy: the triple
/// interaction is capped by each conditional mutual information and by each
/// univariate entropy, and two strong pair links force the third
/// (I_ab + I_ac - H_a <= I_bc for every ordering). Empty result means all
/// bounds hold within 1e-9 bits.
std::vector<BoundViolation> check_bounds(const TripletMetrics& metrics);

namespace detail {

struct DeltaSolve {
  long double delta = 0.0L;
  int iterations = 0;
};

/// Root of the parity product-balance condition for the probability vector p,
/// restricted to deltas keeping p - delta * parity inside the simplex. The
/// root is refined in extended precision: downstream identities compare the
/// model's entropy against a divergence and are sensitive to the root when a
/// model state sits near zero.
DeltaSolve solve_pairwise_delta_raw(const Vector8& p);
std::pair<double, int> solve_pairwise_delta(const Vector8& p);

/// p - delta * parity, clamped against tiny negative roundoff.
Vector8 shifted_model(const Vector8& p, long double delta);

}  // namespace detail

}  // namespace trinfo
