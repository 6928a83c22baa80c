#include "trinfo/maxent.hpp"

#include "trinfo/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <cmath>
#include <stdexcept>

namespace trinfo {

namespace {

constexpr int kPlusStates[4] = {1, 2, 4, 7};   // x0*x1*x2 = +1
constexpr int kMinusStates[4] = {0, 3, 5, 6};  // x0*x1*x2 = -1

double kl_divergence_bits(const Vector8& p, const Vector8& q) {
  double d = 0.0;
  for (int s = 0; s < kTripletStates; ++s) {
    if (p[s] > 0.0) {
      if (q[s] <= 0.0) return std::numeric_limits<double>::infinity();
      d += p[s] * std::log2(p[s] / q[s]);
    }
  }
  return d;
}

double max_bivariate_violation(const TripletDistribution& model,
                               const TripletDistribution& source) {
  double worst = 0.0;
  const std::pair<int, int> pairs[3] = {{0, 1}, {1, 2}, {2, 0}};
  for (auto [a, b] : pairs) {
    const Vector4 diff = model.pair_marginal(a, b) - source.pair_marginal(a, b);
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return worst;
}

// Sign of prod_plus(p - d) - prod_minus(p + d). Products of four factors in
// [0, 1] can underflow; compare in log space when they get tiny.
int balance_sign(const Vector8& p, double d) {
  double plus = 1.0, minus = 1.0;
  for (int s : kPlusStates) plus *= std::max(p[s] - d, 0.0);
  for (int s : kMinusStates) minus *= std::max(p[s] + d, 0.0);
  if (plus > 1e-240 || minus > 1e-240) {
    if (plus > minus) return 1;
    if (plus < minus) return -1;
    return 0;
  }
  if (plus == 0.0 && minus == 0.0) return 0;
  if (plus == 0.0) return -1;
  if (minus == 0.0) return 1;
  double log_plus = 0.0, log_minus = 0.0;
  for (int s : kPlusStates) log_plus += std::log(p[s] - d);
  for (int s : kMinusStates) log_minus += std::log(p[s] + d);
  if (log_plus > log_minus) return 1;
  if (log_plus < log_minus) return -1;
  return 0;
}

}  // namespace

namespace detail {

namespace {

// Sign of the parity balance evaluated in extended precision.
int balance_sign_ld(const Vector8& p, long double d) {
  long double plus = 1.0L, minus = 1.0L;
  for (int s : kPlusStates) {
    const long double v = static_cast<long double>(p[s]) - d;
    plus *= v > 0.0L ? v : 0.0L;
  }
  for (int s : kMinusStates) {
    const long double v = static_cast<long double>(p[s]) + d;
    minus *= v > 0.0L ? v : 0.0L;
  }
  if (plus > minus) return 1;
  if (plus < minus) return -1;
  return 0;
}

}  // namespace

DeltaSolve solve_pairwise_delta_raw(const Vector8& p) {
  double lo = -std::min({p[kMinusStates[0]], p[kMinusStates[1]],
                         p[kMinusStates[2]], p[kMinusStates[3]]});
  double hi = std::min({p[kPlusStates[0]], p[kPlusStates[1]],
                        p[kPlusStates[2]], p[kPlusStates[3]]});
  if (hi <= lo) {
    // Zero states on both parities: the feasible family is the single point.
    return {0.5L * (static_cast<long double>(lo) + hi), 0};
  }
  // The balance is strictly decreasing with a guaranteed sign change over
  // the bracket. Double-precision bisection does the bulk of the work.
  int iterations = 0;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    ++iterations;
    if (balance_sign(p, mid) >= 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Extended-precision refinement: the divergence-vs-entropy identity for
  // the fitted model is sensitive to the root when a state sits close to
  // the simplex boundary, and a double-width bracket is not always enough.
  long double llo = lo, lhi = hi;
  for (int it = 0; it < 40; ++it) {
    const long double mid = 0.5L * (llo + lhi);
    if (mid == llo || mid == lhi) break;
    ++iterations;
    if (balance_sign_ld(p, mid) >= 0) {
      llo = mid;
    } else {
      lhi = mid;
    }
  }
  return {0.5L * (llo + lhi), iterations};
}

std::pair<double, int> solve_pairwise_delta(const Vector8& p) {
  const DeltaSolve solve = solve_pairwise_delta_raw(p);
  return {static_cast<double>(solve.delta), solve.iterations};
}

Vector8 shifted_model(const Vector8& p, long double delta) {
  Vector8 q;
  for (int s = 0; s < kTripletStates; ++s) {
    q[s] = static_cast<double>(static_cast<long double>(p[s]) -
                               delta * triple_product(s));
    if (q[s] < 0.0) {
      assert(q[s] > -1e-12);
      q[s] = 0.0;
    }
  }
  const double sum = q.sum();
  if (sum > 0.0 && std::abs(sum - 1.0) > 1e-15) q /= sum;
  return q;
}

}  // namespace detail

std::string MaxEntSolution::to_json() const {
  nlohmann::json j;
  j["model"] = nlohmann::json::parse(model.to_json());
  j["delta"] = delta;
  j["method"] = method == SolveMethod::cubic ? "cubic" : "ipf";
  j["iterations"] = iterations;
  j["residual"] = residual;
  return j.dump();
}

MarginalConstraintSet MarginalConstraintSet::univariate(
    const TripletDistribution& dist) {
  MarginalConstraintSet set;
  for (int v = 0; v < 3; ++v) {
    set.groups.push_back({{v}, dist.marginal(v)});
  }
  return set;
}

MarginalConstraintSet MarginalConstraintSet::bivariate(
    const TripletDistribution& dist) {
  MarginalConstraintSet set;
  const std::pair<int, int> pairs[3] = {{0, 1}, {1, 2}, {2, 0}};
  for (auto [a, b] : pairs) {
    set.groups.push_back({{a, b}, dist.pair_marginal(a, b)});
  }
  return set;
}

void MarginalConstraintSet::validate() const {
  if (groups.empty()) {
    throw std::invalid_argument("constraint set must not be empty");
  }
  for (const auto& g : groups) {
    if (g.vars.empty() || g.vars.size() > 3) {
      throw std::invalid_argument("constraint group must hold 1-3 variables");
    }
    for (std::size_t i = 0; i < g.vars.size(); ++i) {
      if (g.vars[i] < 0 || g.vars[i] > 2) {
        throw std::invalid_argument("constraint variable index must be 0-2");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (g.vars[i] == g.vars[j]) {
          throw std::invalid_argument("constraint variables must be distinct");
        }
      }
    }
    if (g.target.size() != (Eigen::Index{1} << g.vars.size())) {
      throw std::invalid_argument("constraint target has wrong state count");
    }
    if (std::abs(g.target.sum() - 1.0) > 1e-9 || g.target.minCoeff() < -1e-15) {
      throw std::invalid_argument("constraint target is not a distribution");
    }
  }
}

namespace {

// Index of a state within a constraint group's marginal.
int group_cell(int state, const std::vector<int>& vars) {
  int cell = 0;
  for (std::size_t t = 0; t < vars.size(); ++t) {
    cell |= ((state >> vars[t]) & 1) << t;
  }
  return cell;
}

}  // namespace

TripletDistribution ipf(const TripletDistribution& start,
                        const MarginalConstraintSet& constraints,
                        double tol, int max_iter) {
  constraints.validate();
  Vector8 q = start.probs;
  const auto residual_of = [&](const Vector8& probs) {
    double worst = 0.0;
    for (const auto& g : constraints.groups) {
      Eigen::VectorXd current = Eigen::VectorXd::Zero(g.target.size());
      for (int s = 0; s < kTripletStates; ++s) {
        current[group_cell(s, g.vars)] += probs[s];
      }
      worst = std::max(worst, (current - g.target).cwiseAbs().maxCoeff());
    }
    return worst;
  };

  double residual = residual_of(q);
  int cycles = 0;
  while (residual >= tol && cycles < max_iter) {
    for (const auto& g : constraints.groups) {
      Eigen::VectorXd current = Eigen::VectorXd::Zero(g.target.size());
      for (int s = 0; s < kTripletStates; ++s) {
        current[group_cell(s, g.vars)] += q[s];
      }
      for (int s = 0; s < kTripletStates; ++s) {
        const int cell = group_cell(s, g.vars);
        if (current[cell] > 0.0) {
          q[s] *= g.target[cell] / current[cell];
        } else {
          q[s] = 0.0;
        }
      }
    }
    ++cycles;
    residual = residual_of(q);
  }
  if (residual >= tol) {
    char message[96];
    std::snprintf(message, sizeof(message),
                  "ipf did not converge: residual %.3e after %d cycles",
                  residual, cycles);
    throw IpfError(message, residual, cycles);
  }
  TripletDistribution out;
  out.probs = q;
  out.sample_count = start.sample_count;
  return out;
}

TripletDistribution ipf(const MarginalConstraintSet& constraints, double tol,
                        int max_iter) {
  return ipf(uniform_triplet(), constraints, tol, max_iter);
}

TripletDistribution chain_maxent(const TripletDistribution& dist,
                                 std::pair<int, int> free_pair) {
  const auto [a, c] = free_pair;
  if (a < 0 || a > 2 || c < 0 || c > 2 || a == c) {
    throw std::invalid_argument("free_pair must name two distinct variables");
  }
  const int m = 3 - a - c;
  const Vector4 pam = dist.pair_marginal(a, m);
  const Vector4 pmc = dist.pair_marginal(m, c);
  const Vector2 pm = dist.marginal(m);
  TripletDistribution out;
  out.sample_count = dist.sample_count;
  for (int s = 0; s < kTripletStates; ++s) {
    const int xa = (s >> a) & 1;
    const int xm = (s >> m) & 1;
    const int xc = (s >> c) & 1;
    const double numerator = pam[xa | (xm << 1)] * pmc[xm | (xc << 1)];
    if (numerator == 0.0) {
      out.probs[s] = 0.0;
    } else {
      // A zero conditioning marginal with a nonzero numerator cannot happen
      // for a consistent distribution.
      assert(pm[xm] > 0.0);
      out.probs[s] = numerator / pm[xm];
    }
  }
  return out;
}

double chain_entropy(const TripletDistribution& dist,
                     std::pair<int, int> free_pair) {
  const auto [a, c] = free_pair;
  if (a < 0 || a > 2 || c < 0 || c > 2 || a == c) {
    throw std::invalid_argument("free_pair must name two distinct variables");
  }
  const int m = 3 - a - c;
  return entropy(dist.pair(a, m)) + entropy(dist.pair(m, c)) +
         plogp(dist.marginal(m)[0]) + plogp(dist.marginal(m)[1]);
}

MaxEntSolution pairwise_maxent(const TripletDistribution& dist) {
  MaxEntSolution solution;
  const detail::DeltaSolve solve = detail::solve_pairwise_delta_raw(dist.probs);
  solution.model.probs = detail::shifted_model(dist.probs, solve.delta);
  solution.model.sample_count = dist.sample_count;
  solution.delta = static_cast<double>(solve.delta);
  const int iterations = solve.iterations;
  solution.method = SolveMethod::cubic;
  solution.iterations = iterations;
  solution.residual = max_bivariate_violation(solution.model, dist);

  const bool healthy = solution.model.probs.allFinite() &&
                       solution.model.probs.minCoeff() >= 0.0 &&
                       solution.residual <= 1e-10;
  if (!healthy) {
    TripletDistribution model =
        ipf(MarginalConstraintSet::bivariate(dist), 1e-10, 100000);
    solution.model = model;
    // Recover the parity shift implied by the fitted model.
    double shift = 0.0;
    for (int s = 0; s < kTripletStates; ++s) {
      shift += triple_product(s) * (dist.probs[s] - model.probs[s]);
    }
    solution.delta = shift / kTripletStates;
    solution.method = SolveMethod::ipf;
    solution.residual = max_bivariate_violation(solution.model, dist);
  }
  return solution;
}

double triple_interaction(const TripletDistribution& dist) {
  const MaxEntSolution solution = pairwise_maxent(dist);
  const double via_entropy = entropy(solution.model) - entropy(dist);
  const double via_divergence =
      kl_divergence_bits(dist.probs, solution.model.probs);
  // The entropy-gap and divergence routes are algebraically equal; a gap
  // means the solver failed.
  if (!(std::abs(via_entropy - via_divergence) < 1e-9)) {
    throw NumericError("triple_interaction: route mismatch of " +
                       std::to_string(via_entropy - via_divergence) + " bits");
  }
  return via_entropy < 0.0 ? 0.0 : via_entropy;
}

double pairwise_interaction_total(const TripletDistribution& dist) {
  const double value = multi_information(dist) - triple_interaction(dist);
  return value < 0.0 ? 0.0 : value;
}

double redundancy(const TripletDistribution& dist) {
  return triple_interaction(dist) + co_information(dist);
}

TripletMetrics compute_triplet_metrics(const TripletDistribution& dist) {
  TripletMetrics m;
  m.h1 = entropy_binary(std::clamp(dist.marginal(0)[1], 0.0, 1.0));
  m.h2 = entropy_binary(std::clamp(dist.marginal(1)[1], 0.0, 1.0));
  m.h3 = entropy_binary(std::clamp(dist.marginal(2)[1], 0.0, 1.0));
  m.i12 = mutual_information(dist.pair(0, 1));
  m.i23 = mutual_information(dist.pair(1, 2));
  m.i31 = mutual_information(dist.pair(2, 0));
  m.co_information = co_information(dist);
  m.multi_information = multi_information(dist);

  const MaxEntSolution solution = pairwise_maxent(dist);
  const double d3 = entropy(solution.model) - entropy(dist);
  m.triple_interaction = d3 < 0.0 ? 0.0 : d3;
  m.pairwise_total = m.multi_information - m.triple_interaction;
  if (m.pairwise_total < 0.0) m.pairwise_total = 0.0;
  m.delta_shift = solution.delta;
  if (solution.delta > 0.0) {
    m.xor_sign = -1;
  } else if (solution.delta < 0.0) {
    m.xor_sign = +1;
  } else {
    m.xor_sign = 0;
  }
  // The pairwise share has two algebraic routes: total minus triple, and
  // sum-of-pair-informations minus co-information minus triple. The
  // co-information above came from the conditional route, so this is a real
  // cross-check.
  const double alternate = m.i12 + m.i23 + m.i31 - m.co_information -
                           m.triple_interaction;
  if (!(std::abs(alternate - m.pairwise_total) < 1e-9)) {
    throw NumericError("triplet metrics: pairwise-share routes disagree");
  }
  return m;
}

std::vector<BoundViolation> check_bounds(const TripletMetrics& m) {
  constexpr double kTol = 1e-9;
  std::vector<BoundViolation> violations;
  const auto report = [&](const std::string& bound, double excess) {
    if (excess > kTol) violations.push_back({bound, excess - kTol});
  };

  // Triple interaction is capped by each conditional mutual information,
  // i.e. by each pairwise information minus the co-information.
  const double min_pair = std::min({m.i12, m.i23, m.i31});
  report("triple<=min_conditional_mi",
         m.triple_interaction - (min_pair - m.co_information));
  // ... and by each univariate entropy.
  const double min_entropy = std::min({m.h1, m.h2, m.h3});
  report("triple<=min_entropy", m.triple_interaction - min_entropy);

  // Triangle constraint: two strong links force the third.
  report("triangle_1", m.i12 + m.i31 - m.h1 - m.i23);
  report("triangle_2", m.i12 + m.i23 - m.h2 - m.i31);
  report("triangle_3", m.i23 + m.i31 - m.h3 - m.i12);

  // Decomposition consistency.
  report("total=pairwise+triple",
         std::abs(m.multi_information -
                  (m.pairwise_total + m.triple_interaction)));
  return violations;
}

}  // namespace trinfo
