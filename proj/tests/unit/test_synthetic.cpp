#include "trinfo/synthetic.hpp"

#include "trinfo/infocore.hpp"
#include "trinfo/maxent.hpp"
#include "trinfo/rng.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace trinfo;

TEST_CASE("parity gate distributions") {
  const TripletDistribution plus = xor_distribution(+1);
  const TripletDistribution minus = xor_distribution(-1);
  for (int s = 0; s < kTripletStates; ++s) {
    CHECK(plus.probs[s] == (triple_product(s) == -1 ? 0.25 : 0.0));
    CHECK(minus.probs[s] == (triple_product(s) == +1 ? 0.25 : 0.0));
  }
  CHECK(triple_interaction(plus) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(triple_interaction(minus) == doctest::Approx(1.0).epsilon(1e-9));
  // all bivariate marginals uniform
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      CHECK((plus.pair_marginal(a, b).array() - 0.25).abs().maxCoeff() <
            1e-15);
    }
  }
  CHECK_THROWS_AS(xor_distribution(0), std::invalid_argument);
}

TEST_CASE("theta family") {
  CHECK((theta_distribution(0.0).probs.array() - 0.125).abs().maxCoeff() <
        1e-15);
  CHECK(triple_interaction(theta_distribution(0.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // large |theta| approaches a parity gate; the sign convention of the
  // closed form puts mass on the positive-parity states for theta > 0
  const TripletDistribution limit = theta_distribution(20.0);
  CHECK(testing::total_variation(limit.probs, xor_distribution(-1).probs) <
        1e-9);

  // bivariate marginals stay uniform across theta
  for (double theta : {-2.0, -0.3, 0.7, 1.9}) {
    const TripletDistribution d = theta_distribution(theta);
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        CHECK((d.pair_marginal(a, b).array() - 0.25).abs().maxCoeff() < 1e-15);
      }
    }
  }
  CHECK_THROWS_AS(theta_distribution(INFINITY), std::invalid_argument);
}

TEST_CASE("theta closed form equals the solver route") {
  CHECK(theta_triple_information(0.0) == 0.0);
  CHECK(theta_triple_information(std::atanh(0.5)) ==
        doctest::Approx(0.188721875541).epsilon(1e-9));
  CHECK(theta_triple_information(30.0) == doctest::Approx(1.0).epsilon(1e-6));

  double previous = -1.0;
  for (int g = 0; g <= 40; ++g) {
    const double theta = -3.0 + 6.0 * g / 40.0;
    const double closed = theta_triple_information(theta);
    const double solved = triple_interaction(theta_distribution(theta));
    CHECK(closed == doctest::Approx(solved).epsilon(1e-9));
    // even in theta
    CHECK(theta_triple_information(-theta) ==
          doctest::Approx(closed).epsilon(1e-12));
    // strictly increasing in |theta|
    if (theta >= 0.0) {
      CHECK(closed > previous);
      previous = closed;
    }
  }
}

TEST_CASE("hidden spin marginal") {
  // matches brute-force marginalization of the 16-state joint
  Xoshiro256StarStar rng(57);
  for (int rep = 0; rep < 20; ++rep) {
    const double beta = -8.0 + 8.0 * rng.next_double();
    Eigen::Matrix<double, 16, 1> joint;
    double z = 0.0;
    for (int s = 0; s < 16; ++s) {
      const int x4 = (s & 8) ? +1 : -1;
      const double field = beta + spin(s & 7, 0) + spin(s & 7, 1) +
                           spin(s & 7, 2);
      joint[s] = std::exp(field * x4);
      z += joint[s];
    }
    joint /= z;
    Vector8 marginalized = Vector8::Zero();
    for (int s = 0; s < 16; ++s) marginalized[s & 7] += joint[s];
    const TripletDistribution direct = spin_marginal(beta);
    CHECK((direct.probs - marginalized).cwiseAbs().maxCoeff() < 1e-12);
  }

  // permutation symmetry for every beta
  for (double beta : {-6.0, -1.5, 0.0, 2.0}) {
    const TripletDistribution d = spin_marginal(beta);
    for (const auto& perm :
         {std::array<int, 3>{1, 0, 2}, std::array<int, 3>{2, 1, 0}}) {
      CHECK((d.permuted(perm).probs - d.probs).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("field sweep reproduces the marginalization picture") {
  const std::vector<double> grid = default_beta_grid();
  CHECK(grid.size() == 81);
  CHECK(grid.front() == doctest::Approx(-8.0));
  CHECK(grid.back() == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<BetaSweepRow> rows = beta_sweep(grid);
  REQUIRE(rows.size() == grid.size());
  double best_triple = 0.0;
  std::size_t best_index = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    // decomposition holds row-wise
    CHECK(rows[r].multi_information ==
          doctest::Approx(rows[r].pairwise_total + rows[r].triple_interaction)
              .epsilon(1e-9));
    if (rows[r].triple_interaction > best_triple) {
      best_triple = rows[r].triple_interaction;
      best_index = r;
    }
  }
  // strong negative field kills all interaction
  CHECK(rows.front().multi_information < 1e-6);
  CHECK(rows.front().triple_interaction < 1e-6);
  // interior peak of the triple share
  CHECK(best_index > 0);
  CHECK(best_index + 1 < rows.size());
  CHECK(best_triple > 0.01);

  // metrics are even under flipping the field together with all spins
  const std::vector<double> mirror{-2.0, 2.0};
  const std::vector<BetaSweepRow> pair = beta_sweep(mirror);
  CHECK(pair[0].multi_information ==
        doctest::Approx(pair[1].multi_information).epsilon(1e-12));
  CHECK(pair[0].triple_interaction ==
        doctest::Approx(pair[1].triple_interaction).epsilon(1e-12));
}

TEST_CASE("sampling a generator distribution") {
  // deterministic under seed
  const TripletDistribution gate = xor_distribution(+1);
  const PresenceMatrix a = sample_corpus(gate, 256, 7);
  const PresenceMatrix b = sample_corpus(gate, 256, 7);
  CHECK((a.bits() == b.bits()));
  CHECK(a.part_count() == 256);
  CHECK(a.word_count() == 3);

  // single row is fine
  const PresenceMatrix one = sample_corpus(gate, 1, 3);
  CHECK(one.part_count() == 1);
  CHECK_THROWS_AS(sample_corpus(gate, 0, 3), std::invalid_argument);

  // large samples recover the generator within sampling error
  const PresenceMatrix big = sample_corpus(gate, 1'000'000, 11);
  const TripletDistribution empirical = empirical_triplet(big, 0, 1, 2);
  CHECK(triple_interaction(empirical) == doctest::Approx(1.0).epsilon(0.01));
  // only the negative-parity states carry mass
  for (int s = 0; s < kTripletStates; ++s) {
    if (triple_product(s) == +1) {
      CHECK(empirical.probs[s] == 0.0);
    } else {
      CHECK(empirical.probs[s] == doctest::Approx(0.25).epsilon(0.02));
    }
  }
}
