#include <doctest.h>

#include <cmath>

#include "anchorstream/estimators.hpp"
#include "test_helpers.hpp"

using namespace anchorstream;

namespace {
const CellCounts kAppendixC{6, 5, 100, 46, 33, 6, 304};
DesignContext appendix_ctx() { return make_design_context(kAppendixC, 500); }
} // namespace

TEST_CASE("worked example: random-sample estimator") {
  const auto e = estimate_random_sample(kAppendixC, appendix_ctx());
  CHECK(e.n_hat == doctest::Approx(110.0).epsilon(1e-12));
  CHECK(e.se == doctest::Approx(28.070610675107684).epsilon(1e-12));
  CHECK(std::fabs(e.n_hat - 110.0) < 0.05);
  CHECK(std::fabs(e.se - 28.1) < 0.05);
  CHECK(e.prevalence_hat == doctest::Approx(0.22).epsilon(1e-12));
}

TEST_CASE("worked example: Chapman estimator") {
  const auto e = estimate_chapman(kAppendixC, appendix_ctx());
  // (51+1)(11+1)/(5+1) - 1 and the usual Chapman variance
  CHECK(e.n_hat == doctest::Approx(103.0).epsilon(1e-12));
  CHECK(e.variance == doctest::Approx(683.4285714285714).epsilon(1e-12));
}

TEST_CASE("worked example: known-psi estimator") {
  const auto e = estimate_known_psi(kAppendixC, appendix_ctx());
  CHECK(e.n_hat == doctest::Approx(111.0).epsilon(1e-12));
  CHECK(e.variance == doctest::Approx(540.0).epsilon(1e-12));
  CHECK(std::fabs(e.se - 23.2) < 0.05);
}

TEST_CASE("worked example: multinomial MLE estimator") {
  const auto e = estimate_psi_star_mle(kAppendixC, appendix_ctx());
  CHECK(e.n_hat == doctest::Approx(51.0 + 6.0 * 343.0 / 39.0).epsilon(1e-12));
  CHECK(std::fabs(e.n_hat - 103.8) < 0.05);
  CHECK(lincoln_petersen_variance(kAppendixC) ==
        doctest::Approx(1238.688).epsilon(1e-12));
  // harmonic combination of the component variances
  const double var_rs = estimate_random_sample(kAppendixC, appendix_ctx()).variance;
  CHECK(e.variance ==
        doctest::Approx(1.0 / (1.0 / var_rs + 1.0 / 1238.688)).epsilon(1e-12));
  CHECK(std::fabs(e.variance - 481.6) < 0.1);
  CHECK(std::fabs(e.se - 21.9) < 0.05);
}

TEST_CASE("FPC factor caps at one and vanishes at a census") {
  CHECK(fpc_factor(2, 10) == 1.0); // raw value would be 1.6
  CHECK(fpc_factor(50, 500) == doctest::Approx(22500.0 / 24500.0).epsilon(1e-12));
  CHECK(fpc_factor(10, 10) == 0.0);
  CHECK_THROWS_AS(fpc_factor(1, 10), PreconditionError);
  CHECK_THROWS_AS(fpc_factor(11, 10), PreconditionError);
}

TEST_CASE("random-sample estimator: capped FPC and zero-positive edge") {
  SUBCASE("capped variance") {
    // n_tot=10, n_rs=2, one positive: p = 0.5, raw FPC 1.6 capped to 1
    const CellCounts cells{1, 1, 0, 0, 0, 0, 8};
    const auto e = estimate_random_sample(cells, make_design_context(cells, 10));
    CHECK(e.variance == doctest::Approx(12.5).epsilon(1e-12));
  }
  SUBCASE("no positives") {
    const CellCounts cells{2, 0, 1, 0, 3, 0, 4};
    const auto e = estimate_random_sample(cells, make_design_context(cells, 10));
    CHECK(e.n_hat == 0.0);
    CHECK(e.se == 0.0);
  }
  SUBCASE("rejects a one-person sample") {
    const CellCounts cells{1, 0, 1, 0, 0, 0, 8};
    CHECK_THROWS_AS(estimate_random_sample(cells, make_design_context(cells, 10)),
                    PreconditionError);
  }
}

TEST_CASE("Chapman edge cases") {
  SUBCASE("empty capture") {
    const CellCounts cells{3, 0, 2, 0, 1, 0, 4};
    const auto e = estimate_chapman(cells, make_design_context(cells, 10));
    CHECK(e.n_hat == 0.0);
    CHECK(e.variance == 0.0);
  }
  SUBCASE("perfect overlap") {
    const CellCounts cells{0, 5, 0, 0, 0, 0, 5};
    const auto e = estimate_chapman(cells, make_design_context(cells, 10));
    CHECK(e.n_hat == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(e.variance == 0.0);
  }
}

TEST_CASE("known-psi estimator edge cases") {
  SUBCASE("hand-evaluated half-rate design") {
    // psi = 0.5, n11=2, n10=3, n01=4
    const CellCounts cells{2, 2, 3, 3, 2, 4, 4};
    const auto ctx = make_design_context(cells, 20);
    REQUIRE(ctx.psi == doctest::Approx(0.5).epsilon(1e-12));
    const auto e = estimate_known_psi(cells, ctx);
    CHECK(e.n_hat == doctest::Approx(13.0).epsilon(1e-12));
    CHECK(e.variance == doctest::Approx(8.0).epsilon(1e-12));
  }
  SUBCASE("no stream-2-only cases") {
    const CellCounts cells{2, 2, 3, 3, 2, 0, 8};
    const auto e = estimate_known_psi(cells, make_design_context(cells, 20));
    CHECK(e.n_hat == 5.0); // n11 + n10, no third term
    CHECK(e.variance == 0.0);
  }
  SUBCASE("psi of zero is rejected") {
    const CellCounts cells{0, 0, 3, 3, 0, 0, 4};
    CHECK_THROWS_AS(estimate_known_psi(cells, make_design_context(cells, 10)),
                    PreconditionError);
  }
}

TEST_CASE("multinomial MLE edge cases") {
  SUBCASE("vanishing third term") {
    const CellCounts cells{1, 2, 3, 4, 5, 0, 5};
    const auto e = estimate_psi_star_mle(cells, make_design_context(cells, 20));
    CHECK(e.n_hat == 6.0);
  }
  SUBCASE("empty stream-2-only cell is an error") {
    const CellCounts cells{1, 2, 3, 4, 0, 0, 10};
    CHECK_THROWS_AS(estimate_psi_star_mle(cells, make_design_context(cells, 20)),
                    PreconditionError);
  }
  SUBCASE("all-zero positive cells still softened in the LP variance") {
    const CellCounts cells{2, 0, 2, 0, 2, 0, 4};
    CHECK(lincoln_petersen_variance(cells) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("sampling-rate planner") {
  SUBCASE("hand evaluation") {
    const double psi = plan_sampling_rate({0.1, 0.5, 500, 0.01});
    CHECK(psi == doctest::Approx(0.05 / 25.05).epsilon(1e-12));
  }
  SUBCASE("stream 1 catches everything") {
    CHECK(plan_sampling_rate({0.1, 1.0, 500, 0.01}) == 0.0);
  }
  SUBCASE("huge tolerated error drives the rate to zero") {
    CHECK(plan_sampling_rate({0.1, 0.5, 500, 1e6}) < 1e-12);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(plan_sampling_rate({0.0, 0.5, 500, 0.01}), PreconditionError);
    CHECK_THROWS_AS(plan_sampling_rate({0.1, 1.5, 500, 0.01}), PreconditionError);
    CHECK_THROWS_AS(plan_sampling_rate({0.1, 0.5, 0, 0.01}), PreconditionError);
    CHECK_THROWS_AS(plan_sampling_rate({0.1, 0.5, 500, 0.0}), PreconditionError);
  }
}

TEST_CASE("estimator invariants over random tables") {
  Rng rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    const auto cells = testutil::random_cells(rng);
    const auto ctx = make_design_context(cells, cells.total());
    const auto star = estimate_psi_star_mle(cells, ctx);
    // the expansion ratio is at least 1, so the MLE can never fall below
    // the observed case count
    CHECK(star.n_hat >= static_cast<double>(cells.cases_observed()) - 1e-9);

    const auto rs = estimate_random_sample(cells, ctx);
    const double var_lp = lincoln_petersen_variance(cells);
    if (rs.variance > 0.0) {
      CHECK(star.variance <= rs.variance + 1e-9);
      CHECK(star.variance <= var_lp + 1e-9);
    } else {
      CHECK(star.variance == 0.0);
    }
    if (ctx.n_rs < ctx.n_tot) {
      const double fpc = fpc_factor(ctx.n_rs, ctx.n_tot);
      CHECK(fpc > 0.0);
      CHECK(fpc <= 1.0);
    }
  }
}
