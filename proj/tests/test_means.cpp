#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "anchorstream/estimators.hpp"
#include "anchorstream/means.hpp"
#include "anchorstream/stats.hpp"
#include "test_helpers.hpp"

using namespace anchorstream;

namespace {
const CellCounts kAppendixC{6, 5, 100, 46, 33, 6, 304};
} // namespace

TEST_CASE("binary measurement reduces the overall mean to the MLE prevalence") {
  const auto records = testutil::roster_from_cells(kAppendixC, testutil::case_indicator);
  const auto [cells, ctx] = tabulate(records, 500);
  const double mu = mean_overall(records, ctx);
  const auto star = estimate_psi_star_mle(cells, ctx);
  CHECK(std::fabs(500.0 * mu - star.n_hat) < 1e-12);
  CHECK(mu == doctest::Approx(0.20753846153846154).epsilon(1e-12));
}

TEST_CASE("binary-measurement equivalence holds across random tables") {
  Rng rng(8899);
  for (int trial = 0; trial < 300; ++trial) {
    const auto cells = testutil::random_cells(rng);
    const auto records = testutil::roster_from_cells(cells, testutil::case_indicator);
    const auto tab = tabulate(records, cells.total());
    const double lhs =
        static_cast<double>(cells.total()) * mean_overall(records, tab.ctx);
    const double rhs = estimate_psi_star_mle(tab.cells, tab.ctx).n_hat;
    CHECK(std::fabs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("overall mean of a constant measurement is that constant") {
  const auto records = testutil::roster_from_cells(
      CellCounts{2, 1, 4, 2, 3, 1, 7}, [](int, std::int64_t) { return 3.25; });
  const auto tab = tabulate(records, 20);
  CHECK(mean_overall(records, tab.ctx) == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("overall mean on a hand-computed six-person roster") {
  std::vector<IndividualRecord> records;
  records.push_back({"a", true, false, true, 2.0});
  records.push_back({"b", true, false, false, 4.0});
  records.push_back({"c", true, true, true, 6.0});
  records.push_back({"d", false, true, false, 1.0});
  records.push_back({"e", false, true, true, 3.0});
  records.push_back({"f", false, false, std::nullopt, std::nullopt});
  const auto tab = tabulate(records, 6);
  // stream 1 mean 4 with weight 1/2, stream-2-only mean 2 with weight 1/2
  CHECK(mean_overall(records, tab.ctx) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("overall mean decomposes by capture cell") {
  Rng rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cells = testutil::random_cells(rng);
    const auto records = testutil::roster_from_cells(
        cells, [&rng](int cell, std::int64_t) {
          return 0.5 * cell + rng.next_double();
        });
    const auto tab = tabulate(records, cells.total());

    // tally cell means by hand
    std::array<double, 7> sum{};
    std::array<std::int64_t, 7> cnt{};
    for (const auto& r : records) {
      if (!r.sampled()) continue;
      int cell;
      if (r.in_stream1 && r.in_stream2) cell = *r.is_case ? 2 : 1;
      else if (r.in_stream1) cell = *r.is_case ? 4 : 3;
      else cell = *r.is_case ? 6 : 5;
      sum[static_cast<std::size_t>(cell)] += *r.x_value;
      ++cnt[static_cast<std::size_t>(cell)];
    }
    const double n_tot = static_cast<double>(cells.total());
    const auto cell_mean = [&](int a, int b) -> double {
      const auto n = cnt[static_cast<std::size_t>(a)] + cnt[static_cast<std::size_t>(b)];
      return n == 0 ? 0.0
                    : (sum[static_cast<std::size_t>(a)] + sum[static_cast<std::size_t>(b)]) /
                          static_cast<double>(n);
    };
    const double p11 = static_cast<double>(cells.n1 + cells.n2) / n_tot;
    const double p10 = static_cast<double>(cells.n3 + cells.n4) / n_tot;
    const double p0dot = static_cast<double>(cells.n5 + cells.n6 + cells.n7) / n_tot;
    const double expected =
        cell_mean(1, 2) * p11 + cell_mean(3, 4) * p10 + cell_mean(5, 6) * p0dot;
    CHECK(mean_overall(records, tab.ctx) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("subgroup mean on the toy roster with an estimated total of four") {
  // two stream 1 cases (x = 4, 6), one stream-2-only case (x = 2), and an
  // expansion ratio of 2: estimated case total 4, so both weights are 1/2
  std::vector<IndividualRecord> records;
  records.push_back({"a", true, false, true, 4.0});
  records.push_back({"b", true, false, true, 6.0});
  records.push_back({"c", false, true, true, 2.0});
  records.push_back({"d", false, true, false, 9.0});
  records.push_back({"e", false, false, std::nullopt, std::nullopt});
  records.push_back({"f", false, false, std::nullopt, std::nullopt});
  const auto tab = tabulate(records, 6);
  REQUIRE(estimate_psi_star_mle(tab.cells, tab.ctx).n_hat ==
          doctest::Approx(4.0).epsilon(1e-12));
  CHECK(mean_subgroup(records, tab.ctx, MeanTarget::Cases) ==
        doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("subgroup mean of a constant measurement is that constant") {
  const auto records = testutil::roster_from_cells(
      CellCounts{2, 2, 4, 3, 3, 2, 4}, [](int, std::int64_t) { return -1.5; });
  const auto tab = tabulate(records, 20);
  CHECK(mean_subgroup(records, tab.ctx, MeanTarget::Cases) ==
        doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(mean_subgroup(records, tab.ctx, MeanTarget::NonCases) ==
        doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(mean_difference(records, tab.ctx) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mirrored and complement non-case totals agree") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    auto cells = testutil::random_cells(rng);
    cells.n1 += 1; // non-case in stream 1
    cells.n5 += 1; // non-case in the stream-2-only cell
    cells.n2 += 1;
    cells.n6 += 1;
    const auto records = testutil::roster_from_cells(
        cells, [&rng](int, std::int64_t) { return rng.next_double() * 10.0; });
    const auto tab = tabulate(records, cells.total());
    const double mirrored = mean_subgroup(records, tab.ctx, MeanTarget::NonCases,
                                          NonCaseTotalRule::MirroredRatio);
    const double complement = mean_subgroup(records, tab.ctx, MeanTarget::NonCases,
                                            NonCaseTotalRule::ComplementOfCases);
    CHECK(mirrored == doctest::Approx(complement).epsilon(1e-9));
  }
}

TEST_CASE("subgroup mean preconditions") {
  // no cases in the stream-2-only cell
  const auto records = testutil::roster_from_cells(
      CellCounts{2, 2, 4, 3, 3, 0, 6}, [](int, std::int64_t) { return 1.0; });
  const auto tab = tabulate(records, 20);
  CHECK_THROWS_AS(mean_subgroup(records, tab.ctx, MeanTarget::Cases),
                  PreconditionError);
  CHECK(mean_subgroup(records, tab.ctx, MeanTarget::NonCases) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(mean_subgroup(records, tab.ctx, MeanTarget::Overall),
                  PreconditionError);
}

TEST_CASE("stream means with the hand-evaluated FPC") {
  std::vector<IndividualRecord> records;
  records.push_back({"a", false, true, false, 1.0});
  records.push_back({"b", false, true, false, 2.0});
  records.push_back({"c", false, true, true, 3.0});
  records.push_back({"d", true, false, true, 9.0});
  for (int i = 0; i < 2; ++i)
    records.push_back({"u" + std::to_string(i), false, false, {}, {}});
  const auto tab = tabulate(records, 6);
  const auto sm = stream_means(records, tab.ctx);
  CHECK(sm.stream1_mean == doctest::Approx(9.0));
  CHECK(sm.stream2_mean == doctest::Approx(2.0));
  // FPC = 3*3/(6*2) = 0.75, s = 1
  CHECK(sm.stream2_se == doctest::Approx(std::sqrt(0.75) / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("stream 2 census has zero standard error") {
  const auto records = testutil::roster_from_cells(
      CellCounts{2, 1, 0, 0, 4, 3, 0}, [](int cell, std::int64_t i) {
        return static_cast<double>(cell) + 0.25 * static_cast<double>(i);
      });
  const auto tab = tabulate(records, 10);
  REQUIRE(tab.ctx.n_rs == 10);
  CHECK(stream_means(records, tab.ctx).stream2_se == 0.0);
}

TEST_CASE("FPC triple values and preconditions") {
  const auto f = compute_fpc_triple(kAppendixC);
  // stream 1 roster has 157 members; the both-streams cell of 11 is small
  // enough (11^2 < 157) that its raw factor exceeds 1 and the cap binds
  CHECK(f.fpc11 == 1.0);
  CHECK(f.fpc10 == doctest::Approx(146.0 * 11.0 / (157.0 * 145.0)).epsilon(1e-12));
  CHECK(f.fpc01 == doctest::Approx(39.0 * 304.0 / (343.0 * 38.0)).epsilon(1e-12));
  CHECK_THROWS_AS(compute_fpc_triple(CellCounts{1, 0, 5, 5, 5, 5, 10}),
                  PreconditionError);
}

TEST_CASE("bootstrap of a constant measurement is a point mass") {
  const auto records = testutil::roster_from_cells(
      CellCounts{2, 2, 4, 3, 3, 2, 4}, [](int, std::int64_t) { return 2.5; });
  const auto tab = tabulate(records, 20);
  BootstrapConfig cfg;
  cfg.replicates = 200;
  cfg.seed = 99;
  for (const auto target : {MeanTarget::Overall, MeanTarget::Cases,
                            MeanTarget::NonCases, MeanTarget::Difference}) {
    const auto est = bootstrap_mean(records, tab.ctx, target, cfg);
    const double want = target == MeanTarget::Difference ? 0.0 : 2.5;
    CHECK(est.mu_hat == doctest::Approx(want).epsilon(1e-12));
    CHECK(est.se < 1e-12);
    CHECK(est.upper - est.lower < 1e-12);
    CHECK(est.lower == doctest::Approx(want).epsilon(1e-12));
    CHECK(est.b_used <= est.b_requested);
  }
}

TEST_CASE("bootstrap reproducibility and replicate accounting") {
  Rng rng(2718);
  const auto cells = CellCounts{5, 4, 10, 6, 8, 3, 30};
  const auto records = testutil::roster_from_cells(
      cells, [&rng](int, std::int64_t) { return rng.normal() + 5.0; });
  const auto tab = tabulate(records, cells.total());
  BootstrapConfig cfg;
  cfg.replicates = 300;
  cfg.seed = 4242;
  const auto a = bootstrap_mean(records, tab.ctx, MeanTarget::Overall, cfg);
  const auto b = bootstrap_mean(records, tab.ctx, MeanTarget::Overall, cfg);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.se == b.se);
  CHECK(a.b_used == b.b_used);
  cfg.seed = 4243;
  const auto c = bootstrap_mean(records, tab.ctx, MeanTarget::Overall, cfg);
  CHECK(a.lower != c.lower);
}

TEST_CASE("bootstrap warns when many replicates are skipped") {
  // a single stream-2-only case: ~37% of resamples lose it
  const auto cells = CellCounts{3, 2, 4, 3, 5, 1, 10};
  const auto records = testutil::roster_from_cells(
      cells, [](int cell, std::int64_t i) {
        return static_cast<double>(cell * 10 + i);
      });
  const auto tab = tabulate(records, cells.total());
  BootstrapConfig cfg;
  cfg.replicates = 400;
  cfg.seed = 17;
  const auto est = bootstrap_mean(records, tab.ctx, MeanTarget::Cases, cfg);
  CHECK(est.b_used < est.b_requested);
  CHECK(!est.warnings.empty());
}

TEST_CASE("replicates respect the subgroup total floor") {
  Rng rng(909);
  const auto cells = CellCounts{4, 3, 6, 5, 4, 2, 20};
  const auto records = testutil::roster_from_cells(
      cells, [&rng](int, std::int64_t) { return rng.next_double(); });
  const auto tab = tabulate(records, cells.total());
  const auto plan = BootstrapPlan::build(records, tab.ctx);
  REQUIRE(plan.n_c_cases == cells.cases_observed());

  const auto m = static_cast<std::uint32_t>(plan.roster.size());
  std::vector<std::uint32_t> idx(m);
  Rng draw(5544);
  int floored_seen = 0;
  for (int b = 0; b < 500; ++b) {
    for (auto& i : idx) i = static_cast<std::uint32_t>(draw.next_below(m));
    std::int64_t case_s1 = 0, case_01 = 0, full_01 = 0;
    double sx_s1 = 0.0, sx_01 = 0.0;
    for (const auto i : idx) {
      const bool cs = plan.roster.is_case[i] != 0;
      if (plan.roster.s1[i]) {
        if (cs) {
          ++case_s1;
          sx_s1 += plan.roster.x[i];
        }
      } else {
        ++full_01;
        if (cs) {
          ++case_01;
          sx_01 += plan.roster.x[i];
        }
      }
    }
    const auto rep = anchor_replicate(plan, idx);
    if (!rep.cases) {
      CHECK(case_01 == 0);
      continue;
    }
    // the replicate must be built on the floored subgroup total
    const double ratio = static_cast<double>(full_01 + plan.roster.n7) /
                         static_cast<double>(full_01);
    const double raw = static_cast<double>(case_s1) +
                       static_cast<double>(case_01) * ratio;
    const double total = std::max(raw, static_cast<double>(plan.n_c_cases));
    if (total > raw) ++floored_seen;
    const double p1 = static_cast<double>(case_s1) / total;
    const double expect =
        (case_s1 > 0 ? sx_s1 / static_cast<double>(case_s1) * p1 : 0.0) +
        sx_01 / static_cast<double>(case_01) * (1.0 - p1);
    CHECK(*rep.cases == doctest::Approx(expect).epsilon(1e-12));
    if (rep.cases && rep.noncases)
      CHECK(*rep.difference ==
            doctest::Approx(*rep.cases - *rep.noncases).epsilon(1e-12));
  }
  CHECK(floored_seen > 0); // the floor must actually bind somewhere
}

TEST_CASE("identity resample reproduces the plain estimators") {
  Rng rng(321);
  const auto cells = CellCounts{4, 3, 6, 5, 4, 2, 20};
  const auto records = testutil::roster_from_cells(
      cells, [&rng](int, std::int64_t) { return rng.normal() * 2.0 + 1.0; });
  const auto tab = tabulate(records, cells.total());
  const auto plan = BootstrapPlan::build(records, tab.ctx);
  REQUIRE(plan.have_fpc);

  std::vector<std::uint32_t> idx(plan.roster.size());
  std::iota(idx.begin(), idx.end(), 0u);
  const auto rep = anchor_replicate(plan, idx);
  // the scale-shift is an identity on the original cell means, so the
  // replicate must equal the direct estimator
  REQUIRE(rep.overall.has_value());
  CHECK(*rep.overall == doctest::Approx(mean_overall(records, tab.ctx)).epsilon(1e-12));
  REQUIRE(rep.cases.has_value());
  CHECK(*rep.cases ==
        doctest::Approx(mean_subgroup(records, tab.ctx, MeanTarget::Cases)).epsilon(1e-12));
}

TEST_CASE("identity resample with unit FPC factors is exactly untransformed") {
  // cells sized so every FPC factor caps at 1
  const CellCounts cells{1, 1, 1, 1, 1, 1, 2};
  Rng rng(77);
  const auto records = testutil::roster_from_cells(
      cells, [&rng](int, std::int64_t) { return rng.next_double() * 4.0; });
  const auto tab = tabulate(records, cells.total());
  const auto plan = BootstrapPlan::build(records, tab.ctx);
  REQUIRE(plan.have_fpc);
  CHECK(plan.a11 == 1.0);
  CHECK(plan.a10 == 1.0);
  CHECK(plan.a01 == 1.0);
  CHECK(plan.b11 == 0.0);

  std::vector<std::uint32_t> idx(plan.roster.size());
  std::iota(idx.begin(), idx.end(), 0u);
  const auto rep = anchor_replicate(plan, idx);
  REQUIRE(rep.overall.has_value());
  CHECK(*rep.overall == doctest::Approx(mean_overall(records, tab.ctx)).epsilon(1e-14));
}

TEST_CASE("bootstrap SE agrees with the exhaustive resample oracle at micro scale") {
  // Four captured records: all 256 ordered resamples enumerate the exact
  // bootstrap distribution; the B=200 estimate must land within 25%.
  std::vector<IndividualRecord> records;
  records.push_back({"a", true, false, true, 4.0});
  records.push_back({"b", true, false, true, 7.0});
  records.push_back({"c", false, true, true, 2.0});
  records.push_back({"d", false, true, false, 1.0});
  records.push_back({"e", false, false, std::nullopt, std::nullopt});
  records.push_back({"f", false, false, std::nullopt, std::nullopt});
  const auto tab = tabulate(records, 6);

  const auto plan = BootstrapPlan::build(records, tab.ctx);
  std::vector<double> exact;
  std::array<std::uint32_t, 4> idx{};
  for (std::uint32_t i0 = 0; i0 < 4; ++i0)
    for (std::uint32_t i1 = 0; i1 < 4; ++i1)
      for (std::uint32_t i2 = 0; i2 < 4; ++i2)
        for (std::uint32_t i3 = 0; i3 < 4; ++i3) {
          idx = {i0, i1, i2, i3};
          const auto rep = anchor_replicate(plan, idx);
          if (rep.cases) exact.push_back(*rep.cases);
        }
  REQUIRE(exact.size() > 100);
  const double exact_sd = sample_sd(exact);
  REQUIRE(exact_sd > 0.0);

  BootstrapConfig cfg;
  cfg.replicates = 200;
  cfg.seed = 31337;
  const auto est = bootstrap_mean(records, tab.ctx, MeanTarget::Cases, cfg);
  CHECK(std::fabs(est.se - exact_sd) < 0.25 * exact_sd);
}

TEST_CASE("overall bootstrap requires the FPC triple") {
  // stream-2-only cell has a single member: fpc01 undefined
  const auto cells = CellCounts{2, 2, 3, 3, 1, 0, 9};
  const auto records = testutil::roster_from_cells(
      cells, [](int, std::int64_t) { return 1.0; });
  const auto tab = tabulate(records, cells.total());
  BootstrapConfig cfg;
  cfg.replicates = 50;
  CHECK_THROWS_AS(bootstrap_mean(records, tab.ctx, MeanTarget::Overall, cfg),
                  PreconditionError);
}
