#include "helpers.hpp"
#include "repsel/axioms.hpp"
#include "repsel/errors.hpp"
#include "repsel/generators.hpp"

#include <doctest.h>

#include <random>

using namespace repsel;
using testing::vec;

namespace {

MechanismSpec make(MechanismKind kind, std::optional<CandidateSet> c = std::nullopt, std::optional<std::size_t> k = {}) {
  MechanismSpec spec;
  spec.kind = kind;
  spec.candidates = std::move(c);
  spec.k = k;
  return spec;
}

CandidateSet abce() { return CandidateSet::from({0, 1, 2, 4}, 5); }
CandidateSet bcde() { return CandidateSet::from({1, 2, 3, 4}, 5); }

}  // namespace

// Proportionality --------------------------------------------------------------------

TEST_CASE("proportionality on the running example") {
  const auto g = running_example();
  const auto direct = proportionality_diff(g, make(MechanismKind::DirectDemocracy));
  CHECK(direct.diff == Rational(4, 25));
  CHECK(direct.witness == 3);
  CHECK(truncate_2dp(direct.diff) == "0.16");

  const auto liquid = proportionality_diff(g, make(MechanismKind::LiquidDemocracy));
  CHECK(liquid.diff == Rational(14, 225));
  CHECK(liquid.witness == 0);
  CHECK(liquid.per_agent_deviation == vec({"14/225", "8/225", "6/225", "0", "0"}));
  CHECK(truncate_2dp(liquid.diff) == "0.06");

  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(proportionality_diff(g, make(MechanismKind::Sortition, {}, k)).diff == Rational(4, 25));
  }

  const auto fptp = proportionality_diff(g, make(MechanismKind::FirstPastThePost, abce(), 1));
  CHECK(fptp.diff == Rational(1, 3));
  CHECK(fptp.witness == 0);
}

TEST_CASE("proportionality is scale invariant and zero for proportional weights") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = testing::random_matrix(5, seed, 3);
    const auto shares = expected_vote_share(g);
    const auto w = liquid_expected_weights(g).exact;
    const auto base = proportionality_diff(shares, w);
    RationalVector scaled;
    for (const auto& x : w) scaled.push_back(x * Rational(7, 3));
    const auto again = proportionality_diff(shares, scaled);
    CHECK(again.diff == base.diff);
    CHECK(again.per_agent_deviation == base.per_agent_deviation);
    CHECK(base.diff >= 0);
    CHECK(base.diff <= 1);

    CHECK(proportionality_diff(shares, shares).diff == 0);
  }
  CHECK_THROWS_AS(proportionality_diff(vec({"1", "1"}), vec({"0", "0"})), ZeroWeightVector);
}

// Sweeps ---------------------------------------------------------------------------------

TEST_CASE("sweep over 4-subsets of the running example") {
  const auto g = running_example();
  const auto fptp = sweep_epsilon_bounds(g, make(MechanismKind::FirstPastThePost, abce(), 1), {4, true});
  CHECK(fptp.min_diff == Rational(1, 3));
  CHECK(fptp.max_diff == Rational(13, 15));
  CHECK(fptp.min_witness == abce());
  CHECK(fptp.max_witness == bcde());
  CHECK(fptp.evaluated == 5);
  CHECK(fptp.skipped == 0);

  const auto proxy = sweep_epsilon_bounds(g, make(MechanismKind::ProxyVoting, abce()), {4, true});
  CHECK(proxy.min_diff == Rational(2, 15));
  CHECK(proxy.max_diff == Rational(1, 3));
  CHECK(proxy.min_witness == abce());
  CHECK(proxy.max_witness == bcde());
}

TEST_CASE("equal-split ties push the fptp sweep below one third") {
  auto spec = make(MechanismKind::FirstPastThePost, abce(), 1);
  spec.tie_rule = TieRule::EqualSplit;
  const auto r = sweep_epsilon_bounds(running_example(), spec, {4, true});
  CHECK(r.min_diff < Rational(1, 3));
}

TEST_CASE("sweep witnesses reproduce their extremes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 3 + seed % 3;
    const auto g = testing::random_matrix(n, seed + 40, 3);
    for (auto kind : {MechanismKind::FirstPastThePost, MechanismKind::ProxyVoting}) {
      for (std::optional<std::size_t> size : {std::optional<std::size_t>{}, std::optional<std::size_t>{n - 1}}) {
        auto spec = make(kind, CandidateSet::all(n));
        const auto r = sweep_epsilon_bounds(g, spec, {size, true});
        CHECK(r.min_diff <= r.max_diff);
        spec.candidates = r.min_witness;
        CHECK(proportionality_diff(g, spec).diff == r.min_diff);
        spec.candidates = r.max_witness;
        CHECK(proportionality_diff(g, spec).diff == r.max_diff);
        if (size) CHECK(r.min_witness.size() == *size);
      }
    }
  }
}

TEST_CASE("sweep domains") {
  const auto g = running_example();
  const auto whole = sweep_epsilon_bounds(g, make(MechanismKind::ProxyVoting, abce()), {5, true});
  CHECK(whole.evaluated == 1);
  CHECK(whole.min_diff == whole.max_diff);
  CHECK(whole.min_diff == proportionality_diff(g, make(MechanismKind::ProxyVoting, CandidateSet::all(5))).diff);

  const auto all = sweep_epsilon_bounds(g, make(MechanismKind::ProxyVoting, abce()), {std::nullopt, true});
  CHECK(all.evaluated == 30);

  CHECK_THROWS_AS(sweep_epsilon_bounds(g, make(MechanismKind::ProxyVoting, abce()), {0, true}), EmptyDomain);
  CHECK_THROWS_AS(sweep_epsilon_bounds(g, make(MechanismKind::ProxyVoting, abce()), {6, true}), EmptyDomain);
  const auto single = generate({family::Identity{}, 1});
  CHECK_THROWS_AS(sweep_epsilon_bounds(single, make(MechanismKind::ProxyVoting, CandidateSet::all(1)), {}),
                  EmptyDomain);
  CHECK_THROWS_AS(sweep_epsilon_bounds(g, make(MechanismKind::LiquidDemocracy), {4, true}), InvalidSpec);

  CHECK(candidate_sets_of_size(5, 4).size() == 5);
  CHECK(candidate_sets_of_size(6, 3).size() == 20);
  CHECK(candidate_sets_of_size(5, 4).front() == CandidateSet::from({0, 1, 2, 3}, 5));
  CHECK(candidate_sets_of_size(5, 4).back() == bcde());
}

// Diversity and faithfulness --------------------------------------------------------------

TEST_CASE("diversity") {
  const auto g = running_example();
  CHECK(check_diversity(g, make(MechanismKind::DirectDemocracy)).holds());
  CHECK(check_diversity(g, make(MechanismKind::Sortition, {}, 2)).holds());

  const auto fptp = check_diversity(g, make(MechanismKind::FirstPastThePost, abce(), 1));
  CHECK(fptp.verdict == Verdict::Violated);
  REQUIRE(fptp.violations.size() == 2);
  CHECK(fptp.violations[0].agents == std::vector<AgentIndex>{0});
  CHECK(fptp.violations[1].agents == std::vector<AgentIndex>{1});

  CHECK(check_diversity(g, make(MechanismKind::ProxyVoting, abce())).holds());
  CHECK(check_diversity(g, make(MechanismKind::ProxyVoting, abce()), ShareBasis::Projected).holds());
  CHECK(check_diversity(g, make(MechanismKind::FirstPastThePost, abce(), 1), ShareBasis::Projected).verdict ==
        Verdict::Violated);
}

TEST_CASE("faithfulness") {
  const auto g = running_example();
  for (std::size_t k = 1; k <= 5; ++k) CHECK(check_faithfulness(g, make(MechanismKind::Sortition, {}, k)).holds());
  CHECK(check_faithfulness(g, make(MechanismKind::DirectDemocracy)).holds());
  CHECK(check_faithfulness(g, make(MechanismKind::LiquidDemocracy)).holds());

  const auto fptp = check_faithfulness(g, make(MechanismKind::FirstPastThePost, abce(), 1));
  CHECK(fptp.verdict == Verdict::Violated);
  bool found_ac = false;
  for (const auto& v : fptp.violations) found_ac = found_ac || v.agents == std::vector<AgentIndex>{0, 2};
  CHECK(found_ac);
}

TEST_CASE("faithfulness never fails for share-monotone mechanisms") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const auto g = testing::random_matrix(n, seed + 300, n);
    CHECK(check_faithfulness(g, make(MechanismKind::DirectDemocracy)).holds());
    CHECK(check_faithfulness(g, make(MechanismKind::Sortition, {}, 1 + seed % n)).holds());
    CHECK(check_faithfulness(g, make(MechanismKind::ProxyVoting, CandidateSet::all(n))).holds());
  }
}

// Monotonicity -----------------------------------------------------------------------------

TEST_CASE("monotonicity pair") {
  const auto g = running_example();
  for (auto kind : {MechanismKind::DirectDemocracy, MechanismKind::LiquidDemocracy}) {
    CHECK(check_monotonicity_pair(g, g, 2, make(kind)).verdict == Verdict::Undefined);
  }

  // Move half of D's vote onto C: C rises, nobody else rises.
  SquareMatrix moved = g.entries();
  moved(3, 2) = Rational(7, 10);
  moved(3, 3) = Rational(1, 10);
  moved(3, 4) = Rational(1, 5);
  const auto after = RepresentationMatrix::validate(moved, g.labels());
  CHECK(check_monotonicity_pair(g, after, 2, make(MechanismKind::DirectDemocracy)).holds());
  CHECK(check_monotonicity_pair(g, after, 2, make(MechanismKind::ProxyVoting, CandidateSet::all(5))).holds());
  CHECK(check_monotonicity_pair(g, after, 2, make(MechanismKind::LiquidDemocracy)).holds());
  // Premise fails for E, whose share falls.
  CHECK(check_monotonicity_pair(g, after, 4, make(MechanismKind::DirectDemocracy)).verdict == Verdict::Undefined);

  CHECK_THROWS_AS(
      check_monotonicity_pair(g, generate({family::Identity{}, 4}), 0, make(MechanismKind::DirectDemocracy)),
      DimensionMismatch);
}

TEST_CASE("monotonicity premise requires only the agent to rise") {
  const auto before = RepresentationMatrix::validate(
      std::vector<RationalVector>{vec({"1", "0", "0"}), vec({"0", "0", "1"}), vec({"0", "0", "1"})});
  const auto after = RepresentationMatrix::validate(
      std::vector<RationalVector>{vec({"1", "0", "0"}), vec({"1/2", "1/2", "0"}), vec({"0", "0", "1"})});
  // B rises but so does A.
  CHECK(check_monotonicity_pair(before, after, 1, make(MechanismKind::FirstPastThePost, CandidateSet::all(3), 1))
            .verdict == Verdict::Undefined);
}

TEST_CASE("counterexample search") {
  MonotonicitySearch search;
  search.n = 5;
  search.trials = 300;
  search.seed = 1;

  search.kind = MechanismKind::DirectDemocracy;
  CHECK_FALSE(search_monotonicity_counterexample(search).has_value());

  search.kind = MechanismKind::ProxyVoting;
  search.candidate_size = 5;
  CHECK_FALSE(search_monotonicity_counterexample(search).has_value());

  search.kind = MechanismKind::Sortition;
  search.candidate_size.reset();
  CHECK_FALSE(search_monotonicity_counterexample(search).has_value());
}

TEST_CASE("fptp counterexample search is reproducible") {
  MonotonicitySearch search;
  search.kind = MechanismKind::FirstPastThePost;
  search.n = 5;
  search.trials = 10'000;
  search.seed = 2024;
  search.workers = 1;
  // Shifting mass onto j never lowers j's projected vote probability in any
  // row, so this search is expected to come back empty.
  CHECK_FALSE(search_monotonicity_counterexample(search).has_value());
  search.workers = 3;
  CHECK_FALSE(search_monotonicity_counterexample(search).has_value());
}

TEST_CASE("fptp can violate monotonicity") {
  // B's share rises from 2 to 21/10, but Y now abstains and Z leans to A, so
  // the lexicographic tie-break hands the seat to A most of the time.
  const auto before = RepresentationMatrix::validate(
      std::vector<RationalVector>{vec({"1", "0", "0", "0", "0"}), vec({"0", "1", "0", "0", "0"}),
                                  vec({"0", "1/2", "0", "1/2", "0"}), vec({"1/2", "0", "1/2", "0", "0"}),
                                  vec({"0", "1/2", "0", "1/2", "0"})});
  const auto after = RepresentationMatrix::validate(
      std::vector<RationalVector>{vec({"1", "0", "0", "0", "0"}), vec({"0", "1", "0", "0", "0"}),
                                  vec({"0", "1", "0", "0", "0"}), vec({"0", "0", "1/2", "1/2", "0"}),
                                  vec({"1/2", "1/10", "0", "2/5", "0"})});
  const auto ab = CandidateSet::from({0, 1}, 5);
  const std::vector<bool> mask{true, true, false, false, false};
  CHECK(oracle::fptp(testing::grid(before), mask, false)[1] == 1);
  CHECK(oracle::fptp(testing::grid(after), mask, false)[1] == Rational(1, 6));

  const auto report = check_monotonicity_pair(before, after, 1, make(MechanismKind::FirstPastThePost, ab, 1));
  CHECK(report.verdict == Verdict::Violated);
  CHECK(report.violations.size() == 1);
  CHECK(check_monotonicity_pair(before, after, 1, make(MechanismKind::ProxyVoting, ab)).verdict ==
        Verdict::Violated);
  CHECK(check_monotonicity_pair(before, after, 1, make(MechanismKind::DirectDemocracy)).holds());
}

// Effectiveness ------------------------------------------------------------------------------

TEST_CASE("min_majority_coalition") {
  CHECK(min_majority_coalition(vec({"1", "1", "1", "1", "1"})) == 3);
  CHECK(min_majority_coalition(vec({"0", "0", "1", "0", "0"})) == 1);
  CHECK(min_majority_coalition(vec({"1", "1", "2", "0", "1"})) == 2);
  CHECK(oracle::coalition(vec({"1", "1", "2", "0", "1"})) == 2);
  CHECK(min_majority_coalition(vec({"1", "1"})) == 2);
  CHECK_THROWS_AS(min_majority_coalition(vec({"0", "0"})), ZeroTotalWeight);
}

TEST_CASE("min_majority_coalition matches exhaustive search") {
  std::mt19937_64 rng(7);
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t n = 1 + rng() % 10;
    std::vector<std::uint32_t> ints(n);
    RationalVector rats(n);
    for (std::size_t i = 0; i < n; ++i) {
      ints[i] = static_cast<std::uint32_t>(rng() % 6);
      rats[i] = Rational(static_cast<long>(rng() % 20), static_cast<long>(1 + rng() % 7));
      rats[i].canonicalize();
    }
    ints[0] += 1;
    rats[0] += 1;
    CHECK(min_majority_coalition(std::span<const std::uint32_t>(ints)) == oracle::coalition(ints));
    CHECK(min_majority_coalition(rats) == oracle::coalition(rats));
  }
}

TEST_CASE("gamma effectiveness") {
  const auto g = running_example();
  const auto direct = gamma_effectiveness(g, make(MechanismKind::DirectDemocracy));
  CHECK(direct.expected_gamma == Rational(3));
  CHECK(direct.distribution == std::map<std::size_t, Rational>{{3, Rational(1)}});

  const auto fptp = gamma_effectiveness(g, make(MechanismKind::FirstPastThePost, abce(), 1));
  CHECK(fptp.expected_gamma == Rational(1));
  CHECK(fptp.undefined_mass == 0);

  const auto proxy = gamma_effectiveness(g, make(MechanismKind::ProxyVoting, abce()));
  CHECK(proxy.expected_gamma == Rational(2));
  CHECK(proxy.distribution == std::map<std::size_t, Rational>{{2, Rational(1)}});
  CHECK(proxy.gamma_of_expectation == 2u);

  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(gamma_effectiveness(g, make(MechanismKind::Sortition, {}, k)).expected_gamma == Rational(long(k / 2 + 1)));
  }

  const auto liquid = gamma_effectiveness(g, make(MechanismKind::LiquidDemocracy));
  Rational total = liquid.undefined_mass;
  for (const auto& [size, p] : liquid.distribution) total += p;
  CHECK(total == 1);
}

TEST_CASE("gamma effectiveness tracks lost realizations") {
  // Two agents delegating to each other with probability 1/4 lose everything.
  const auto g = RepresentationMatrix::validate(std::vector<RationalVector>{vec({"1/2", "1/2"}), vec({"1/2", "1/2"})});
  const auto r = gamma_effectiveness(g, make(MechanismKind::LiquidDemocracy));
  CHECK(r.undefined_mass == Rational(1, 4));
  // (1,1) needs both agents, (2,0) and (0,2) need one.
  CHECK(r.distribution == std::map<std::size_t, Rational>{{1, Rational(1, 2)}, {2, Rational(1, 4)}});
  CHECK(r.expected_gamma == Rational(4, 3));
}

TEST_CASE("fptp gamma is one whenever someone votes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_matrix(5, seed + 500, 3);
    const auto r = gamma_effectiveness(g, make(MechanismKind::FirstPastThePost, CandidateSet::from({1, 3}, 5), 1));
    CHECK(r.expected_gamma == Rational(1));
  }
}
