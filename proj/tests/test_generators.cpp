#include "helpers.hpp"
#include "repsel/errors.hpp"
#include "repsel/generators.hpp"
#include "repsel/mechanisms.hpp"

#include <doctest.h>

using namespace repsel;
using testing::vec;

TEST_CASE("running example") {
  const auto g = running_example();
  CHECK(g.n() == 5);
  CHECK(g.labels() == std::vector<std::string>{"A", "B", "C", "D", "E"});
  CHECK(RationalVector(g.row(3).begin(), g.row(3).end()) == vec({"0", "0", "2/5", "1/5", "2/5"}));
  CHECK(generate({family::RunningExample{}, 5}) == g);
  CHECK_THROWS_AS(generate({family::RunningExample{}, 4}), InvalidSpec);
}

TEST_CASE("identity and uniform") {
  const auto id = generate({family::Identity{}, 4});
  CHECK(id.entries() == SquareMatrix::identity(4));
  const auto u = generate({family::Uniform{}, 3});
  for (std::size_t i = 0; i < 3; ++i) CHECK(RationalVector(u.row(i).begin(), u.row(i).end()) == vec({"1/3", "1/3", "1/3"}));
  CHECK_THROWS_AS(generate({family::Identity{}, 0}), InvalidSpec);
}

TEST_CASE("block-polarized") {
  const auto g = generate({family::BlockPolarized{{2, 3}, Rational(1)}, 5});
  CHECK(RationalVector(g.row(0).begin(), g.row(0).end()) == vec({"1/2", "1/2", "0", "0", "0"}));
  CHECK(RationalVector(g.row(4).begin(), g.row(4).end()) == vec({"0", "0", "1/3", "1/3", "1/3"}));
  CHECK(matrix_stats(g).components.size() == 2);

  const auto mixed = generate({family::BlockPolarized{{2, 3}, Rational(4, 5)}, 5});
  CHECK(RationalVector(mixed.row(0).begin(), mixed.row(0).end()) == vec({"2/5", "2/5", "1/15", "1/15", "1/15"}));
  CHECK(matrix_stats(mixed).components.size() == 1);

  CHECK_THROWS_AS(generate({family::BlockPolarized{{2, 2}, Rational(1)}, 5}), InvalidSpec);
  CHECK_THROWS_AS(generate({family::BlockPolarized{{0, 5}, Rational(1)}, 5}), InvalidSpec);
  CHECK_THROWS_AS(generate({family::BlockPolarized{{2, 3}, Rational(3, 2)}, 5}), InvalidSpec);
  CHECK_THROWS_AS(generate({family::BlockPolarized{{5}, Rational(1, 2)}, 5}), InvalidSpec);
}

TEST_CASE("power-seeking") {
  CHECK(generate({family::PowerSeeking{Rational(1)}, 4}).entries() == SquareMatrix::identity(4));
  const auto g = generate({family::PowerSeeking{Rational(1, 4)}, 4});
  CHECK(RationalVector(g.row(2).begin(), g.row(2).end()) == vec({"1/4", "1/4", "1/4", "1/4"}));
  CHECK(matrix_stats(g).trace == 1);
  CHECK_THROWS_AS(generate({family::PowerSeeking{Rational(-1, 4)}, 4}), InvalidSpec);
  CHECK_THROWS_AS(generate({family::PowerSeeking{Rational(1, 2)}, 1}), InvalidSpec);
}

TEST_CASE("matrix statistics") {
  const auto ex = matrix_stats(running_example());
  CHECK(ex.trace == Rational(16, 5));
  CHECK(ex.components.size() == 1);
  const auto id = matrix_stats(generate({family::Identity{}, 5}));
  CHECK(id.rank == 5);
  CHECK(id.components.size() == 5);
  CHECK(matrix_stats(generate({family::Uniform{}, 4})).rank == 1);
  const auto blocks = matrix_stats(generate({family::BlockPolarized{{1, 2, 3}, Rational(1)}, 6}));
  CHECK(blocks.rank == 3);
  CHECK(blocks.components == std::vector<std::vector<AgentIndex>>{{0}, {1, 2}, {3, 4, 5}});
}

TEST_CASE("random stochastic matrices") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 1 + seed % 8;
    family::RandomStochastic spec;
    spec.support = std::min<std::size_t>(3, n);
    spec.denominator_cap = 1000;
    spec.concentration = Rational(1 + seed % 3, 2);
    const auto a = generate({spec, n, seed});
    const auto b = generate({spec, n, seed});
    CHECK(a == b);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t nonzero = 0;
      for (const auto& x : a.row(i)) {
        if (x != 0) ++nonzero;
        CHECK(1000 % x.get_den() == 0);
      }
      CHECK(nonzero >= 1);
      CHECK(nonzero <= 3);
    }
  }
  const family::RandomStochastic spec;
  CHECK_FALSE(generate({spec, 6, 1}) == generate({spec, 6, 2}));

  family::RandomStochastic bad;
  bad.concentration = 0;
  CHECK_THROWS_AS(generate({bad, 4, 0}), InvalidSpec);
  bad = {};
  bad.support = 5;
  CHECK_THROWS_AS(generate({bad, 4, 0}), InvalidSpec);
  bad = {};
  bad.denominator_cap = 0;
  CHECK_THROWS_AS(generate({bad, 4, 0}), InvalidSpec);
}

TEST_CASE("disconnected blocks keep their weight") {
  const std::vector<std::vector<std::size_t>> layouts{{2, 3}, {1, 4}, {2, 2, 2}, {3, 3}};
  for (const auto& blocks : layouts) {
    std::size_t n = 0;
    for (auto b : blocks) n += b;
    const auto g = generate({family::BlockPolarized{blocks, Rational(1)}, n});
    const auto liquid = liquid_expected_weights(g).exact;
    const auto proxy = proxy_expected_weights(g, CandidateSet::from({0, n - 1}, n)).exact;
    std::size_t start = 0;
    for (auto size : blocks) {
      Rational liquid_mass = 0;
      for (std::size_t i = start; i < start + size; ++i) liquid_mass += liquid[i];
      // A block loses its votes only to delegation cycles, never to another block.
      CHECK(liquid_mass <= Rational(long(size)));
      const auto alone = generate({family::Uniform{}, size});
      Rational alone_mass = 0;
      for (const auto& x : liquid_expected_weights(alone).exact) alone_mass += x;
      CHECK(liquid_mass == alone_mass);
      start += size;
    }
    Rational proxy_total = 0;
    for (const auto& x : proxy) proxy_total += x;
    CHECK(proxy_total == Rational(long(blocks.front() + blocks.back())));
  }
}
