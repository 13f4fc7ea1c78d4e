#include "repsel/generators.hpp"

#include "repsel/errors.hpp"
#include "repsel/random.hpp"

#include <boost/random/gamma_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repsel {
namespace {

void require_mass(const Rational& mass, const char* name) {
  if (sgn(mass) < 0 || mass > 1) throw InvalidSpec(std::string(name) + " must lie in [0, 1]");
}

SquareMatrix block_polarized(std::size_t n, const family::BlockPolarized& spec) {
  require_mass(spec.intra_mass, "intra_mass");
  if (spec.blocks.empty() || std::find(spec.blocks.begin(), spec.blocks.end(), 0) != spec.blocks.end()) {
    throw InvalidSpec("block sizes must be positive");
  }
  if (std::accumulate(spec.blocks.begin(), spec.blocks.end(), std::size_t{0}) != n) {
    throw InvalidSpec("block sizes must sum to n");
  }

  SquareMatrix m(n);
  std::size_t start = 0;
  for (auto size : spec.blocks) {
    const std::size_t outsiders = n - size;
    if (outsiders == 0 && spec.intra_mass != 1) throw InvalidSpec("a single block must keep all mass (intra_mass = 1)");
    const Rational inside = spec.intra_mass / Rational(size);
    const Rational outside = outsiders == 0 ? Rational(0) : Rational(1 - spec.intra_mass) / Rational(outsiders);
    for (std::size_t i = start; i < start + size; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = (j >= start && j < start + size) ? inside : outside;
      }
    }
    start += size;
  }
  return m;
}

SquareMatrix power_seeking(std::size_t n, const family::PowerSeeking& spec) {
  require_mass(spec.trace_mass, "trace_mass");
  if (n == 1 && spec.trace_mass != 1) throw InvalidSpec("a single agent must keep all mass (trace_mass = 1)");
  SquareMatrix m(n);
  const Rational off = n == 1 ? Rational(0) : Rational(1 - spec.trace_mass) / Rational(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = i == j ? spec.trace_mass : off;
  }
  return m;
}

/// Rounds a probability vector to integer counts summing to `total`
/// (largest remainder, lower index first on ties).
std::vector<std::uint64_t> apportion(const std::vector<double>& p, std::uint64_t total) {
  std::vector<std::uint64_t> counts(p.size());
  std::vector<double> remainder(p.size());
  std::uint64_t assigned = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double scaled = p[j] * static_cast<double>(total);
    counts[j] = static_cast<std::uint64_t>(std::floor(scaled));
    remainder[j] = scaled - std::floor(scaled);
    assigned += counts[j];
  }
  // Floating error can overshoot by a unit or two.
  while (assigned > total) {
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; assigned < total; r = (r + 1) % order.size()) {
    ++counts[order[r]];
    ++assigned;
  }
  return counts;
}

SquareMatrix random_stochastic(std::size_t n, std::uint64_t seed, const family::RandomStochastic& spec) {
  if (sgn(spec.concentration) <= 0) throw InvalidSpec("concentration must be positive");
  if (spec.denominator_cap == 0) throw InvalidSpec("denominator cap must be positive");
  const std::size_t support = spec.support.value_or(n);
  if (support < 1 || support > n) throw InvalidSpec("row support must lie in [1, n]");

  const double alpha = spec.concentration.get_d();
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));

    std::vector<std::size_t> columns(n);
    std::iota(columns.begin(), columns.end(), std::size_t{0});
    for (std::size_t s = 0; s < support; ++s) {
      std::swap(columns[s], columns[s + uniform_below(rng, n - s)]);
    }
    columns.resize(support);
    std::sort(columns.begin(), columns.end());

    boost::random::gamma_distribution<double> draw(alpha, 1.0);
    std::vector<double> p(support);
    double total = 0.0;
    for (auto& x : p) {
      x = draw(rng);
      total += x;
    }
    if (!(total > 0.0)) {
      std::fill(p.begin(), p.end(), 0.0);
      p.front() = 1.0;
      total = 1.0;
    }
    for (auto& x : p) x /= total;

    const auto counts = apportion(p, spec.denominator_cap);
    for (std::size_t s = 0; s < support; ++s) {
      Rational entry(Integer(std::to_string(counts[s])), Integer(std::to_string(spec.denominator_cap)));
      entry.canonicalize();
      m(i, columns[s]) = entry;
    }
  }
  return m;
}

}  // namespace

RepresentationMatrix running_example() {
  auto r = [](long p, long q) {
    Rational value(p, q);
    value.canonicalize();
    return value;
  };
  return RepresentationMatrix::validate(
      {
          {r(1, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)},
          {r(2, 3), r(1, 3), r(0, 1), r(0, 1), r(0, 1)},
          {r(0, 1), r(1, 3), r(2, 3), r(0, 1), r(0, 1)},
          {r(0, 1), r(0, 1), r(2, 5), r(1, 5), r(2, 5)},
          {r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(1, 1)},
      },
      {"A", "B", "C", "D", "E"});
}

RepresentationMatrix generate(const FamilySpec& spec) {
  const std::size_t n = spec.n;
  if (std::holds_alternative<family::RunningExample>(spec.family)) {
    if (n != 5) throw InvalidSpec("the running example has exactly 5 agents");
    return running_example();
  }
  if (n == 0) throw InvalidSpec("n must be positive");

  SquareMatrix m = std::visit(
      [&](const auto& f) -> SquareMatrix {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Identity>) {
          return SquareMatrix::identity(n);
        } else if constexpr (std::is_same_v<F, family::Uniform>) {
          SquareMatrix u(n);
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) u(i, j) = Rational(1, n);
          }
          return u;
        } else if constexpr (std::is_same_v<F, family::BlockPolarized>) {
          return block_polarized(n, f);
        } else if constexpr (std::is_same_v<F, family::PowerSeeking>) {
          return power_seeking(n, f);
        } else if constexpr (std::is_same_v<F, family::RandomStochastic>) {
          return random_stochastic(n, spec.seed, f);
        } else {
          return SquareMatrix{};
        }
      },
      spec.family);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& e : m.row(i)) e.canonicalize();
  }
  return RepresentationMatrix::validate(std::move(m));
}

MatrixStats matrix_stats(const RepresentationMatrix& gamma) {
  const std::size_t n = gamma.n();
  MatrixStats stats;
  for (std::size_t i = 0; i < n; ++i) stats.trace += gamma(i, i);

  // Exact rank by Gaussian elimination over the rationals.
  SquareMatrix work = gamma.entries();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && sgn(work(pivot, col)) == 0) ++pivot;
    if (pivot == n) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < n; ++j) std::swap(work(pivot, j), work(rank, j));
    }
    for (std::size_t r = rank + 1; r < n; ++r) {
      if (sgn(work(r, col)) == 0) continue;
      const Rational factor = work(r, col) / work(rank, col);
      for (std::size_t j = col; j < n; ++j) work(r, j) -= factor * work(rank, j);
    }
    ++rank;
  }
  stats.rank = rank;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(gamma(i, j)) > 0) {
        auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(stats.components.size());
      stats.components.emplace_back();
    }
    stats.components[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return stats;
}

}  // namespace repsel
