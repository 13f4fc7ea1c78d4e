#pragma once

// Brute-force reference implementations used only by the tests. They share no
// code with the library beyond the Rational type, and favour obviousness over
// speed.

#include "repsel/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using repsel::Rational;
using Grid = std::vector<std::vector<Rational>>;
using Choices = std::vector<int>;

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

/// Recursively walks every combination of positive row entries. Zero rows
/// yield choice -1 with factor 1.
inline void for_each_profile(const Grid& g, const std::function<void(const Choices&, const Rational&)>& f) {
  const std::size_t n = g.size();
  Choices c(n);
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational p) {
    if (i == n) {
      f(c, p);
      return;
    }
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (g[i][j] > 0) {
        any = true;
        c[i] = static_cast<int>(j);
        rec(i + 1, p * g[i][j]);
      }
    }
    if (!any) {
      c[i] = -1;
      rec(i + 1, p);
    }
  };
  rec(0, Rational(1));
}

/// Follows each agent's delegations for at most n steps.
inline std::vector<int> liquid_outcome(const Choices& c) {
  const std::size_t n = c.size();
  std::vector<int> w(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int cur = static_cast<int>(i);
    for (std::size_t step = 0; step <= n; ++step) {
      if (cur < 0) break;
      if (c[cur] == cur) {
        ++w[cur];
        break;
      }
      cur = c[cur];
    }
  }
  return w;
}

inline std::vector<Rational> liquid(const Grid& g) {
  std::vector<Rational> out(g.size());
  for_each_profile(g, [&](const Choices& c, const Rational& p) {
    auto w = liquid_outcome(c);
    for (std::size_t j = 0; j < w.size(); ++j) out[j] += p * w[j];
  });
  return out;
}

/// Candidates vote for themselves; others renormalize over candidate columns
/// (all-zero row when they have no mass there, or uniform if requested).
inline Grid project(const Grid& g, const std::vector<bool>& cand, bool uniform = false) {
  const std::size_t n = g.size();
  Grid out(n, std::vector<Rational>(n));
  long m = std::count(cand.begin(), cand.end(), true);
  for (std::size_t i = 0; i < n; ++i) {
    if (cand[i]) {
      out[i][i] = 1;
      continue;
    }
    Rational mass = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (cand[j]) mass += g[i][j];
    for (std::size_t j = 0; j < n; ++j) {
      if (!cand[j]) continue;
      if (mass > 0) {
        out[i][j] = g[i][j] / mass;
      } else if (uniform) {
        out[i][j] = q(1, m);
      }
    }
  }
  return out;
}

inline std::vector<Rational> fptp(const Grid& g, const std::vector<bool>& cand, bool split, bool uniform = false) {
  const std::size_t n = g.size();
  std::vector<Rational> out(n);
  for_each_profile(project(g, cand, uniform), [&](const Choices& c, const Rational& p) {
    std::vector<int> votes(n, 0);
    for (int x : c)
      if (x >= 0) ++votes[x];
    int top = *std::max_element(votes.begin(), votes.end());
    if (top == 0) return;
    std::vector<std::size_t> tied;
    for (std::size_t j = 0; j < n; ++j)
      if (votes[j] == top) tied.push_back(j);
    if (split) {
      for (auto j : tied) out[j] += p / Rational(static_cast<long>(tied.size()));
    } else {
      out[tied.front()] += p;
    }
  });
  return out;
}

/// Smallest subset size whose weight sum strictly exceeds half the total.
template <class T>
std::size_t coalition(const std::vector<T>& w) {
  const std::size_t n = w.size();
  T total = 0;
  for (const auto& x : w) total += x;
  std::size_t best = n + 1;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    T s = 0;
    std::size_t size = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        s += w[i];
        ++size;
      }
    }
    if (s + s > total) best = std::min(best, size);
  }
  return best;
}

}  // namespace oracle
