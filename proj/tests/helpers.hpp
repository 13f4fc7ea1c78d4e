#pragma once

#include "oracles.hpp"
#include "repsel/generators.hpp"
#include "repsel/matrix.hpp"

#include <sstream>
#include <string>

namespace testing {

using repsel::Rational;
using repsel::RationalVector;

inline RationalVector vec(std::initializer_list<const char*> items) {
  RationalVector out;
  for (const char* s : items) out.push_back(repsel::parse_rational(s));
  return out;
}

inline oracle::Grid grid(const repsel::RepresentationMatrix& m) {
  oracle::Grid g(m.n());
  for (std::size_t i = 0; i < m.n(); ++i) g[i].assign(m.row(i).begin(), m.row(i).end());
  return g;
}

inline std::vector<bool> mask(const repsel::CandidateSet& c) {
  std::vector<bool> out(c.universe());
  for (auto j : c.members()) out[j] = true;
  return out;
}

inline std::string show(const RationalVector& v) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << repsel::to_string(v[i]);
  s << ")";
  return s.str();
}

/// Random matrix with at most `support` nonzero entries per row.
inline repsel::RepresentationMatrix random_matrix(std::size_t n, std::uint64_t seed, std::size_t support,
                                                  std::uint64_t cap = 1000) {
  repsel::family::RandomStochastic r;
  r.support = std::min(support, n);
  r.denominator_cap = cap;
  return repsel::generate(repsel::FamilySpec{r, n, seed});
}

}  // namespace testing
