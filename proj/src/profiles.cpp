#include "repsel/profiles.hpp"

#include "repsel/errors.hpp"

namespace repsel {

ProfileSpace::ProfileSpace(const RepresentationMatrix& gamma) { build(gamma.entries()); }

ProfileSpace::ProfileSpace(const ProjectedMatrix& projected) { build(projected.entries); }

void ProfileSpace::build(const SquareMatrix& entries) {
  const std::size_t n = entries.size();
  rows_.assign(n, {});
  size_ = 1;
  denominator_ = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer row_den = 1;
    for (const auto& e : entries.row(i)) {
      if (sgn(e) > 0) mpz_lcm(row_den.get_mpz_t(), row_den.get_mpz_t(), e.get_den_mpz_t());
    }

    Rational running = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& e = entries(i, j);
      if (sgn(e) <= 0) continue;
      running += e;
      rows_[i].push_back(Option{static_cast<std::int32_t>(j), Integer(e.get_num() * (row_den / e.get_den())),
                                running.get_d()});
    }
    if (rows_[i].empty()) {
      rows_[i].push_back(Option{kAbstain, Integer(1), 1.0});
    }
    rows_[i].back().cumulative = 1.0;

    size_ *= static_cast<unsigned long>(rows_[i].size());
    denominator_ *= row_den;
  }
}

std::uint64_t ProfileSpace::checked_size(std::uint64_t guard) const {
  if (size_ > Integer(std::to_string(guard))) throw StateSpaceTooLarge(size_, guard);
  return std::stoull(size_.get_str());
}

std::int32_t ProfileSpace::sample(std::size_t agent, double uniform) const {
  const auto& row = rows_[agent];
  for (const auto& opt : row) {
    if (uniform < opt.cumulative) return opt.target;
  }
  return row.back().target;
}

void enumerate_profiles(const ProfileSpace& space, const std::function<void(const VoteProfile&)>& sink,
                        std::uint64_t guard) {
  const std::uint64_t total = space.checked_size(guard);
  VoteProfile profile;
  space.visit(0, total, [&](std::span<const std::int32_t> choices, const Integer& numerator) {
    profile.choices.assign(choices.begin(), choices.end());
    profile.probability = Rational(numerator, space.denominator());
    profile.probability.canonicalize();
    sink(profile);
  });
}

std::vector<VoteProfile> collect_profiles(const ProfileSpace& space, std::uint64_t guard) {
  std::vector<VoteProfile> out;
  enumerate_profiles(space, [&](const VoteProfile& p) { out.push_back(p); }, guard);
  return out;
}

}  // namespace repsel
