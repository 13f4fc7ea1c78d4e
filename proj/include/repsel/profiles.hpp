#pragma once

#include "repsel/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace repsel {

/// Choice value for an agent that casts no vote.
inline constexpr std::int32_t kAbstain = -1;

inline constexpr std::uint64_t kDefaultGuard = 10'000'000;

struct EnumerationOptions {
  std::uint64_t guard = kDefaultGuard;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// One realization of the product distribution: choices[i] is the agent i
/// votes for (or kAbstain).
struct VoteProfile {
  std::vector<std::int32_t> choices;
  Rational probability;
};

/// The product of row supports of a (raw or projected) matrix. Probabilities
/// are kept as integer numerators over a shared denominator so that the hot
/// enumeration loop multiplies integers only.
class ProfileSpace {
 public:
  struct Option {
    std::int32_t target;
    Integer numerator;   // relative to the row denominator
    double cumulative;   // inclusive cumulative probability, for sampling
  };

  explicit ProfileSpace(const RepresentationMatrix& gamma);
  explicit ProfileSpace(const ProjectedMatrix& projected);

  std::size_t agents() const { return rows_.size(); }
  std::span<const Option> options(std::size_t agent) const { return rows_[agent]; }

  /// Number of profiles; may exceed 64 bits.
  const Integer& size() const { return size_; }
  /// Probability of a profile = product of option numerators / denominator().
  const Integer& denominator() const { return denominator_; }

  /// Throws StateSpaceTooLarge when size() exceeds guard.
  std::uint64_t checked_size(std::uint64_t guard) const;

  /// Visits profiles with mixed-radix index in [begin, end), the last agent
  /// varying fastest. visitor(std::span<const std::int32_t>, const Integer& numerator).
  template <class Visitor>
  void visit(std::uint64_t begin, std::uint64_t end, Visitor&& visitor) const;

  /// Draws one choice for `agent` given a uniform variate in [0, 1).
  std::int32_t sample(std::size_t agent, double uniform) const;

 private:
  void build(const SquareMatrix& entries);

  std::vector<std::vector<Option>> rows_;
  Integer size_;
  Integer denominator_;
};

/// Calls `sink` once per profile with its exact probability. Intended for
/// inspection and tests; mechanisms use ProfileSpace::visit directly.
void enumerate_profiles(const ProfileSpace& space, const std::function<void(const VoteProfile&)>& sink,
                        std::uint64_t guard = kDefaultGuard);
std::vector<VoteProfile> collect_profiles(const ProfileSpace& space, std::uint64_t guard = kDefaultGuard);

/// Splits the profile space into contiguous index ranges, accumulates each in
/// its own thread with a fresh accumulator from make(), then merges partials in
/// range order. Exact accumulators make the result independent of the split.
template <class Accumulator, class Make>
Accumulator reduce_profiles(const ProfileSpace& space, const EnumerationOptions& options, Make make);

// ---------------------------------------------------------------------------

template <class Visitor>
void ProfileSpace::visit(std::uint64_t begin, std::uint64_t end, Visitor&& visitor) const {
  const std::size_t n = rows_.size();
  if (begin >= end || n == 0) return;

  std::vector<std::size_t> digit(n);
  std::uint64_t rest = begin;
  for (std::size_t i = n; i-- > 0;) {
    const auto radix = rows_[i].size();
    digit[i] = static_cast<std::size_t>(rest % radix);
    rest /= radix;
  }

  std::vector<std::int32_t> choice(n);
  std::vector<Integer> prefix(n);
  auto refresh_from = [&](std::size_t p) {
    for (std::size_t i = p; i < n; ++i) {
      const Option& opt = rows_[i][digit[i]];
      choice[i] = opt.target;
      if (i == 0) {
        prefix[0] = opt.numerator;
      } else {
        mpz_mul(prefix[i].get_mpz_t(), prefix[i - 1].get_mpz_t(), opt.numerator.get_mpz_t());
      }
    }
  };
  refresh_from(0);

  for (std::uint64_t index = begin;;) {
    visitor(std::span<const std::int32_t>(choice), static_cast<const Integer&>(prefix[n - 1]));
    if (++index == end) break;
    std::size_t p = n - 1;
    while (++digit[p] == rows_[p].size()) {
      digit[p] = 0;
      --p;
    }
    refresh_from(p);
  }
}

template <class Accumulator, class Make>
Accumulator reduce_profiles(const ProfileSpace& space, const EnumerationOptions& options, Make make) {
  const std::uint64_t total = space.checked_size(options.guard);
  unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  // Small spaces are not worth a thread each.
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, total / 4096)));

  std::vector<Accumulator> partial;
  partial.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) partial.push_back(make());

  auto bound = [&](unsigned w) { return total / workers * w + std::min<std::uint64_t>(w, total % workers); };
  if (workers == 1) {
    space.visit(0, total, partial[0]);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] { space.visit(bound(w), bound(w + 1), partial[w]); });
    }
  }
  for (unsigned w = 1; w < workers; ++w) partial[0].merge(std::move(partial[w]));
  return std::move(partial[0]);
}

}  // namespace repsel
