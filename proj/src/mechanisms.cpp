#include "repsel/mechanisms.hpp"

#include "repsel/errors.hpp"
#include "repsel/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace repsel {

// Spec ----------------------------------------------------------------------------

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::DirectDemocracy: return "direct";
    case MechanismKind::FirstPastThePost: return "fptp";
    case MechanismKind::ProxyVoting: return "proxy";
    case MechanismKind::LiquidDemocracy: return "liquid";
    case MechanismKind::Sortition: return "sortition";
  }
  return "unknown";
}

MechanismKind parse_mechanism_kind(std::string_view name) {
  for (auto kind : {MechanismKind::DirectDemocracy, MechanismKind::FirstPastThePost, MechanismKind::ProxyVoting,
                    MechanismKind::LiquidDemocracy, MechanismKind::Sortition}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidSpec("unknown mechanism \"" + std::string(name) + "\"");
}

bool MechanismSpec::is_closed() const {
  return kind == MechanismKind::FirstPastThePost || kind == MechanismKind::ProxyVoting;
}

void MechanismSpec::validate(std::size_t n) const {
  if (is_closed()) {
    if (!candidates) throw InvalidSpec(to_string(kind) + " requires a candidate set");
    if (candidates->universe() != n) throw DimensionMismatch(candidates->universe(), n);
  } else if (candidates && candidates->size() != n) {
    throw InvalidSpec(to_string(kind) + " selects from all agents and takes no candidate set");
  }

  if (kind == MechanismKind::Sortition) {
    if (!k) throw InvalidSpec("sortition requires a body size k");
    if (*k < 1 || *k > n) throw InvalidBodySize(*k, n);
  } else if (kind == MechanismKind::FirstPastThePost) {
    if (k && *k != 1) throw InvalidSpec("only single-seat FPTP (k=1) is supported");
  } else if (k) {
    throw InvalidSpec(to_string(kind) + " has no body-size parameter");
  }

  if (monte_carlo && monte_carlo->samples == 0) throw InvalidSpec("Monte Carlo needs at least one sample");
}

CandidateSet MechanismSpec::effective_candidates(std::size_t n) const {
  return candidates ? *candidates : CandidateSet::all(n);
}

std::vector<double> ExpectedWeightVector::approximate() const {
  if (estimate) return estimate->mean;
  std::vector<double> out;
  out.reserve(exact.size());
  for (const auto& w : exact) out.push_back(w.get_d());
  return out;
}

// Per-profile outcomes -------------------------------------------------------------

namespace {

/// Reusable buffers for resolving delegation graphs in a hot loop.
class DelegationResolver {
 public:
  static constexpr std::int32_t kUnknown = -2;
  static constexpr std::int32_t kLost = -1;

  explicit DelegationResolver(std::size_t n) : sink_(n), on_path_(n), weights_(n) { path_.reserve(n); }

  std::span<const std::uint32_t> resolve(std::span<const std::int32_t> choices) {
    const std::size_t n = choices.size();
    std::fill(sink_.begin(), sink_.end(), kUnknown);
    std::fill(weights_.begin(), weights_.end(), 0u);
    lost_ = 0;
    for (std::size_t start = 0; start < n; ++start) {
      if (sink_[start] == kUnknown) walk(choices, start);
      if (sink_[start] >= 0) {
        ++weights_[static_cast<std::size_t>(sink_[start])];
      } else {
        ++lost_;
      }
    }
    return weights_;
  }

  std::size_t lost() const { return lost_; }

 private:
  void walk(std::span<const std::int32_t> choices, std::size_t start) {
    path_.clear();
    std::int32_t result = kLost;
    std::size_t cur = start;
    for (;;) {
      if (sink_[cur] != kUnknown) {
        result = sink_[cur];
        break;
      }
      if (on_path_[cur]) break;  // cycle without a sink
      const std::int32_t next = choices[cur];
      if (next == static_cast<std::int32_t>(cur)) {
        sink_[cur] = next;
        result = next;
        break;
      }
      if (next < 0) break;  // abstention: nothing to follow
      on_path_[cur] = 1;
      path_.push_back(cur);
      cur = static_cast<std::size_t>(next);
    }
    for (auto p : path_) {
      sink_[p] = result;
      on_path_[p] = 0;
    }
  }

  std::vector<std::int32_t> sink_;
  std::vector<char> on_path_;
  std::vector<std::size_t> path_;
  std::vector<std::uint32_t> weights_;
  std::size_t lost_ = 0;
};

/// Vote counts and top-count candidates for one FPTP profile.
class FptpTally {
 public:
  explicit FptpTally(std::size_t n) : counts_(n) { winners_.reserve(n); }

  std::span<const AgentIndex> winners(std::span<const std::int32_t> choices) {
    std::fill(counts_.begin(), counts_.end(), 0u);
    for (auto c : choices) {
      if (c >= 0) ++counts_[static_cast<std::size_t>(c)];
    }
    winners_.clear();
    const auto top = *std::max_element(counts_.begin(), counts_.end());
    if (top == 0) return winners_;
    for (std::size_t j = 0; j < counts_.size(); ++j) {
      if (counts_[j] == top) winners_.push_back(j);
    }
    return winners_;
  }

 private:
  std::vector<std::uint32_t> counts_;
  std::vector<AgentIndex> winners_;
};

std::uint64_t lcm_up_to(std::size_t n) {
  std::uint64_t l = 1;
  for (std::uint64_t i = 2; i <= n; ++i) l = std::lcm(l, i);
  return l;
}

RationalVector finish(const std::vector<Integer>& numerators, const Integer& denominator) {
  RationalVector out;
  out.reserve(numerators.size());
  for (const auto& num : numerators) {
    Rational r(num, denominator);
    r.canonicalize();
    out.push_back(std::move(r));
  }
  return out;
}

struct WeightSums {
  std::vector<Integer> numerators;

  void merge(WeightSums&& other) {
    for (std::size_t j = 0; j < numerators.size(); ++j) numerators[j] += other.numerators[j];
  }
};

struct LiquidAccumulator : WeightSums {
  explicit LiquidAccumulator(std::size_t n) : WeightSums{std::vector<Integer>(n)}, resolver(n) {}

  void operator()(std::span<const std::int32_t> choices, const Integer& probability) {
    auto w = resolver.resolve(choices);
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] != 0) mpz_addmul_ui(numerators[j].get_mpz_t(), probability.get_mpz_t(), w[j]);
    }
  }

  DelegationResolver resolver;
};

struct FptpAccumulator : WeightSums {
  FptpAccumulator(std::size_t n, TieRule rule, std::uint64_t scale)
      : WeightSums{std::vector<Integer>(n)}, tally(n), rule(rule), scale(scale) {}

  void operator()(std::span<const std::int32_t> choices, const Integer& probability) {
    auto winners = tally.winners(choices);
    if (winners.empty()) return;
    if (rule == TieRule::Lexicographic) {
      mpz_addmul_ui(numerators[winners.front()].get_mpz_t(), probability.get_mpz_t(), scale);
      return;
    }
    const std::uint64_t share = scale / winners.size();
    for (auto j : winners) mpz_addmul_ui(numerators[j].get_mpz_t(), probability.get_mpz_t(), share);
  }

  FptpTally tally;
  TieRule rule;
  std::uint64_t scale;
};

}  // namespace

std::vector<std::uint32_t> resolve_delegations(std::span<const std::int32_t> choices) {
  DelegationResolver resolver(choices.size());
  auto w = resolver.resolve(choices);
  return {w.begin(), w.end()};
}

std::size_t lost_votes(std::span<const std::int32_t> choices) {
  DelegationResolver resolver(choices.size());
  resolver.resolve(choices);
  return resolver.lost();
}

std::vector<AgentIndex> fptp_winners(std::span<const std::int32_t> choices) {
  FptpTally tally(choices.size());
  auto w = tally.winners(choices);
  return {w.begin(), w.end()};
}

std::vector<std::uint32_t> tally_votes(std::span<const std::int32_t> choices) {
  std::vector<std::uint32_t> counts(choices.size());
  for (auto c : choices) {
    if (c >= 0) ++counts[static_cast<std::size_t>(c)];
  }
  return counts;
}

std::vector<AgentIndex> sample_sortition_body(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  if (k < 1 || k > n) throw InvalidBodySize(k, n);
  std::vector<AgentIndex> pool(n);
  std::iota(pool.begin(), pool.end(), AgentIndex{0});
  for (std::size_t i = 0; i < k; ++i) {
    auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

// Exact mechanisms ---------------------------------------------------------------

ExpectedWeightVector direct_democracy(std::size_t n) {
  ExpectedWeightVector out;
  out.spec.kind = MechanismKind::DirectDemocracy;
  out.exact.assign(n, Rational(1));
  out.voters = n;
  return out;
}

ExpectedWeightVector fptp_expected_weights(const RepresentationMatrix& gamma, const CandidateSet& candidates,
                                           TieRule tie_rule, Fallback fallback, const EnumerationOptions& options) {
  const std::size_t n = gamma.n();
  const ProjectedMatrix projected = project_matrix(gamma, candidates, fallback);
  const ProfileSpace space(projected);
  const std::uint64_t scale = tie_rule == TieRule::EqualSplit ? lcm_up_to(n) : 1;

  auto sums = reduce_profiles<FptpAccumulator>(space, options,
                                               [&] { return FptpAccumulator(n, tie_rule, scale); });

  ExpectedWeightVector out;
  out.spec.kind = MechanismKind::FirstPastThePost;
  out.spec.k = 1;
  out.spec.candidates = candidates;
  out.spec.tie_rule = tie_rule;
  out.spec.fallback = fallback;
  out.spec.enumeration = options;
  out.exact = finish(sums.numerators, space.denominator() * scale);
  out.abstainers = projected.abstainers;
  out.voters = projected.voters();
  return out;
}

ExpectedWeightVector proxy_expected_weights(const RepresentationMatrix& gamma, const CandidateSet& candidates,
                                            Fallback fallback) {
  const ProjectedMatrix projected = project_matrix(gamma, candidates, fallback);
  ExpectedWeightVector out;
  out.spec.kind = MechanismKind::ProxyVoting;
  out.spec.candidates = candidates;
  out.spec.fallback = fallback;
  out.exact = expected_vote_share(projected);
  out.abstainers = projected.abstainers;
  out.voters = projected.voters();
  return out;
}

ExpectedWeightVector liquid_expected_weights(const RepresentationMatrix& gamma, const EnumerationOptions& options) {
  const std::size_t n = gamma.n();
  const ProfileSpace space(gamma);
  auto sums = reduce_profiles<LiquidAccumulator>(space, options, [&] { return LiquidAccumulator(n); });

  ExpectedWeightVector out;
  out.spec.kind = MechanismKind::LiquidDemocracy;
  out.spec.enumeration = options;
  out.exact = finish(sums.numerators, space.denominator());
  out.voters = n;
  return out;
}

ExpectedWeightVector sortition_expected_weights(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw InvalidBodySize(k, n);
  ExpectedWeightVector out;
  out.spec.kind = MechanismKind::Sortition;
  out.spec.k = k;
  out.exact.assign(n, Rational(k, n));
  for (auto& w : out.exact) w.canonicalize();
  out.voters = n;
  return out;
}

ExpectedWeightVector expected_weights(const RepresentationMatrix& gamma, const MechanismSpec& spec) {
  spec.validate(gamma.n());
  const bool sampled = spec.kind == MechanismKind::FirstPastThePost || spec.kind == MechanismKind::LiquidDemocracy;
  if (spec.monte_carlo && sampled) return mc_expected_weights(gamma, spec);

  ExpectedWeightVector out;
  switch (spec.kind) {
    case MechanismKind::DirectDemocracy:
      out = direct_democracy(gamma.n());
      break;
    case MechanismKind::FirstPastThePost:
      out = fptp_expected_weights(gamma, *spec.candidates, spec.tie_rule, spec.fallback, spec.enumeration);
      break;
    case MechanismKind::ProxyVoting:
      out = proxy_expected_weights(gamma, *spec.candidates, spec.fallback);
      break;
    case MechanismKind::LiquidDemocracy:
      out = liquid_expected_weights(gamma, spec.enumeration);
      break;
    case MechanismKind::Sortition:
      out = sortition_expected_weights(gamma.n(), *spec.k);
      break;
  }
  out.spec = spec;
  // Closed-form mechanisms never sample.
  out.spec.monte_carlo.reset();
  return out;
}

// Monte Carlo ---------------------------------------------------------------------

namespace {

constexpr std::uint64_t kBlockSize = 8192;

struct BlockMoments {
  std::vector<double> sum;
  std::vector<double> sum_sq;

  void add(const BlockMoments& other) {
    for (std::size_t j = 0; j < sum.size(); ++j) {
      sum[j] += other.sum[j];
      sum_sq[j] += other.sum_sq[j];
    }
  }
};

BlockMoments pairwise_total(std::vector<BlockMoments>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  BlockMoments left = pairwise_total(blocks, lo, mid);
  left.add(pairwise_total(blocks, mid, hi));
  return left;
}

}  // namespace

ExpectedWeightVector mc_expected_weights(const RepresentationMatrix& gamma, const MechanismSpec& spec) {
  spec.validate(gamma.n());
  if (!spec.monte_carlo) throw InvalidSpec("Monte Carlo estimation requested without sample settings");
  const bool liquid = spec.kind == MechanismKind::LiquidDemocracy;
  if (!liquid && spec.kind != MechanismKind::FirstPastThePost) {
    throw InvalidSpec(to_string(spec.kind) + " has a closed form; Monte Carlo applies to fptp and liquid only");
  }

  const std::size_t n = gamma.n();
  std::optional<ProjectedMatrix> projected;
  if (!liquid) projected = project_matrix(gamma, *spec.candidates, spec.fallback);
  const ProfileSpace space = liquid ? ProfileSpace(gamma) : ProfileSpace(*projected);

  const std::uint64_t samples = spec.monte_carlo->samples;
  const std::uint64_t seed = spec.monte_carlo->seed;
  const std::size_t block_count = static_cast<std::size_t>((samples + kBlockSize - 1) / kBlockSize);
  std::vector<BlockMoments> blocks(block_count);

  auto run_block = [&](std::size_t b) {
    BlockMoments& m = blocks[b];
    m.sum.assign(n, 0.0);
    m.sum_sq.assign(n, 0.0);
    std::mt19937_64 rng(derive_seed(seed, b));
    DelegationResolver resolver(n);
    FptpTally tally(n);
    std::vector<std::int32_t> choices(n);
    std::vector<double> realized(n);

    const std::uint64_t first = b * kBlockSize;
    const std::uint64_t count = std::min(kBlockSize, samples - first);
    for (std::uint64_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < n; ++i) choices[i] = space.sample(i, uniform_unit(rng));
      std::fill(realized.begin(), realized.end(), 0.0);
      if (liquid) {
        auto w = resolver.resolve(choices);
        for (std::size_t j = 0; j < n; ++j) realized[j] = w[j];
      } else {
        auto winners = tally.winners(choices);
        if (!winners.empty()) {
          if (spec.tie_rule == TieRule::Lexicographic) {
            realized[winners.front()] = 1.0;
          } else {
            for (auto j : winners) realized[j] = 1.0 / static_cast<double>(winners.size());
          }
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        m.sum[j] += realized[j];
        m.sum_sq[j] += realized[j] * realized[j];
      }
    }
  };

  unsigned workers = spec.enumeration.workers != 0 ? spec.enumeration.workers
                                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, block_count));
  if (workers <= 1) {
    for (std::size_t b = 0; b < block_count; ++b) run_block(b);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t b = w; b < block_count; b += workers) run_block(b);
      });
    }
  }

  const BlockMoments total = pairwise_total(blocks, 0, block_count);
  const double count = static_cast<double>(samples);
  WeightEstimate estimate;
  estimate.samples = samples;
  for (std::size_t j = 0; j < n; ++j) {
    const double mean = total.sum[j] / count;
    double variance = 0.0;
    if (samples > 1) variance = std::max(0.0, (total.sum_sq[j] - total.sum[j] * mean) / (count - 1.0));
    estimate.mean.push_back(mean);
    estimate.standard_error.push_back(std::sqrt(variance / count));
  }

  ExpectedWeightVector out;
  out.spec = spec;
  out.estimate = std::move(estimate);
  if (projected) {
    out.abstainers = projected->abstainers;
    out.voters = projected->voters();
  } else {
    out.voters = n;
  }
  return out;
}

// Classification ---------------------------------------------------------------------

Classification classify_mechanism(const MechanismSpec& spec, const ExpectedWeightVector& result) {
  Classification c{};
  c.openness = spec.is_closed() ? Openness::Closed : Openness::Open;
  const bool sized = spec.kind == MechanismKind::FirstPastThePost || spec.kind == MechanismKind::Sortition;
  c.flexibility = sized ? Flexibility::Rigid : Flexibility::Flexible;

  bool direct = false;
  if (result.is_exact()) {
    direct = sum(result.exact) == Rational(result.voters);
  } else {
    double l1 = 0.0;
    for (double w : result.estimate->mean) l1 += w;
    direct = std::abs(l1 - static_cast<double>(result.voters)) <= 1e-9 * static_cast<double>(result.n());
  }
  c.directness = direct ? Directness::Direct : Directness::Virtual;
  return c;
}

std::string to_string(Openness value) { return value == Openness::Open ? "open" : "closed"; }
std::string to_string(Flexibility value) { return value == Flexibility::Flexible ? "flexible" : "rigid"; }
std::string to_string(Directness value) { return value == Directness::Direct ? "direct" : "virtual"; }

}  // namespace repsel
