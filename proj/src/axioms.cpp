#include "repsel/axioms.hpp"

#include "repsel/errors.hpp"
#include "repsel/random.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

namespace repsel {
namespace {

/// Axioms are defined on exact expectations; sampling settings are ignored.
RationalVector exact_weights(const RepresentationMatrix& gamma, const MechanismSpec& spec) {
  MechanismSpec exact = spec;
  exact.monte_carlo.reset();
  return expected_weights(gamma, exact).exact;
}

std::string agent_value(const RepresentationMatrix& gamma, AgentIndex i, const char* what, const Rational& v) {
  return std::string(what) + "_" + gamma.label(i) + "=" + to_string(v);
}

}  // namespace

// Proportionality ----------------------------------------------------------------

ProportionalityReport proportionality_diff(std::span<const Rational> vote_share, std::span<const Rational> weights) {
  if (vote_share.size() != weights.size()) throw DimensionMismatch(vote_share.size(), weights.size());
  RationalVector f;
  try {
    f = normalize_l1(weights);
  } catch (const ZeroVector&) {
    throw ZeroWeightVector();
  }
  const RationalVector v = normalize_l1(vote_share);

  ProportionalityReport report;
  report.per_agent_deviation.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    Rational d = abs(v[j] - f[j]);
    if (j == 0 || d > report.diff) {
      report.diff = d;
      report.witness = j;
    }
    report.per_agent_deviation.push_back(std::move(d));
  }
  return report;
}

ProportionalityReport proportionality_diff(const RepresentationMatrix& gamma, const MechanismSpec& spec) {
  return proportionality_diff(expected_vote_share(gamma), exact_weights(gamma, spec));
}

std::vector<CandidateSet> candidate_sets_of_size(std::size_t n, std::size_t size) {
  std::vector<CandidateSet> out;
  if (size == 0 || size > n) return out;
  std::vector<AgentIndex> pick(size);
  std::iota(pick.begin(), pick.end(), AgentIndex{0});
  for (;;) {
    out.push_back(CandidateSet::from(pick, n));
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == n - size + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

SweepResult sweep_epsilon_bounds(const RepresentationMatrix& gamma, const MechanismSpec& spec,
                                 const SweepDomain& domain) {
  if (!spec.is_closed()) throw InvalidSpec("sweeps apply to candidate-dependent mechanisms (fptp, proxy)");
  const std::size_t n = gamma.n();

  std::vector<std::size_t> sizes;
  std::string description;
  if (domain.subset_size) {
    if (*domain.subset_size >= 1 && *domain.subset_size <= n) sizes.push_back(*domain.subset_size);
    description = "all " + std::to_string(domain.subset_size.value()) + "-subsets of " + std::to_string(n) + " agents";
  } else {
    for (std::size_t s = 1; s < n; ++s) sizes.push_back(s);
    description = "all nonempty strict subsets of " + std::to_string(n) + " agents";
  }
  if (domain.validity_filter) description += ", zero-weight sets skipped";

  const RationalVector shares = expected_vote_share(gamma);
  std::optional<SweepResult> result;
  std::size_t skipped = 0;
  std::size_t evaluated = 0;
  for (auto size : sizes) {
    for (auto& c : candidate_sets_of_size(n, size)) {
      MechanismSpec at = spec;
      at.candidates = c;
      const RationalVector w = exact_weights(gamma, at);
      if (domain.validity_filter && sgn(sum(w)) == 0) {
        ++skipped;
        continue;
      }
      const Rational d = proportionality_diff(shares, w).diff;
      ++evaluated;
      if (!result) {
        result = SweepResult{d, d, c, c, description, 0, 0};
        continue;
      }
      if (d < result->min_diff) {
        result->min_diff = d;
        result->min_witness = c;
      }
      if (d >= result->max_diff) {
        result->max_diff = d;
        result->max_witness = c;
      }
    }
  }
  if (!result) throw EmptyDomain();
  result->evaluated = evaluated;
  result->skipped = skipped;
  return *result;
}

// Boolean axioms ------------------------------------------------------------------

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Undefined: return "undefined";
  }
  return "unknown";
}

AxiomReport check_diversity(const RepresentationMatrix& gamma, const MechanismSpec& spec, ShareBasis basis) {
  spec.validate(gamma.n());
  const CandidateSet c = spec.effective_candidates(gamma.n());
  const RationalVector shares = basis == ShareBasis::Projected && spec.is_closed()
                                    ? expected_vote_share(project_matrix(gamma, c, spec.fallback))
                                    : expected_vote_share(gamma);
  const RationalVector f = exact_weights(gamma, spec);

  AxiomReport report{"diversity", Verdict::Holds, {}};
  for (auto j : c.members()) {
    if (sgn(shares[j]) > 0 && sgn(f[j]) <= 0) {
      report.violations.push_back(
          {{j}, agent_value(gamma, j, "E[V]", shares[j]) + " > 0 but " + agent_value(gamma, j, "f", f[j])});
    }
  }
  if (!report.violations.empty()) report.verdict = Verdict::Violated;
  return report;
}

AxiomReport check_faithfulness(const RepresentationMatrix& gamma, const MechanismSpec& spec) {
  spec.validate(gamma.n());
  const CandidateSet c = spec.effective_candidates(gamma.n());
  const RationalVector shares = expected_vote_share(gamma);
  const RationalVector f = exact_weights(gamma, spec);

  AxiomReport report{"faithfulness", Verdict::Holds, {}};
  for (auto i : c.members()) {
    for (auto j : c.members()) {
      if (i == j || shares[i] < shares[j] || f[i] >= f[j]) continue;
      report.violations.push_back({{i, j},
                                   agent_value(gamma, i, "E[V]", shares[i]) + " >= " +
                                       agent_value(gamma, j, "E[V]", shares[j]) + " but " +
                                       agent_value(gamma, i, "f", f[i]) + " < " + agent_value(gamma, j, "f", f[j])});
    }
  }
  if (!report.violations.empty()) report.verdict = Verdict::Violated;
  return report;
}

AxiomReport check_monotonicity_pair(const RepresentationMatrix& before, const RepresentationMatrix& after,
                                    AgentIndex agent, const MechanismSpec& spec) {
  if (before.n() != after.n()) throw DimensionMismatch(before.n(), after.n());
  if (agent >= before.n()) throw InvalidSpec("agent index out of range");

  AxiomReport report{"monotonicity", Verdict::Undefined, {}};
  const RationalVector old_share = expected_vote_share(before);
  const RationalVector new_share = expected_vote_share(after);
  if (!(new_share[agent] > old_share[agent])) return report;
  for (std::size_t i = 0; i < before.n(); ++i) {
    if (i != agent && new_share[i] > old_share[i]) return report;
  }

  const Rational f_old = exact_weights(before, spec)[agent];
  const Rational f_new = exact_weights(after, spec)[agent];
  if (f_new >= f_old) {
    report.verdict = Verdict::Holds;
  } else {
    report.verdict = Verdict::Violated;
    report.violations.push_back({{agent}, "f_" + before.label(agent) + " falls from " + to_string(f_old) + " to " +
                                              to_string(f_new)});
  }
  return report;
}

namespace {

std::optional<MonotonicityCounterexample> monotonicity_trial(const MonotonicitySearch& search, std::uint64_t trial) {
  const std::size_t n = search.n;
  std::mt19937_64 rng(derive_seed(search.seed, trial));

  family::RandomStochastic random;
  random.support = std::min(search.support, n);
  const RepresentationMatrix before = generate(FamilySpec{random, n, rng()});
  const AgentIndex agent = static_cast<AgentIndex>(uniform_below(rng, n));

  MechanismSpec spec;
  spec.kind = search.kind;
  spec.tie_rule = search.tie_rule;
  spec.fallback = search.fallback;
  spec.enumeration.workers = 1;
  if (search.kind == MechanismKind::Sortition) spec.k = search.k.value_or(std::max<std::size_t>(1, n / 2));
  if (search.kind == MechanismKind::FirstPastThePost && search.k) spec.k = search.k;

  std::vector<AgentIndex> members{agent};
  if (spec.is_closed()) {
    const std::size_t m = std::clamp<std::size_t>(search.candidate_size.value_or(n > 1 ? n - 1 : 1), 1, n);
    std::vector<AgentIndex> others;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != agent) others.push_back(i);
    }
    for (std::size_t s = 0; s + 1 < m; ++s) {
      std::swap(others[s], others[s + uniform_below(rng, others.size() - s)]);
      members.push_back(others[s]);
    }
    spec.candidates = CandidateSet::from(members, n);
  }

  // Shift a random fraction of some rows onto the agent's column; every other
  // column can only shrink.
  Rational shift(static_cast<long>(1 + uniform_below(rng, 9)), 10L);
  shift.canonicalize();
  SquareMatrix moved = before.entries();
  for (std::size_t i = 0; i < n; ++i) {
    if (uniform_below(rng, 2) == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      moved(i, j) *= Rational(1) - shift;
      if (j == agent) moved(i, j) += shift;
    }
  }
  const RepresentationMatrix after = RepresentationMatrix::validate(std::move(moved));

  const AxiomReport report = check_monotonicity_pair(before, after, agent, spec);
  if (report.verdict != Verdict::Violated) return std::nullopt;
  return MonotonicityCounterexample{before,
                                    after,
                                    agent,
                                    spec.effective_candidates(n),
                                    exact_weights(before, spec)[agent],
                                    exact_weights(after, spec)[agent],
                                    trial};
}

}  // namespace

std::optional<MonotonicityCounterexample> search_monotonicity_counterexample(const MonotonicitySearch& search) {
  if (search.n == 0) throw InvalidSpec("n must be positive");
  const unsigned workers =
      search.workers != 0 ? search.workers : std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t batch = static_cast<std::uint64_t>(workers) * 16;

  for (std::uint64_t first = 0; first < search.trials; first += batch) {
    const std::uint64_t count = std::min(batch, search.trials - first);
    std::vector<std::optional<MonotonicityCounterexample>> found(count);
    std::vector<std::exception_ptr> failures(workers);
    auto work = [&](unsigned w) {
      try {
        for (std::uint64_t t = w; t < count; t += workers) found[t] = monotonicity_trial(search, first + t);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
    for (auto& f : found) {
      if (f) return std::move(f);
    }
  }
  return std::nullopt;
}

// Effectiveness -------------------------------------------------------------------

namespace {

template <class T>
std::size_t greedy_majority(std::span<const T> weights) {
  std::vector<T> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end(), [](const T& a, const T& b) { return a > b; });
  T total = 0;
  for (const auto& w : sorted) total += w;
  if (total == 0) throw ZeroTotalWeight();
  T running = 0;
  std::size_t count = 0;
  for (const auto& w : sorted) {
    running += w;
    ++count;
    if (running + running > total) break;
  }
  return count;
}

struct GammaAccumulator {
  GammaAccumulator(MechanismKind kind, TieRule rule)
      : kind(kind), rule(rule) {}

  void operator()(std::span<const std::int32_t> choices, const Integer& probability) {
    std::vector<std::uint32_t> realized;
    switch (kind) {
      case MechanismKind::LiquidDemocracy:
        realized = resolve_delegations(choices);
        break;
      case MechanismKind::ProxyVoting:
        realized = tally_votes(choices);
        break;
      default: {
        realized.assign(choices.size(), 0);
        const auto winners = fptp_winners(choices);
        if (rule == TieRule::Lexicographic && !winners.empty()) {
          realized[winners.front()] = 1;
        } else {
          for (auto j : winners) realized[j] = 1;
        }
      }
    }
    if (std::all_of(realized.begin(), realized.end(), [](auto w) { return w == 0; })) {
      undefined += probability;
      return;
    }
    by_size[min_majority_coalition(std::span<const std::uint32_t>(realized))] += probability;
  }

  void merge(GammaAccumulator&& other) {
    undefined += other.undefined;
    for (auto& [size, p] : other.by_size) by_size[size] += p;
  }

  MechanismKind kind;
  TieRule rule;
  std::map<std::size_t, Integer> by_size;
  Integer undefined;
};

}  // namespace

std::size_t min_majority_coalition(std::span<const Rational> weights) { return greedy_majority(weights); }

std::size_t min_majority_coalition(std::span<const std::uint32_t> weights) {
  std::vector<std::uint64_t> wide(weights.begin(), weights.end());
  return greedy_majority(std::span<const std::uint64_t>(wide));
}

CoalitionReport gamma_effectiveness(const RepresentationMatrix& gamma, const MechanismSpec& spec) {
  spec.validate(gamma.n());
  const std::size_t n = gamma.n();
  CoalitionReport report;

  switch (spec.kind) {
    case MechanismKind::DirectDemocracy:
      report.distribution[n / 2 + 1] = 1;
      break;
    case MechanismKind::Sortition:
      report.distribution[*spec.k / 2 + 1] = 1;
      break;
    default: {
      std::optional<ProjectedMatrix> projected;
      if (spec.is_closed()) projected = project_matrix(gamma, *spec.candidates, spec.fallback);
      const ProfileSpace space = projected ? ProfileSpace(*projected) : ProfileSpace(gamma);
      auto acc = reduce_profiles<GammaAccumulator>(
          space, spec.enumeration, [&] { return GammaAccumulator(spec.kind, spec.tie_rule); });
      for (auto& [size, num] : acc.by_size) {
        Rational p(num, space.denominator());
        p.canonicalize();
        report.distribution[size] = p;
      }
      report.undefined_mass = Rational(acc.undefined, space.denominator());
      report.undefined_mass.canonicalize();
    }
  }

  const Rational defined = Rational(1) - report.undefined_mass;
  if (sgn(defined) > 0) {
    Rational mean = 0;
    for (const auto& [size, p] : report.distribution) mean += Rational(static_cast<long>(size)) * p;
    report.expected_gamma = mean / defined;
  }

  const RationalVector expected = exact_weights(gamma, spec);
  if (sgn(sum(expected)) > 0) report.gamma_of_expectation = min_majority_coalition(expected);
  return report;
}

}  // namespace repsel
