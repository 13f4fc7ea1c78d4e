#pragma once

#include "repsel/matrix.hpp"
#include "repsel/profiles.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace repsel {

enum class MechanismKind { DirectDemocracy, FirstPastThePost, ProxyVoting, LiquidDemocracy, Sortition };

/// FPTP rule when several candidates share the top vote count.
enum class TieRule {
  Lexicographic,  // lowest-index tied candidate takes the seat
  EqualSplit,     // each of t tied candidates gets 1/t
};

struct MonteCarlo {
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
};

struct MechanismSpec {
  MechanismKind kind = MechanismKind::DirectDemocracy;
  std::optional<std::size_t> k;
  std::optional<CandidateSet> candidates;
  TieRule tie_rule = TieRule::Lexicographic;
  Fallback fallback = Fallback::Abstain;
  std::optional<MonteCarlo> monte_carlo;  // empty: exact
  EnumerationOptions enumeration;

  /// Throws InvalidSpec / InvalidBodySize when the combination is unusable
  /// for `n` agents.
  void validate(std::size_t n) const;
  bool is_closed() const;
  /// The candidate set the mechanism actually uses (all agents for open ones).
  CandidateSet effective_candidates(std::size_t n) const;
};

std::string to_string(MechanismKind kind);
MechanismKind parse_mechanism_kind(std::string_view name);

struct WeightEstimate {
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::uint64_t samples = 0;
};

/// Per-agent expected voting weight produced by a mechanism.
struct ExpectedWeightVector {
  MechanismSpec spec;
  RationalVector exact;                  // filled in exact mode
  std::optional<WeightEstimate> estimate;  // filled in Monte Carlo mode
  std::vector<AgentIndex> abstainers;
  std::size_t voters = 0;  // agents that cast a vote

  bool is_exact() const { return !estimate.has_value(); }
  std::size_t n() const { return is_exact() ? exact.size() : estimate->mean.size(); }
  std::vector<double> approximate() const;
};

ExpectedWeightVector direct_democracy(std::size_t n);

ExpectedWeightVector fptp_expected_weights(const RepresentationMatrix& gamma, const CandidateSet& candidates,
                                           TieRule tie_rule = TieRule::Lexicographic,
                                           Fallback fallback = Fallback::Abstain,
                                           const EnumerationOptions& options = {});

ExpectedWeightVector proxy_expected_weights(const RepresentationMatrix& gamma, const CandidateSet& candidates,
                                            Fallback fallback = Fallback::Abstain);

ExpectedWeightVector liquid_expected_weights(const RepresentationMatrix& gamma,
                                             const EnumerationOptions& options = {});

ExpectedWeightVector sortition_expected_weights(std::size_t n, std::size_t k);

/// Dispatches on spec.kind and spec.monte_carlo.
ExpectedWeightVector expected_weights(const RepresentationMatrix& gamma, const MechanismSpec& spec);

/// Seeded estimate for FPTP or liquid democracy. Samples are drawn in fixed
/// blocks, each block seeded from (seed, block index), so the output does not
/// depend on the number of worker threads.
ExpectedWeightVector mc_expected_weights(const RepresentationMatrix& gamma, const MechanismSpec& spec);

// Per-profile outcomes -------------------------------------------------------

/// Realized liquid-democracy weights for one delegation profile. Agents that
/// choose themselves are sinks; every agent whose delegation walk reaches a
/// sink adds 1 to it. Walks that end in a cycle of non-sinks are lost.
std::vector<std::uint32_t> resolve_delegations(std::span<const std::int32_t> choices);

/// Agents whose vote is lost in resolve_delegations.
std::size_t lost_votes(std::span<const std::int32_t> choices);

/// Top-vote candidates of an FPTP profile, ascending. Empty if nobody voted.
std::vector<AgentIndex> fptp_winners(std::span<const std::int32_t> choices);

/// Realized proxy weights: number of votes landing on each agent.
std::vector<std::uint32_t> tally_votes(std::span<const std::int32_t> choices);

/// Uniform k-subset of [0, n) for one sortition draw, sorted.
std::vector<AgentIndex> sample_sortition_body(std::size_t n, std::size_t k, std::mt19937_64& rng);

// Classification --------------------------------------------------------------

enum class Openness { Open, Closed };
enum class Flexibility { Flexible, Rigid };
enum class Directness { Direct, Virtual };

struct Classification {
  Openness openness;
  Flexibility flexibility;
  Directness directness;

  friend bool operator==(const Classification&, const Classification&) = default;
};

Classification classify_mechanism(const MechanismSpec& spec, const ExpectedWeightVector& result);
std::string to_string(Openness value);
std::string to_string(Flexibility value);
std::string to_string(Directness value);

}  // namespace repsel
