#pragma once

#include "repsel/generators.hpp"
#include "repsel/matrix.hpp"
#include "repsel/mechanisms.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace repsel {

// Proportionality ---------------------------------------------------------------

struct ProportionalityReport {
  RationalVector per_agent_deviation;
  Rational diff;
  AgentIndex witness = 0;
};

/// max_j | E[V_j] / ||E[V]|| - f_j / ||f|| |, lowest index on ties.
/// Throws ZeroWeightVector when f sums to zero.
ProportionalityReport proportionality_diff(std::span<const Rational> vote_share,
                                           std::span<const Rational> weights);
/// Vote shares come from the original matrix, weights from the exact
/// mechanism output.
ProportionalityReport proportionality_diff(const RepresentationMatrix& gamma, const MechanismSpec& spec);

struct SweepDomain {
  std::optional<std::size_t> subset_size;  // empty: every nonempty strict subset
  bool validity_filter = true;             // skip sets whose weight vector is zero
};

struct SweepResult {
  Rational min_diff;
  Rational max_diff;
  CandidateSet min_witness;
  CandidateSet max_witness;
  std::string domain;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

/// Extremes of proportionality_diff over candidate sets. Sets are visited by
/// size, then lexicographically; the min witness is the first set attaining
/// the minimum and the max witness the last set attaining the maximum.
SweepResult sweep_epsilon_bounds(const RepresentationMatrix& gamma, const MechanismSpec& spec,
                                 const SweepDomain& domain = {});

/// Candidate sets of the given size in lexicographic order.
std::vector<CandidateSet> candidate_sets_of_size(std::size_t n, std::size_t size);

// Boolean axioms -----------------------------------------------------------------

enum class Verdict { Holds, Violated, Undefined };
std::string to_string(Verdict verdict);

struct Violation {
  std::vector<AgentIndex> agents;
  std::string detail;
};

struct AxiomReport {
  std::string axiom;
  Verdict verdict = Verdict::Holds;
  std::vector<Violation> violations;

  bool holds() const { return verdict == Verdict::Holds; }
};

/// Which vote shares the diversity premise reads.
enum class ShareBasis { Original, Projected };

AxiomReport check_diversity(const RepresentationMatrix& gamma, const MechanismSpec& spec,
                            ShareBasis basis = ShareBasis::Original);
AxiomReport check_faithfulness(const RepresentationMatrix& gamma, const MechanismSpec& spec);

/// Undefined when the premise (j's share strictly rises, nobody else's rises)
/// does not hold for the pair.
AxiomReport check_monotonicity_pair(const RepresentationMatrix& before, const RepresentationMatrix& after,
                                    AgentIndex agent, const MechanismSpec& spec);

struct MonotonicitySearch {
  MechanismKind kind = MechanismKind::FirstPastThePost;
  std::size_t n = 5;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
  /// Candidate set size for closed mechanisms; defaults to n - 1.
  std::optional<std::size_t> candidate_size;
  std::optional<std::size_t> k;
  /// Maximum nonzero entries per random row.
  std::size_t support = 3;
  TieRule tie_rule = TieRule::Lexicographic;
  Fallback fallback = Fallback::Abstain;
  unsigned workers = 0;
};

struct MonotonicityCounterexample {
  RepresentationMatrix before;
  RepresentationMatrix after;
  AgentIndex agent;
  CandidateSet candidates;
  Rational weight_before;
  Rational weight_after;
  std::uint64_t trial;
};

/// Random falsification search. The returned witness is the one with the
/// smallest trial index, whatever the number of workers.
std::optional<MonotonicityCounterexample> search_monotonicity_counterexample(const MonotonicitySearch& search);

// Effectiveness ------------------------------------------------------------------

/// Smallest number of agents holding strictly more than half of the total
/// weight. Throws ZeroTotalWeight.
std::size_t min_majority_coalition(std::span<const Rational> weights);
std::size_t min_majority_coalition(std::span<const std::uint32_t> weights);

struct CoalitionReport {
  std::optional<Rational> expected_gamma;  // empty when every realization has zero weight
  std::map<std::size_t, Rational> distribution;
  Rational undefined_mass;
  /// min_majority_coalition of the expected-weight vector, for comparison.
  std::optional<std::size_t> gamma_of_expectation;
};

CoalitionReport gamma_effectiveness(const RepresentationMatrix& gamma, const MechanismSpec& spec);

}  // namespace repsel
