#pragma once

#include "repsel/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace repsel {

using AgentIndex = std::size_t;

/// Dense n x n grid of exact rationals, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n) {}

  std::size_t size() const { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<Rational> row(std::size_t i) { return {data_.data() + i * n_, n_}; }

  static SquareMatrix identity(std::size_t n);

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> data_;
};

/// Row-stochastic matrix: entry (i, j) is the probability that agent i votes
/// for agent j. Immutable once validated.
class RepresentationMatrix {
 public:
  /// Checks squareness, nonnegativity and exact unit row sums.
  static RepresentationMatrix validate(const std::vector<RationalVector>& rows,
                                       std::vector<std::string> labels = {});
  static RepresentationMatrix validate(SquareMatrix entries, std::vector<std::string> labels = {});

  std::size_t n() const { return entries_.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  std::span<const Rational> row(std::size_t i) const { return entries_.row(i); }
  const SquareMatrix& entries() const { return entries_; }

  /// Display names; defaults to the 0-based index as text.
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(AgentIndex i) const { return labels_[i]; }
  /// Looks up an agent by label. Throws InvalidCandidateSet when unknown.
  AgentIndex index_of(std::string_view label) const;

  friend bool operator==(const RepresentationMatrix&, const RepresentationMatrix&) = default;

 private:
  RepresentationMatrix(SquareMatrix entries, std::vector<std::string> labels)
      : entries_(std::move(entries)), labels_(std::move(labels)) {}

  SquareMatrix entries_;
  std::vector<std::string> labels_;
};

/// Nonempty set of candidate agents, kept sorted ascending.
class CandidateSet {
 public:
  static CandidateSet from(std::vector<AgentIndex> members, std::size_t n);
  static CandidateSet all(std::size_t n);

  std::span<const AgentIndex> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t universe() const { return mask_.size(); }
  bool contains(AgentIndex i) const { return i < mask_.size() && mask_[i]; }

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;

 private:
  CandidateSet(std::vector<AgentIndex> members, std::vector<bool> mask)
      : members_(std::move(members)), mask_(std::move(mask)) {}

  std::vector<AgentIndex> members_;
  std::vector<bool> mask_;
};

std::string describe(const CandidateSet& set, const RepresentationMatrix& labels);

/// What a non-candidate with no mass on the candidate set does.
enum class Fallback { Abstain, Uniform };

/// The matrix seen by closed mechanisms: candidates vote for themselves and
/// every other row is renormalized over the candidate columns.
struct ProjectedMatrix {
  RepresentationMatrix base;
  CandidateSet candidates;
  Fallback fallback;
  SquareMatrix entries;
  std::vector<AgentIndex> abstainers;

  std::size_t n() const { return entries.size(); }
  bool is_abstainer(AgentIndex i) const;
  std::size_t voters() const { return n() - abstainers.size(); }
};

/// Column sums.
RationalVector expected_vote_share(const RepresentationMatrix& gamma);
RationalVector expected_vote_share(const ProjectedMatrix& projected);

ProjectedMatrix project_matrix(const RepresentationMatrix& gamma, const CandidateSet& candidates,
                               Fallback fallback = Fallback::Abstain);
/// Re-projects an already projected matrix onto its own candidate set.
ProjectedMatrix project_matrix(const ProjectedMatrix& projected);

/// Divides by the l1 norm. Throws ZeroVector if every entry is zero.
RationalVector normalize_l1(std::span<const Rational> values);

}  // namespace repsel
