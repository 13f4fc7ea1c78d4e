#include "repsel/matrix.hpp"

#include "repsel/errors.hpp"

#include <algorithm>

namespace repsel {

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RepresentationMatrix RepresentationMatrix::validate(const std::vector<RationalVector>& rows,
                                                    std::vector<std::string> labels) {
  const std::size_t n = rows.size();
  if (n == 0) throw NonSquare(0, 1, 0);
  SquareMatrix entries(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw NonSquare(i, n, rows[i].size());
    std::copy(rows[i].begin(), rows[i].end(), entries.row(i).begin());
  }
  return validate(std::move(entries), std::move(labels));
}

RepresentationMatrix RepresentationMatrix::validate(SquareMatrix entries, std::vector<std::string> labels) {
  const std::size_t n = entries.size();
  if (n == 0) throw NonSquare(0, 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      entries(i, j).canonicalize();
      if (sgn(entries(i, j)) < 0) throw NegativeEntry(i, j);
    }
    Rational total = sum(entries.row(i));
    if (total != 1) throw RowSumNotOne(i, std::move(total));
  }

  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  } else if (labels.size() != n) {
    throw InvalidSpec("expected " + std::to_string(n) + " labels, got " + std::to_string(labels.size()));
  }
  auto sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidSpec("agent labels must be distinct");
  }
  return RepresentationMatrix(std::move(entries), std::move(labels));
}

AgentIndex RepresentationMatrix::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InvalidCandidateSet("unknown agent \"" + std::string(label) + "\"");
  return static_cast<AgentIndex>(it - labels_.begin());
}

CandidateSet CandidateSet::from(std::vector<AgentIndex> members, std::size_t n) {
  if (members.empty()) throw InvalidCandidateSet("candidate set must be nonempty");
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw InvalidCandidateSet("candidate set contains a duplicate agent");
  }
  if (members.back() >= n) {
    throw InvalidCandidateSet("candidate " + std::to_string(members.back()) + " is outside [0, " +
                              std::to_string(n) + ")");
  }
  std::vector<bool> mask(n, false);
  for (auto m : members) mask[m] = true;
  return CandidateSet(std::move(members), std::move(mask));
}

CandidateSet CandidateSet::all(std::size_t n) {
  std::vector<AgentIndex> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = i;
  return from(std::move(members), n);
}

std::string describe(const CandidateSet& set, const RepresentationMatrix& gamma) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i != 0) out += ',';
    out += gamma.label(set.members()[i]);
  }
  return out + "}";
}

bool ProjectedMatrix::is_abstainer(AgentIndex i) const {
  return std::binary_search(abstainers.begin(), abstainers.end(), i);
}

namespace {

RationalVector column_sums(const SquareMatrix& m) {
  RationalVector out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out[j] += m(i, j);
  }
  return out;
}

}  // namespace

RationalVector expected_vote_share(const RepresentationMatrix& gamma) { return column_sums(gamma.entries()); }

RationalVector expected_vote_share(const ProjectedMatrix& projected) { return column_sums(projected.entries); }

ProjectedMatrix project_matrix(const RepresentationMatrix& gamma, const CandidateSet& candidates, Fallback fallback) {
  const std::size_t n = gamma.n();
  if (candidates.universe() != n) throw DimensionMismatch(candidates.universe(), n);

  SquareMatrix out(n);
  std::vector<AgentIndex> abstainers;
  const Rational uniform(1, candidates.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (candidates.contains(i)) {
      out(i, i) = 1;
      continue;
    }
    Rational mass = 0;
    for (auto j : candidates.members()) mass += gamma(i, j);
    if (sgn(mass) == 0) {
      if (fallback == Fallback::Uniform) {
        for (auto j : candidates.members()) out(i, j) = uniform;
      } else {
        abstainers.push_back(i);
      }
      continue;
    }
    for (auto j : candidates.members()) out(i, j) = gamma(i, j) / mass;
  }
  return ProjectedMatrix{gamma, candidates, fallback, std::move(out), std::move(abstainers)};
}

ProjectedMatrix project_matrix(const ProjectedMatrix& projected) {
  // Abstainer rows are all-zero, so the original abstain decision is kept.
  ProjectedMatrix again = projected;
  const auto& c = projected.candidates;
  again.abstainers.clear();
  for (std::size_t i = 0; i < projected.n(); ++i) {
    auto row = again.entries.row(i);
    if (c.contains(i)) {
      std::fill(row.begin(), row.end(), Rational(0));
      row[i] = 1;
      continue;
    }
    Rational mass = 0;
    for (auto j : c.members()) mass += projected.entries(i, j);
    std::fill(row.begin(), row.end(), Rational(0));
    if (sgn(mass) == 0) {
      again.abstainers.push_back(i);
      continue;
    }
    for (auto j : c.members()) row[j] = projected.entries(i, j) / mass;
  }
  return again;
}

RationalVector normalize_l1(std::span<const Rational> values) {
  Rational norm = 0;
  for (const auto& v : values) norm += abs(v);
  if (sgn(norm) == 0) throw ZeroVector();
  RationalVector out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v / norm);
  return out;
}

}  // namespace repsel
