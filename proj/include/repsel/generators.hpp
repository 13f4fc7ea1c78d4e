#pragma once

#include "repsel/matrix.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace repsel {

namespace family {
struct Identity {};
struct Uniform {};
/// The five-agent two-party instance with agents A..E.
struct RunningExample {};
struct BlockPolarized {
  std::vector<std::size_t> blocks;
  Rational intra_mass;
};
struct PowerSeeking {
  Rational trace_mass;  // diagonal entry of every row
};
struct RandomStochastic {
  Rational concentration{1};
  /// Nonzero entries per row before rounding; empty means n.
  std::optional<std::size_t> support;
  std::uint64_t denominator_cap = 1'000'000;
};
}  // namespace family

struct FamilySpec {
  std::variant<family::Identity, family::Uniform, family::RunningExample, family::BlockPolarized,
               family::PowerSeeking, family::RandomStochastic>
      family;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Throws InvalidSpec for inconsistent parameters.
RepresentationMatrix generate(const FamilySpec& spec);

RepresentationMatrix running_example();

struct MatrixStats {
  Rational trace;
  std::size_t rank = 0;
  /// Connected components of the symmetrized positive-entry graph.
  std::vector<std::vector<AgentIndex>> components;
};

MatrixStats matrix_stats(const RepresentationMatrix& gamma);

}  // namespace repsel
