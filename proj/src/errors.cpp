#include "repsel/errors.hpp"

namespace repsel {

NonSquare::NonSquare(std::size_t row, std::size_t expected, std::size_t actual)
    : Error("matrix is not square: row " + std::to_string(row) + " has " + std::to_string(actual) +
            " entries, expected " + std::to_string(expected)),
      row(row),
      expected(expected),
      actual(actual) {}

NegativeEntry::NegativeEntry(std::size_t row, std::size_t col)
    : Error("negative entry at (" + std::to_string(row) + ", " + std::to_string(col) + ")"), row(row), col(col) {}

RowSumNotOne::RowSumNotOne(std::size_t row, Rational sum)
    : Error("row " + std::to_string(row) + " sums to " + to_string(sum) + ", expected 1"),
      row(row),
      sum(std::move(sum)) {}

ZeroVector::ZeroVector() : Error("cannot normalize a zero vector") {}

StateSpaceTooLarge::StateSpaceTooLarge(Integer size, std::uint64_t guard)
    : Error("profile space has " + size.get_str() + " profiles, above the enumeration guard of " +
            std::to_string(guard) + "; use Monte Carlo (--method mc) or raise the guard"),
      size(std::move(size)),
      guard(guard) {}

InvalidBodySize::InvalidBodySize(std::size_t k, std::size_t n)
    : Error("body size k=" + std::to_string(k) + " must satisfy 1 <= k <= n=" + std::to_string(n)) {}

EmptyDomain::EmptyDomain() : Error("the swept candidate-set domain is empty") {}

ZeroWeightVector::ZeroWeightVector() : Error("mechanism assigns zero total weight; proportionality undefined") {}

ZeroTotalWeight::ZeroTotalWeight() : Error("weight vector has zero total weight") {}

DimensionMismatch::DimensionMismatch(std::size_t left, std::size_t right)
    : Error("dimension mismatch: " + std::to_string(left) + " vs " + std::to_string(right)) {}

}  // namespace repsel
