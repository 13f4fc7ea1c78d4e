#pragma once

#include "repsel/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace repsel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NonSquare : public Error {
 public:
  NonSquare(std::size_t row, std::size_t expected, std::size_t actual);
  std::size_t row;
  std::size_t expected;
  std::size_t actual;
};

class NegativeEntry : public Error {
 public:
  NegativeEntry(std::size_t row, std::size_t col);
  std::size_t row;
  std::size_t col;
};

class RowSumNotOne : public Error {
 public:
  RowSumNotOne(std::size_t row, Rational sum);
  std::size_t row;
  Rational sum;
};

class InvalidCandidateSet : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  ZeroVector();
};

class StateSpaceTooLarge : public Error {
 public:
  StateSpaceTooLarge(Integer size, std::uint64_t guard);
  Integer size;
  std::uint64_t guard;
};

class InvalidBodySize : public Error {
 public:
  InvalidBodySize(std::size_t k, std::size_t n);
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  EmptyDomain();
};

class ZeroWeightVector : public Error {
 public:
  ZeroWeightVector();
};

class ZeroTotalWeight : public Error {
 public:
  ZeroTotalWeight();
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t left, std::size_t right);
};

}  // namespace repsel
