#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace detflop {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonSquareError : Error {
  NonSquareError(int r, int c)
      : Error("matrix is not square: " + std::to_string(r) + "x" + std::to_string(c)) {}
};

struct WrongRankError : Error {
  int rank;
  explicit WrongRankError(int r)
      : Error("matrix rank " + std::to_string(r) + " is not corank 1"), rank(r) {}
};

struct SlotMismatchError : Error {
  explicit SlotMismatchError(const std::string& msg) : Error("slot mismatch: " + msg) {}
};

struct SizeBudgetExceededError : Error {
  std::size_t terms;
  explicit SizeBudgetExceededError(std::size_t t)
      : Error("symbolic expansion exceeds term budget: " + std::to_string(t)), terms(t) {}
};

struct BudgetExceededError : Error {
  unsigned long long required;
  explicit BudgetExceededError(unsigned long long r)
      : Error("enumeration budget exceeded, required " + std::to_string(r)), required(r) {}
};

struct SampleFailureError : Error {
  explicit SampleFailureError(const std::string& msg) : Error("sampling failed: " + msg) {}
};

struct NotOnVarietyError : Error {
  explicit NotOnVarietyError(const std::string& msg) : Error("point not on variety: " + msg) {}
};

struct ExceptionalPointError : Error {
  int step;  // word step index for composed maps, 0 for a single flop
  explicit ExceptionalPointError(int s = 0)
      : Error("point maps into the exceptional locus (step " + std::to_string(s) + ")"),
        step(s) {}
};

struct NotPointedError : Error {
  NotPointedError() : Error("cone contains a line") {}
};

struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

struct InconsistentFanError : Error {
  explicit InconsistentFanError(const std::string& msg) : Error("inconsistent fan: " + msg) {}
};

struct NotClosedError : Error {
  NotClosedError() : Error("tiling certificate is not closed") {}
};

struct StabilizerObstructionError : Error {
  std::vector<std::vector<long long>> witness;  // the chamber-fixing matrix
  explicit StabilizerObstructionError(std::vector<std::vector<long long>> w)
      : Error("nontrivial group element fixes a chamber setwise"), witness(std::move(w)) {}
};

struct OracleInconclusiveError : Error {
  explicit OracleInconclusiveError(const std::string& msg) : Error("oracle inconclusive: " + msg) {}
};

struct CalibrationUnavailableError : Error {
  explicit CalibrationUnavailableError(const std::string& msg)
      : Error("calibration unavailable: " + msg) {}
};

struct DegenerateInstanceError : Error {
  explicit DegenerateInstanceError(const std::string& msg) : Error("degenerate instance: " + msg) {}
};

// Overflow-checked int64 helpers. Lattice and cone code works in int64; all
// quantities at desk scale stay far below the limit, and these guards turn a
// hypothetical overflow into a hard error instead of silent wraparound.
inline long long add_ck(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("int64 overflow in addition");
  return r;
}

inline long long sub_ck(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error("int64 overflow in subtraction");
  return r;
}

inline long long mul_ck(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("int64 overflow in multiplication");
  return r;
}

inline long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detflop
