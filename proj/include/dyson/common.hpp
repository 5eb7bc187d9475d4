#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dyson {

using Real = double;
using Seed = std::uint64_t;
using RealVector = Eigen::VectorXd;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;
inline constexpr Real kEulerGamma = 0.57721566490153286060651209008240243;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the supported domain of an evaluation routine.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid model or sampler parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A tabulated density lost too much mass off the ends of its grid.
class GridError : public Error {
 public:
  using Error::Error;
};

/// A ratio recurrence hit an exact zero, i.e. the probe point is an eigenvalue.
class EigenvalueHit : public Error {
 public:
  EigenvalueHit(std::size_t index, Real at)
      : Error("ratio recurrence hit zero at index " + std::to_string(index)),
        index_(index), at_(at) {}
  std::size_t index() const { return index_; }
  Real at() const { return at_; }

 private:
  std::size_t index_;
  Real at_;
};

/// Reproducible random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The conversions to uniform and normal variates are done here
/// rather than through <random> distributions, which are implementation
/// defined, so a seed yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), 53 random bits.
  Real uniform() {
    for (;;) {
      const std::uint64_t bits = engine_() >> 11;
      if (bits != 0) return static_cast<Real>(bits) * 0x1.0p-53;
    }
  }

  /// Standard normal by the Marsaglia polar method.
  Real normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    Real u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const Real f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  Real spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent child seed (splitmix64 finaliser).
inline Seed derive_seed(Seed base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Mean and standard error from equal-size block means.
struct BlockStats {
  Real mean = 0.0;
  Real stderr_ = 0.0;
};

inline BlockStats block_stats(const std::vector<Real>& block_means) {
  BlockStats out;
  const auto n = static_cast<Real>(block_means.size());
  if (block_means.empty()) return out;
  for (Real b : block_means) out.mean += b;
  out.mean /= n;
  if (block_means.size() < 2) return out;
  Real ss = 0.0;
  for (Real b : block_means) ss += (b - out.mean) * (b - out.mean);
  out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace dyson
