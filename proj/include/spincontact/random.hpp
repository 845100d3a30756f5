#pragma once

// Reproducible random draws. The generator is xoshiro256** seeded by four
// successive splitmix64 outputs; doubles are (x >> 11) * 2^-53. Any other
// implementation following these three rules reproduces our reports.

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace spincontact {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Real and imaginary parts independently uniform in [lo, hi).
  std::complex<double> uniform_complex(double lo = -1.0, double hi = 1.0) {
    const double re = uniform(lo, hi);
    const double im = uniform(lo, hi);
    return {re, im};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Dense complex matrix with entries drawn row-major, re then im.
inline Eigen::MatrixXcd random_complex_matrix(Xoshiro256& rng, Eigen::Index dim) {
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = rng.uniform_complex();
  return m;
}

inline Eigen::VectorXcd random_complex_vector(Xoshiro256& rng, Eigen::Index dim) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.uniform_complex();
  return v;
}

inline Eigen::MatrixXcd random_hermitian(Xoshiro256& rng, Eigen::Index dim) {
  const Eigen::MatrixXcd m = random_complex_matrix(rng, dim);
  return (m + m.adjoint()) / 2.0;
}

}  // namespace spincontact
