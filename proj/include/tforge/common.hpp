#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tforge {

using cmplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

// 2x2 complex matrix, row-major: m[0]=a00 m[1]=a01 m[2]=a10 m[3]=a11.
struct Mat2 {
  cmplx m[4]{};

  static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }
  static Mat2 diag(cmplx a, cmplx b) { return Mat2{{a, 0.0, 0.0, b}}; }

  cmplx det() const { return m[0] * m[3] - m[1] * m[2]; }
  Mat2 adjoint() const {
    return Mat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
                 std::conj(m[3])}};
  }
  bool operator==(const Mat2& o) const {
    return m[0] == o.m[0] && m[1] == o.m[1] && m[2] == o.m[2] && m[3] == o.m[3];
  }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2{{a.m[0] * b.m[0] + a.m[1] * b.m[2],
               a.m[0] * b.m[1] + a.m[1] * b.m[3],
               a.m[2] * b.m[0] + a.m[3] * b.m[2],
               a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
}

inline Mat2 operator*(cmplx s, const Mat2& a) {
  return Mat2{{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return Mat2{{a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2],
               a.m[3] - b.m[3]}};
}

// Largest singular value; exact closed form via the 2x2 Gram matrix.
inline double op_norm(const Mat2& a) {
  double g00 = std::norm(a.m[0]) + std::norm(a.m[2]);
  double g11 = std::norm(a.m[1]) + std::norm(a.m[3]);
  cmplx g01 = std::conj(a.m[0]) * a.m[1] + std::conj(a.m[2]) * a.m[3];
  double mid = 0.5 * (g00 + g11);
  double rad = std::sqrt(0.25 * (g00 - g11) * (g00 - g11) + std::norm(g01));
  return std::sqrt(std::max(0.0, mid + rad));
}

inline double op_norm_diff(const Mat2& a, const Mat2& b) {
  return op_norm(a - b);
}

inline bool is_unitary(const Mat2& a, double tol) {
  Mat2 g = a.adjoint() * a;
  return op_norm_diff(g, Mat2::identity()) <= tol;
}

// Basis key wide enough for synthesis circuits whose ancilla registers
// (sequence tables, conjunction pools) push width past 64 qubits. The
// widest consumer is the diagonal compiler at n=8: inputs + a 2*K_pad
// sequence register (K_pad <= 120) + the oracle's conjunction pool.
struct Key {
  static constexpr int kWords = 8;
  static constexpr int kMaxBits = kWords * 64;
  uint64_t w[kWords];

  constexpr Key() : w{} {}
  constexpr Key(uint64_t low) : w{low} {}  // NOLINT: implicit by design

  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void flip(int i) { w[i >> 6] ^= 1ull << (i & 63); }
  void set(int i, bool v) {
    uint64_t m = 1ull << (i & 63);
    if (v) w[i >> 6] |= m; else w[i >> 6] &= ~m;
  }
  bool any_at_or_above(int i) const {
    int wi = i >> 6, bi = i & 63;
    if (wi >= kWords) return false;
    if (w[wi] >> bi) return true;
    for (int k = wi + 1; k < kWords; ++k)
      if (w[k]) return true;
    return false;
  }
  bool is_zero() const {
    uint64_t acc = 0;
    for (uint64_t x : w) acc |= x;
    return acc == 0;
  }
  uint64_t low() const { return w[0]; }

  bool operator==(const Key& o) const {
    for (int k = 0; k < kWords; ++k)
      if (w[k] != o.w[k]) return false;
    return true;
  }
  bool operator!=(const Key& o) const { return !(*this == o); }
  bool operator<(const Key& o) const {
    for (int k = kWords - 1; k >= 0; --k)
      if (w[k] != o.w[k]) return w[k] < o.w[k];
    return false;
  }
};

struct KeyHash {
  size_t operator()(const Key& k) const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (uint64_t x : k.w) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return (size_t)h;
  }
};

std::string key_to_decimal(const Key& k);
Key key_from_decimal(const std::string& s);  // throws on junk/overflow

// splitmix64; used to derive stable per-instance seeds from mixed fields.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  return mix_seed(a ^ mix_seed(b));
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(mix_seed(seed)) {}

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  uint64_t bits() { return eng(); }
  // uniform in [0, n)
  uint64_t below(uint64_t n) {
    return std::uniform_int_distribution<uint64_t>(0, n - 1)(eng);
  }
};

// Chunked parallel map over [0, n); jobs <= 1 runs inline. Exceptions from
// workers are rethrown on the calling thread.
inline void parallel_for(size_t n, int jobs,
                         const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  size_t nthreads = std::min<size_t>(jobs, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nthreads);
  for (size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (size_t i = t; i < n; i += nthreads) fn(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace tforge
