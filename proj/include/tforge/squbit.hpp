#pragma once

#include <array>
#include <string>
#include <vector>

#include "tforge/circuit.hpp"
#include "tforge/common.hpp"

namespace tforge {

// Product H^{a_1}T^{b_1} ... H^{a_K}T^{b_K}, block 1 leftmost. As a circuit
// the rightmost factor acts first, so gates are emitted in reverse block
// order with each block's T before its H.
struct HTWord {
  std::vector<std::pair<uint8_t, uint8_t>> pairs;

  size_t blocks() const { return pairs.size(); }
  int t_count() const {
    int t = 0;
    for (auto& p : pairs) t += p.second;
    return t;
  }
};

Mat2 word_matrix(const HTWord& w);
void append_word_gates(Circuit& c, const HTWord& w, int qubit);

// Interleaved (a_1, b_1, ..., a_Kpad, b_Kpad) as a '0'/'1' string, padded
// with identity blocks; throws on overflow. decode keeps the padded length.
std::string encode_word(const HTWord& w, int k_pad);
HTWord decode_word(const std::string& bits);

// U = A * H * B * H * C with A, B, C diagonal and unit modulus entries.
std::array<Mat2, 3> euler_hdh(const Mat2& u);

inline constexpr double kDefaultEpsFloor = 1e-5;

// H/T-word approximation backed by a breadth-first word database with exact
// ring arithmetic, a meet-in-the-middle scan, and a near-diagonal pair
// composition stage for deep diagonal targets. Built once, read-only after.
class SqubitSynth {
 public:
  static const SqubitSynth& instance();

  // det(u) must be 1 (tolerance 1e-10); no global-phase quotient.
  // Throws "precision unreachable" when eps < eps_floor or the search
  // space has no word within eps.
  HTWord approx_su2(const Mat2& u, double eps,
                    double eps_floor = kDefaultEpsFloor) const;

  // diag(e^{-i theta/2}, e^{+i theta/2})
  HTWord approx_rz(double theta, double eps,
                   double eps_floor = kDefaultEpsFloor) const;

  size_t db_size() const;
  size_t harvest_size() const;
  int db_depth() const;

  SqubitSynth(const SqubitSynth&) = delete;
  SqubitSynth& operator=(const SqubitSynth&) = delete;

 private:
  SqubitSynth();
  ~SqubitSynth();
  struct Impl;
  Impl* impl_;
};

}  // namespace tforge
