#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tforge/common.hpp"

namespace tforge {

// f: {0,1}^n -> {0,1}^b, row index = input value. Rows are stored packed,
// one byte-aligned strip per row, so b may exceed machine-word width (the
// gate-sequence tables built by the diagonal compiler need b in the
// hundreds).
struct TruthTable {
  int n = 0;
  int b = 1;
  std::vector<uint8_t> bits;

  static TruthTable zero(int n, int b);

  size_t row_stride() const { return (size_t)(b + 7) / 8; }
  bool bit(uint64_t x, int j) const {
    return (bits[x * row_stride() + (size_t)(j >> 3)] >> (j & 7)) & 1;
  }
  void set_bit(uint64_t x, int j, bool v) {
    uint8_t& byte = bits[x * row_stride() + (size_t)(j >> 3)];
    uint8_t m = (uint8_t)(1u << (j & 7));
    byte = v ? (byte | m) : (byte & ~m);
  }
  // whole-row access, only meaningful for b <= 64
  uint64_t row(uint64_t x) const;
  void set_row(uint64_t x, uint64_t value);
};

TruthTable random_table(Rng& rng, int n, int b);

// File format: header "N <n> B <b>", then 2^n lines of b binary characters,
// most significant output bit first; row index = input value.
std::string serialize_table(const TruthTable& t);
TruthTable parse_table(const std::string& text);

// Diagonal of +-1 entries over n qubits.
struct PhaseTable {
  int n = 0;
  std::vector<int8_t> signs;

  static PhaseTable plus(int n);
};

PhaseTable random_phase_table(Rng& rng, int n);

// File format: header "N <n>", then 2^n lines of '+' or '-'.
std::string serialize_phase_table(const PhaseTable& t);
PhaseTable parse_phase_table(const std::string& text);

}  // namespace tforge
