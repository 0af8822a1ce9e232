#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tforge/circuit.hpp"
#include "tforge/common.hpp"

namespace tforge {

// Amplitudes below this are dropped after branching gates.
inline constexpr double kPruneThreshold = 1e-14;

struct SparseState {
  int width = 0;
  std::unordered_map<Key, cmplx, KeyHash> amps;  // basis key -> amplitude, LSB = qubit 0

  static SparseState basis(int width, Key key);
  static SparseState from_dense(int width, const std::vector<cmplx>& v);
  std::vector<cmplx> to_dense() const;  // width <= 24 only

  double norm2() const;
  cmplx amp(Key key) const;
};

// <a|b>
cmplx inner(const SparseState& a, const SparseState& b);

// Applies c to input. Macros are applied natively (same unitary as their
// expansions; the equivalence is what the circuit tests pin down), so
// verification does not pay the expansion overhead. Throws on width mismatch.
SparseState run(const Circuit& c, const SparseState& input);

// sqrt(max(0, 2 - 2|<a|b>|)): l2 distance minimized over a global phase.
double l2_phase_min_distance(const SparseState& a, const SparseState& b);

struct DiagonalSpec {
  int n = 0;
  std::vector<double> phases;  // 2^n angles, radians
};

// Runs c on every basis input |j> (ancillas |0>), requiring output
// phase*|j>|0...0> with off-product weight < leak_tol. The default matches
// exact circuits; synthesized circuits pass a tolerance derived from their
// error budget since an eps-approximate row leaks O(eps^2) weight.
DiagonalSpec extract_diagonal(const Circuit& c, int n, double leak_tol = 1e-9,
                              int jobs = 1);

// max_j |e^{i got} - e^{i want}|
double diagonal_op_norm_error(const DiagonalSpec& got, const DiagonalSpec& want);

// Probability mass on keys whose non-input bits are not all zero.
double ancilla_clean_weight(const SparseState& s, int input_count);

// State file: "QUBITS <n>" header, then "<index> <re> <im>" lines.
std::string serialize_state(const SparseState& s);
SparseState parse_state(const std::string& text);  // must be normalized to 1e-6

// Diagonal spec file: "N <n>" header, then 2^n phase lines in radians.
std::string serialize_diagonal(const DiagonalSpec& d);
DiagonalSpec parse_diagonal(const std::string& text);

}  // namespace tforge
