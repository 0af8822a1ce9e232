#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tforge/circuit.hpp"
#include "tforge/sparse_sim.hpp"

namespace tforge {

// Bit rows recording, per control value j, the H/T word implementing that
// row's diagonal block. Row j = encode_word of the word for
// diag(e^{i theta_j}, e^{-i theta_j}); all rows share the padded length.
struct GateSequenceTable {
  int n = 0;
  int k_pad = 0;
  std::vector<std::string> rows;  // 2^n strings of 2*k_pad '0'/'1' chars
};

GateSequenceTable build_sequence_table(const DiagonalSpec& spec, double eps);

// Alternating controlled-H / controlled-T ladder driven by a sequence
// register: for pair index l = 1..k_pad, CH controlled by seq[2l-2] then CT
// controlled by seq[2l-1], both targeting `target`. seq must hold 2*k_pad
// distinct qubits. H and T are symmetric matrices, so consuming the word
// bits in this order realizes the transpose of the word's matrix, which
// approximates a diagonal target exactly as well as the word itself.
Circuit controlled_ladder(int k_pad, const std::vector<int>& seq, int target);

// Compiles an arbitrary diagonal unitary over n input qubits. Phases that
// are all multiples of pi route to the exact +-1 phase oracle; otherwise a
// sequence table drives the CH/CT ladder on a working ancilla between two
// applications of the table's XOR oracle. The emitted circuit is verified
// per basis state before returning; ancillas are above the n inputs.
std::pair<Circuit, SynthReport> synth_diagonal(const DiagonalSpec& spec,
                                               double eps);

// diag(U_1, ..., U_{2^n}) for arbitrary single-qubit blocks: target qubit 0,
// block index on qubits [1, n+1) (LSB = qubit 1). Each block splits as
// A H B H C with diagonal factors, giving three diagonal compilations at
// eps/3 interleaved with H on the target.
Circuit synth_block_diag(const std::vector<Mat2>& units, double eps);

// U_1 (x) ... (x) U_m with qubit j hosting U_{j+1}: the per-qubit Euler
// splits share their H layers, so the product is three m-qubit diagonals
// at eps/3 interleaved with H on every qubit.
Circuit synth_tensor_singles(const std::vector<Mat2>& units, double eps);

// Splits the units into groups of g = max(1, ceil(log2 log2 (1/eps)))
// consecutive qubits and compiles each group with synth_tensor_singles at
// eps / (group count). Groups share one ancilla block above qubit m.
Circuit synth_batched(const std::vector<Mat2>& units, double eps);

}  // namespace tforge
