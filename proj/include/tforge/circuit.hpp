#pragma once

#include <string>
#include <vector>

#include "tforge/common.hpp"

namespace tforge {

enum class GateKind {
  H, T, Tdg, S, Sdg, X, Y, Z, CX, CZ, SWAP,   // primitives
  CCX, CH, CT, CTdg,                          // macros with fixed expansions
  SQ1,                                        // single-qubit placeholder
};

// T-counts of the frozen macro expansions. Tests recompute them from
// expand_macros output; nothing else is allowed to assume the values.
inline constexpr int kTCountCCX = 7;
inline constexpr int kTCountCH = 2;
inline constexpr int kTCountCT = 2 * kTCountCCX + 1;

const char* gate_name(GateKind k);
int gate_arity(GateKind k);
bool gate_is_primitive(GateKind k);

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  Mat2 payload;  // meaningful for SQ1 only

  Gate(GateKind k, std::vector<int> qs) : kind(k), qubits(std::move(qs)) {}
  Gate(GateKind k, std::vector<int> qs, const Mat2& p)
      : kind(k), qubits(std::move(qs)), payload(p) {}
};

bool structurally_equal(const Gate& a, const Gate& b);

struct Circuit {
  int width = 0;
  int input_count = 0;
  std::vector<Gate> gates;
  std::string label;

  void push(GateKind k, std::vector<int> qs) {
    gates.emplace_back(k, std::move(qs));
  }
  void push_sq1(int q, const Mat2& u) {
    gates.emplace_back(GateKind::SQ1, std::vector<int>{q}, u);
  }
};

bool structurally_equal(const Circuit& a, const Circuit& b);

// Per-synthesis record. t_count / clifford_count are primitive counts of
// the expanded circuit; ancilla_count is width - input_count.
struct SynthReport {
  long t_count = 0;
  long clifford_count = 0;
  int ancilla_count = 0;
  double measured_error = 0;
  double wall_time = 0;  // seconds
};

// Throws on operand clashes, out-of-range indices, width < input_count,
// or a non-unitary SQ1 payload (tolerance 1e-10).
void validate_circuit(const Circuit& c);

// Ancilla allocator. Indices at or above the initial width are created on
// demand; free slots are reused LIFO. high_water tracks peak concurrent use
// of allocated slots.
class QubitPool {
 public:
  explicit QubitPool(int initial_width) : width_(initial_width) {}

  int alloc();
  void release(int q);
  int width() const { return width_; }
  int high_water() const { return high_water_; }

 private:
  int width_;
  int in_use_ = 0;
  int high_water_ = 0;
  std::vector<int> free_;
};

// Replaces CCX/CH/CT/CTdg by their fixed primitive expansions. CT and CTdg
// share one scratch ancilla appended at the end of the width (allocated only
// if needed). Output unitary equals input unitary exactly. Throws on SQ1.
Circuit expand_macros(const Circuit& c);

// T/Tdg primitive count of expand_macros(c). Throws on SQ1.
long t_count(const Circuit& c);
// Count of primitive non-T gates in expand_macros(c).
long clifford_count(const Circuit& c);

Circuit adjoint(const Circuit& c);

// Line format: header "QUBITS <w> INPUTS <i>", one gate per line, '#'
// comments. SQ1 has no serialized form and throws.
std::string serialize(const Circuit& c);
Circuit parse_circuit(const std::string& text);

}  // namespace tforge
