#include "tforge/circuit.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace tforge {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "TDG";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::CX: return "CX";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP: return "SWAP";
    case GateKind::CCX: return "CCX";
    case GateKind::CH: return "CH";
    case GateKind::CT: return "CT";
    case GateKind::CTdg: return "CTDG";
    case GateKind::SQ1: return "SQ1";
  }
  fail("bad gate kind");
}

int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::H: case GateKind::T: case GateKind::Tdg:
    case GateKind::S: case GateKind::Sdg: case GateKind::X:
    case GateKind::Y: case GateKind::Z: case GateKind::SQ1:
      return 1;
    case GateKind::CX: case GateKind::CZ: case GateKind::SWAP:
    case GateKind::CH: case GateKind::CT: case GateKind::CTdg:
      return 2;
    case GateKind::CCX:
      return 3;
  }
  fail("bad gate kind");
}

bool gate_is_primitive(GateKind k) {
  switch (k) {
    case GateKind::CCX: case GateKind::CH: case GateKind::CT:
    case GateKind::CTdg: case GateKind::SQ1:
      return false;
    default:
      return true;
  }
}

bool structurally_equal(const Gate& a, const Gate& b) {
  if (a.kind != b.kind || a.qubits != b.qubits) return false;
  if (a.kind == GateKind::SQ1 && !(a.payload == b.payload)) return false;
  return true;
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
  if (a.width != b.width || a.input_count != b.input_count) return false;
  if (a.gates.size() != b.gates.size()) return false;
  for (size_t i = 0; i < a.gates.size(); ++i)
    if (!structurally_equal(a.gates[i], b.gates[i])) return false;
  return true;
}

void validate_circuit(const Circuit& c) {
  if (c.input_count < 0 || c.width < c.input_count)
    fail("circuit width/input_count out of order");
  for (const Gate& g : c.gates) {
    if ((int)g.qubits.size() != gate_arity(g.kind))
      fail(std::string("wrong operand count for ") + gate_name(g.kind));
    for (size_t i = 0; i < g.qubits.size(); ++i) {
      if (g.qubits[i] < 0 || g.qubits[i] >= c.width)
        fail("gate operand out of range");
      for (size_t j = i + 1; j < g.qubits.size(); ++j)
        if (g.qubits[i] == g.qubits[j]) fail("repeated gate operand");
    }
    if (g.kind == GateKind::SQ1 && !is_unitary(g.payload, 1e-10))
      fail("SQ1 payload not unitary");
  }
}

int QubitPool::alloc() {
  int q;
  if (!free_.empty()) {
    q = free_.back();
    free_.pop_back();
  } else {
    q = width_++;
  }
  ++in_use_;
  high_water_ = std::max(high_water_, in_use_);
  return q;
}

void QubitPool::release(int q) {
  for (int f : free_)
    if (f == q) fail("qubit released twice");
  free_.push_back(q);
  --in_use_;
}

namespace {

// Standard 7-T Toffoli.
void emit_ccx(Circuit& out, int c1, int c2, int t) {
  out.push(GateKind::H, {t});
  out.push(GateKind::CX, {c2, t});
  out.push(GateKind::Tdg, {t});
  out.push(GateKind::CX, {c1, t});
  out.push(GateKind::T, {t});
  out.push(GateKind::CX, {c2, t});
  out.push(GateKind::Tdg, {t});
  out.push(GateKind::CX, {c1, t});
  out.push(GateKind::T, {c2});
  out.push(GateKind::T, {t});
  out.push(GateKind::H, {t});
  out.push(GateKind::CX, {c1, c2});
  out.push(GateKind::T, {c1});
  out.push(GateKind::Tdg, {c2});
  out.push(GateKind::CX, {c1, c2});
}

// V X V' = H with V = (apply S, then H, then T); conjugating the CX target
// turns it into a controlled H without ancillas.
void emit_ch(Circuit& out, int c, int t) {
  out.push(GateKind::S, {t});
  out.push(GateKind::H, {t});
  out.push(GateKind::T, {t});
  out.push(GateKind::CX, {c, t});
  out.push(GateKind::Tdg, {t});
  out.push(GateKind::H, {t});
  out.push(GateKind::Sdg, {t});
}

}  // namespace

Circuit expand_macros(const Circuit& c) {
  validate_circuit(c);
  bool needs_scratch = false;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::SQ1) fail("unresolved single-qubit placeholder");
    if (g.kind == GateKind::CT || g.kind == GateKind::CTdg)
      needs_scratch = true;
  }
  Circuit out;
  out.width = c.width + (needs_scratch ? 1 : 0);
  out.input_count = c.input_count;
  out.label = c.label;
  int scratch = c.width;  // valid only when needs_scratch
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::CCX:
        emit_ccx(out, g.qubits[0], g.qubits[1], g.qubits[2]);
        break;
      case GateKind::CH:
        emit_ch(out, g.qubits[0], g.qubits[1]);
        break;
      case GateKind::CT:
      case GateKind::CTdg:
        emit_ccx(out, g.qubits[0], g.qubits[1], scratch);
        out.push(g.kind == GateKind::CT ? GateKind::T : GateKind::Tdg,
                 {scratch});
        emit_ccx(out, g.qubits[0], g.qubits[1], scratch);
        break;
      default:
        out.gates.push_back(g);
    }
  }
  return out;
}

long t_count(const Circuit& c) {
  Circuit e = expand_macros(c);
  long n = 0;
  for (const Gate& g : e.gates)
    if (g.kind == GateKind::T || g.kind == GateKind::Tdg) ++n;
  return n;
}

long clifford_count(const Circuit& c) {
  Circuit e = expand_macros(c);
  long n = 0;
  for (const Gate& g : e.gates)
    if (g.kind != GateKind::T && g.kind != GateKind::Tdg) ++n;
  return n;
}

Circuit adjoint(const Circuit& c) {
  Circuit out;
  out.width = c.width;
  out.input_count = c.input_count;
  out.label = c.label;
  out.gates.reserve(c.gates.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
      case GateKind::T: g.kind = GateKind::Tdg; break;
      case GateKind::Tdg: g.kind = GateKind::T; break;
      case GateKind::S: g.kind = GateKind::Sdg; break;
      case GateKind::Sdg: g.kind = GateKind::S; break;
      case GateKind::CT: g.kind = GateKind::CTdg; break;
      case GateKind::CTdg: g.kind = GateKind::CT; break;
      case GateKind::SQ1: g.payload = g.payload.adjoint(); break;
      default: break;  // self-inverse
    }
    out.gates.push_back(std::move(g));
  }
  return out;
}

std::string serialize(const Circuit& c) {
  std::ostringstream os;
  os << "QUBITS " << c.width << " INPUTS " << c.input_count << "\n";
  if (!c.label.empty()) os << "# " << c.label << "\n";
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::SQ1) fail("unresolved single-qubit placeholder");
    os << gate_name(g.kind);
    for (int q : g.qubits) os << ' ' << q;
    os << "\n";
  }
  return os.str();
}

Circuit parse_circuit(const std::string& text) {
  static const std::map<std::string, GateKind> kByName = {
      {"H", GateKind::H},       {"T", GateKind::T},
      {"TDG", GateKind::Tdg},   {"S", GateKind::S},
      {"SDG", GateKind::Sdg},   {"X", GateKind::X},
      {"Y", GateKind::Y},       {"Z", GateKind::Z},
      {"CX", GateKind::CX},     {"CZ", GateKind::CZ},
      {"SWAP", GateKind::SWAP}, {"CCX", GateKind::CCX},
      {"CH", GateKind::CH},     {"CT", GateKind::CT},
      {"CTDG", GateKind::CTdg},
  };
  Circuit c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  bool first_content = true;
  auto bad = [&](const std::string& why) {
    fail("parse error at line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (first_content && tok == "QUBITS") {
      std::string inputs_kw;
      if (!(ls >> c.width >> inputs_kw >> c.input_count) ||
          inputs_kw != "INPUTS")
        bad("malformed header");
      if (c.width < 0 || c.input_count < 0 || c.input_count > c.width)
        bad("header counts out of order");
      have_header = true;
      first_content = false;
      continue;
    }
    first_content = false;
    auto it = kByName.find(tok);
    if (it == kByName.end()) bad("unknown gate '" + tok + "'");
    std::vector<int> qs(gate_arity(it->second));
    for (int& q : qs)
      if (!(ls >> q)) bad("missing operand");
    std::string extra;
    if (ls >> extra) bad("trailing token '" + extra + "'");
    c.gates.emplace_back(it->second, std::move(qs));
  }
  // Headerless text is accepted for convenience: width is inferred and
  // every qubit is treated as an input.
  if (!have_header) {
    int w = 0;
    for (const Gate& g : c.gates)
      for (int q : g.qubits) w = std::max(w, q + 1);
    c.width = w;
    c.input_count = w;
  }
  try {
    validate_circuit(c);
  } catch (const std::exception& e) {
    fail(std::string("parse error: ") + e.what());
  }
  return c;
}

}  // namespace tforge
