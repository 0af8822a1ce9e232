#include "tforge/sparse_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tforge {

SparseState SparseState::basis(int width, Key key) {
  if (width > Key::kMaxBits) fail("state too wide");
  SparseState s;
  s.width = width;
  s.amps[key] = 1.0;
  return s;
}

SparseState SparseState::from_dense(int width, const std::vector<cmplx>& v) {
  SparseState s;
  s.width = width;
  for (size_t k = 0; k < v.size(); ++k)
    if (std::abs(v[k]) > kPruneThreshold) s.amps[Key(k)] = v[k];
  return s;
}

std::vector<cmplx> SparseState::to_dense() const {
  if (width > 24) fail("state too wide for dense expansion");
  std::vector<cmplx> v(size_t(1) << width, 0.0);
  for (const auto& [k, a] : amps) v[k.low()] = a;
  return v;
}

double SparseState::norm2() const {
  double n = 0;
  for (const auto& [k, a] : amps) n += std::norm(a);
  return n;
}

cmplx SparseState::amp(Key key) const {
  auto it = amps.find(key);
  return it == amps.end() ? cmplx(0.0) : it->second;
}

cmplx inner(const SparseState& a, const SparseState& b) {
  if (a.width != b.width) fail("state width mismatch");
  bool small_is_a = a.amps.size() <= b.amps.size();
  const auto& small = small_is_a ? a.amps : b.amps;
  const auto& big = small_is_a ? b.amps : a.amps;
  cmplx acc = 0.0;
  for (const auto& [k, v] : small) {
    auto it = big.find(k);
    if (it == big.end()) continue;
    acc += small_is_a ? std::conj(v) * it->second : std::conj(it->second) * v;
  }
  return acc;
}

namespace {

using Entry = std::pair<Key, cmplx>;

// Sort by key, merge duplicates, drop near-zero amplitudes.
void canonicalize(std::vector<Entry>& v) {
  std::sort(v.begin(), v.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  size_t out = 0;
  for (size_t i = 0; i < v.size();) {
    Key key = v[i].first;
    cmplx acc = v[i].second;
    for (++i; i < v.size() && v[i].first == key; ++i) acc += v[i].second;
    if (std::abs(acc) > kPruneThreshold) v[out++] = {key, acc};
  }
  v.resize(out);
}

struct Engine {
  std::vector<Entry> ent;
  std::vector<Entry> scratch;

  void branch1(int q, const Mat2& u) {
    scratch.clear();
    scratch.reserve(ent.size() * 2);
    for (const auto& [k, a] : ent) {
      Key kf = k;
      kf.flip(q);
      if (k.test(q)) {
        if (u.m[1] != 0.0) scratch.emplace_back(kf, u.m[1] * a);
        if (u.m[3] != 0.0) scratch.emplace_back(k, u.m[3] * a);
      } else {
        if (u.m[0] != 0.0) scratch.emplace_back(k, u.m[0] * a);
        if (u.m[2] != 0.0) scratch.emplace_back(kf, u.m[2] * a);
      }
    }
    ent.swap(scratch);
    canonicalize(ent);
  }

  // Same but only for entries with ctl set; others pass through.
  void branch1_controlled(int ctl, int q, const Mat2& u) {
    scratch.clear();
    scratch.reserve(ent.size() * 2);
    for (const auto& [k, a] : ent) {
      if (!k.test(ctl)) {
        scratch.emplace_back(k, a);
        continue;
      }
      Key kf = k;
      kf.flip(q);
      if (k.test(q)) {
        if (u.m[1] != 0.0) scratch.emplace_back(kf, u.m[1] * a);
        if (u.m[3] != 0.0) scratch.emplace_back(k, u.m[3] * a);
      } else {
        if (u.m[0] != 0.0) scratch.emplace_back(k, u.m[0] * a);
        if (u.m[2] != 0.0) scratch.emplace_back(kf, u.m[2] * a);
      }
    }
    ent.swap(scratch);
    canonicalize(ent);
  }

  void apply(const Gate& g) {
    static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
    static const cmplx kOmega = std::polar(1.0, kPi / 4);
    switch (g.kind) {
      case GateKind::X: {
        int q = g.qubits[0];
        for (auto& [k, a] : ent) k.flip(q);
        break;
      }
      case GateKind::Y: {
        int q = g.qubits[0];
        for (auto& [k, a] : ent) {
          a *= k.test(q) ? cmplx(0, -1) : cmplx(0, 1);
          k.flip(q);
        }
        break;
      }
      case GateKind::Z: {
        int q = g.qubits[0];
        for (auto& [k, a] : ent)
          if (k.test(q)) a = -a;
        break;
      }
      case GateKind::S: case GateKind::Sdg: {
        int q = g.qubits[0];
        cmplx ph(0, g.kind == GateKind::S ? 1 : -1);
        for (auto& [k, a] : ent)
          if (k.test(q)) a *= ph;
        break;
      }
      case GateKind::T: case GateKind::Tdg: {
        int q = g.qubits[0];
        cmplx ph = g.kind == GateKind::T ? kOmega : std::conj(kOmega);
        for (auto& [k, a] : ent)
          if (k.test(q)) a *= ph;
        break;
      }
      case GateKind::CX: {
        int c = g.qubits[0], t = g.qubits[1];
        for (auto& [k, a] : ent)
          if (k.test(c)) k.flip(t);
        break;
      }
      case GateKind::CZ: {
        int c = g.qubits[0], t = g.qubits[1];
        for (auto& [k, a] : ent)
          if (k.test(c) && k.test(t)) a = -a;
        break;
      }
      case GateKind::SWAP: {
        int x = g.qubits[0], y = g.qubits[1];
        for (auto& [k, a] : ent) {
          if (k.test(x) != k.test(y)) {
            k.flip(x);
            k.flip(y);
          }
        }
        break;
      }
      case GateKind::CCX: {
        int c1 = g.qubits[0], c2 = g.qubits[1], t = g.qubits[2];
        for (auto& [k, a] : ent)
          if (k.test(c1) && k.test(c2)) k.flip(t);
        break;
      }
      case GateKind::CT: case GateKind::CTdg: {
        int c = g.qubits[0], t = g.qubits[1];
        cmplx ph = g.kind == GateKind::CT ? kOmega : std::conj(kOmega);
        for (auto& [k, a] : ent)
          if (k.test(c) && k.test(t)) a *= ph;
        break;
      }
      case GateKind::H:
        branch1(g.qubits[0],
                Mat2{{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}});
        break;
      case GateKind::CH:
        branch1_controlled(g.qubits[0], g.qubits[1],
                           Mat2{{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}});
        break;
      case GateKind::SQ1:
        branch1(g.qubits[0], g.payload);
        break;
    }
  }
};

}  // namespace

SparseState run(const Circuit& c, const SparseState& input) {
  if (input.width != c.width) fail("run: state width mismatch");
  if (c.width > Key::kMaxBits) fail("run: circuit too wide");
  validate_circuit(c);
  Engine e;
  e.ent.assign(input.amps.begin(), input.amps.end());
  canonicalize(e.ent);
  double norm_in = input.norm2();
  for (const Gate& g : c.gates) e.apply(g);
  SparseState out;
  out.width = c.width;
  out.amps.reserve(e.ent.size() * 2);
  double norm_out = 0;
  for (const auto& [k, a] : e.ent) {
    out.amps.emplace(k, a);
    norm_out += std::norm(a);
  }
  if (std::abs(norm_in - 1.0) < 1e-9 && std::abs(norm_out - 1.0) > 1e-9)
    fail("run: norm drifted beyond tolerance");
  return out;
}

double l2_phase_min_distance(const SparseState& a, const SparseState& b) {
  double ov = std::abs(inner(a, b));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * ov));
}

DiagonalSpec extract_diagonal(const Circuit& c, int n, double leak_tol,
                              int jobs) {
  if (c.input_count != n) fail("extract_diagonal: input_count mismatch");
  if (n < 0 || n > 24) fail("extract_diagonal: n out of range");
  size_t dim = size_t(1) << n;
  DiagonalSpec spec;
  spec.n = n;
  spec.phases.assign(dim, 0.0);
  std::vector<std::string> errors(dim);
  parallel_for(dim, jobs, [&](size_t j) {
    SparseState out = run(c, SparseState::basis(c.width, Key(j)));
    cmplx a = out.amp(Key(j));
    double off = out.norm2() - std::norm(a);
    if (off >= leak_tol) {
      errors[j] = "not diagonal: basis input " + std::to_string(j) +
                  " leaks weight " + std::to_string(off);
      return;
    }
    spec.phases[j] = std::arg(a);
  });
  for (const auto& e : errors)
    if (!e.empty()) fail(e);
  return spec;
}

double diagonal_op_norm_error(const DiagonalSpec& got,
                              const DiagonalSpec& want) {
  if (got.n != want.n) fail("diagonal size mismatch");
  double worst = 0;
  for (size_t j = 0; j < got.phases.size(); ++j) {
    double d = 2.0 * std::abs(std::sin(0.5 * (got.phases[j] - want.phases[j])));
    worst = std::max(worst, d);
  }
  return worst;
}

double ancilla_clean_weight(const SparseState& s, int input_count) {
  double w = 0;
  for (const auto& [k, a] : s.amps)
    if (k.any_at_or_above(input_count)) w += std::norm(a);
  return w;
}

std::string serialize_state(const SparseState& s) {
  std::vector<Entry> v(s.amps.begin(), s.amps.end());
  std::sort(v.begin(), v.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::ostringstream os;
  os.precision(17);
  os << "QUBITS " << s.width << "\n";
  for (const auto& [k, a] : v) {
    if (std::abs(a) <= kPruneThreshold) continue;
    os << key_to_decimal(k) << ' ' << a.real() << ' ' << a.imag() << "\n";
  }
  return os.str();
}

SparseState parse_state(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  SparseState s;
  bool have_header = false;
  auto bad = [&](const std::string& why) {
    fail("state parse error at line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string kw;
      if (!(ls >> kw >> s.width) || kw != "QUBITS" || s.width < 0 ||
          s.width > Key::kMaxBits)
        bad("expected QUBITS header");
      have_header = true;
      continue;
    }
    std::string keytok;
    double re, im;
    if (!(ls >> keytok >> re >> im)) bad("expected '<index> <re> <im>'");
    Key key;
    try {
      key = key_from_decimal(keytok);
    } catch (const std::exception& e) {
      bad(e.what());
    }
    if (key.any_at_or_above(s.width)) bad("basis index out of range");
    if (!s.amps.emplace(key, cmplx(re, im)).second) bad("duplicate index");
  }
  if (!have_header) fail("state parse error: missing QUBITS header");
  if (std::abs(s.norm2() - 1.0) > 1e-6)
    fail("state file not normalized within 1e-6");
  return s;
}

std::string serialize_diagonal(const DiagonalSpec& d) {
  std::ostringstream os;
  os.precision(17);
  os << "N " << d.n << "\n";
  for (double p : d.phases) os << p << "\n";
  return os.str();
}

DiagonalSpec parse_diagonal(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  DiagonalSpec d;
  bool have_header = false;
  size_t want = 0;
  auto bad = [&](const std::string& why) {
    fail("diagonal parse error at line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string kw;
      if (!(ls >> kw >> d.n) || kw != "N" || d.n < 0 || d.n > 24)
        bad("expected N header");
      want = size_t(1) << d.n;
      have_header = true;
      continue;
    }
    double p;
    if (!(ls >> p)) bad("expected a phase in radians");
    if (d.phases.size() == want) bad("too many phases");
    d.phases.push_back(p);
  }
  if (!have_header) fail("diagonal parse error: missing N header");
  if (d.phases.size() != want)
    fail("diagonal parse error: expected " + std::to_string(want) +
         " phases, got " + std::to_string(d.phases.size()));
  return d;
}

}  // namespace tforge
