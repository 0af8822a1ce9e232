#include "tforge/boolean_synth.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace tforge {

Key run_bits(const Circuit& c, Key input) {
  Key s = input;
  for (const Gate& g : c.gates) {
    const auto& q = g.qubits;
    switch (g.kind) {
      case GateKind::X:
        s.flip(q[0]);
        break;
      case GateKind::CX:
        if (s.test(q[0])) s.flip(q[1]);
        break;
      case GateKind::CCX:
        if (s.test(q[0]) && s.test(q[1])) s.flip(q[2]);
        break;
      case GateKind::SWAP:
        if (s.test(q[0]) != s.test(q[1])) {
          s.flip(q[0]);
          s.flip(q[1]);
        }
        break;
      default:
        fail("run_bits: non-classical gate " + std::string(gate_name(g.kind)));
    }
  }
  return s;
}

uint64_t count_ccx(const Circuit& c) {
  uint64_t k = 0;
  for (const Gate& g : c.gates) k += g.kind == GateKind::CCX;
  return k;
}

int choose_split(int n, int b) {
  if (n < 0 || n > 62 || b < 1) fail("choose_split: arguments out of range");
  int best_d = 0;
  uint64_t best = ~0ull;
  for (int d = 0; d <= n; ++d) {
    uint64_t v = ((uint64_t)b << d) + (1ull << (n - d));
    if (v < best) {
      best = v;
      best_d = d;
    }
  }
  return best_d;
}

namespace {

int high_bit(uint32_t m) { return 31 - std::countl_zero(m); }

// Monomial masks of each output bit, from the XOR-of-ANDs normal form.
std::vector<std::vector<uint32_t>> monomials(const TruthTable& f) {
  size_t rows = size_t(1) << f.n;
  std::vector<std::vector<uint32_t>> mono(f.b);
  std::vector<char> col(rows);
  for (int j = 0; j < f.b; ++j) {
    for (size_t x = 0; x < rows; ++x) col[x] = f.bit(x, j);
    for (int i = 0; i < f.n; ++i)
      for (size_t x = 0; x < rows; ++x)
        if (x >> i & 1) col[x] ^= col[x ^ (size_t(1) << i)];
    for (size_t x = 0; x < rows; ++x)
      if (col[x]) mono[j].push_back((uint32_t)x);
  }
  return mono;
}

// Emits the oracle at one split point. Inputs [0,d) form the branch side,
// enumerated as a subset tree with a stack of conjunction ancillas; inputs
// [d,n) form the pool side whose conjunctions are materialized once and
// shared by every output bit, then uncomputed in reverse.
struct SplitEmitter {
  int n, b, d;
  Circuit c;
  QubitPool anc;
  // grid[u-subset][output] = pool-side masks of that branch
  std::vector<std::vector<std::vector<uint32_t>>> grid;
  std::vector<uint32_t> pool;
  std::unordered_map<uint32_t, int> pool_wire;
  std::vector<char> needed;

  SplitEmitter(int n_, int b_, const std::vector<std::vector<uint32_t>>& mono,
               int d_)
      : n(n_), b(b_), d(d_), anc(n_ + b_) {
    uint32_t umask = d == 0 ? 0u : (1u << d) - 1u;
    grid.assign(size_t(1) << d, std::vector<std::vector<uint32_t>>(b));
    std::set<uint32_t> pool_set;
    for (int j = 0; j < b; ++j)
      for (uint32_t S : mono[j]) {
        uint32_t su = S & umask;
        uint32_t sp = S & ~umask;
        grid[su][j].push_back(sp);
        for (uint32_t cur = sp;
             std::popcount(cur) >= 2 && pool_set.insert(cur).second;
             cur &= ~(1u << high_bit(cur))) {
        }
      }
    pool.assign(pool_set.begin(), pool_set.end());
    std::sort(pool.begin(), pool.end(), [](uint32_t a, uint32_t b2) {
      int pa = std::popcount(a), pb = std::popcount(b2);
      return pa != pb ? pa < pb : a < b2;
    });
  }

  // total wires if emitted; used to skip splits that cannot fit a Key
  int width_estimate() const { return n + b + (int)pool.size() + d + 1; }

  int p_wire(uint32_t sp) const {
    return std::popcount(sp) == 1 ? std::countr_zero(sp) : pool_wire.at(sp);
  }

  void pool_ccx(uint32_t sp) {
    uint32_t par = sp & ~(1u << high_bit(sp));
    c.push(GateKind::CCX, {p_wire(par), high_bit(sp), pool_wire.at(sp)});
  }

  void xor_terms(const std::vector<uint32_t>& terms, int t) {
    for (uint32_t sp : terms) {
      if (sp == 0)
        c.push(GateKind::X, {t});
      else
        c.push(GateKind::CX, {p_wire(sp), t});
    }
  }

  void payload(int j, const std::vector<uint32_t>& terms, int u_wire) {
    int y = n + j;
    if (u_wire < 0) {
      xor_terms(terms, y);
      return;
    }
    if (terms.size() == 1) {
      uint32_t sp = terms[0];
      if (sp == 0)
        c.push(GateKind::CX, {u_wire, y});
      else
        c.push(GateKind::CCX, {u_wire, p_wire(sp), y});
      return;
    }
    int h = anc.alloc();
    xor_terms(terms, h);
    c.push(GateKind::CCX, {u_wire, h, y});
    xor_terms(terms, h);
    anc.release(h);
  }

  bool node_used(uint32_t su) const {
    for (int j = 0; j < b; ++j)
      if (!grid[su][j].empty()) return true;
    return false;
  }

  void compute_needed() {
    size_t m = grid.size();
    needed.assign(m, 0);
    for (size_t su = m; su-- > 0;) {
      if (node_used((uint32_t)su)) {
        needed[su] = 1;
        continue;
      }
      int lo = su == 0 ? 0 : high_bit((uint32_t)su) + 1;
      for (int v = lo; v < d && !needed[su]; ++v)
        needed[su] = needed[su | (size_t(1) << v)];
    }
  }

  void dfs(uint32_t su, int u_wire) {
    for (int j = 0; j < b; ++j)
      if (!grid[su][j].empty()) payload(j, grid[su][j], u_wire);
    int lo = su == 0 ? 0 : high_bit(su) + 1;
    for (int v = lo; v < d; ++v) {
      uint32_t child = su | (1u << v);
      if (!needed[child]) continue;
      if (su == 0) {
        dfs(child, v);
      } else {
        int a = anc.alloc();
        c.push(GateKind::CCX, {u_wire, v, a});
        dfs(child, a);
        c.push(GateKind::CCX, {u_wire, v, a});
        anc.release(a);
      }
    }
  }

  Circuit run() {
    c.input_count = n + b;
    for (uint32_t sp : pool) pool_wire[sp] = anc.alloc();
    for (uint32_t sp : pool) pool_ccx(sp);
    compute_needed();
    if (needed[0]) dfs(0, -1);
    for (size_t i = pool.size(); i-- > 0;) pool_ccx(pool[i]);
    c.width = anc.width();
    return std::move(c);
  }
};

}  // namespace

Circuit synth_oracle(const TruthTable& f) {
  auto mono = monomials(f);
  Circuit best;
  bool have = false;
  uint64_t best_ccx = 0;
  for (int d = 0; d <= f.n; ++d) {
    SplitEmitter em(f.n, f.b, mono, d);
    if (em.width_estimate() > Key::kMaxBits) continue;
    Circuit cand = em.run();
    uint64_t cc = count_ccx(cand);
    if (!have || cc < best_ccx) {
      best = std::move(cand);
      best_ccx = cc;
      have = true;
    }
  }
  if (!have) fail("synth_oracle: table too wide for any feasible split");
  validate_circuit(best);
  return best;
}

namespace {

// X on target conjugated by H makes a phase flip when target and all
// controls are 1; the conjunction chain keeps the control count at two.
void emit_mcx(Circuit& c, QubitPool& anc, const std::vector<int>& u, int t) {
  int m = (int)u.size();
  if (m == 0) {
    c.push(GateKind::X, {t});
    return;
  }
  if (m == 1) {
    c.push(GateKind::CX, {u[0], t});
    return;
  }
  if (m == 2) {
    c.push(GateKind::CCX, {u[0], u[1], t});
    return;
  }
  std::vector<std::vector<int>> steps;
  std::vector<int> ancs;
  int a = anc.alloc();
  steps.push_back({u[0], u[1], a});
  ancs.push_back(a);
  for (int i = 2; i <= m - 2; ++i) {
    int a2 = anc.alloc();
    steps.push_back({ancs.back(), u[i], a2});
    ancs.push_back(a2);
  }
  for (auto& s : steps) c.push(GateKind::CCX, {s[0], s[1], s[2]});
  c.push(GateKind::CCX, {ancs.back(), u[m - 1], t});
  for (size_t i = steps.size(); i-- > 0;)
    c.push(GateKind::CCX, {steps[i][0], steps[i][1], steps[i][2]});
  for (size_t i = ancs.size(); i-- > 0;) anc.release(ancs[i]);
}

// -1 exactly on {x : x & mask == val}; mask == 0 flips the global sign.
void emit_cube_phase(Circuit& c, QubitPool& anc, int n, uint32_t mask,
                     uint32_t val) {
  std::vector<int> ctrl, flips;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1) {
      ctrl.push_back(i);
      if (!(val >> i & 1)) flips.push_back(i);
    }
  for (int i : flips) c.push(GateKind::X, {i});
  if (ctrl.empty()) {
    c.push(GateKind::Z, {0});
    c.push(GateKind::X, {0});
    c.push(GateKind::Z, {0});
    c.push(GateKind::X, {0});
  } else if (ctrl.size() == 1) {
    c.push(GateKind::Z, {ctrl[0]});
  } else if (ctrl.size() == 2) {
    c.push(GateKind::CZ, {ctrl[0], ctrl[1]});
  } else {
    int t = ctrl.back();
    std::vector<int> u(ctrl.begin(), ctrl.end() - 1);
    c.push(GateKind::H, {t});
    emit_mcx(c, anc, u, t);
    c.push(GateKind::H, {t});
  }
  for (int i : flips) c.push(GateKind::X, {i});
}

struct Cube {
  uint32_t mask, val;
};

// The set is a subcube iff its size matches the count of its free bits.
std::optional<Cube> find_cube(const std::vector<uint32_t>& xs, int n) {
  if (xs.empty()) return std::nullopt;
  uint32_t andv = ~0u, orv = 0;
  for (uint32_t x : xs) {
    andv &= x;
    orv |= x;
  }
  uint32_t nmask = n == 0 ? 0u : (uint32_t)((uint64_t(1) << n) - 1);
  uint32_t fixed = ~(andv ^ orv) & nmask;
  int freebits = n - std::popcount(fixed);
  if (xs.size() != (size_t(1) << freebits)) return std::nullopt;
  return Cube{fixed, andv & fixed};
}

}  // namespace

Circuit synth_phase_oracle(const PhaseTable& g) {
  int n = g.n;
  size_t rows = size_t(1) << n;
  if (g.signs.size() != rows) fail("synth_phase_oracle: malformed table");
  std::vector<uint32_t> minus, plus;
  for (size_t x = 0; x < rows; ++x)
    (g.signs[x] < 0 ? minus : plus).push_back((uint32_t)x);

  Circuit c;
  c.input_count = n;
  QubitPool anc(std::max(n, 1));
  if (minus.empty()) {
    c.width = anc.width();
    validate_circuit(c);
    return c;
  }
  if (auto cube = find_cube(minus, n)) {
    emit_cube_phase(c, anc, n, cube->mask, cube->val);
    c.width = anc.width();
    validate_circuit(c);
    return c;
  }
  if (auto cube = find_cube(plus, n)) {
    emit_cube_phase(c, anc, n, 0, 0);
    emit_cube_phase(c, anc, n, cube->mask, cube->val);
    c.width = anc.width();
    validate_circuit(c);
    return c;
  }

  // kickback: the indicator oracle writes into a wire held in the -1
  // eigenstate of X, so every flip lands as a sign
  TruthTable ind = TruthTable::zero(n, 1);
  for (size_t x = 0; x < rows; ++x) ind.set_bit(x, 0, g.signs[x] < 0);
  Circuit orc = synth_oracle(ind);
  int a = n;  // the oracle's output wire doubles as the kickback ancilla
  c.push(GateKind::X, {a});
  c.push(GateKind::H, {a});
  for (const Gate& gg : orc.gates) c.gates.push_back(gg);
  c.push(GateKind::H, {a});
  c.push(GateKind::X, {a});
  c.width = std::max(orc.width, anc.width());
  validate_circuit(c);
  return c;
}

int hamming_out_width(int m) {
  int w = 0;
  while ((1ll << w) < m + 1) ++w;
  return w;
}

Circuit synth_hamming(int m) {
  if (m < 1 || m > 64) fail("synth_hamming: m out of range");
  int W = hamming_out_width(m);
  Circuit c;
  c.input_count = m + W;
  QubitPool anc(m + W);
  std::vector<Gate> comp;
  auto cx = [&](int a, int t) { comp.emplace_back(GateKind::CX, std::vector<int>{a, t}); };
  auto ccx = [&](int a, int b2, int t) {
    comp.emplace_back(GateKind::CCX, std::vector<int>{a, b2, t});
  };

  // pairwise adder tree over little-endian registers; each add is
  // out-of-place into fresh wires, with carries kept for the uncompute
  std::vector<std::vector<int>> nums;
  for (int i = 0; i < m; ++i) nums.push_back({i});
  while (nums.size() > 1) {
    std::vector<std::vector<int>> next;
    for (size_t i = 0; i + 1 < nums.size(); i += 2) {
      const auto& A = nums[i].size() >= nums[i + 1].size() ? nums[i] : nums[i + 1];
      const auto& B = nums[i].size() >= nums[i + 1].size() ? nums[i + 1] : nums[i];
      int k1 = (int)A.size(), k2 = (int)B.size();
      std::vector<int> S(k1), Cr(k1 + 1, -1);
      for (int t = 0; t < k1; ++t) S[t] = anc.alloc();
      for (int t = 1; t <= k1; ++t) Cr[t] = anc.alloc();
      cx(A[0], S[0]);
      cx(B[0], S[0]);
      ccx(A[0], B[0], Cr[1]);
      for (int t = 1; t < k1; ++t) {
        if (t < k2) {
          cx(A[t], S[t]);
          cx(B[t], S[t]);
          ccx(S[t], Cr[t], Cr[t + 1]);  // (a^b) & c_in
          ccx(A[t], B[t], Cr[t + 1]);
          cx(Cr[t], S[t]);
        } else {
          cx(A[t], S[t]);
          cx(Cr[t], S[t]);
          ccx(A[t], Cr[t], Cr[t + 1]);
        }
      }
      S.push_back(Cr[k1]);
      next.push_back(S);
    }
    if (nums.size() % 2) next.push_back(nums.back());
    nums = std::move(next);
  }
  for (const Gate& g : comp) c.gates.push_back(g);
  const auto& R = nums[0];
  for (int t = 0; t < W && t < (int)R.size(); ++t)
    c.push(GateKind::CX, {R[t], m + t});
  for (size_t i = comp.size(); i-- > 0;) c.gates.push_back(comp[i]);
  c.width = anc.width();
  validate_circuit(c);
  return c;
}

}  // namespace tforge
