#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "tforge/circuit.hpp"
#include "tforge/sparse_sim.hpp"

using namespace tforge;
using namespace tforge::testutil;

namespace {

const cmplx kOmega = std::polar(1.0, kPi / 4);

Circuit single(GateKind k, std::vector<int> qs) {
  Circuit c;
  c.width = 0;
  for (int q : qs) c.width = std::max(c.width, q + 1);
  c.input_count = c.width;
  c.gates.emplace_back(k, std::move(qs));
  return c;
}

}  // namespace

TEST_CASE("toffoli expansion is the 8x8 permutation and costs 7 T") {
  Circuit ccx = single(GateKind::CCX, {0, 1, 2});
  Circuit exp = expand_macros(ccx);
  REQUIRE(exp.width == 3);
  for (const Gate& g : exp.gates) CHECK(gate_is_primitive(g.kind));
  for (uint64_t j = 0; j < 8; ++j) {
    SparseState out = run(exp, SparseState::basis(3, j));
    uint64_t want = ((j & 3) == 3) ? (j ^ 4) : j;
    CHECK(std::abs(out.amp(want) - 1.0) < 1e-10);
    CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(t_count(ccx) == kTCountCCX);
  CHECK(t_count(ccx) == 7);
}

TEST_CASE("controlled-T expansion equals diag(1,1,1,w) with clean scratch") {
  Circuit ct = single(GateKind::CT, {0, 1});
  Circuit exp = expand_macros(ct);
  REQUIRE(exp.width == 3);  // one scratch ancilla appended
  for (uint64_t j = 0; j < 4; ++j) {
    SparseState out = run(exp, SparseState::basis(3, j));
    cmplx want = (j == 3) ? kOmega : cmplx(1.0);
    CHECK(std::abs(out.amp(j) - want) < 1e-10);
  }
  CHECK(t_count(ct) == kTCountCT);

  Circuit ctdg = single(GateKind::CTdg, {0, 1});
  Circuit exp2 = expand_macros(ctdg);
  for (uint64_t j = 0; j < 4; ++j) {
    SparseState out = run(exp2, SparseState::basis(3, j));
    cmplx want = (j == 3) ? std::conj(kOmega) : cmplx(1.0);
    CHECK(std::abs(out.amp(j) - want) < 1e-10);
  }
}

TEST_CASE("controlled-H expansion matches the defining matrix") {
  Circuit ch = single(GateKind::CH, {0, 1});
  Circuit exp = expand_macros(ch);
  REQUIRE(exp.width == 2);
  double r = 1.0 / std::sqrt(2.0);
  // columns of CH with control q0, target q1
  std::vector<std::vector<cmplx>> want = {
      {1, 0, 0, 0}, {0, r, 0, r}, {0, 0, 1, 0}, {0, r, 0, -r}};
  for (uint64_t j = 0; j < 4; ++j) {
    auto got = run(exp, SparseState::basis(2, j)).to_dense();
    CHECK(column_distance(got, want[j]) < 1e-10);
  }
  CHECK(t_count(ch) == kTCountCH);
}

TEST_CASE("native macro application agrees with the expansions") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    Circuit c = make_random_circuit(rng, 4, 30, true);
    Circuit e = expand_macros(c);
    SparseState in = SparseState::basis(4, rng.below(16));
    SparseState a = run(c, in);
    // widen the native-run output to the expanded width (scratch ancilla)
    SparseState widened;
    widened.width = e.width;
    widened.amps = a.amps;
    SparseState b = run(e, SparseState::basis(e.width, in.amps.begin()->first));
    CHECK(l2_phase_min_distance(widened, b) < 1e-6);
    // phases must match exactly too, not just up to a global factor
    cmplx ov = inner(widened, b);
    CHECK(std::abs(ov - 1.0) < 1e-9);
  }
}

TEST_CASE("t_count on the spec fixtures") {
  CHECK(t_count(single(GateKind::T, {0})) == 1);
  Circuit c;
  c.width = 2;
  c.input_count = 2;
  c.push(GateKind::H, {0});
  c.push(GateKind::CX, {0, 1});
  CHECK(t_count(c) == 0);
  CHECK(clifford_count(c) == 2);

  Circuit s;
  s.width = 1;
  s.input_count = 1;
  s.push_sq1(0, Mat2::identity());
  CHECK_THROWS_WITH(t_count(s), doctest::Contains("unresolved single-qubit"));
  CHECK_THROWS_WITH(expand_macros(s),
                    doctest::Contains("unresolved single-qubit"));
}

TEST_CASE("expansion preserves primitives and t_count") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    Circuit c = make_random_circuit(rng, 5, 40, true);
    Circuit e = expand_macros(c);
    for (const Gate& g : e.gates) CHECK(gate_is_primitive(g.kind));
    CHECK(t_count(e) == t_count(c));
    Circuit prim = make_random_circuit(rng, 5, 40, false);
    Circuit e2 = expand_macros(prim);
    CHECK(e2.gates.size() == prim.gates.size());
    for (size_t i = 0; i < prim.gates.size(); ++i)
      CHECK(structurally_equal(e2.gates[i], prim.gates[i]));
  }
}

TEST_CASE("adjoint fixtures and involution") {
  Circuit t = single(GateKind::T, {0});
  Circuit tdg = adjoint(t);
  REQUIRE(tdg.gates.size() == 1);
  CHECK(tdg.gates[0].kind == GateKind::Tdg);

  Circuit hc;
  hc.width = 2;
  hc.input_count = 2;
  hc.push(GateKind::H, {0});
  hc.push(GateKind::CX, {0, 1});
  Circuit rev = adjoint(hc);
  REQUIRE(rev.gates.size() == 2);
  CHECK(rev.gates[0].kind == GateKind::CX);
  CHECK(rev.gates[1].kind == GateKind::H);

  Rng rng(3);
  Circuit c = make_random_circuit(rng, 4, 20, true, true);
  CHECK(structurally_equal(adjoint(adjoint(c)), c));
}

TEST_CASE("adjoint inverts the action") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    Circuit c = make_random_circuit(rng, 4, 25, true);
    SparseState in = SparseState::basis(4, rng.below(16));
    SparseState back = run(adjoint(c), run(c, in));
    CHECK(l2_phase_min_distance(back, in) < 1e-6);
  }
}

TEST_CASE("serialize fixtures") {
  CHECK(serialize(single(GateKind::H, {0})) == "QUBITS 1 INPUTS 1\nH 0\n");
  CHECK(serialize(single(GateKind::CX, {0, 1})) ==
        "QUBITS 2 INPUTS 2\nCX 0 1\n");
  Circuit c = parse_circuit("T 0\nTDG 0");
  CHECK(c.gates.size() == 2);
  CHECK(t_count(c) == 2);
}

TEST_CASE("parse/serialize round-trip on random circuits") {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    Circuit c = make_random_circuit(rng, 1 + (int)rng.below(6),
                                    (int)rng.below(30), true);
    Circuit back = parse_circuit(serialize(c));
    back.label = c.label;
    CHECK(structurally_equal(back, c));
  }
}

TEST_CASE("parse rejects malformed input with a line number") {
  CHECK_THROWS_WITH(parse_circuit("QUBITS 2 INPUTS 2\nH 0\nFOO 1\n"),
                    doctest::Contains("line 3"));
  CHECK_THROWS_WITH(parse_circuit("QUBITS 2 INPUTS 2\nCX 0\n"),
                    doctest::Contains("line 2"));
  CHECK_THROWS_WITH(parse_circuit("QUBITS 1 INPUTS 2\nH 0\n"),
                    doctest::Contains("line 1"));
  CHECK_THROWS(parse_circuit("QUBITS 2 INPUTS 2\nH 7\n"));
  CHECK_THROWS_WITH(parse_circuit("QUBITS 2 INPUTS 2\nH 0 1\n"),
                    doctest::Contains("trailing"));
}

TEST_CASE("serialize refuses unexpanded placeholders") {
  Circuit s;
  s.width = 1;
  s.input_count = 1;
  s.push_sq1(0, Mat2::identity());
  CHECK_THROWS_WITH(serialize(s), doctest::Contains("placeholder"));
}

TEST_CASE("circuit validation") {
  Circuit c;
  c.width = 2;
  c.input_count = 2;
  c.push(GateKind::CX, {1, 1});
  CHECK_THROWS_WITH(validate_circuit(c), doctest::Contains("repeated"));
  Circuit d;
  d.width = 1;
  d.input_count = 1;
  d.push(GateKind::CX, {0, 1});
  CHECK_THROWS_WITH(validate_circuit(d), doctest::Contains("out of range"));
  Circuit s;
  s.width = 1;
  s.input_count = 1;
  Mat2 bad{{1.0, 0.0, 0.0, 2.0}};
  s.gates.emplace_back(GateKind::SQ1, std::vector<int>{0}, bad);
  CHECK_THROWS_WITH(validate_circuit(s), doctest::Contains("not unitary"));
}

TEST_CASE("qubit pool reuse and high-water mark") {
  QubitPool pool(3);
  int a = pool.alloc();
  int b = pool.alloc();
  CHECK(a == 3);
  CHECK(b == 4);
  CHECK(pool.high_water() == 2);
  pool.release(a);
  CHECK(pool.alloc() == a);  // LIFO reuse
  CHECK(pool.high_water() == 2);
  pool.release(a);
  CHECK_THROWS_WITH(pool.release(a), doctest::Contains("twice"));
  int c = pool.alloc();
  int d = pool.alloc();
  CHECK(pool.width() == 6);
  CHECK(pool.high_water() == 3);
  (void)b; (void)c; (void)d;
}
