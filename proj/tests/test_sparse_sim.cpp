#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "tforge/sparse_sim.hpp"

using namespace tforge;
using namespace tforge::testutil;

namespace {

SparseState random_state(Rng& rng, int width) {
  size_t dim = size_t(1) << width;
  std::vector<cmplx> v(dim);
  double n2 = 0;
  for (auto& a : v) {
    a = cmplx(rng.normal(), rng.normal());
    n2 += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(n2);
  return SparseState::from_dense(width, v);
}

}  // namespace

TEST_CASE("run fixtures") {
  Circuit h;
  h.width = 1;
  h.input_count = 1;
  h.push(GateKind::H, {0});
  SparseState out = run(h, SparseState::basis(1, 0));
  double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out.amp(0) - r) < 1e-12);
  CHECK(std::abs(out.amp(1) - r) < 1e-12);

  Circuit t;
  t.width = 1;
  t.input_count = 1;
  t.push(GateKind::T, {0});
  out = run(t, SparseState::basis(1, 1));
  CHECK(std::abs(out.amp(1) - std::polar(1.0, kPi / 4)) < 1e-12);

  // |10> in qubit-0-first notation is key 1; CX(0,1) flips qubit 1.
  Circuit cx;
  cx.width = 2;
  cx.input_count = 2;
  cx.push(GateKind::CX, {0, 1});
  out = run(cx, SparseState::basis(2, 1));
  CHECK(std::abs(out.amp(3) - 1.0) < 1e-12);

  CHECK_THROWS_WITH(run(cx, SparseState::basis(1, 0)),
                    doctest::Contains("width"));
}

TEST_CASE("l2 phase-minimized distance fixtures") {
  SparseState zero = SparseState::basis(1, 0);
  SparseState one = SparseState::basis(1, 1);
  SparseState phased;
  phased.width = 1;
  phased.amps[0] = std::polar(1.0, kPi / 3);
  CHECK(l2_phase_min_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(l2_phase_min_distance(zero, phased) == doctest::Approx(0.0));
  CHECK(l2_phase_min_distance(zero, one) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("extract_diagonal fixtures") {
  Circuit empty;
  empty.width = 1;
  empty.input_count = 1;
  DiagonalSpec d = extract_diagonal(empty, 1);
  CHECK(d.phases == std::vector<double>{0.0, 0.0});

  Circuit t;
  t.width = 1;
  t.input_count = 1;
  t.push(GateKind::T, {0});
  d = extract_diagonal(t, 1);
  CHECK(d.phases[0] == doctest::Approx(0.0));
  CHECK(d.phases[1] == doctest::Approx(kPi / 4));

  Circuit cz;
  cz.width = 2;
  cz.input_count = 2;
  cz.push(GateKind::CZ, {0, 1});
  d = extract_diagonal(cz, 2);
  CHECK(d.phases[0] == doctest::Approx(0.0));
  CHECK(d.phases[1] == doctest::Approx(0.0));
  CHECK(d.phases[2] == doctest::Approx(0.0));
  CHECK(std::abs(d.phases[3]) == doctest::Approx(kPi));
}

TEST_CASE("extract_diagonal rejects non-diagonal and leaking circuits") {
  Circuit h;
  h.width = 1;
  h.input_count = 1;
  h.push(GateKind::H, {0});
  CHECK_THROWS_WITH(extract_diagonal(h, 1), doctest::Contains("not diagonal"));

  // ancilla left dirty
  Circuit leak;
  leak.width = 2;
  leak.input_count = 1;
  leak.push(GateKind::X, {1});
  CHECK_THROWS_WITH(extract_diagonal(leak, 1),
                    doctest::Contains("not diagonal"));
}

TEST_CASE("extract_diagonal parallel runs agree with serial") {
  Rng rng(17);
  Circuit c;
  c.width = 3;
  c.input_count = 3;
  for (int i = 0; i < 3; ++i) {
    c.push(GateKind::T, {i});
    c.push(GateKind::CZ, {i, (i + 1) % 3});
    c.push(GateKind::S, {(int)rng.below(3)});
  }
  DiagonalSpec a = extract_diagonal(c, 3, 1e-9, 1);
  DiagonalSpec b = extract_diagonal(c, 3, 1e-9, 4);
  CHECK(diagonal_op_norm_error(a, b) == doctest::Approx(0.0));
}

TEST_CASE("diagonal op-norm error fixtures") {
  DiagonalSpec a{0, {0.0}};
  DiagonalSpec b{0, {kPi}};
  CHECK(diagonal_op_norm_error(a, a) == doctest::Approx(0.0));
  CHECK(diagonal_op_norm_error(a, b) == doctest::Approx(2.0));
  DiagonalSpec c{1, {0.0, 0.0}};
  DiagonalSpec d{1, {0.0, kPi / 4}};
  CHECK(diagonal_op_norm_error(c, d) ==
        doctest::Approx(2 * std::sin(kPi / 8)).epsilon(1e-12));
}

TEST_CASE("ancilla clean weight fixtures") {
  SparseState prod;
  prod.width = 3;
  prod.amps[0] = 1.0 / std::sqrt(2.0);
  prod.amps[1] = 1.0 / std::sqrt(2.0);  // inputs q0, ancillas q1,q2 clean
  CHECK(ancilla_clean_weight(prod, 1) == doctest::Approx(0.0));

  SparseState bell;
  bell.width = 2;
  bell.amps[0] = 1.0 / std::sqrt(2.0);
  bell.amps[3] = 1.0 / std::sqrt(2.0);
  CHECK(ancilla_clean_weight(bell, 1) == doctest::Approx(0.5));

  SparseState tiny;
  tiny.width = 2;
  tiny.amps[0] = std::sqrt(1.0 - 1e-6);
  tiny.amps[2] = 1e-3;
  CHECK(ancilla_clean_weight(tiny, 1) == doctest::Approx(1e-6));
}

TEST_CASE("norm preservation across random circuits") {
  Rng rng(23);
  for (int rep = 0; rep < 15; ++rep) {
    int w = 2 + (int)rng.below(4);
    Circuit c = make_random_circuit(rng, w, 60, true);
    SparseState s = random_state(rng, w);
    SparseState out = run(c, s);
    CHECK(std::abs(out.norm2() - 1.0) < 1e-9);
  }
}

TEST_CASE("support bound for branching sets and permutation gates") {
  Rng rng(29);
  // each H at most doubles the support; permutations never grow it
  for (int rep = 0; rep < 10; ++rep) {
    Circuit c;
    c.width = 6;
    c.input_count = 6;
    int hcount = 0;
    for (int i = 0; i < 40; ++i) {
      switch (rng.below(4)) {
        case 0:
          if (hcount == 5) continue;
          ++hcount;
          c.push(GateKind::H, {(int)rng.below(6)});
          break;
        case 1: {
          int a = (int)rng.below(6), b;
          do { b = (int)rng.below(6); } while (b == a);
          c.push(GateKind::CX, {a, b});
          break;
        }
        case 2: c.push(GateKind::X, {(int)rng.below(6)}); break;
        default: {
          int a = (int)rng.below(6), b;
          do { b = (int)rng.below(6); } while (b == a);
          c.push(GateKind::SWAP, {a, b});
          break;
        }
      }
    }
    SparseState out = run(c, SparseState::basis(6, rng.below(64)));
    CHECK(out.amps.size() <= (size_t(1) << hcount));
  }

  // permutation-only circuits preserve support cardinality exactly
  for (int rep = 0; rep < 10; ++rep) {
    Circuit c;
    c.width = 5;
    c.input_count = 5;
    for (int i = 0; i < 30; ++i) {
      int a = (int)rng.below(5), b, d;
      do { b = (int)rng.below(5); } while (b == a);
      do { d = (int)rng.below(5); } while (d == a || d == b);
      switch (rng.below(3)) {
        case 0: c.push(GateKind::X, {a}); break;
        case 1: c.push(GateKind::CX, {a, b}); break;
        default: c.push(GateKind::CCX, {a, b, d}); break;
      }
    }
    SparseState s = random_state(rng, 5);
    size_t before = s.amps.size();
    CHECK(run(c, s).amps.size() == before);
  }
}

TEST_CASE("adjoint returns random states to themselves") {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    int w = 2 + (int)rng.below(3);
    Circuit c = make_random_circuit(rng, w, 40, true);
    SparseState s = random_state(rng, w);
    SparseState back = run(adjoint(c), run(c, s));
    CHECK(l2_phase_min_distance(back, s) < 1e-6);
  }
}

TEST_CASE("state file round-trip and validation") {
  Rng rng(37);
  SparseState s = random_state(rng, 4);
  SparseState back = parse_state(serialize_state(s));
  CHECK(back.width == 4);
  CHECK(l2_phase_min_distance(s, back) < 1e-12);
  cmplx ov = inner(s, back);
  CHECK(std::abs(ov - 1.0) < 1e-12);  // exact phases survive the round trip

  CHECK_THROWS_WITH(parse_state("QUBITS 1\n0 0.5 0\n"),
                    doctest::Contains("normalized"));
  CHECK_THROWS_WITH(parse_state("QUBITS 1\n0 1 0\n0 0 0\n"),
                    doctest::Contains("duplicate"));
  CHECK_THROWS_WITH(parse_state("QUBITS 1\n5 1 0\n"),
                    doctest::Contains("out of range"));
  CHECK_THROWS_WITH(parse_state("0 1 0\n"), doctest::Contains("QUBITS"));
}

TEST_CASE("diagonal file round-trip") {
  DiagonalSpec d{2, {0.25, -1.5, kPi, 0.0}};
  DiagonalSpec back = parse_diagonal(serialize_diagonal(d));
  CHECK(back.n == 2);
  for (int i = 0; i < 4; ++i)
    CHECK(back.phases[i] == doctest::Approx(d.phases[i]).epsilon(1e-15));
  CHECK_THROWS_WITH(parse_diagonal("N 2\n0\n0\n0\n"),
                    doctest::Contains("expected 4 phases"));
  CHECK_THROWS_WITH(parse_diagonal("N 1\n0\nx\n"), doctest::Contains("line"));
}

TEST_CASE("dense conversions") {
  Rng rng(41);
  SparseState s = random_state(rng, 3);
  SparseState back = SparseState::from_dense(3, s.to_dense());
  CHECK(l2_phase_min_distance(s, back) < 1e-12);
}
