#pragma once

#include "tforge/circuit.hpp"
#include "tforge/truth_table.hpp"

namespace tforge {

// Bit-level simulation of a classical reversible circuit (X/CX/CCX/SWAP
// only, macro form). Throws on any gate that creates superposition.
Key run_bits(const Circuit& c, Key input);

uint64_t count_ccx(const Circuit& c);

// Exact argmin over d in {0..n} of b*2^d + 2^(n-d); ties toward smaller d.
int choose_split(int n, int b);

// |x>|y>|0...> -> |x>|y^f(x)>|0...>, X/CX/CCX only, ancillas restored.
// Layout: inputs [0,n), outputs [n,n+b), ancillas above; input_count = n+b.
Circuit synth_oracle(const TruthTable& f);

// |x>|0...> -> g(x)|x>|0...>. Layout: inputs [0,n), ancillas above.
Circuit synth_phase_oracle(const PhaseTable& g);

// |x>|y>|0...> -> |x>|y ^ wt(x)>|0...> with y a ceil(log2(m+1))-bit
// register. Layout: inputs [0,m), outputs [m,m+W).
Circuit synth_hamming(int m);

int hamming_out_width(int m);

}  // namespace tforge
