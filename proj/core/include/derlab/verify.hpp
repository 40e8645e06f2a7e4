#pragma once

#include "derlab/repmodel.hpp"
#include "derlab/stablemodel.hpp"

#include <cstdint>

namespace derlab {

struct UnknownSuite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::uint64_t seed = 0;
    std::string witness;  // replayable counterexample data; empty on pass
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<Verdict> verdicts;
    int passed = 0, failed = 0;
    bool pass = false;
    long duration_ms = 0;  // wall clock; not part of the canonical serialization
};

// splitmix64: portable, deterministic across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next();
    int below(int n);           // uniform in [0, n)
    int range(int lo, int hi);  // uniform in [lo, hi]
    bool chance(int num, int den);
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

private:
    std::uint64_t s_;
};

struct GenBounds {
    int max_elements = 6;
    int max_dim = 3;
    int window_lo = -2;
    int window_hi = 3;
};

FinPoset gen_poset(Rng& rng, const GenBounds& b);
PosetMap gen_monotone_map(Rng& rng, const GenBounds& b);
PosetMap gen_monotone_into(Rng& rng, const FinPoset& tgt, const GenBounds& b);
Complex gen_complex(Rng& rng, const GenBounds& b, const Field& f = Field{});
ChainMap gen_chain_map_between(Rng& rng, const Complex& a, const Complex& b);
ChainMap gen_chain_map(Rng& rng, const GenBounds& b, const Field& f = Field{});
ChainMap gen_quasi_iso(Rng& rng, const GenBounds& b, const Field& f = Field{});
ChainDiagram gen_chain_diagram(Rng& rng, const FinPoset& shape, const GenBounds& b,
                               const Field& f = Field{});
VecDiagram gen_vec_diagram(Rng& rng, const FinCategory& shape, const GenBounds& b,
                           const Field& f = Field{});

// Levelwise direct sum of diagrams on the same shape.
ChainDiagram diagram_direct_sum(const ChainDiagram& a, const ChainDiagram& b);
// The diagram carrying c on the up-set of `base` with identity maps.
ChainDiagram up_cell(const FinPoset& shape, int base, const Complex& c);

// Exactness of ... -> H_n X -> H_n Y -> H_n C -> H_{n-1} X -> ... by rank
// identities at every joint, with the connecting map read off the triangle's
// shift identification.
Verdict long_exact_check(const Triangle& t);

Report run_suite(const std::string& name, std::uint64_t seed, int trials,
                 const GenBounds& bounds = GenBounds{}, const Field& field = Field{});
const std::vector<std::string>& suite_names();

}  // namespace derlab
