#pragma once
// Critical Ising sampling: exact enumeration oracle, heat-bath / Wolff
// chains, nearest-neighbor correlation diagnostic, and the medial-grid
// interface extractor.

#include <cmath>
#include <functional>

#include "arms/estimation.hpp"
#include "arms/lattice.hpp"

namespace arms {

inline double beta_c() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

// -sum over coupled pairs of sigma_x sigma_y; couplings exist between
// interior neighbors and between interior and fixed boundary sites (free
// boundary sites are simply absent couplings)
double ising_energy(const SpinConfig& c);

struct Enumeration {
    LatticeDomain domain;
    BoundaryCondition bc;
    double beta = 0.0;
    std::vector<double> probs; // indexed by state; bit i = cell i is plus

    SpinConfig config_of(uint32_t state) const;
    uint32_t state_of(const SpinConfig& c) const;
    double expectation(const std::function<double(const SpinConfig&)>& f) const;
    double probability(const std::function<bool(const SpinConfig&)>& event) const;
};

// exact Boltzmann distribution; capped at 25 interior cells
Enumeration exact_enumerate(const LatticeDomain& dom, const BoundaryCondition& bc, double beta);

enum class Algorithm { HeatBath, Wolff };
enum class ChainInit { Random, AllPlus, AllMinus };

struct ChainSpec {
    double beta = beta_c();
    long long sweeps = 0;    // total sweeps (Wolff: cluster moves)
    long long thinning = 1;  // snapshot interval after burn-in
    long long burn_in = 0;
    uint64_t seed = 0;
    uint64_t chain_id = 0;
    Algorithm algo = Algorithm::HeatBath;
    ChainInit init = ChainInit::Random;
};

// defaults recorded as heuristics: burn-in 20 L^2 sweeps, thinning L^2
inline long long default_burn_in(const LatticeDomain& d) {
    long long L = std::max(d.w, d.h);
    return 20 * L * L;
}
inline long long default_thinning(const LatticeDomain& d) {
    long long L = std::max(d.w, d.h);
    return L * L;
}

// runs one chain, invoking observer(config, snapshot_index) at each thinned
// snapshot; bit-reproducible given (seed, chain_id, spec)
void sample_chain(const LatticeDomain& dom, const BoundaryCondition& bc, const ChainSpec& spec,
                  const std::function<void(const SpinConfig&, long long)>& observer);

// mean of sigma_x sigma_y over interior nearest-neighbor pairs, averaged
// across snapshots, with the across-snapshot standard error
struct NnCorrelation {
    double sum = 0, sumsq = 0;
    long long n = 0;
    void add(const SpinConfig& c);
    Estimate value() const;
};
Estimate nn_correlation(const std::vector<SpinConfig>& snapshots);

// interface on the dual (corner) grid from the Dobrushin point a to b,
// keeping minus spins on the left and plus on the right; free / outside
// cells count as non-minus. Corner (cx, cy) sits geometrically at
// (cx - 1/2, cy - 1/2); its four neighbor cells are (cx-1|cx, cy-1|cy).
std::vector<Point> extract_interface(const SpinConfig& c);

} // namespace arms
