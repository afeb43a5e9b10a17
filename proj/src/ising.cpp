#include "arms/ising.hpp"

#include "arms/rng.hpp"

namespace arms {

double ising_energy(const SpinConfig& c) {
    const auto& d = c.domain;
    double e = 0;
    for (int y = d.y0; y < d.y0 + d.h; ++y) {
        for (int x = d.x0; x < d.x0 + d.w; ++x) {
            int sx = c.at(x, y);
            // right and up interior bonds counted once
            if (x + 1 < d.x0 + d.w) e -= sx * c.at(x + 1, y);
            if (y + 1 < d.y0 + d.h) e -= sx * c.at(x, y + 1);
            // bonds to fixed boundary sites
            for (auto [nx, ny] : {std::pair{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}}) {
                if (d.contains(nx, ny)) continue;
                int ri = d.ring_index(Point{nx, ny});
                if (ri >= 0) e -= sx * (int)c.bc.ring[ri];
            }
        }
    }
    return e;
}

SpinConfig Enumeration::config_of(uint32_t state) const {
    SpinConfig c = make_config(domain, bc, -1);
    for (int i = 0; i < domain.size(); ++i)
        if (state >> i & 1) c.s[i] = 1;
    return c;
}

uint32_t Enumeration::state_of(const SpinConfig& c) const {
    uint32_t st = 0;
    for (int i = 0; i < domain.size(); ++i)
        if (c.s[i] > 0) st |= 1u << i;
    return st;
}

double Enumeration::expectation(const std::function<double(const SpinConfig&)>& f) const {
    double acc = 0;
    for (uint32_t st = 0; st < probs.size(); ++st)
        if (probs[st] > 0) acc += probs[st] * f(config_of(st));
    return acc;
}

double Enumeration::probability(const std::function<bool(const SpinConfig&)>& event) const {
    double acc = 0;
    for (uint32_t st = 0; st < probs.size(); ++st)
        if (probs[st] > 0 && event(config_of(st))) acc += probs[st];
    return acc;
}

Enumeration exact_enumerate(const LatticeDomain& dom, const BoundaryCondition& bc, double beta) {
    if (dom.size() > 25) throw std::length_error("enumeration capped at 25 interior cells");
    if (!(beta > 0)) throw std::invalid_argument("beta must be > 0");
    Enumeration en;
    en.domain = dom;
    en.bc = bc;
    en.beta = beta;
    size_t nstates = size_t(1) << dom.size();
    en.probs.assign(nstates, 0.0);
    // subtract the minimum energy before exponentiating to avoid overflow
    std::vector<double> energies(nstates);
    double emin = 1e300;
    for (size_t st = 0; st < nstates; ++st) {
        energies[st] = ising_energy(en.config_of((uint32_t)st));
        emin = std::min(emin, energies[st]);
    }
    double z = 0;
    for (size_t st = 0; st < nstates; ++st) {
        en.probs[st] = std::exp(-beta * (energies[st] - emin));
        z += en.probs[st];
    }
    for (auto& p : en.probs) p /= z;
    return en;
}

namespace {

int local_field(const SpinConfig& c, int x, int y) {
    return c.spin_or_zero(x - 1, y) + c.spin_or_zero(x + 1, y) + c.spin_or_zero(x, y - 1) +
           c.spin_or_zero(x, y + 1);
}

void heat_bath_sweep(SpinConfig& c, const ChainSpec& spec, long long sweep) {
    const auto& d = c.domain;
    // checkerboard order: same-color sites are non-interacting
    for (int color = 0; color < 2; ++color) {
        for (int y = d.y0; y < d.y0 + d.h; ++y) {
            for (int x = d.x0; x < d.x0 + d.w; ++x) {
                if (((x + y) & 1) != color) continue;
                int idx = d.cell_index(x, y);
                double pp = 1.0 / (1.0 + std::exp(-2.0 * spec.beta * local_field(c, x, y)));
                double u = u01(counter_hash(spec.seed, spec.chain_id, (uint64_t)sweep,
                                            (uint64_t)idx * 2 + color));
                c.s[idx] = u < pp ? 1 : -1;
            }
        }
    }
}

void wolff_move(SpinConfig& c, const ChainSpec& spec, long long sweep,
                std::vector<int>& stack, std::vector<uint8_t>& in_cluster) {
    const auto& d = c.domain;
    CounterRng rng{spec.seed, counter_hash(spec.chain_id, (uint64_t)sweep, 0x77)};
    double p_add = 1.0 - std::exp(-2.0 * spec.beta);
    int seed_idx = (int)(rng.next_u64() % (uint64_t)d.size());
    int8_t sign = c.s[seed_idx];
    std::fill(in_cluster.begin(), in_cluster.end(), 0);
    stack.clear();
    stack.push_back(seed_idx);
    in_cluster[seed_idx] = 1;
    std::vector<int> members{seed_idx};
    bool frozen = false; // touched an agreeing fixed boundary spin
    while (!stack.empty()) {
        int idx = stack.back();
        stack.pop_back();
        Point p = d.cell_at(idx);
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}}) {
            if (d.contains(nx, ny)) {
                int nidx = d.cell_index(nx, ny);
                if (in_cluster[nidx] || c.s[nidx] != sign) continue;
                if (rng.next_u01() < p_add) {
                    in_cluster[nidx] = 1;
                    stack.push_back(nidx);
                    members.push_back(nidx);
                }
            } else {
                int ri = d.ring_index(Point{nx, ny});
                if (ri < 0 || (int)c.bc.ring[ri] != sign) continue;
                if (rng.next_u01() < p_add) frozen = true;
            }
        }
    }
    if (!frozen)
        for (int idx : members) c.s[idx] = -sign;
}

} // namespace

void sample_chain(const LatticeDomain& dom, const BoundaryCondition& bc, const ChainSpec& spec,
                  const std::function<void(const SpinConfig&, long long)>& observer) {
    if ((int)bc.ring.size() != dom.ring_size())
        throw std::invalid_argument("boundary condition does not match domain");
    if (!(spec.beta > 0)) throw std::invalid_argument("beta must be > 0");
    if (spec.sweeps < spec.burn_in) throw std::invalid_argument("sweeps must be >= burn_in");
    if (spec.thinning < 1) throw std::invalid_argument("thinning must be >= 1");
    if (spec.algo == Algorithm::Wolff) {
        // the cluster rule is only unambiguous without competing fixed colors
        bool has_plus = false, has_minus = false;
        for (auto s : bc.ring) {
            has_plus |= s == SpinState::Plus;
            has_minus |= s == SpinState::Minus;
        }
        if (has_plus && has_minus)
            throw std::invalid_argument("Wolff requires all-free or single-color boundary");
    }

    SpinConfig c = make_config(dom, bc, 1);
    for (int i = 0; i < dom.size(); ++i) {
        switch (spec.init) {
        case ChainInit::AllPlus: c.s[i] = 1; break;
        case ChainInit::AllMinus: c.s[i] = -1; break;
        case ChainInit::Random:
            c.s[i] = (counter_hash(spec.seed, spec.chain_id, ~0ULL, (uint64_t)i) & 1) ? 1 : -1;
            break;
        }
    }

    std::vector<int> stack;
    std::vector<uint8_t> in_cluster(dom.size(), 0);
    long long snap = 0;
    for (long long sweep = 1; sweep <= spec.sweeps; ++sweep) {
        if (spec.algo == Algorithm::HeatBath)
            heat_bath_sweep(c, spec, sweep);
        else
            wolff_move(c, spec, sweep, stack, in_cluster);
        if (sweep > spec.burn_in && (sweep - spec.burn_in) % spec.thinning == 0)
            observer(c, snap++);
    }
}

void NnCorrelation::add(const SpinConfig& c) {
    const auto& d = c.domain;
    long long acc = 0, pairs = 0;
    for (int y = d.y0; y < d.y0 + d.h; ++y) {
        for (int x = d.x0; x < d.x0 + d.w; ++x) {
            if (x + 1 < d.x0 + d.w) { acc += c.at(x, y) * c.at(x + 1, y); ++pairs; }
            if (y + 1 < d.y0 + d.h) { acc += c.at(x, y) * c.at(x, y + 1); ++pairs; }
        }
    }
    if (pairs == 0) throw std::invalid_argument("domain has no interior pairs");
    double v = double(acc) / double(pairs);
    sum += v;
    sumsq += v * v;
    ++n;
}

Estimate NnCorrelation::value() const {
    if (n < 1) throw std::invalid_argument("nn_correlation needs >= 1 snapshot");
    return estimate_mean(sum, sumsq, n);
}

Estimate nn_correlation(const std::vector<SpinConfig>& snapshots) {
    NnCorrelation acc;
    for (const auto& c : snapshots) acc.add(c);
    return acc.value();
}

namespace {

// directions N, E, S, W
constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {1, 0, -1, 0};

bool is_minus(const SpinConfig& c, int x, int y) { return c.spin_or_zero(x, y) == -1; }

// cells flanking the corner edge from (cx,cy) in direction dir
void flanking_cells(int cx, int cy, int dir, Point& left, Point& right) {
    switch (dir) {
    case 0: left = {cx - 1, cy}; right = {cx, cy}; break;         // N
    case 1: left = {cx, cy}; right = {cx, cy - 1}; break;         // E
    case 2: left = {cx, cy - 1}; right = {cx - 1, cy - 1}; break; // S
    case 3: left = {cx - 1, cy - 1}; right = {cx - 1, cy}; break; // W
    }
}

bool edge_valid(const SpinConfig& c, int cx, int cy, int dir) {
    Point l, r;
    flanking_cells(cx, cy, dir, l, r);
    return is_minus(c, l.x, l.y) && !is_minus(c, r.x, r.y);
}

// the unique dual corner between consecutive ring sites p and q that lies on
// the corner grid [x0, x0+w] x [y0, y0+h]
Point corner_between(const LatticeDomain& d, const Point& p, const Point& q) {
    // corners adjacent to a cell (x,y) are (x|x+1, y|y+1); intersect for p,q
    int cx_lo = std::max(p.x, q.x), cx_hi = std::min(p.x, q.x) + 1;
    int cy_lo = std::max(p.y, q.y), cy_hi = std::min(p.y, q.y) + 1;
    for (int cx = cx_lo; cx <= cx_hi; ++cx)
        for (int cy = cy_lo; cy <= cy_hi; ++cy)
            if (cx >= d.x0 && cx <= d.x0 + d.w && cy >= d.y0 && cy <= d.y0 + d.h)
                return Point{cx, cy};
    throw std::logic_error("no corner between ring sites");
}

// inward direction at a ring site
int inward_dir(const LatticeDomain& d, const Point& p) {
    if (p.y == d.y0 - 1) return 0; // N
    if (p.x == d.x0 + d.w) return 3; // W
    if (p.y == d.y0 + d.h) return 2; // S
    return 1;                        // E
}

} // namespace

std::vector<Point> extract_interface(const SpinConfig& c) {
    const auto& d = c.domain;
    if (c.bc.a < 0 || c.bc.b < 0)
        throw std::invalid_argument("interface extraction needs Dobrushin marked points");
    int rs = d.ring_size();
    auto endpoints = [&](int idx) {
        Point prev = d.ring_at((idx - 1 + rs) % rs);
        Point cur = d.ring_at(idx);
        return std::pair{corner_between(d, prev, cur), inward_dir(d, cur)};
    };
    auto [start, dir_a] = endpoints(c.bc.a);
    auto [finish, dir_b] = endpoints(c.bc.b);

    auto try_walk = [&](Point s, int d0, Point e) -> std::vector<Point> {
        std::vector<Point> path{s};
        Point cur = s;
        int dir = d0;
        long long cap = 8LL * (d.w + 1) * (d.h + 1);
        // first step: candidate = inward direction itself if valid, else its turns
        bool first = true;
        while (!(cur == e) || first) {
            int chosen = -1;
            // turn-left preference: left of incoming, then straight, then right
            for (int delta : {3, 0, 1}) {
                int nd = (dir + delta) & 3;
                int nx = cur.x + kDx[nd], ny = cur.y + kDy[nd];
                if (nx < d.x0 || nx > d.x0 + d.w || ny < d.y0 || ny > d.y0 + d.h) continue;
                if (!edge_valid(c, cur.x, cur.y, nd)) continue;
                chosen = nd;
                break;
            }
            if (chosen < 0) return {}; // dead end: wrong orientation or inconsistent config
            cur = Point{cur.x + kDx[chosen], cur.y + kDy[chosen]};
            dir = chosen;
            path.push_back(cur);
            first = false;
            if ((long long)path.size() > cap)
                throw std::logic_error("interface walk exceeded step cap");
        }
        return path;
    };

    // the minus-left/plus-right rule fixes the direction of traversal; try
    // a -> b, fall back to b -> a
    auto path = try_walk(start, dir_a, finish);
    if (path.empty()) path = try_walk(finish, dir_b, start);
    if (path.empty()) throw std::invalid_argument("no interface consistent with configuration");
    return path;
}

} // namespace arms
