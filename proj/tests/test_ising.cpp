#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "arms/ising.hpp"
#include "arms/rng.hpp"

using namespace arms;

namespace {

// independent in-test energy: brute sum over unordered coupled pairs
double oracle_energy(const SpinConfig& c) {
    const auto& d = c.domain;
    double e = 0;
    for (int y = d.y0; y < d.y0 + d.h; ++y)
        for (int x = d.x0; x < d.x0 + d.w; ++x)
            for (auto [nx, ny] : {std::pair{x + 1, y}, {x, y + 1}, {x - 1, y}, {x, y - 1}}) {
                int sn = c.spin_or_zero(nx, ny);
                if (sn == 0) continue;
                if (d.contains(nx, ny)) e -= 0.5 * c.at(x, y) * sn; // interior pair seen twice
                else e -= c.at(x, y) * sn;
            }
    return e;
}

bool plus_crossing_lr(const SpinConfig& c) {
    const auto& d = c.domain;
    std::vector<uint8_t> seen(d.size(), 0);
    std::vector<int> stack;
    for (int y = d.y0; y < d.y0 + d.h; ++y)
        if (c.at(d.x0, y) > 0) {
            stack.push_back(d.cell_index(d.x0, y));
            seen[stack.back()] = 1;
        }
    while (!stack.empty()) {
        int idx = stack.back();
        stack.pop_back();
        Point p = d.cell_at(idx);
        if (p.x == d.x0 + d.w - 1) return true;
        for (auto [nx, ny] : {std::pair{p.x - 1, p.y}, {p.x + 1, p.y}, {p.x, p.y - 1},
                              {p.x, p.y + 1}}) {
            if (!d.contains(nx, ny)) continue;
            int ni = d.cell_index(nx, ny);
            if (!seen[ni] && c.at(nx, ny) > 0) {
                seen[ni] = 1;
                stack.push_back(ni);
            }
        }
    }
    return false;
}

// brute-force interface tracer: enumerate every simple valid-edge path from
// start to finish, then keep the one that takes the leftmost valid turn at
// every ambiguity
struct BruteTracer {
    const SpinConfig& c;
    Point finish;
    std::vector<Point> result;

    static void flanks(int cx, int cy, int dir, Point& l, Point& r) {
        switch (dir) {
        case 0: l = {cx - 1, cy}; r = {cx, cy}; break;
        case 1: l = {cx, cy}; r = {cx, cy - 1}; break;
        case 2: l = {cx, cy - 1}; r = {cx - 1, cy - 1}; break;
        case 3: l = {cx - 1, cy - 1}; r = {cx - 1, cy}; break;
        }
    }
    bool valid(int cx, int cy, int dir) const {
        const auto& d = c.domain;
        constexpr int dx[4] = {0, 1, 0, -1}, dy[4] = {1, 0, -1, 0};
        int nx = cx + dx[dir], ny = cy + dy[dir];
        if (nx < d.x0 || nx > d.x0 + d.w || ny < d.y0 || ny > d.y0 + d.h) return false;
        Point l, r;
        flanks(cx, cy, dir, l, r);
        return c.spin_or_zero(l.x, l.y) == -1 && c.spin_or_zero(r.x, r.y) != -1;
    }
    bool dfs(Point cur, int dir, std::vector<Point>& path) {
        if (cur == finish) {
            result = path;
            return true;
        }
        constexpr int dx[4] = {0, 1, 0, -1}, dy[4] = {1, 0, -1, 0};
        for (int delta : {3, 0, 1}) { // leftmost turn wins the ambiguity
            int nd = (dir + delta) & 3;
            if (!valid(cur.x, cur.y, nd)) continue;
            Point nxt{cur.x + dx[nd], cur.y + dy[nd]};
            path.push_back(nxt);
            if (dfs(nxt, nd, path)) return true;
            path.pop_back();
        }
        return false;
    }
};

std::map<uint32_t, long long> empirical_counts(const LatticeDomain& dom,
                                               const BoundaryCondition& bc, ChainSpec spec,
                                               const Enumeration& en) {
    std::map<uint32_t, long long> counts;
    sample_chain(dom, bc, spec, [&](const SpinConfig& c, long long) {
        counts[en.state_of(c)]++;
    });
    return counts;
}

} // namespace

TEST_CASE("domain geometry and boundary ring") {
    auto d = LatticeDomain::box(2);
    CHECK(d.w == 5);
    CHECK(d.contains(0, 0));
    CHECK(d.contains(-2, 2));
    CHECK(!d.contains(3, 0));
    CHECK(d.ring_size() == 20);
    // ring is a consistent bijection and counterclockwise
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < d.ring_size(); ++i) {
        Point p = d.ring_at(i);
        CHECK(!d.contains(p.x, p.y));
        CHECK(d.ring_index(p) == i);
        seen.insert({p.x, p.y});
    }
    CHECK((int)seen.size() == d.ring_size());

    auto hb = LatticeDomain::half_box(3);
    CHECK(hb.contains(-3, 0));
    CHECK(hb.contains(3, 3));
    CHECK(!hb.contains(0, -1));

    CHECK_THROWS_AS(LatticeDomain::topological_rectangle(3, 3, 0, 8, 4, 10),
                    std::invalid_argument);
    auto tr = LatticeDomain::topological_rectangle(3, 3, 0, 3, 6, 9);
    CHECK(tr.marked[1] == 3);
}

TEST_CASE("energy matches the brute pair sum") {
    auto d = LatticeDomain::rectangle(3, 2);
    auto bc = BoundaryCondition::dobrushin(d, 0, 5, SpinState::Minus, SpinState::Plus);
    SpinConfig c = make_config(d, bc, 1);
    c.at(1, 0) = -1;
    c.at(2, 1) = -1;
    CHECK(ising_energy(c) == doctest::Approx(oracle_energy(c)).epsilon(1e-12));
    // all free boundary: only interior bonds
    auto cf = make_config(d, BoundaryCondition::uniform(d, SpinState::Free), 1);
    CHECK(ising_energy(cf) == doctest::Approx(-7.0)); // 2x3 grid has 7 bonds
}

TEST_CASE("exact enumeration basics") {
    auto d1 = LatticeDomain::rectangle(1, 1);
    auto en1 = exact_enumerate(d1, BoundaryCondition::uniform(d1, SpinState::Free), beta_c());
    CHECK(en1.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(en1.probs[1] == doctest::Approx(0.5).epsilon(1e-12));

    // 2x2 free at beta_c against a fully independent Z computation
    auto d2 = LatticeDomain::rectangle(2, 2);
    auto bc2 = BoundaryCondition::uniform(d2, SpinState::Free);
    auto en2 = exact_enumerate(d2, bc2, beta_c());
    double z = 0;
    std::vector<double> boltz(16);
    for (uint32_t st = 0; st < 16; ++st) {
        boltz[st] = std::exp(-beta_c() * oracle_energy(en2.config_of(st)));
        z += boltz[st];
    }
    double total = 0;
    for (uint32_t st = 0; st < 16; ++st) {
        CHECK(en2.probs[st] == doctest::Approx(boltz[st] / z).epsilon(1e-12));
        total += en2.probs[st];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // ground state dominates with agreeing boundary at large beta
    auto enp = exact_enumerate(d2, BoundaryCondition::uniform(d2, SpinState::Plus), 5.0);
    CHECK(enp.probs[0b1111] > 0.999);

    auto big = LatticeDomain::rectangle(6, 6);
    CHECK_THROWS_AS(exact_enumerate(big, BoundaryCondition::uniform(big, SpinState::Free), 1.0),
                    std::length_error);
}

TEST_CASE("low-temperature chain pins to the boundary color") {
    auto d = LatticeDomain::rectangle(4, 4);
    auto bc = BoundaryCondition::uniform(d, SpinState::Plus);
    ChainSpec spec;
    spec.beta = 10.0;
    spec.sweeps = 100;
    spec.thinning = 1;
    spec.burn_in = 0;
    spec.seed = 7;
    spec.init = ChainInit::AllPlus;
    long long all_plus = 0, total = 0;
    sample_chain(d, bc, spec, [&](const SpinConfig& c, long long) {
        bool ap = true;
        for (auto v : c.s) ap = ap && v == 1;
        all_plus += ap;
        ++total;
    });
    CHECK(total == 100);
    CHECK(double(all_plus) / total > 0.999);
}

TEST_CASE("chain determinism") {
    auto d = LatticeDomain::rectangle(3, 3);
    auto bc = BoundaryCondition::uniform(d, SpinState::Free);
    ChainSpec spec;
    spec.sweeps = 50;
    spec.seed = 42;
    auto run = [&] {
        std::vector<std::vector<int8_t>> snaps;
        sample_chain(d, bc, spec, [&](const SpinConfig& c, long long) { snaps.push_back(c.s); });
        return snaps;
    };
    CHECK(run() == run());
    auto spec2 = spec;
    spec2.seed = 43;
    std::vector<std::vector<int8_t>> other;
    sample_chain(d, bc, spec2, [&](const SpinConfig& c, long long) { other.push_back(c.s); });
    CHECK(other != run());
}

TEST_CASE("heat-bath chain is stationary for the enumerated law") {
    auto d = LatticeDomain::rectangle(2, 2);
    auto bc = BoundaryCondition::uniform(d, SpinState::Free);
    auto en = exact_enumerate(d, bc, beta_c());
    ChainSpec spec;
    spec.sweeps = 4 * 200000 + 200;
    spec.burn_in = 200;
    spec.thinning = 4;
    spec.seed = 1234;
    auto counts = empirical_counts(d, bc, spec, en);
    long long n = 0;
    for (auto& [st, c] : counts) n += c;
    double tv = 0;
    for (uint32_t st = 0; st < en.probs.size(); ++st) {
        double emp = counts.count(st) ? double(counts[st]) / n : 0.0;
        tv += std::abs(emp - en.probs[st]);
    }
    tv /= 2;
    CHECK(tv < 0.02);
}

TEST_CASE("wolff chain is stationary and guarded") {
    auto d = LatticeDomain::rectangle(2, 2);
    auto bc = BoundaryCondition::uniform(d, SpinState::Free);
    auto en = exact_enumerate(d, bc, beta_c());
    ChainSpec spec;
    spec.algo = Algorithm::Wolff;
    spec.sweeps = 4 * 200000 + 200;
    spec.burn_in = 200;
    spec.thinning = 4;
    spec.seed = 99;
    auto counts = empirical_counts(d, bc, spec, en);
    long long n = 0;
    for (auto& [st, c] : counts) n += c;
    double tv = 0;
    for (uint32_t st = 0; st < en.probs.size(); ++st) {
        double emp = counts.count(st) ? double(counts[st]) / n : 0.0;
        tv += std::abs(emp - en.probs[st]);
    }
    CHECK(tv / 2 < 0.02);

    // mixed fixed colors are rejected
    auto mixed = BoundaryCondition::dobrushin(d, 0, 4, SpinState::Minus, SpinState::Plus);
    CHECK_THROWS_AS(sample_chain(d, mixed, spec, [](const SpinConfig&, long long) {}),
                    std::invalid_argument);

    // single-color fixed boundary works and stays stationary
    auto bcp = BoundaryCondition::uniform(d, SpinState::Plus);
    auto enp = exact_enumerate(d, bcp, beta_c());
    auto counts_p = empirical_counts(d, bcp, spec, enp);
    n = 0;
    for (auto& [st, c] : counts_p) n += c;
    tv = 0;
    for (uint32_t st = 0; st < enp.probs.size(); ++st) {
        double emp = counts_p.count(st) ? double(counts_p[st]) / n : 0.0;
        tv += std::abs(emp - enp.probs[st]);
    }
    CHECK(tv / 2 < 0.02);
}

TEST_CASE("nn correlation") {
    auto d = LatticeDomain::rectangle(4, 4);
    auto bc = BoundaryCondition::uniform(d, SpinState::Free);
    auto all_plus = make_config(d, bc, 1);
    CHECK(nn_correlation({all_plus}).p_hat == doctest::Approx(1.0));
    auto chess = make_config(d, bc, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) chess.at(x, y) = ((x + y) & 1) ? 1 : -1;
    CHECK(nn_correlation({chess}).p_hat == doctest::Approx(-1.0));

    // chain estimate against the enumeration expectation
    auto en = exact_enumerate(d, bc, beta_c());
    NnCorrelation probe;
    double truth = en.expectation([&](const SpinConfig& c) {
        NnCorrelation one;
        one.add(c);
        return one.sum;
    });
    ChainSpec spec;
    spec.sweeps = 16 * 20000 + 320;
    spec.burn_in = 320;
    spec.thinning = 16;
    spec.seed = 5;
    NnCorrelation acc;
    sample_chain(d, bc, spec, [&](const SpinConfig& c, long long) { acc.add(c); });
    auto est = acc.value();
    CHECK(std::abs(est.p_hat - truth) < 3.5 * est.stderr_);
}

TEST_CASE("FKG inequality on the 3x3 free-boundary enumeration") {
    auto d = LatticeDomain::rectangle(3, 3);
    auto bc = BoundaryCondition::uniform(d, SpinState::Free);
    auto en = exact_enumerate(d, bc, beta_c());
    auto a = [&](const SpinConfig& c) { return c.at(1, 1) > 0; };
    auto b = [&](const SpinConfig& c) { return c.at(0, 0) > 0; };
    double pa = en.probability(a), pb = en.probability(b);
    double pab = en.probability([&](const SpinConfig& c) { return a(c) && b(c); });
    CHECK(pab >= pa * pb - 1e-12);
    CHECK(pab > pa * pb); // strictly positively correlated at beta_c
}

TEST_CASE("domain Markov property, 4x4 conditioned to the center 2x2") {
    auto d4 = LatticeDomain::rectangle(4, 4);
    auto bc4 = BoundaryCondition::uniform(d4, SpinState::Free);
    auto en4 = exact_enumerate(d4, bc4, beta_c());

    LatticeDomain d2 = LatticeDomain::rectangle(2, 2);
    d2.x0 = 1;
    d2.y0 = 1;

    // a few arbitrary ring assignments tau on the outer 12 cells
    for (uint64_t pick : {0ULL, 0xa5aULL, 0x3c3ULL, 0xfffULL}) {
        std::vector<std::pair<int, int>> outer;
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                if (x == 0 || y == 0 || x == 3 || y == 3) outer.push_back({x, y});
        REQUIRE(outer.size() == 12);
        auto matches = [&](const SpinConfig& c) {
            for (size_t i = 0; i < outer.size(); ++i)
                if ((c.at(outer[i].first, outer[i].second) > 0) != ((pick >> i) & 1))
                    return false;
            return true;
        };
        double z_tau = en4.probability(matches);
        REQUIRE(z_tau > 0);

        // induced boundary condition on the 2x2 subdomain
        BoundaryCondition bc2;
        bc2.ring.resize(d2.ring_size());
        SpinConfig rep = make_config(d4, bc4, -1);
        for (size_t i = 0; i < outer.size(); ++i)
            rep.at(outer[i].first, outer[i].second) = ((pick >> i) & 1) ? 1 : -1;
        for (int i = 0; i < d2.ring_size(); ++i) {
            Point p = d2.ring_at(i);
            bc2.ring[i] = rep.at(p.x, p.y) > 0 ? SpinState::Plus : SpinState::Minus;
        }
        auto en2 = exact_enumerate(d2, bc2, beta_c());

        // conditional law of the four inner cells equals the 2x2 enumeration
        for (uint32_t st2 = 0; st2 < 16; ++st2) {
            auto inner = en2.config_of(st2);
            double cond = en4.probability([&](const SpinConfig& c) {
                if (!matches(c)) return false;
                for (int y = 1; y <= 2; ++y)
                    for (int x = 1; x <= 2; ++x)
                        if (c.at(x, y) != inner.at(x, y)) return false;
                return true;
            }) / z_tau;
            CHECK(cond == doctest::Approx(en2.probs[st2]).epsilon(1e-9));
        }
    }
}

TEST_CASE("boundary monotonicity for the plus-crossing event") {
    auto d = LatticeDomain::rectangle(3, 3);
    double p_minus = exact_enumerate(d, BoundaryCondition::uniform(d, SpinState::Minus), beta_c())
                         .probability(plus_crossing_lr);
    double p_free = exact_enumerate(d, BoundaryCondition::uniform(d, SpinState::Free), beta_c())
                        .probability(plus_crossing_lr);
    double p_plus = exact_enumerate(d, BoundaryCondition::uniform(d, SpinState::Plus), beta_c())
                        .probability(plus_crossing_lr);
    CHECK(p_minus <= p_free + 1e-12);
    CHECK(p_free <= p_plus + 1e-12);
    CHECK(p_minus < p_plus);
}

TEST_CASE("interface hugs the minority arc in the pure configurations") {
    auto d = LatticeDomain::rectangle(5, 4);
    // minus arc along the bottom: ring indices [0, 5)
    auto bc = BoundaryCondition::dobrushin(d, 0, 5, SpinState::Minus, SpinState::Plus);
    auto c = make_config(d, bc, 1);
    auto path = extract_interface(c);
    REQUIRE(path.size() >= 2);
    // hugging the bottom edge: all corners at cy in {0}, spanning the width
    for (auto& p : path) CHECK(p.y == 0);
    CHECK((int)path.size() == 6);

    // mirror: all-minus interior with plus arc
    auto c2 = make_config(d, bc, -1);
    auto path2 = extract_interface(c2);
    for (auto& p : path2) {
        bool on_plus_side = p.y == 4 || p.x == 0 || p.x == 5 || p.y == 0;
        CHECK(on_plus_side);
    }
    CHECK(path2.size() > path.size());
}

TEST_CASE("interface validity and agreement with the brute tracer") {
    auto d = LatticeDomain::rectangle(6, 6);
    auto bc = BoundaryCondition::dobrushin(d, 0, 6, SpinState::Minus, SpinState::Plus);
    ChainSpec spec;
    spec.sweeps = 36 * 300 + 720;
    spec.burn_in = 720;
    spec.thinning = 36;
    spec.seed = 2024;
    int checked = 0;
    sample_chain(d, bc, spec, [&](const SpinConfig& c, long long) {
        auto path = extract_interface(c);
        REQUIRE(path.size() >= 2);
        // per-step separation: minus left, non-minus right
        std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            int dx = path[i + 1].x - path[i].x, dy = path[i + 1].y - path[i].y;
            int dir = dy == 1 ? 0 : dx == 1 ? 1 : dy == -1 ? 2 : 3;
            Point l, r;
            BruteTracer::flanks(path[i].x, path[i].y, dir, l, r);
            CHECK(c.spin_or_zero(l.x, l.y) == -1);
            CHECK(c.spin_or_zero(r.x, r.y) != -1);
            std::pair<int, int> u{path[i].x, path[i].y}, v{path[i + 1].x, path[i + 1].y};
            if (v < u) std::swap(u, v);
            CHECK(!edges.count({u, v})); // no edge reuse
            edges.insert({u, v});
        }
        // brute tracer agreement when walking from the same endpoint
        BruteTracer bt{c, path.back(), {}};
        // recover the start direction as in the extractor: inward normal of
        // the marked ring site (a -> corner (0,0), N; b -> corner (6,0), W)
        Point start = path.front();
        REQUIRE((start == Point{0, 0} || start == Point{6, 0}));
        int dir0 = start == Point{6, 0} ? 3 : 0;
        std::vector<Point> acc{start};
        REQUIRE(bt.dfs(start, dir0, acc));
        CHECK(bt.result == path);
        ++checked;
    });
    CHECK(checked == 300);
}
