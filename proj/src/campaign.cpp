#include "arms/campaign.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "arms/arm_events.hpp"
#include "arms/exponents.hpp"
#include "arms/sle.hpp"

namespace arms {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kCodeVersion = "arms-1.0.0";
constexpr int kSchemaVersion = 1;
constexpr double kPi = 3.14159265358979323846;

void check_writable(const std::string& path, bool force) {
    if (path.empty()) throw CampaignError(kUsageError, "missing output path");
    if (!force && fs::exists(path))
        throw CampaignError(kUsageError, "refusing to overwrite " + path + " (use --force)");
}

std::ofstream open_out(const std::string& path, bool force, bool binary = false) {
    check_writable(path, force);
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw CampaignError(kIoError, "cannot open " + path + " for writing");
    return f;
}

// run fn(i) for i in [0, n) on `threads` workers; results must be written to
// pre-sized per-index slots so the merge is independent of the schedule
void parallel_for(long long n, int threads, const std::function<void(long long)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (long long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

json parse_config(const Campaign& c) {
    json j = json::parse(c.config_json, nullptr, false);
    if (j.is_discarded()) throw CampaignError(kUsageError, "config is not valid JSON");
    return j;
}

void write_manifest(const Campaign& c, json resolved) {
    resolved["schema_version"] = kSchemaVersion;
    resolved["code_version"] = kCodeVersion;
    resolved["kind"] = c.kind;
    resolved["seed"] = c.seed;
    resolved["samples"] = c.samples;
    resolved["out"] = c.out;
    auto f = open_out(c.out + ".manifest.json", true);
    f << resolved.dump(2) << "\n";
}

ArmPattern parse_pattern(const std::string& s, bool half) {
    std::vector<int8_t> signs;
    for (char ch : s) {
        if (ch == '+') signs.push_back(1);
        else if (ch == '-') signs.push_back(-1);
        else throw CampaignError(kUsageError, "pattern must consist of + and -");
    }
    return half ? ArmPattern::half(signs) : ArmPattern::full(signs);
}

// ---------------------------------------------------------------- campaigns

void run_exponent_table(const Campaign& c, const json& cfg) {
    int jmax = cfg.value("jmax", 10);
    auto f = open_out(c.out, c.force);
    f << "family,k,kappa,rho,value_num,value_exact\n";
    struct Row {
        const char* name;
        ExponentKind kind;
        const char* rho;
    };
    for (auto [name, kind, rho] : {Row{"boundary_alpha", ExponentKind::BoundaryAlpha, "0"},
                                   Row{"boundary_beta", ExponentKind::BoundaryBeta, "-3/2"},
                                   Row{"boundary_gamma", ExponentKind::BoundaryGamma, "-3/2"},
                                   Row{"interior_alpha", ExponentKind::Interior, ""}}) {
        for (int k = 1; k <= jmax; ++k) {
            auto v = ising_exponent(kind, kind == ExponentKind::Interior ? 2 * k : k);
            int kk = kind == ExponentKind::Interior ? 2 * k : k;
            f << name << "," << kk << ",3," << rho << "," << csv_num(v.value) << ","
              << (v.exact ? v.exact->str() : std::string()) << "\n";
        }
    }
    write_manifest(c, json{{"jmax", jmax}});
}

// shared sampling harness for the Ising campaigns: `chains` independent
// chains, `per_chain` snapshots each, observer invoked per snapshot
struct IsingSampling {
    LatticeDomain domain;
    BoundaryCondition bc;
    double beta;
    Algorithm algo;
    long long chains, per_chain, burn_in, thinning;

    static IsingSampling resolve(const Campaign& c, json& cfg, const LatticeDomain& dom) {
        IsingSampling s{dom, BoundaryCondition::uniform(dom, SpinState::Free), 0,
                        Algorithm::Wolff, 0, 0, 0, 0};
        s.beta = cfg.value("beta", beta_c());
        std::string algo = cfg.value("algorithm", std::string("wolff"));
        if (algo == "wolff") s.algo = Algorithm::Wolff;
        else if (algo == "heat-bath") s.algo = Algorithm::HeatBath;
        else throw CampaignError(kUsageError, "unknown algorithm " + algo);
        bool wolff = s.algo == Algorithm::Wolff;
        s.chains = cfg.value("chains", (long long)8);
        s.chains = std::max((long long)1, std::min(s.chains, c.samples));
        s.per_chain = (c.samples + s.chains - 1) / s.chains;
        s.burn_in = cfg.value("burn_in", wolff ? 1000 : default_burn_in(dom));
        s.thinning = cfg.value("thinning", wolff ? (long long)100 : default_thinning(dom));
        cfg["beta"] = s.beta;
        cfg["algorithm"] = algo;
        cfg["chains"] = s.chains;
        cfg["burn_in"] = s.burn_in;
        cfg["thinning"] = s.thinning;
        return s;
    }

    // observer(chain, snapshot-in-chain, config)
    void run(const Campaign& c, int parallelism,
             const std::function<void(long long, long long, const SpinConfig&)>& obs) const {
        parallel_for(chains, parallelism, [&](long long ch) {
            ChainSpec spec;
            spec.beta = beta;
            spec.burn_in = burn_in;
            spec.thinning = thinning;
            spec.sweeps = burn_in + thinning * per_chain;
            spec.seed = c.seed;
            spec.chain_id = (uint64_t)ch;
            spec.algo = algo;
            sample_chain(domain, bc, spec,
                         [&](const SpinConfig& cf, long long snap) { obs(ch, snap, cf); });
        });
    }
};

void run_ising_arm(const Campaign& c, json cfg) {
    if (c.samples < 1) throw CampaignError(kUsageError, "sample budget must be >= 1");
    bool half = cfg.value("half", true);
    int inner = cfg.value("inner", 4);
    std::vector<int> scales = cfg.value("scales", std::vector<int>{16, 32, 64, 128});
    std::string pat_s = cfg.value("pattern", std::string("-+"));
    auto pattern = parse_pattern(pat_s, half);
    int max_scale = *std::max_element(scales.begin(), scales.end());
    int radius = cfg.value("domain_radius", 4 * max_scale);
    if (radius < max_scale + 1)
        throw CampaignError(kUsageError, "domain_radius must exceed the largest scale");
    auto dom = half ? LatticeDomain::half_box(radius) : LatticeDomain::box(radius);
    cfg["half"] = half;
    cfg["inner"] = inner;
    cfg["scales"] = scales;
    cfg["pattern"] = pat_s;
    cfg["domain_radius"] = radius;
    auto s = IsingSampling::resolve(c, cfg, dom);

    long long total = s.chains * s.per_chain;
    std::vector<std::vector<uint8_t>> hit(scales.size(), std::vector<uint8_t>(total, 0));
    std::string dump = cfg.value("dump_snapshots", std::string());
    std::vector<SpinConfig> dumped(dump.empty() ? 0 : total,
                                   make_config(dom, s.bc, 1));
    s.run(c, c.parallelism, [&](long long ch, long long snap, const SpinConfig& cf) {
        long long idx = ch * s.per_chain + snap;
        for (size_t si = 0; si < scales.size(); ++si) {
            AnnulusSpec a{{0, 0}, inner, scales[si], half};
            hit[si][idx] = detect_arms(cf, a, pattern);
        }
        if (!dump.empty()) dumped[idx] = cf;
    });
    std::vector<ResultRow> rows;
    for (size_t si = 0; si < scales.size(); ++si) {
        ResultRow r;
        r.scale = scales[si];
        r.n = total;
        for (auto b : hit[si]) r.hits += b;
        r.est = estimate_probability(r.hits, r.n, c.seed);
        rows.push_back(r);
    }
    write_results_csv(c.out, rows, c.force);
    if (!dump.empty()) write_snapshots(dump, dom, s.bc, dumped, c.seed, c.force);
    if (c.plot) {
        // the plot is best-effort: an unfittable ladder still gets a scatter
        ExponentFit fit;
        try {
            std::vector<ScalePoint> pts;
            for (auto& r : rows) pts.push_back({r.scale, r.est});
            fit = fit_exponent(pts, SlopeSign::DecayInScale);
        } catch (const std::exception&) {}
        write_loglog_svg(c.out + ".svg", rows, fit, "arm pattern " + pat_s);
    }
    write_manifest(c, cfg);
}

void run_ising_crossing(const Campaign& c, json cfg) {
    if (c.samples < 1) throw CampaignError(kUsageError, "sample budget must be >= 1");
    int width = cfg.value("width", 256);
    std::vector<double> aspects = cfg.value("aspects", std::vector<double>{1, 1.5, 2, 2.5, 3});
    cfg["width"] = width;
    cfg["aspects"] = aspects;
    std::vector<ResultRow> rows;
    json resolved = cfg;
    for (double L : aspects) {
        // the rate convention: parameter L means extremal distance L/pi
        // between the two crossed sides, so that -log f(L) grows like L/6
        // (the decay per unit extremal distance is pi/6); the crossing runs
        // bottom to top so the lattice stays small
        int height = std::max(1, (int)std::lround(width * L / kPi));
        auto dom = LatticeDomain::rectangle(width, height);
        auto quad = LatticeDomain::topological_rectangle(width, height, 0, width, width + height,
                                                         2 * width + height);
        json sub = cfg;
        auto s = IsingSampling::resolve(c, sub, dom);
        resolved = sub;
        long long total = s.chains * s.per_chain;
        std::vector<uint8_t> hit(total, 0);
        s.run(c, c.parallelism, [&](long long ch, long long snap, const SpinConfig& cf) {
            hit[ch * s.per_chain + snap] = crossing_event(cf, quad);
        });
        ResultRow r;
        r.scale = L;
        r.n = total;
        for (auto b : hit) r.hits += b;
        r.est = estimate_probability(r.hits, r.n, c.seed);
        rows.push_back(r);
    }
    write_results_csv(c.out, rows, c.force);
    write_manifest(c, resolved);
}

void run_qm_check(const Campaign& c, json cfg) {
    if (c.samples < 1) throw CampaignError(kUsageError, "sample budget must be >= 1");
    bool half = cfg.value("half", false);
    std::string pat_s = cfg.value("pattern", std::string("+-+-"));
    auto pattern = parse_pattern(pat_s, half);
    std::vector<int> sc = cfg.value("scales", std::vector<int>{4, 8, 16});
    if (sc.size() != 3 || !(sc[0] < sc[1] && sc[1] < sc[2]))
        throw CampaignError(kUsageError, "qm-check needs three increasing scales");
    int radius = cfg.value("domain_radius", 4 * sc[2]);
    auto dom = half ? LatticeDomain::half_box(radius) : LatticeDomain::box(radius);
    cfg["half"] = half;
    cfg["pattern"] = pat_s;
    cfg["scales"] = sc;
    cfg["domain_radius"] = radius;
    auto s = IsingSampling::resolve(c, cfg, dom);
    long long total = s.chains * s.per_chain;
    std::array<AnnulusSpec, 3> ann{AnnulusSpec{{0, 0}, sc[0], sc[1], half},
                                   AnnulusSpec{{0, 0}, sc[1], sc[2], half},
                                   AnnulusSpec{{0, 0}, sc[0], sc[2], half}};
    std::array<std::vector<uint8_t>, 3> hit;
    for (auto& h : hit) h.assign(total, 0);
    s.run(c, c.parallelism, [&](long long ch, long long snap, const SpinConfig& cf) {
        for (int i = 0; i < 3; ++i)
            hit[i][ch * s.per_chain + snap] = detect_arms(cf, ann[i], pattern);
    });
    std::array<Estimate, 3> est;
    std::array<long long, 3> hits{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        for (auto b : hit[i]) hits[i] += b;
        est[i] = estimate_probability(hits[i], total, c.seed);
    }
    auto ratio = quasi_mult_ratio(est[2], est[0], est[1]);
    auto f = open_out(c.out, c.force);
    f << "kind,n_lo,n_hi,hits,n,value,lo95,hi95\n";
    const char* names[3] = {"prob", "prob", "prob"};
    int lo[3] = {sc[0], sc[1], sc[0]}, hi[3] = {sc[1], sc[2], sc[2]};
    for (int i = 0; i < 3; ++i)
        f << names[i] << "," << lo[i] << "," << hi[i] << "," << hits[i] << "," << total
          << "," << csv_num(est[i].p_hat) << "," << csv_num(est[i].lo95) << ","
          << csv_num(est[i].hi95) << "\n";
    f << "ratio,0,0,0,0," << csv_num(ratio.ratio) << "," << csv_num(ratio.lo95) << ","
      << csv_num(ratio.hi95) << "\n";
    write_manifest(c, cfg);
}

CrossingVariant parse_variant(const std::string& s) {
    if (s == "alpha-odd") return CrossingVariant::AlphaOdd;
    if (s == "alpha-even") return CrossingVariant::AlphaEven;
    if (s == "beta-odd") return CrossingVariant::BetaOdd;
    if (s == "beta-even") return CrossingVariant::BetaEven;
    throw CampaignError(kUsageError, "unknown crossing variant " + s);
}

SleConfig sle_config_from(const Campaign& c, json& cfg) {
    SleConfig sc;
    sc.kappa = cfg.value("kappa", 3.0);
    sc.dt = cfg.value("dt", 1e-3);
    sc.horizon = cfg.value("horizon", 8.0);
    sc.seed = c.seed;
    double rho = cfg.value("rho", 0.0);
    double v = cfg.value("v", 0.0);
    if (rho != 0.0) sc.right = {{v, rho}};
    cfg["kappa"] = sc.kappa;
    cfg["dt"] = sc.dt;
    cfg["horizon"] = sc.horizon;
    cfg["rho"] = rho;
    cfg["v"] = v;
    return sc;
}

void dump_driving(const std::string& prefix, const SleConfig& sc, uint64_t stream,
                  bool force) {
    auto p = drive(sc, stream);
    auto f = open_out(prefix + ".bin", force, true);
    for (int k = 0; k < p.steps(); ++k) {
        double row[2] = {p.t[k], p.w[k]};
        f.write(reinterpret_cast<const char*>(row), sizeof row);
        for (auto& v : p.v_left) f.write(reinterpret_cast<const char*>(&v[k]), sizeof(double));
        for (auto& v : p.v_right) f.write(reinterpret_cast<const char*>(&v[k]), sizeof(double));
    }
    json side{{"schema_version", kSchemaVersion},
              {"layout", "rows of little-endian doubles: t, W, V_left..., V_right..."},
              {"steps", p.steps()},
              {"columns", 2 + (int)p.v_left.size() + (int)p.v_right.size()},
              {"halted", p.halted},
              {"stream", stream}};
    auto g = open_out(prefix + ".json", force);
    g << side.dump(2) << "\n";
}

void run_sle(const Campaign& c, json cfg, bool interior) {
    if (c.samples < 1) throw CampaignError(kUsageError, "sample budget must be >= 1");
    auto sc = sle_config_from(c, cfg);
    std::vector<double> eps = cfg.value("eps", std::vector<double>{0.25, 0.125, 0.0625});
    double y = cfg.value("y", -8.0), r = cfg.value("r", 1.0);
    cfg["eps"] = eps;
    cfg["y"] = y;
    cfg["r"] = r;
    int k = 1;
    CrossingVariant variant = CrossingVariant::AlphaOdd;
    double x = 0;
    std::complex<double> z;
    int j = 1;
    if (interior) {
        j = cfg.value("j", 1);
        auto zv = cfg.value("z", std::vector<double>{0.0, 1.0});
        if (zv.size() != 2) throw CampaignError(kUsageError, "z must be [re, im]");
        z = {zv[0], zv[1]};
        cfg["j"] = j;
        cfg["z"] = zv;
    } else {
        std::string vs = cfg.value("variant", std::string("alpha-odd"));
        variant = parse_variant(vs);
        k = cfg.value("k", 1);
        x = cfg.value("x", 1.0);
        cfg["variant"] = vs;
        cfg["k"] = k;
        cfg["x"] = x;
    }
    std::string dump = cfg.value("dump_driving", std::string());

    auto f = open_out(c.out, c.force);
    f << "eps,sample,hit\n";
    for (size_t ei = 0; ei < eps.size(); ++ei) {
        std::vector<uint8_t> hit(c.samples, 0);
        parallel_for(c.samples, c.parallelism, [&](long long i) {
            uint64_t stream = ((uint64_t)ei << 40) | (uint64_t)i;
            auto res = interior
                           ? interior_event_indicator(sc, eps[ei], z, y, r, j, stream)
                           : boundary_crossing_indicator(sc, eps[ei], x, y, r, variant, k,
                                                         stream);
            hit[i] = res.hit;
        });
        for (long long i = 0; i < c.samples; ++i)
            f << csv_num(eps[ei]) << "," << i << "," << (int)hit[i] << "\n";
        if (!dump.empty())
            dump_driving(dump + "_eps" + std::to_string(ei), sc, (uint64_t)ei << 40, c.force);
    }
    write_manifest(c, cfg);
}

} // namespace

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Campaign load_campaign(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CampaignError(kIoError, "cannot read config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    json j = json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) throw CampaignError(kUsageError, "config is not valid JSON");
    Campaign c;
    c.kind = j.value("kind", std::string());
    if (c.kind.empty()) throw CampaignError(kUsageError, "config missing experiment kind");
    if (!j.contains("seed")) throw CampaignError(kUsageError, "config missing mandatory seed");
    c.seed = j["seed"].get<uint64_t>();
    c.samples = j.value("samples", (long long)0);
    c.out = j.value("out", std::string());
    c.parallelism = j.value("parallelism", 1);
    c.plot = j.value("plot", false);
    c.config_json = j.dump();
    return c;
}

void run_campaign(const Campaign& c) {
    json cfg = parse_config(c);
    cfg["parallelism"] = c.parallelism;
    cfg["plot"] = c.plot;
    try {
        if (c.kind == "exponent-table") run_exponent_table(c, cfg);
        else if (c.kind == "ising-arm") run_ising_arm(c, cfg);
        else if (c.kind == "ising-crossing") run_ising_crossing(c, cfg);
        else if (c.kind == "qm-check") run_qm_check(c, cfg);
        else if (c.kind == "sle-hit") run_sle(c, cfg, false);
        else if (c.kind == "sle-interior") run_sle(c, cfg, true);
        else throw CampaignError(kUsageError, "unknown experiment kind " + c.kind);
    } catch (const ResolutionError& e) {
        throw CampaignError(kResolutionError, e.what());
    } catch (const std::length_error& e) {
        throw CampaignError(kCapacityError, e.what());
    } catch (const std::invalid_argument& e) {
        throw CampaignError(kUsageError, e.what());
    }
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       bool force) {
    auto f = open_out(path, force);
    f << "scale,hits,n,p_hat,stderr,lo95,hi95,seed\n";
    for (const auto& r : rows)
        f << csv_num(r.scale) << "," << r.hits << "," << r.n << "," << csv_num(r.est.p_hat)
          << "," << csv_num(r.est.stderr_) << "," << csv_num(r.est.lo95) << ","
          << csv_num(r.est.hi95) << "," << r.est.seed << "\n";
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CampaignError(kIoError, "cannot read results " + path);
    std::string line;
    if (!std::getline(f, line)) throw CampaignError(kIoError, "empty results file " + path);
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(tok);
        return out;
    };
    auto header = split(line);
    std::vector<ResultRow> rows;
    if (header.size() >= 3 && header[1] == "hits") {
        // aggregated: scale,hits,n,...
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            auto c = split(line);
            if (c.size() < 3) throw CampaignError(kIoError, "corrupt results row in " + path);
            ResultRow r;
            r.scale = std::stod(c[0]);
            r.hits = std::stoll(c[1]);
            r.n = std::stoll(c[2]);
            r.est = estimate_probability(r.hits, r.n);
            rows.push_back(r);
        }
    } else if (header.size() == 3 && header[2] == "hit") {
        // per-sample: scale,sample,hit -> aggregate preserving scale order
        std::vector<double> order;
        std::map<double, std::pair<long long, long long>> acc;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            auto c = split(line);
            if (c.size() != 3) throw CampaignError(kIoError, "corrupt results row in " + path);
            double s = std::stod(c[0]);
            if (!acc.count(s)) order.push_back(s);
            acc[s].first += std::stoll(c[2]);
            acc[s].second += 1;
        }
        for (double s : order) {
            ResultRow r;
            r.scale = s;
            r.hits = acc[s].first;
            r.n = acc[s].second;
            r.est = estimate_probability(r.hits, r.n);
            rows.push_back(r);
        }
    } else {
        throw CampaignError(kIoError, "unrecognized results header in " + path);
    }
    if (rows.empty()) throw CampaignError(kIoError, "no data rows in " + path);
    return rows;
}

void write_loglog_svg(const std::string& path, const std::vector<ResultRow>& rows,
                      const ExponentFit& fit, const std::string& title) {
    auto f = open_out(path, true);
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
        if (r.est.p_hat <= 0) continue;
        double lx = std::log10(r.scale), ly = std::log10(r.est.p_hat);
        pts.push_back({lx, ly});
        xlo = std::min(xlo, lx), xhi = std::max(xhi, lx);
        ylo = std::min(ylo, ly), yhi = std::max(yhi, ly);
    }
    if (pts.empty()) { f << "<svg xmlns='http://www.w3.org/2000/svg'/>\n"; return; }
    double pad = 0.5;
    xlo -= pad, xhi += pad, ylo -= pad, yhi += pad;
    const double W = 480, H = 360, m = 48;
    auto sx = [&](double v) { return m + (v - xlo) / (xhi - xlo) * (W - 2 * m); };
    auto sy = [&](double v) { return H - m - (v - ylo) / (yhi - ylo) * (H - 2 * m); };
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='13'>" << title
      << " (slope " << csv_num(fit.slope) << ")</text>\n";
    // fitted line: log10 p = intercept/ln10 + slope' * log10 scale
    double sgn = fit.slope;
    double b0 = fit.intercept / std::log(10.0);
    double s0 = -sgn; // DecayInScale draws downward; eps fits rise with eps
    f << "<line x1='" << csv_num(sx(xlo + pad)) << "' y1='"
      << csv_num(sy(b0 + s0 * (xlo + pad))) << "' x2='" << csv_num(sx(xhi - pad)) << "' y2='"
      << csv_num(sy(b0 + s0 * (xhi - pad))) << "' stroke='steelblue'/>\n";
    for (auto [lx, ly] : pts)
        f << "<circle cx='" << csv_num(sx(lx)) << "' cy='" << csv_num(sy(ly))
          << "' r='3' fill='black'/>\n";
    f << "</svg>\n";
}

void write_snapshots(const std::string& prefix, const LatticeDomain& domain,
                     const BoundaryCondition& bc, const std::vector<SpinConfig>& snaps,
                     uint64_t seed, bool force) {
    auto f = open_out(prefix + ".bin", force, true);
    for (const auto& cfg : snaps) {
        // run-length frames: u32 run count, then (i8 value, u32 length) pairs
        std::vector<std::pair<int8_t, uint32_t>> runs;
        for (int i = 0; i < domain.size(); ++i) {
            if (!runs.empty() && runs.back().first == cfg.s[i] &&
                runs.back().second != UINT32_MAX)
                ++runs.back().second;
            else runs.push_back({cfg.s[i], 1});
        }
        uint32_t nr = (uint32_t)runs.size();
        f.write(reinterpret_cast<const char*>(&nr), 4);
        for (auto [v, len] : runs) {
            f.write(reinterpret_cast<const char*>(&v), 1);
            f.write(reinterpret_cast<const char*>(&len), 4);
        }
    }
    const char* shape = domain.shape == Shape::Box ? "box"
                        : domain.shape == Shape::HalfBox ? "half_box"
                                                         : "rectangle";
    std::string bcs = "free";
    for (auto s : bc.ring)
        if (s != SpinState::Free) bcs = "mixed";
    json side{{"schema_version", kSchemaVersion},
              {"domain", {{"shape", shape},
                          {"x0", domain.x0},
                          {"y0", domain.y0},
                          {"w", domain.w},
                          {"h", domain.h}}},
              {"bc", bcs},
              {"seed", seed},
              {"count", snaps.size()}};
    auto g = open_out(prefix + ".json", force);
    g << side.dump(2) << "\n";
}

std::vector<SpinConfig> read_snapshots(const std::string& prefix) {
    std::ifstream sf(prefix + ".json");
    if (!sf) throw CampaignError(kIoError, "cannot read sidecar " + prefix + ".json");
    std::stringstream ss;
    ss << sf.rdbuf();
    json side = json::parse(ss.str(), nullptr, false);
    if (side.is_discarded()) throw CampaignError(kIoError, "corrupt sidecar " + prefix + ".json");
    LatticeDomain dom;
    auto d = side["domain"];
    std::string shape = d.value("shape", std::string("rectangle"));
    dom.shape = shape == "box" ? Shape::Box : shape == "half_box" ? Shape::HalfBox
                                                                  : Shape::Rectangle;
    dom.x0 = d.value("x0", 0);
    dom.y0 = d.value("y0", 0);
    dom.w = d.value("w", 1);
    dom.h = d.value("h", 1);
    auto bc = BoundaryCondition::uniform(dom, SpinState::Free);
    size_t count = side.value("count", (size_t)0);
    std::ifstream bf(prefix + ".bin", std::ios::binary);
    if (!bf) throw CampaignError(kIoError, "cannot read snapshots " + prefix + ".bin");
    std::vector<SpinConfig> out;
    for (size_t i = 0; i < count; ++i) {
        uint32_t nr = 0;
        if (!bf.read(reinterpret_cast<char*>(&nr), 4))
            throw CampaignError(kIoError, "truncated snapshot file " + prefix + ".bin");
        auto cfg = make_config(dom, bc, 1);
        int idx = 0;
        for (uint32_t rr = 0; rr < nr; ++rr) {
            int8_t v;
            uint32_t len;
            if (!bf.read(reinterpret_cast<char*>(&v), 1) ||
                !bf.read(reinterpret_cast<char*>(&len), 4))
                throw CampaignError(kIoError, "truncated snapshot file " + prefix + ".bin");
            for (uint32_t q = 0; q < len && idx < dom.size(); ++q) cfg.s[idx++] = v;
        }
        if (idx != dom.size())
            throw CampaignError(kIoError, "snapshot frame size mismatch in " + prefix + ".bin");
        out.push_back(std::move(cfg));
    }
    return out;
}

} // namespace arms
