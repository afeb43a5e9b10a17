#pragma once
// Config-driven experiment campaigns: JSON config/manifest, deterministic CSV
// outputs, optional SVG log-log plots, snapshot persistence.

#include <cstdint>
#include <string>
#include <vector>

#include "arms/estimation.hpp"
#include "arms/ising.hpp"

namespace arms {

// distinct process exit codes (documented in the README)
enum ExitCode {
    kOk = 0,
    kUsageError = 2,      // bad config / flags
    kResolutionError = 3, // event scale unresolvable at the configured step
    kCapacityError = 4,   // domain too large for the requested operation
    kIoError = 5,         // missing/corrupt/unwritable files
};

struct CampaignError : std::runtime_error {
    int code;
    CampaignError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct Campaign {
    std::string kind; // exponent-table | ising-arm | ising-crossing |
                      // sle-hit | sle-interior | qm-check
    std::string config_json; // resolved configuration (all defaults explicit)
    uint64_t seed = 0;
    long long samples = 0;
    std::string out;
    int parallelism = 1;
    bool plot = false;
    bool force = false; // allow overwriting existing outputs
};

// parse a JSON config file; flag overrides applied by the CLI before run()
Campaign load_campaign(const std::string& path);

// execute; writes <out>, <out>.manifest.json, and optional <out>.svg
void run_campaign(const Campaign& c);

// deterministic float formatting shared by all CSV writers
std::string csv_num(double v);

// aggregated results row used by simulate/sle campaigns and `estimate`
struct ResultRow {
    double scale = 0;
    long long hits = 0;
    long long n = 0;
    Estimate est;
};
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       bool force);
std::vector<ResultRow> read_results_csv(const std::string& path);

// log-log scatter of the rows with the fitted line
void write_loglog_svg(const std::string& path, const std::vector<ResultRow>& rows,
                      const ExponentFit& fit, const std::string& title);

// run-length-encoded snapshot persistence (binary frames + JSON sidecar)
void write_snapshots(const std::string& prefix, const LatticeDomain& domain,
                     const BoundaryCondition& bc, const std::vector<SpinConfig>& snaps,
                     uint64_t seed, bool force);
std::vector<SpinConfig> read_snapshots(const std::string& prefix);

} // namespace arms
