// Verification checks driven by the diagnose subcommand and the acceptance
// suite. Each check runs a Monte-Carlo ensemble of the given scenario and
// returns a verdict with the deciding statistic and its threshold.
#pragma once

#include <string>
#include <vector>

#include "travelfield/scenario.hpp"

#include "json.hpp"

namespace tfld {

struct CheckVerdict {
    std::string check;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    nlohmann::json detail;

    nlohmann::json to_json() const {
        return {{"check", check}, {"statistic", statistic}, {"threshold", threshold}, {"pass", pass},
                {"detail", detail}};
    }
};

// Empirical c_ZZ(h, tau) against c_XX(h - v tau) at lags ||h||inf <= 3,
// tau <= 2, each within 3 standard errors; passes when >= 95% of lag cells
// agree. Requires a constant-velocity window-shift scenario with a compact
// covariance base.
CheckVerdict check_cov_match(const ScenarioConfig& cfg, int ensemble);

// Taylor's hypothesis: c(v tau, 0) vs c(0, tau) within 3 combined standard
// errors for tau in {1, 2}. Same scenario requirements as cov-match.
CheckVerdict check_taylor(const ScenarioConfig& cfg, int ensemble);

// Ensemble-averaged periodogram against the discretized target. Masked to
// bins with |omega + k.v| > 3 eps_line for spectra with a line factor; bins
// are sorted by target value and grouped into coarse bins of >= 64 before the
// relative comparison (25% for line spectra, 10% for flat/white targets).
CheckVerdict check_periodogram(const ScenarioConfig& cfg, int ensemble);

// Correlation-peak offsets of an evolving-field ensemble against the
// propagation-path prediction at tau = 1; every probe must agree within one
// grid cell. Probes are picked automatically at moderate radius and base
// time, where the path expansion's remainder is sub-cell.
CheckVerdict check_path(const ScenarioConfig& cfg, int ensemble);

// Convenience dispatcher ("cov-match", "taylor", "periodogram", "path").
CheckVerdict run_check(const std::string& name, const ScenarioConfig& cfg, int ensemble);

}  // namespace tfld
