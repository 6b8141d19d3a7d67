#ifndef RETURNSTAT_EXPERIMENTS_HPP
#define RETURNSTAT_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "returnstat/distribution.hpp"
#include "returnstat/models/group_conv.hpp"
#include "returnstat/models/successor.hpp"
#include "returnstat/returns.hpp"
#include "returnstat/shift_model.hpp"

#include <json.hpp>

namespace returnstat {

// One n-cell of a Monte Carlo run: exact cluster quantities, the empirical
// law of S, and its distance to the predicted limit law.
struct CellRecord {
    std::size_t n = 0;
    double cylinder_p = 0.0;
    std::uint64_t trials = 0;
    double beta_n = 0.0;
    double rho_n = 0.0;
    double rho_predicted = 0.0;
    double pa_t = 0.0;
    double pa_p = 0.0;
    std::optional<DistributionOnN> empirical;
    double tv = 0.0;
    double tv_se = 0.0;
    std::uint64_t samples = 0;
    double wall_time_s = 0.0;
    std::string error;  // nonempty when the cell failed (recorded, not fatal)
};

struct ExperimentReport {
    std::string kind;  // converge | oscillate | poisson-limit
    nlohmann::json model;
    std::vector<Symbol> word;
    double t = 1.0;
    std::vector<int> d = {1};
    std::uint64_t seed = 0;
    std::uint64_t samples_per_n = 0;
    double psi0 = 0.0;
    std::string timestamp;
    std::vector<CellRecord> cells;
    nlohmann::json extra;

    bool any_cell_failed() const;
    nlohmann::json to_json() const;
    static ExperimentReport from_json(const nlohmann::json& j);
    std::string to_csv() const;
    // FNV-1a over the canonical JSON with volatile fields (timestamp,
    // wall times) stripped; same config + seed -> same hash.
    std::string config_hash() const;
};

struct ConvergenceOptions {
    std::vector<std::size_t> n_list;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    int workers = 0;
    std::optional<double> rho_override;  // skip predicted_rho, e.g. rho = 0
    int bootstrap_replicates = 200;
};

// Theorem-2(b) style run: empirical law of S at each n against
// PA(t(1-rho), rho) with rho from the closed-form limit (or the override).
ExperimentReport convergence_experiment(const ShiftModel& model, const Word& block,
                                        const ReturnSetup& setup,
                                        const ConvergenceOptions& opts);

struct BetaCurve {
    std::vector<std::pair<std::size_t, double>> values;
    std::optional<double> predicted_limit;  // prod_j J(T^j omega) when closed-form
};

BetaCurve beta_curve(const ShiftModel& model, const Word& block, std::size_t n_from,
                     std::size_t n_to);

// Exact conditional sequence P0{[s^{n+1}] | [s^n]} for the group model,
// with the two closed-form partial limits and per-n deviations for the
// residue classes the construction pins down.
ExperimentReport oscillation_report(const GroupConvModel& model, std::size_t n_max,
                                    bool require_strict_dominant = false);

// Successor-model run against Pois(t), with the exact beta_n <= 2^{-(n+1)}
// bound recorded per n.
ExperimentReport poisson_limit_report(const SuccessorModel& model,
                                      const std::vector<std::size_t>& n_list, double t,
                                      std::uint64_t samples, std::uint64_t seed,
                                      int workers = 0);

struct TightnessRow {
    std::size_t n = 0;
    double mean = 0.0;
    double mean_bound = 0.0;
    double mean_margin = 0.0;  // bound - mean, positive when passing
    double tail = 0.0;
    bool mean_ok = false;
    bool tail_ok = false;
};

struct TightnessResult {
    bool pass = false;
    std::size_t tail_cutoff = 0;  // b with tail <= 0.01 at the largest n
    std::vector<TightnessRow> rows;
    nlohmann::json to_json() const;
};

// Mean envelope 1 + (1+psi0)^ell t (plus 5 sigma) and uniform tail decay.
TightnessResult tightness_diagnostic(const ExperimentReport& report);

}  // namespace returnstat

#endif
