#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contagion/effects.hpp"
#include "contagion/epidemic.hpp"
#include "contagion/network.hpp"
#include "contagion/records.hpp"

namespace contagion {

enum class CiMethod { percentile, basic };

struct IntervalEstimate {
    double point = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct BootstrapResult {
    EffectEstimate point;  // ratio scale, full-data fits
    IntervalEstimate contagion;
    IntervalEstimate infectiousness;
    IntervalEstimate indirect;
    int n_replicates_requested = 0;
    int n_replicates_converged = 0;
    bool high_failure = false;  // more than 10% of replicates failed
};

// Resample records with replacement B times, refit both models, recompute
// the ratio-scale effects per replicate. SE is the sample SD over converged
// replicates. The CI comes from the 2.5/97.5 bootstrap quantiles: either the
// percentile interval or the basic interval [2t - q97.5, 2t - q2.5]. Failed
// replicates are skipped and counted. Throws AllReplicatesFailed when none
// converge.
BootstrapResult bootstrap_effects(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                                  int n_replicates, Rng& rng, const GlmOptions& options = {},
                                  CiMethod ci_method = CiMethod::percentile);

enum class EffectKind { contagion, infectiousness };

// Reject the null iff 1 lies outside [ci_low, ci_high]; endpoints touching 1
// fail to reject.
bool test_null(const BootstrapResult& result, EffectKind effect);

// Order statistics with linear interpolation at rank p(n+1); `sorted` must
// be ascending.
double interpolated_quantile(const std::vector<double>& sorted, double p);
double sample_sd(const std::vector<double>& values);

enum class Hypothesis { null_effects, alternative };

enum class ExtractionRule { distance4, zone_disjoint };

inline constexpr double kAutoOutTieProb = -1.0;

struct ScenarioConfig {
    std::string label = "scenario";
    AnalysisMode mode = AnalysisMode::group;
    Hypothesis hypothesis = Hypothesis::null_effects;

    // group mode
    int num_groups = 500;        // K alter-ego groups
    double contact_mean = 3.0;   // Poisson mean for mutual contacts per group

    // network mode
    int family_groups = 1600;
    int family_size = 5;
    double out_tie_prob = kAutoOutTieProb;  // auto: expected 2 out-of-group ties per node
    ExtractionRule extraction = ExtractionRule::zone_disjoint;
    bool include_mutual_counts = true;

    double vacc_prob = 0.4;
    // Count the partner (ego in the alter's summaries and vice versa) among
    // the tied nodes, as the sampling procedure literally describes.
    bool include_partner_in_summaries = true;
    DiseaseParams disease;
    int n_sims = 500;
    int n_bootstrap = 500;
    CiMethod ci_method = CiMethod::percentile;
    std::uint64_t seed = 1;

    SummaryOptions summary_options() const;

    double resolved_out_tie_prob() const;
    long population_size() const;  // K (group mode) or node count (network mode)
    ModelSpec model_spec() const;
    void validate() const;
};

// Fixed per experiment in network mode: the topology and the extracted
// pairs are generated once and shared by every simulated epidemic.
struct NetworkContext {
    Network net;
    std::vector<AlterEgoPair> pairs;
};

NetworkContext build_network_context(const ScenarioConfig& config);

// One replicate's analysis rows. `context` must be non-null in network mode
// and is ignored in group mode.
std::vector<GroupRecord> simulate_records(const ScenarioConfig& config,
                                          const NetworkContext* context, std::uint64_t replicate);

struct ScenarioRun {
    BootstrapResult result;
    int n_records = 0;
    int n_mediator_positive = 0;
};

// generate -> vaccinate -> simulate -> (network mode: extract) -> records ->
// bootstrap. Deterministic given (config.seed, replicate). Throws
// ScenarioDegenerate when the full-data fits fail.
ScenarioRun run_scenario_once(const ScenarioConfig& config, std::uint64_t replicate);
ScenarioRun run_scenario_once(const ScenarioConfig& config, const NetworkContext* context,
                              std::uint64_t replicate);

struct SummaryRow {
    std::string scenario;
    long size = 0;
    double mean_infectiousness = 0.0;
    double mean_inf_se = 0.0;
    double inf_coverage_or_power = 0.0;  // percent
    double mean_contagion = 0.0;
    double mean_con_se = 0.0;
    double con_coverage_or_power = 0.0;  // percent
    int n_sims_used = 0;
    int n_sims_excluded = 0;
};

// n_sims independent replicates; coverage is the percent of CIs containing
// 1, and power (alternative hypothesis) is 100 minus that. Degenerate
// replicates are excluded and counted. Results do not depend on `threads`.
SummaryRow monte_carlo_experiment(const ScenarioConfig& config, int threads = 1);

// Summary CSV matching the experiment tables: one row per effect.
void save_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
void append_summary_rows(std::string& out, const SummaryRow& row);

}  // namespace contagion
