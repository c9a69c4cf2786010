#include "contagion/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "contagion/errors.hpp"

namespace contagion {

namespace {

// rng substream stage tags; replicate-scoped stages take the replicate index.
constexpr const char* kStageNetwork = "net";
constexpr const char* kStageExtract = "extract";
constexpr const char* kStageGroups = "group";
constexpr const char* kStageVaccination = "vacc";
constexpr const char* kStageEpidemic = "epi";
constexpr const char* kStageBootstrap = "boot";

struct EffectTriple {
    double contagion = 0.0;
    double infectiousness = 0.0;
    double indirect = 0.0;
};

EffectTriple ratio_effects(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                           const GlmOptions& options) {
    const GlmFit mediator_fit = fit_mediator_model(records, spec, options);
    const GlmFit outcome_fit = fit_outcome_model(records, spec, options);
    const Eigen::VectorXd c =
        covariate_evaluation_point(records, spec, spec.eval_at_stratum_means);
    EffectTriple t;
    t.contagion = contagion_effect(mediator_fit, outcome_fit, c, EffectScale::ratio);
    t.infectiousness = infectiousness_effect(mediator_fit, outcome_fit, c, EffectScale::ratio);
    t.indirect = indirect_effect(mediator_fit, outcome_fit, c, EffectScale::ratio);
    return t;
}

IntervalEstimate summarize(double point, std::vector<double>& draws, CiMethod method) {
    IntervalEstimate est;
    est.point = point;
    est.se = sample_sd(draws);
    std::sort(draws.begin(), draws.end());
    const double q_low = interpolated_quantile(draws, 0.025);
    const double q_high = interpolated_quantile(draws, 0.975);
    if (method == CiMethod::percentile) {
        est.ci_low = q_low;
        est.ci_high = q_high;
    } else {
        est.ci_low = 2.0 * point - q_high;
        est.ci_high = 2.0 * point - q_low;
    }
    return est;
}

}  // namespace

double interpolated_quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw ValidationError("interpolated_quantile: empty sample");
    const double n = static_cast<double>(sorted.size());
    const double rank = p * (n + 1.0);
    if (rank <= 1.0) return sorted.front();
    if (rank >= n) return sorted.back();
    const double lower = std::floor(rank);
    const double frac = rank - lower;
    const std::size_t k = static_cast<std::size_t>(lower) - 1;  // 0-based
    return sorted[k] + frac * (sorted[k + 1] - sorted[k]);
}

double sample_sd(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0));
}

BootstrapResult bootstrap_effects(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                                  int n_replicates, Rng& rng, const GlmOptions& options,
                                  CiMethod ci_method) {
    if (n_replicates < 1) throw ValidationError("bootstrap_effects: need at least one replicate");
    if (records.empty()) throw ValidationError("bootstrap_effects: no records");

    BootstrapResult out;
    out.n_replicates_requested = n_replicates;

    // Point estimates from the full data; failures propagate to the caller.
    const EffectTriple point = ratio_effects(records, spec, options);
    out.point.scale = EffectScale::ratio;
    out.point.contagion = point.contagion;
    out.point.infectiousness = point.infectiousness;
    out.point.indirect = point.indirect;
    out.point.eval_point =
        covariate_evaluation_point(records, spec, spec.eval_at_stratum_means);

    const std::size_t n = records.size();
    std::vector<GroupRecord> resample(n);
    std::vector<double> con_draws, inf_draws, ind_draws;
    con_draws.reserve(static_cast<std::size_t>(n_replicates));
    inf_draws.reserve(static_cast<std::size_t>(n_replicates));
    ind_draws.reserve(static_cast<std::size_t>(n_replicates));
    for (int b = 0; b < n_replicates; ++b) {
        for (std::size_t i = 0; i < n; ++i)
            resample[i] = records[static_cast<std::size_t>(rng.uniform_int(n))];
        try {
            const EffectTriple t = ratio_effects(resample, spec, options);
            con_draws.push_back(t.contagion);
            inf_draws.push_back(t.infectiousness);
            ind_draws.push_back(t.indirect);
        } catch (const NonConvergence&) {
        } catch (const SingularInformation&) {
        } catch (const EmptyStratum&) {
        }
    }
    out.n_replicates_converged = static_cast<int>(con_draws.size());
    if (out.n_replicates_converged == 0)
        throw AllReplicatesFailed("bootstrap_effects: no bootstrap replicate converged");
    out.high_failure =
        static_cast<double>(n_replicates - out.n_replicates_converged) >
        0.10 * static_cast<double>(n_replicates);

    out.contagion = summarize(point.contagion, con_draws, ci_method);
    out.infectiousness = summarize(point.infectiousness, inf_draws, ci_method);
    out.indirect = summarize(point.indirect, ind_draws, ci_method);
    return out;
}

bool test_null(const BootstrapResult& result, EffectKind effect) {
    const IntervalEstimate& e =
        effect == EffectKind::contagion ? result.contagion : result.infectiousness;
    return 1.0 < e.ci_low || 1.0 > e.ci_high;
}

double ScenarioConfig::resolved_out_tie_prob() const {
    if (out_tie_prob != kAutoOutTieProb) return out_tie_prob;
    const double n = static_cast<double>(family_groups) * family_size;
    return 2.0 / (n - static_cast<double>(family_size));
}

long ScenarioConfig::population_size() const {
    return mode == AnalysisMode::group ? num_groups
                                       : static_cast<long>(family_groups) * family_size;
}

ModelSpec ScenarioConfig::model_spec() const {
    return mode == AnalysisMode::group ? ModelSpec::group_mode()
                                       : ModelSpec::network_mode(include_mutual_counts);
}

SummaryOptions ScenarioConfig::summary_options() const {
    SummaryOptions opts;
    opts.exclude_partner = !include_partner_in_summaries;
    return opts;
}

void ScenarioConfig::validate() const {
    disease.validate();
    if (vacc_prob < 0.0 || vacc_prob > 1.0)
        throw ValidationError("scenario: vacc_prob must be in [0,1]");
    if (n_sims < 1) throw ValidationError("scenario: n_sims must be >= 1");
    if (n_bootstrap < 1) throw ValidationError("scenario: n_bootstrap must be >= 1");
    if (mode == AnalysisMode::group) {
        if (num_groups < 1) throw ValidationError("scenario: num_groups must be >= 1");
        if (contact_mean < 0.0) throw ValidationError("scenario: contact_mean must be >= 0");
    } else {
        if (family_groups < 1 || family_size < 1)
            throw ValidationError("scenario: family_groups and family_size must be >= 1");
        const double p = resolved_out_tie_prob();
        if (p < 0.0 || p > 1.0)
            throw ValidationError("scenario: out_tie_prob must be in [0,1] or auto");
    }
}

NetworkContext build_network_context(const ScenarioConfig& config) {
    config.validate();
    Rng net_rng = Rng::substream(config.seed, kStageNetwork, 0);
    Network net = generate_family_network(config.family_groups, config.family_size,
                                          config.resolved_out_tie_prob(), net_rng);
    Rng extract_rng = Rng::substream(config.seed, kStageExtract, 0);
    auto selection = config.extraction == ExtractionRule::distance4
                         ? extract_independent_pairs(net, extract_rng)
                         : extract_disjoint_pairs(net, extract_rng);
    NetworkContext ctx{std::move(net), {}};
    ctx.pairs.reserve(selection.size());
    for (auto& [pair, zone] : selection) {
        (void)zone;
        ctx.pairs.push_back(pair);
    }
    return ctx;
}

std::vector<GroupRecord> simulate_records(const ScenarioConfig& config,
                                          const NetworkContext* context, std::uint64_t replicate) {
    config.validate();
    if (config.mode == AnalysisMode::group) {
        Rng rng = Rng::substream(config.seed, kStageGroups, replicate);
        const std::vector<int> counts =
            draw_contact_counts(config.num_groups, config.contact_mean, rng);
        const std::vector<GroupSim> groups =
            simulate_independent_groups(counts, config.vacc_prob, config.disease, rng);
        return build_group_records(groups, config.disease, config.summary_options());
    }
    if (context == nullptr)
        throw ValidationError("simulate_records: network mode needs a network context");
    Rng vacc_rng = Rng::substream(config.seed, kStageVaccination, replicate);
    const VaccinationAssignment vacc =
        assign_vaccination(context->net.node_count(), config.vacc_prob, vacc_rng);
    Rng epi_rng = Rng::substream(config.seed, kStageEpidemic, replicate);
    const Trajectory traj = simulate_epidemic(context->net, vacc, config.disease, epi_rng);
    return build_records(context->net, traj, vacc, context->pairs, config.disease,
                         config.summary_options());
}

ScenarioRun run_scenario_once(const ScenarioConfig& config, const NetworkContext* context,
                              std::uint64_t replicate) {
    std::optional<NetworkContext> local;
    if (config.mode == AnalysisMode::network && context == nullptr) {
        local = build_network_context(config);
        context = &*local;
    }
    const std::vector<GroupRecord> records = simulate_records(config, context, replicate);

    ScenarioRun run;
    run.n_records = static_cast<int>(records.size());
    for (const auto& r : records) run.n_mediator_positive += r.mediator;

    Rng boot_rng = Rng::substream(config.seed, kStageBootstrap, replicate);
    try {
        run.result = bootstrap_effects(records, config.model_spec(), config.n_bootstrap, boot_rng,
                                       {}, config.ci_method);
    } catch (const NonConvergence& e) {
        throw ScenarioDegenerate(e.what());
    } catch (const SingularInformation& e) {
        throw ScenarioDegenerate(e.what());
    } catch (const EmptyStratum& e) {
        throw ScenarioDegenerate(e.what());
    } catch (const AllReplicatesFailed& e) {
        throw ScenarioDegenerate(e.what());
    } catch (const ValidationError& e) {
        // e.g. zero records extracted
        throw ScenarioDegenerate(e.what());
    }
    return run;
}

ScenarioRun run_scenario_once(const ScenarioConfig& config, std::uint64_t replicate) {
    return run_scenario_once(config, nullptr, replicate);
}

SummaryRow monte_carlo_experiment(const ScenarioConfig& config, int threads) {
    config.validate();
    std::optional<NetworkContext> context;
    if (config.mode == AnalysisMode::network) context = build_network_context(config);
    const NetworkContext* ctx = context ? &*context : nullptr;

    struct PerRep {
        bool used = false;
        double con = 0.0, inf = 0.0;
        double con_se = 0.0, inf_se = 0.0;
        bool con_covers = false, inf_covers = false;
    };
    std::vector<PerRep> reps(static_cast<std::size_t>(config.n_sims));

    if (threads < 1) threads = 1;
    threads = std::min<int>(threads, config.n_sims);
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const int r = next.fetch_add(1);
            if (r >= config.n_sims) return;
            try {
                const ScenarioRun run =
                    run_scenario_once(config, ctx, static_cast<std::uint64_t>(r));
                PerRep& slot = reps[static_cast<std::size_t>(r)];
                slot.used = true;
                slot.con = run.result.contagion.point;
                slot.inf = run.result.infectiousness.point;
                slot.con_se = run.result.contagion.se;
                slot.inf_se = run.result.infectiousness.se;
                slot.con_covers = !test_null(run.result, EffectKind::contagion);
                slot.inf_covers = !test_null(run.result, EffectKind::infectiousness);
            } catch (const ScenarioDegenerate&) {
                // excluded and counted below
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    SummaryRow row;
    row.scenario = config.label;
    row.size = config.population_size();
    double con_cover = 0.0, inf_cover = 0.0;
    for (const PerRep& r : reps) {
        if (!r.used) {
            ++row.n_sims_excluded;
            continue;
        }
        ++row.n_sims_used;
        row.mean_contagion += r.con;
        row.mean_infectiousness += r.inf;
        row.mean_con_se += r.con_se;
        row.mean_inf_se += r.inf_se;
        con_cover += r.con_covers ? 1.0 : 0.0;
        inf_cover += r.inf_covers ? 1.0 : 0.0;
    }
    if (row.n_sims_used > 0) {
        const double used = static_cast<double>(row.n_sims_used);
        row.mean_contagion /= used;
        row.mean_infectiousness /= used;
        row.mean_con_se /= used;
        row.mean_inf_se /= used;
        con_cover = 100.0 * con_cover / used;
        inf_cover = 100.0 * inf_cover / used;
        if (config.hypothesis == Hypothesis::null_effects) {
            row.con_coverage_or_power = con_cover;
            row.inf_coverage_or_power = inf_cover;
        } else {
            row.con_coverage_or_power = 100.0 - con_cover;
            row.inf_coverage_or_power = 100.0 - inf_cover;
        }
    }
    return row;
}

void append_summary_rows(std::string& out, const SummaryRow& row) {
    std::ostringstream ss;
    ss << row.scenario << "," << row.size << ",infectiousness," << row.mean_infectiousness << ","
       << row.mean_inf_se << "," << row.inf_coverage_or_power << "," << row.n_sims_used << ","
       << row.n_sims_excluded << "\n";
    ss << row.scenario << "," << row.size << ",contagion," << row.mean_contagion << ","
       << row.mean_con_se << "," << row.con_coverage_or_power << "," << row.n_sims_used << ","
       << row.n_sims_excluded << "\n";
    out += ss.str();
}

void save_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    std::string body = "scenario,n_or_network_size,effect,mean_estimate,mean_se,"
                       "coverage_or_power,n_used,n_excluded\n";
    for (const auto& row : rows) append_summary_rows(body, row);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write summary: " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace contagion
