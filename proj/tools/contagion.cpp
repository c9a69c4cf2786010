// Command-line surface for the simulator + estimator pipeline.
//
// Exit codes: 0 success, 2 validation error, 3 degenerate scenario, 4 I/O.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "contagion/config.hpp"
#include "contagion/errors.hpp"
#include "contagion/inference.hpp"

namespace {

using namespace contagion;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::uint64_t replicate = 0;
    std::string out_path;
};

ScenarioConfig load_config(const CommonArgs& args) {
    ScenarioConfig config = load_scenario_config(args.config_path);
    if (args.seed) config.seed = *args.seed;
    return config;
}

int cmd_generate_network(const CommonArgs& args) {
    const ScenarioConfig config = load_config(args);
    if (config.mode != AnalysisMode::network)
        throw ValidationError("generate-network requires mode = network");
    Rng rng = Rng::substream(config.seed, "net", 0);
    const Network net = generate_family_network(config.family_groups, config.family_size,
                                                config.resolved_out_tie_prob(), rng);
    save_edge_list(net, args.out_path);
    std::cerr << "wrote " << net.node_count() << " nodes, " << net.tie_count() << " ties to "
              << args.out_path << "\n";
    return 0;
}

int cmd_simulate(const CommonArgs& args, const std::string& network_path,
                 const std::string& records_path) {
    const ScenarioConfig config = load_config(args);
    if (config.mode == AnalysisMode::network) {
        std::optional<Network> net;
        if (!network_path.empty()) {
            net = load_edge_list(network_path);
        } else {
            Rng rng = Rng::substream(config.seed, "net", 0);
            net = generate_family_network(config.family_groups, config.family_size,
                                          config.resolved_out_tie_prob(), rng);
        }
        Rng extract_rng = Rng::substream(config.seed, "extract", 0);
        const auto selection = config.extraction == ExtractionRule::distance4
                                   ? extract_independent_pairs(*net, extract_rng)
                                   : extract_disjoint_pairs(*net, extract_rng);
        Rng vacc_rng = Rng::substream(config.seed, "vacc", args.replicate);
        const VaccinationAssignment vacc =
            assign_vaccination(net->node_count(), config.vacc_prob, vacc_rng);
        Rng epi_rng = Rng::substream(config.seed, "epi", args.replicate);
        const Trajectory traj = simulate_epidemic(*net, vacc, config.disease, epi_rng);
        save_trajectory_csv(args.out_path, vacc, traj);
        if (!records_path.empty()) {
            std::vector<AlterEgoPair> pairs;
            pairs.reserve(selection.size());
            for (const auto& [pair, zone] : selection) {
                (void)zone;
                pairs.push_back(pair);
            }
            save_records_csv(records_path, build_records(*net, traj, vacc, pairs, config.disease,
                                                          config.summary_options()));
            std::cerr << "extracted " << pairs.size() << " alter-ego pairs\n";
        }
        return 0;
    }

    Rng rng = Rng::substream(config.seed, "group", args.replicate);
    const std::vector<int> counts = draw_contact_counts(config.num_groups, config.contact_mean, rng);
    const std::vector<GroupSim> groups =
        simulate_independent_groups(counts, config.vacc_prob, config.disease, rng);
    // Groups are disjoint components; the dump uses one global node index.
    VaccinationAssignment vacc;
    Trajectory traj;
    for (const GroupSim& g : groups) {
        vacc.vaccinated.insert(vacc.vaccinated.end(), g.vacc.vaccinated.begin(),
                               g.vacc.vaccinated.end());
        traj.infected_day.insert(traj.infected_day.end(), g.traj.infected_day.begin(),
                                 g.traj.infected_day.end());
        traj.onset_day.insert(traj.onset_day.end(), g.traj.onset_day.begin(),
                              g.traj.onset_day.end());
    }
    save_trajectory_csv(args.out_path, vacc, traj);
    if (!records_path.empty())
        save_records_csv(records_path,
                         build_group_records(groups, config.disease, config.summary_options()));
    return 0;
}

std::string format_eval_point(const ModelSpec& spec, const Eigen::VectorXd& c) {
    std::ostringstream out;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (k > 0) out << ";";
        out << spec.covariates[static_cast<std::size_t>(k)] << "=" << c(k);
    }
    return out.str();
}

int cmd_estimate(const std::string& records_path, const std::string& mode_name,
                 bool include_mutual, int n_bootstrap, std::uint64_t seed, std::uint64_t replicate,
                 const std::string& out_path) {
    ModelSpec spec;
    if (mode_name == "group") spec = ModelSpec::group_mode();
    else if (mode_name == "network") spec = ModelSpec::network_mode(include_mutual);
    else throw ValidationError("estimate: --mode must be group or network");
    if (n_bootstrap < 1) throw ValidationError("estimate: --bootstrap must be >= 1");

    const std::vector<GroupRecord> records = load_records_csv(records_path);
    try {
        const GlmFit mediator_fit = fit_mediator_model(records, spec);
        const GlmFit outcome_fit = fit_outcome_model(records, spec);
        const Eigen::VectorXd c =
            covariate_evaluation_point(records, spec, spec.eval_at_stratum_means);

        Rng boot_rng = Rng::substream(seed, "boot", replicate);
        const BootstrapResult boot = bootstrap_effects(records, spec, n_bootstrap, boot_rng);

        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write report: " + out_path);
        out << "scale,contagion,infectiousness,indirect,"
               "con_se,con_ci_low,con_ci_high,inf_se,inf_ci_low,inf_ci_high,"
               "ind_se,ind_ci_low,ind_ci_high,n_boot_converged,n_boot_requested,eval_point\n";
        for (const EffectScale scale :
             {EffectScale::difference, EffectScale::ratio, EffectScale::odds_ratio}) {
            const EffectEstimate e = estimate_effects(mediator_fit, outcome_fit, c, scale);
            out << scale_name(scale) << "," << e.contagion << "," << e.infectiousness << ","
                << e.indirect << ",";
            if (scale == EffectScale::ratio) {
                out << boot.contagion.se << "," << boot.contagion.ci_low << ","
                    << boot.contagion.ci_high << "," << boot.infectiousness.se << ","
                    << boot.infectiousness.ci_low << "," << boot.infectiousness.ci_high << ","
                    << boot.indirect.se << "," << boot.indirect.ci_low << ","
                    << boot.indirect.ci_high << "," << boot.n_replicates_converged << ","
                    << boot.n_replicates_requested;
            } else {
                out << ",,,,,,,,,,";
            }
            out << "," << format_eval_point(spec, c) << "\n";
        }
        if (!out) throw IoError("write failed: " + out_path);
        if (boot.high_failure)
            std::cerr << "warning: more than 10% of bootstrap replicates failed ("
                      << boot.n_replicates_requested - boot.n_replicates_converged << " of "
                      << boot.n_replicates_requested << ")\n";
        const char* con_verdict = test_null(boot, EffectKind::contagion) ? "reject" : "fail-to-reject";
        const char* inf_verdict =
            test_null(boot, EffectKind::infectiousness) ? "reject" : "fail-to-reject";
        std::cerr << "contagion null: " << con_verdict
                  << "; infectiousness null: " << inf_verdict << "\n";
    } catch (const NonConvergence& e) {
        throw ScenarioDegenerate(e.what());
    } catch (const SingularInformation& e) {
        throw ScenarioDegenerate(e.what());
    } catch (const EmptyStratum& e) {
        throw ScenarioDegenerate(e.what());
    } catch (const AllReplicatesFailed& e) {
        throw ScenarioDegenerate(e.what());
    }
    return 0;
}

int cmd_reproduce(const std::string& table, double scale, std::uint64_t seed, int threads,
                  const std::string& out_path) {
    std::vector<ScenarioConfig> cells;
    if (table == "table1") cells = table1_scenarios(scale, seed);
    else if (table == "table2") cells = table2_scenarios(scale, seed);
    else throw ValidationError("reproduce: --table must be table1 or table2");
    if (threads < 1) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    std::vector<SummaryRow> rows;
    for (const ScenarioConfig& cell : cells) {
        std::cerr << cell.label << " size=" << cell.population_size() << " n_sims=" << cell.n_sims
                  << " ...\n";
        rows.push_back(monte_carlo_experiment(cell, threads));
        const SummaryRow& r = rows.back();
        std::cerr << "  inf " << r.mean_infectiousness << " (" << r.mean_inf_se << ") "
                  << r.inf_coverage_or_power << "% | con " << r.mean_contagion << " ("
                  << r.mean_con_se << ") " << r.con_coverage_or_power << "% | used "
                  << r.n_sims_used << " excluded " << r.n_sims_excluded << "\n";
    }
    save_summary_csv(out_path, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"epidemic simulation and indirect vaccine effect estimation"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string network_path;
    std::string records_path;
    std::string mode_name = "group";
    bool include_mutual = true;
    int n_bootstrap = 500;
    std::uint64_t est_seed = 1;
    std::string table = "table1";
    double scale = 1.0;
    int threads = 0;

    auto* gen = app.add_subcommand("generate-network", "write a synthetic network edge list");
    gen->add_option("--config", args.config_path, "scenario config file")->required();
    gen->add_option("--seed", args.seed, "override the config seed");
    gen->add_option("--out", args.out_path, "output edge-list path")->required();

    auto* sim = app.add_subcommand("simulate", "simulate one epidemic replicate");
    sim->add_option("--config", args.config_path, "scenario config file")->required();
    sim->add_option("--network", network_path, "edge list to load (network mode)");
    sim->add_option("--seed", args.seed, "override the config seed");
    sim->add_option("--replicate", args.replicate, "replicate index (default 0)");
    sim->add_option("--out", args.out_path, "trajectory CSV path")->required();
    sim->add_option("--records", records_path, "also write analysis records CSV");

    auto* est = app.add_subcommand("estimate", "fit models and bootstrap effects from records");
    est->add_option("--records", records_path, "records CSV path")->required();
    est->add_option("--mode", mode_name, "group or network (default group)");
    est->add_flag("--mutual,!--no-mutual", include_mutual,
                  "include mutual-contact counts as covariates (network mode; default on)");
    est->add_option("--bootstrap", n_bootstrap, "bootstrap replicates (default 500)");
    est->add_option("--seed", est_seed, "bootstrap seed (default 1)");
    est->add_option("--replicate", args.replicate, "replicate index (default 0)");
    est->add_option("--out", args.out_path, "report CSV path")->required();

    auto* rep = app.add_subcommand("reproduce", "run a full simulation study table");
    rep->add_option("--table", table, "table1 (independent groups) or table2 (network)")
        ->required();
    rep->add_option("--scale", scale, "shrink n_sims and bootstrap by this factor, in (0,1]");
    rep->add_option("--seed", est_seed, "base seed (default 1)");
    rep->add_option("--threads", threads, "worker threads (default: hardware)");
    rep->add_option("--out", args.out_path, "summary CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_generate_network(args);
        if (sim->parsed()) return cmd_simulate(args, network_path, records_path);
        if (est->parsed())
            return cmd_estimate(records_path, mode_name, include_mutual, n_bootstrap, est_seed,
                                args.replicate, args.out_path);
        if (rep->parsed()) return cmd_reproduce(table, scale, est_seed, threads, args.out_path);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ScenarioDegenerate& e) {
        std::cerr << "degenerate scenario: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
