#include "contagion/epidemic.hpp"

#include <fstream>

#include "contagion/errors.hpp"

namespace contagion {

void DiseaseParams::validate() const {
    auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob_ok(p_outside) || !prob_ok(p_unvaccinated) || !prob_ok(p_vaccinated))
        throw ValidationError("disease params: probabilities must be in [0,1]");
    if (!(delta > 0.0 && delta <= 1.0))
        throw ValidationError("disease params: delta must be in (0,1]");
    if (incubation_days < 0 || infectious_days < 0)
        throw ValidationError("disease params: incubation/infectious days must be >= 0");
    if (source_activation_lag < 0)
        throw ValidationError("disease params: source_activation_lag must be >= 0");
    if (followup_days < 1) throw ValidationError("disease params: followup_days must be >= 1");
}

VaccinationAssignment assign_vaccination(NodeId node_count, double prob, Rng& rng) {
    if (prob < 0.0 || prob > 1.0)
        throw ValidationError("assign_vaccination: prob must be in [0,1]");
    VaccinationAssignment v;
    v.vaccinated.resize(static_cast<std::size_t>(node_count));
    for (auto& b : v.vaccinated) b = rng.bernoulli(prob) ? 1 : 0;
    return v;
}

namespace {

Trajectory run_day_loop(const Network& net, const VaccinationAssignment& vacc,
                        const DiseaseParams& params, bool use_outside,
                        const std::vector<NodeId>& day1_infections, Rng& rng) {
    params.validate();
    const NodeId n = net.node_count();
    if (vacc.size() != n)
        throw ValidationError("simulate_epidemic: vaccination vector size mismatch");

    Trajectory traj;
    traj.infected_day.assign(static_cast<std::size_t>(n), kNever);
    traj.onset_day.assign(static_cast<std::size_t>(n), kNever);

    auto commit = [&](NodeId i, int day) {
        traj.infected_day[static_cast<std::size_t>(i)] = day;
        if (day + params.incubation_days <= params.followup_days)
            traj.onset_day[static_cast<std::size_t>(i)] = day + params.incubation_days;
    };
    for (NodeId s : day1_infections) {
        if (s < 0 || s >= n) throw ValidationError("simulate_epidemic: seed node out of range");
        commit(s, 1);
    }

    std::vector<NodeId> newly;
    for (int t = 1; t <= params.followup_days; ++t) {
        newly.clear();
        const bool outside_active =
            use_outside && (params.outside_mode == OutsideMode::every_day || t == 1);
        for (NodeId i = 0; i < n; ++i) {
            if (traj.infected_day[static_cast<std::size_t>(i)] != kNever) continue;
            const double susceptibility = vacc[i] ? params.delta : 1.0;
            double escape = 1.0;
            if (outside_active) {
                const double outside_scale =
                    params.delta_scales_outside ? susceptibility : 1.0;
                escape *= 1.0 - outside_scale * params.p_outside;
            }
            for (NodeId j : net.contacts(i)) {
                const int onset = traj.onset_day[static_cast<std::size_t>(j)];
                if (onset == kNever) continue;
                const int first = onset + params.source_activation_lag;
                if (t < first || t > first + params.infectious_days) continue;
                escape *= 1.0 - susceptibility *
                                    (vacc[j] ? params.p_vaccinated : params.p_unvaccinated);
            }
            // One uniform per susceptible node per day, drawn unconditionally
            // so the stream position does not depend on local exposure.
            if (rng.uniform() < 1.0 - escape) newly.push_back(i);
        }
        // Infections computed this day come from the start-of-day infectious
        // set; committing after the node pass keeps same-day chains out.
        for (NodeId i : newly) commit(i, t);
    }
    return traj;
}

}  // namespace

Trajectory simulate_epidemic(const Network& net, const VaccinationAssignment& vacc,
                             const DiseaseParams& params, Rng& rng) {
    return run_day_loop(net, vacc, params, /*use_outside=*/true, {}, rng);
}

Trajectory simulate_epidemic_seeded(const Network& net, const VaccinationAssignment& vacc,
                                    const DiseaseParams& params,
                                    const std::vector<NodeId>& day1_infections, Rng& rng) {
    return run_day_loop(net, vacc, params, /*use_outside=*/false, day1_infections, rng);
}

std::vector<int> draw_contact_counts(int num_groups, double mean_contacts, Rng& rng) {
    if (num_groups <= 0) throw ValidationError("draw_contact_counts: num_groups must be positive");
    if (mean_contacts < 0.0)
        throw ValidationError("draw_contact_counts: mean_contacts must be >= 0");
    std::vector<int> counts(static_cast<std::size_t>(num_groups));
    for (auto& c : counts) c = rng.poisson(mean_contacts);
    return counts;
}

std::vector<GroupSim> simulate_independent_groups(const std::vector<int>& contact_counts,
                                                  double vacc_prob, const DiseaseParams& params,
                                                  Rng& rng) {
    std::vector<GroupSim> groups;
    groups.reserve(contact_counts.size());
    for (int n_k : contact_counts) {
        if (n_k < 0) throw ValidationError("simulate_independent_groups: negative contact count");
        const NodeId size = static_cast<NodeId>(2 + n_k);
        GroupSim g{Network::complete(size), {}, {}, 0, 1};
        if (rng.bernoulli(0.5)) std::swap(g.alter, g.ego);
        g.vacc = assign_vaccination(size, vacc_prob, rng);
        g.traj = simulate_epidemic(g.net, g.vacc, params, rng);
        groups.push_back(std::move(g));
    }
    return groups;
}

void save_trajectory_csv(const std::string& path, const VaccinationAssignment& vacc,
                         const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory: " + path);
    out << "node,vaccinated,infected_day,onset_day\n";
    for (std::size_t i = 0; i < traj.infected_day.size(); ++i) {
        out << i << "," << (vacc.vaccinated[i] ? 1 : 0) << ",";
        if (traj.infected_day[i] != kNever) out << traj.infected_day[i];
        out << ",";
        if (traj.onset_day[i] != kNever) out << traj.onset_day[i];
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace contagion
