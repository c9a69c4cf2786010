#pragma once

#include <string>
#include <vector>

#include "contagion/epidemic.hpp"
#include "contagion/network.hpp"

namespace contagion {

// One analysis row per alter-ego group. The outcome Y_eTs is 0 whenever the
// mediator Y_aT is 0; build_records enforces the restriction.
struct GroupRecord {
    int pair_id = 0;
    int v_alter = 0;         // V_a
    int v_ego = 0;           // V_e
    int first_case_day = 0;  // T: first infectious onset in the pair, or t_f
    int mediator = 0;        // Y_aT: alter sick and ego healthy at T
    int outcome = 0;         // Y_eTs: ego onset in [T+b, T+s]
    int u_alter = 0;         // U_a: unvaccinated alter-contacts with onset <= T-b
    int l_alter = 0;         // L_a: vaccinated, same window
    int u_ego = 0;           // U_e: unvaccinated ego-contacts with onset <= T+f
    int l_ego = 0;           // L_e: vaccinated, same window
    int mutual_unvacc = 0;   // M_u: unvaccinated mutual contacts with onset <= T-b
    int mutual_vacc = 0;     // M_v: vaccinated, same window
};

struct SummaryOptions {
    // Drop the ego from the alter's contact summaries and vice versa. The
    // partner's disease status is the mediator/outcome itself; counting it as
    // a covariate would partially absorb the effect of interest. Switch off
    // to count every tied node.
    bool exclude_partner = true;
};

// min of the pair's onset days, or t_f when neither becomes infectious.
int first_infection_time(const Trajectory& traj, NodeId alter, NodeId ego, int followup_days);

// 1 iff the alter's onset is exactly T and the ego is still healthy
// (not even infected) at T. Simultaneous onsets and never-sick pairs give 0.
int mediator(const Trajectory& traj, NodeId alter, NodeId ego, int first_case_day);

// 1 iff the ego's onset lies in [T+b, T+s], s = f + b.
int outcome(const Trajectory& traj, NodeId ego, int first_case_day, int incubation_days,
            int infectious_days);

struct ContactSummary {
    int u_alter = 0, l_alter = 0;
    int u_ego = 0, l_ego = 0;
    int mutual_unvacc = 0, mutual_vacc = 0;
};

ContactSummary contact_summaries(const Network& net, const Trajectory& traj,
                                 const VaccinationAssignment& vacc, const AlterEgoPair& pair,
                                 int first_case_day, int incubation_days, int infectious_days,
                                 const SummaryOptions& options = {});

std::vector<GroupRecord> build_records(const Network& net, const Trajectory& traj,
                                       const VaccinationAssignment& vacc,
                                       const std::vector<AlterEgoPair>& pairs,
                                       const DiseaseParams& params,
                                       const SummaryOptions& options = {});

std::vector<GroupRecord> build_group_records(const std::vector<GroupSim>& groups,
                                             const DiseaseParams& params,
                                             const SummaryOptions& options = {});

// CSV columns: pair_id,V_a,V_e,T,Y_aT,Y_eTs,U_a,L_a,U_e,L_e,M_u,M_v.
void save_records_csv(const std::string& path, const std::vector<GroupRecord>& records);
std::vector<GroupRecord> load_records_csv(const std::string& path);

}  // namespace contagion
