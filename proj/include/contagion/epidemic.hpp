#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contagion/network.hpp"
#include "contagion/rng.hpp"

namespace contagion {

inline constexpr int kNever = -1;

enum class OutsideMode { every_day, day_1_only };

struct DiseaseParams {
    double p_outside = 0.01;       // per-day outside-infection source
    double p_unvaccinated = 0.4;   // per-day source per infectious unvaccinated contact
    double p_vaccinated = 0.4;     // per-day source per infectious vaccinated contact
    double delta = 1.0;            // multiplier on all source probabilities for vaccinated susceptibles
    int incubation_days = 1;       // b: days from infection to infectious onset
    int infectious_days = 3;       // f: a case transmits on days onset..onset+f inclusive
    int followup_days = 100;       // t_f
    OutsideMode outside_mode = OutsideMode::every_day;
    // Whether delta also scales the outside source for vaccinated
    // susceptibles, or only the per-contact sources.
    bool delta_scales_outside = true;
    // Days between onset and the first day a case acts as a source. With a
    // lag of 1 a case transmits on days onset+1 .. onset+f+1; the onset and
    // removal bookkeeping in the trajectory is unchanged.
    int source_activation_lag = 0;

    int window() const { return infectious_days + incubation_days; }  // s = f + b

    void validate() const;
};

struct VaccinationAssignment {
    std::vector<std::uint8_t> vaccinated;

    bool operator[](NodeId i) const { return vaccinated[static_cast<std::size_t>(i)] != 0; }
    NodeId size() const { return static_cast<NodeId>(vaccinated.size()); }
};

// Per-node infection day and infectious-onset day for one simulated
// epidemic; kNever marks "never happened within follow-up". onset_day is
// infected_day + b when that falls inside follow-up.
struct Trajectory {
    std::vector<int> infected_day;
    std::vector<int> onset_day;

    int onset(NodeId i) const { return onset_day[static_cast<std::size_t>(i)]; }
    int infected(NodeId i) const { return infected_day[static_cast<std::size_t>(i)]; }
    bool ever_sick(NodeId i) const { return onset(i) != kNever; }
};

VaccinationAssignment assign_vaccination(NodeId node_count, double prob, Rng& rng);

// Discrete-time day loop t = 1..t_f. Each still-susceptible node faces the
// outside source plus one source per contact infectious at the start of the
// day; sources are independent, so the node is infected with probability
// 1 - prod(1 - delta^vacc * p_source). Exactly one uniform draw is consumed
// per susceptible node per day, in node-index order.
Trajectory simulate_epidemic(const Network& net, const VaccinationAssignment& vacc,
                             const DiseaseParams& params, Rng& rng);

// Same dynamics but with the outside source disabled and the given nodes
// infected on day 1. Lets tests and oracles pin the seeding exactly.
Trajectory simulate_epidemic_seeded(const Network& net, const VaccinationAssignment& vacc,
                                    const DiseaseParams& params,
                                    const std::vector<NodeId>& day1_infections, Rng& rng);

struct GroupSim {
    Network net;
    VaccinationAssignment vacc;
    Trajectory traj;
    NodeId alter = 0;
    NodeId ego = 1;
};

std::vector<int> draw_contact_counts(int num_groups, double mean_contacts, Rng& rng);

// One complete graph of 2 + n_k nodes per group; draws per group, in order:
// alter/ego coin, vaccination, epidemic.
std::vector<GroupSim> simulate_independent_groups(const std::vector<int>& contact_counts,
                                                  double vacc_prob, const DiseaseParams& params,
                                                  Rng& rng);

// CSV columns: node,vaccinated,infected_day,onset_day (empty field = never).
void save_trajectory_csv(const std::string& path, const VaccinationAssignment& vacc,
                         const Trajectory& traj);

}  // namespace contagion
