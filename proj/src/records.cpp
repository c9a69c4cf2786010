#include "contagion/records.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "contagion/errors.hpp"

namespace contagion {

int first_infection_time(const Trajectory& traj, NodeId alter, NodeId ego, int followup_days) {
    int t = followup_days;
    for (NodeId i : {alter, ego}) {
        const int onset = traj.onset(i);
        if (onset != kNever && onset <= followup_days) t = std::min(t, onset);
    }
    return t;
}

int mediator(const Trajectory& traj, NodeId alter, NodeId ego, int first_case_day) {
    const int alter_onset = traj.onset(alter);
    if (alter_onset == kNever || alter_onset != first_case_day) return 0;
    const int ego_onset = traj.onset(ego);
    if (ego_onset != kNever && ego_onset <= first_case_day) return 0;  // simultaneous or earlier
    // "Healthy" means disease-free: an ego already incubating at T could not
    // have been infected by the alter, so the pair is not a mediator case.
    const int ego_infected = traj.infected(ego);
    return (ego_infected == kNever || ego_infected > first_case_day) ? 1 : 0;
}

int outcome(const Trajectory& traj, NodeId ego, int first_case_day, int incubation_days,
            int infectious_days) {
    const int ego_onset = traj.onset(ego);
    if (ego_onset == kNever) return 0;
    const int lo = first_case_day + incubation_days;
    const int hi = first_case_day + incubation_days + infectious_days;  // T + s
    return (ego_onset >= lo && ego_onset <= hi) ? 1 : 0;
}

namespace {

// "Sick by day d" means infectious onset on or before d.
bool sick_by(const Trajectory& traj, NodeId i, int day) {
    const int onset = traj.onset(i);
    return onset != kNever && onset <= day;
}

}  // namespace

ContactSummary contact_summaries(const Network& net, const Trajectory& traj,
                                 const VaccinationAssignment& vacc, const AlterEgoPair& pair,
                                 int first_case_day, int incubation_days, int infectious_days,
                                 const SummaryOptions& options) {
    ContactSummary s;
    const int alter_cutoff = first_case_day - incubation_days;  // T - b
    const int ego_cutoff = first_case_day + infectious_days;    // T + f
    const auto& alter_contacts = net.contacts(pair.alter);
    const auto& ego_contacts = net.contacts(pair.ego);

    for (NodeId c : alter_contacts) {
        if (options.exclude_partner && c == pair.ego) continue;
        if (!sick_by(traj, c, alter_cutoff)) continue;
        (vacc[c] ? s.l_alter : s.u_alter) += 1;
    }
    for (NodeId c : ego_contacts) {
        if (options.exclude_partner && c == pair.alter) continue;
        if (!sick_by(traj, c, ego_cutoff)) continue;
        (vacc[c] ? s.l_ego : s.u_ego) += 1;
    }
    // Mutual contacts: intersection of the two sorted contact lists.
    auto a = alter_contacts.begin();
    auto e = ego_contacts.begin();
    while (a != alter_contacts.end() && e != ego_contacts.end()) {
        if (*a < *e) {
            ++a;
        } else if (*e < *a) {
            ++e;
        } else {
            const NodeId c = *a;
            ++a;
            ++e;
            if (c == pair.alter || c == pair.ego) continue;
            if (!sick_by(traj, c, alter_cutoff)) continue;
            (vacc[c] ? s.mutual_vacc : s.mutual_unvacc) += 1;
        }
    }
    return s;
}

namespace {

GroupRecord build_one(const Network& net, const Trajectory& traj,
                      const VaccinationAssignment& vacc, const AlterEgoPair& pair,
                      const DiseaseParams& params, const SummaryOptions& options) {
    GroupRecord r;
    r.pair_id = pair.pair_id;
    r.v_alter = vacc[pair.alter] ? 1 : 0;
    r.v_ego = vacc[pair.ego] ? 1 : 0;
    r.first_case_day = first_infection_time(traj, pair.alter, pair.ego, params.followup_days);
    r.mediator = mediator(traj, pair.alter, pair.ego, r.first_case_day);
    r.outcome = r.mediator == 0 ? 0
                                : outcome(traj, pair.ego, r.first_case_day, params.incubation_days,
                                          params.infectious_days);
    const ContactSummary s = contact_summaries(net, traj, vacc, pair, r.first_case_day,
                                               params.incubation_days, params.infectious_days,
                                               options);
    r.u_alter = s.u_alter;
    r.l_alter = s.l_alter;
    r.u_ego = s.u_ego;
    r.l_ego = s.l_ego;
    r.mutual_unvacc = s.mutual_unvacc;
    r.mutual_vacc = s.mutual_vacc;
    return r;
}

}  // namespace

std::vector<GroupRecord> build_records(const Network& net, const Trajectory& traj,
                                       const VaccinationAssignment& vacc,
                                       const std::vector<AlterEgoPair>& pairs,
                                       const DiseaseParams& params,
                                       const SummaryOptions& options) {
    std::vector<GroupRecord> out;
    out.reserve(pairs.size());
    for (const auto& pair : pairs) out.push_back(build_one(net, traj, vacc, pair, params, options));
    return out;
}

std::vector<GroupRecord> build_group_records(const std::vector<GroupSim>& groups,
                                             const DiseaseParams& params,
                                             const SummaryOptions& options) {
    std::vector<GroupRecord> out;
    out.reserve(groups.size());
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const GroupSim& g = groups[k];
        AlterEgoPair pair{g.alter, g.ego, static_cast<int>(k)};
        out.push_back(build_one(g.net, g.traj, g.vacc, pair, params, options));
    }
    return out;
}

void save_records_csv(const std::string& path, const std::vector<GroupRecord>& records) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write records: " + path);
    out << "pair_id,V_a,V_e,T,Y_aT,Y_eTs,U_a,L_a,U_e,L_e,M_u,M_v\n";
    for (const auto& r : records) {
        out << r.pair_id << "," << r.v_alter << "," << r.v_ego << "," << r.first_case_day << ","
            << r.mediator << "," << r.outcome << "," << r.u_alter << "," << r.l_alter << ","
            << r.u_ego << "," << r.l_ego << "," << r.mutual_unvacc << "," << r.mutual_vacc << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<GroupRecord> load_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open records: " + path);
    std::string line;
    long line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": " + what);
    };
    if (!std::getline(in, line)) throw ValidationError(path + ": empty records file");
    ++line_no;
    if (line.ends_with("\r")) line.pop_back();
    if (line != "pair_id,V_a,V_e,T,Y_aT,Y_eTs,U_a,L_a,U_e,L_e,M_u,M_v") fail("unexpected header");

    std::vector<GroupRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.ends_with("\r")) line.pop_back();
        if (line.empty()) continue;
        std::array<long, 12> v{};
        std::size_t pos = 0;
        for (int f = 0; f < 12; ++f) {
            std::size_t next = line.find(',', pos);
            if (f < 11 && next == std::string::npos) fail("expected 12 fields");
            if (f == 11 && next != std::string::npos) fail("too many fields");
            const std::string cell = line.substr(pos, next == std::string::npos ? next : next - pos);
            try {
                std::size_t used = 0;
                v[static_cast<std::size_t>(f)] = std::stol(cell, &used);
                if (used != cell.size()) fail("bad integer field '" + cell + "'");
            } catch (const std::exception&) {
                fail("bad integer field '" + cell + "'");
            }
            pos = next + 1;
        }
        GroupRecord r;
        r.pair_id = static_cast<int>(v[0]);
        r.v_alter = static_cast<int>(v[1]);
        r.v_ego = static_cast<int>(v[2]);
        r.first_case_day = static_cast<int>(v[3]);
        r.mediator = static_cast<int>(v[4]);
        r.outcome = static_cast<int>(v[5]);
        r.u_alter = static_cast<int>(v[6]);
        r.l_alter = static_cast<int>(v[7]);
        r.u_ego = static_cast<int>(v[8]);
        r.l_ego = static_cast<int>(v[9]);
        r.mutual_unvacc = static_cast<int>(v[10]);
        r.mutual_vacc = static_cast<int>(v[11]);
        if ((r.v_alter & ~1) || (r.v_ego & ~1) || (r.mediator & ~1) || (r.outcome & ~1))
            fail("indicator field outside {0,1}");
        if (r.outcome == 1 && r.mediator == 0) fail("Y_eTs=1 with Y_aT=0 violates the restriction");
        records.push_back(r);
    }
    return records;
}

}  // namespace contagion
