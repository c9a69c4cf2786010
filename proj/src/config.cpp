#include "contagion/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "contagion/errors.hpp"

namespace contagion {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const double d = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw ValidationError(where + ": expected a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where + ": expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& value, const std::string& where) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ValidationError(where + ": expected true/false, got '" + value + "'");
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& source_name) {
    ScenarioConfig config;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = source_name + ":" + std::to_string(line_no);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError(where + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError(where + ": expected key=value");

        if (key == "label") {
            config.label = value;
        } else if (key == "mode") {
            if (value == "group") config.mode = AnalysisMode::group;
            else if (value == "network") config.mode = AnalysisMode::network;
            else throw ValidationError(where + ": mode must be group or network");
        } else if (key == "hypothesis") {
            if (value == "null") config.hypothesis = Hypothesis::null_effects;
            else if (value == "alternative") config.hypothesis = Hypothesis::alternative;
            else throw ValidationError(where + ": hypothesis must be null or alternative");
        } else if (key == "num_groups") {
            config.num_groups = static_cast<int>(parse_int(value, where));
        } else if (key == "contact_mean") {
            config.contact_mean = parse_double(value, where);
        } else if (key == "family_groups") {
            config.family_groups = static_cast<int>(parse_int(value, where));
        } else if (key == "family_size") {
            config.family_size = static_cast<int>(parse_int(value, where));
        } else if (key == "out_tie_prob") {
            config.out_tie_prob = value == "auto" ? kAutoOutTieProb : parse_double(value, where);
        } else if (key == "extraction") {
            if (value == "distance4") config.extraction = ExtractionRule::distance4;
            else if (value == "zone-disjoint") config.extraction = ExtractionRule::zone_disjoint;
            else throw ValidationError(where + ": extraction must be distance4 or zone-disjoint");
        } else if (key == "include_partner_in_summaries") {
            config.include_partner_in_summaries = parse_bool(value, where);
        } else if (key == "include_mutual_counts") {
            config.include_mutual_counts = parse_bool(value, where);
        } else if (key == "vacc_prob") {
            config.vacc_prob = parse_double(value, where);
        } else if (key == "p_outside") {
            config.disease.p_outside = parse_double(value, where);
        } else if (key == "p_unvaccinated") {
            config.disease.p_unvaccinated = parse_double(value, where);
        } else if (key == "p_vaccinated") {
            config.disease.p_vaccinated = parse_double(value, where);
        } else if (key == "delta") {
            config.disease.delta = parse_double(value, where);
        } else if (key == "incubation_days") {
            config.disease.incubation_days = static_cast<int>(parse_int(value, where));
        } else if (key == "infectious_days") {
            config.disease.infectious_days = static_cast<int>(parse_int(value, where));
        } else if (key == "followup_days") {
            config.disease.followup_days = static_cast<int>(parse_int(value, where));
        } else if (key == "source_activation_lag") {
            config.disease.source_activation_lag = static_cast<int>(parse_int(value, where));
        } else if (key == "outside_mode") {
            if (value == "every-day") config.disease.outside_mode = OutsideMode::every_day;
            else if (value == "day-1-only") config.disease.outside_mode = OutsideMode::day_1_only;
            else throw ValidationError(where + ": outside_mode must be every-day or day-1-only");
        } else if (key == "n_sims") {
            config.n_sims = static_cast<int>(parse_int(value, where));
        } else if (key == "n_bootstrap") {
            config.n_bootstrap = static_cast<int>(parse_int(value, where));
        } else if (key == "ci_method") {
            if (value == "percentile") config.ci_method = CiMethod::percentile;
            else if (value == "basic") config.ci_method = CiMethod::basic;
            else throw ValidationError(where + ": ci_method must be percentile or basic");
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(parse_int(value, where));
        } else {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
    try {
        config.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(source_name + ": " + e.what());
    }
    return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_config(buffer.str(), path);
}

std::string scenario_config_to_text(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "label = " << c.label << "\n";
    out << "mode = " << (c.mode == AnalysisMode::group ? "group" : "network") << "\n";
    out << "hypothesis = "
        << (c.hypothesis == Hypothesis::null_effects ? "null" : "alternative") << "\n";
    if (c.mode == AnalysisMode::group) {
        out << "num_groups = " << c.num_groups << "\n";
        out << "contact_mean = " << c.contact_mean << "\n";
    } else {
        out << "family_groups = " << c.family_groups << "\n";
        out << "family_size = " << c.family_size << "\n";
        if (c.out_tie_prob == kAutoOutTieProb) out << "out_tie_prob = auto\n";
        else out << "out_tie_prob = " << c.out_tie_prob << "\n";
        out << "extraction = "
            << (c.extraction == ExtractionRule::distance4 ? "distance4" : "zone-disjoint") << "\n";
        out << "include_mutual_counts = " << (c.include_mutual_counts ? "true" : "false") << "\n";
    }
    out << "include_partner_in_summaries = "
        << (c.include_partner_in_summaries ? "true" : "false") << "\n";
    out << "vacc_prob = " << c.vacc_prob << "\n";
    out << "p_outside = " << c.disease.p_outside << "\n";
    out << "p_unvaccinated = " << c.disease.p_unvaccinated << "\n";
    out << "p_vaccinated = " << c.disease.p_vaccinated << "\n";
    out << "delta = " << c.disease.delta << "\n";
    out << "incubation_days = " << c.disease.incubation_days << "\n";
    out << "infectious_days = " << c.disease.infectious_days << "\n";
    out << "followup_days = " << c.disease.followup_days << "\n";
    out << "source_activation_lag = " << c.disease.source_activation_lag << "\n";
    out << "outside_mode = "
        << (c.disease.outside_mode == OutsideMode::every_day ? "every-day" : "day-1-only") << "\n";
    out << "n_sims = " << c.n_sims << "\n";
    out << "n_bootstrap = " << c.n_bootstrap << "\n";
    out << "ci_method = " << (c.ci_method == CiMethod::percentile ? "percentile" : "basic") << "\n";
    out << "seed = " << c.seed << "\n";
    return out.str();
}

namespace {

int scaled(int n, double scale) {
    return std::max(1, static_cast<int>(std::lround(static_cast<double>(n) * scale)));
}

std::uint64_t cell_seed(std::uint64_t base, std::uint64_t index) {
    return Rng::substream(base, "cell", index).next_raw();
}

}  // namespace

std::vector<ScenarioConfig> table1_scenarios(double scale, std::uint64_t seed) {
    if (!(scale > 0.0 && scale <= 1.0)) throw ValidationError("scale must be in (0,1]");
    std::vector<ScenarioConfig> out;
    std::uint64_t idx = 0;
    for (const bool alternative : {false, true}) {
        for (const int k : {200, 500, 1000}) {
            ScenarioConfig c;
            c.mode = AnalysisMode::group;
            c.hypothesis = alternative ? Hypothesis::alternative : Hypothesis::null_effects;
            c.label = std::string("groups-") + (alternative ? "alternative" : "null");
            c.num_groups = k;
            c.contact_mean = 3.0;
            c.vacc_prob = 0.4;
            c.disease.p_outside = 0.01;
            c.disease.outside_mode = OutsideMode::every_day;
            if (alternative) {
                c.disease.delta = 0.1;
                c.disease.p_unvaccinated = 0.5;
                c.disease.p_vaccinated = 0.05;
            } else {
                c.disease.delta = 1.0;
                c.disease.p_unvaccinated = 0.4;
                c.disease.p_vaccinated = 0.4;
            }
            c.n_sims = scaled(500, scale);
            c.n_bootstrap = scaled(500, scale);
            c.seed = cell_seed(seed, idx++);
            out.push_back(c);
        }
    }
    return out;
}

std::vector<ScenarioConfig> table2_scenarios(double scale, std::uint64_t seed) {
    if (!(scale > 0.0 && scale <= 1.0)) throw ValidationError("scale must be in (0,1]");
    std::vector<ScenarioConfig> out;
    std::uint64_t idx = 0;
    for (const bool alternative : {false, true}) {
        for (const int groups : {1600, 2000, 2400}) {
            ScenarioConfig c;
            c.mode = AnalysisMode::network;
            c.hypothesis = alternative ? Hypothesis::alternative : Hypothesis::null_effects;
            c.label = std::string("network-") + (alternative ? "alternative" : "null");
            c.family_groups = groups;
            c.family_size = 5;
            c.out_tie_prob = kAutoOutTieProb;
            c.vacc_prob = 0.5;
            c.disease.p_outside = 0.01;
            c.disease.outside_mode = OutsideMode::day_1_only;
            if (alternative) {
                c.disease.delta = 0.2;
                c.disease.p_unvaccinated = 0.5;
                c.disease.p_vaccinated = 0.01;
            } else {
                c.disease.delta = 1.0;
                c.disease.p_unvaccinated = 0.5;
                c.disease.p_vaccinated = 0.5;
            }
            c.n_sims = scaled(200, scale);
            c.n_bootstrap = scaled(200, scale);
            c.seed = cell_seed(seed, idx++);
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace contagion
