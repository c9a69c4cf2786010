#include "contagion/effects.hpp"

#include <cmath>
#include <numeric>

#include "contagion/errors.hpp"

namespace contagion {

ModelSpec ModelSpec::group_mode() {
    ModelSpec spec;
    spec.mode = AnalysisMode::group;
    spec.covariates = {"V_e", "U_a", "L_a"};
    return spec;
}

ModelSpec ModelSpec::network_mode(bool include_mutual_counts) {
    ModelSpec spec;
    spec.mode = AnalysisMode::network;
    spec.covariates = {"V_e", "U_a", "L_a", "U_e", "L_e"};
    if (include_mutual_counts) {
        spec.covariates.push_back("M_u");
        spec.covariates.push_back("M_v");
    }
    return spec;
}

double record_field(const GroupRecord& r, const std::string& name) {
    if (name == "V_a") return r.v_alter;
    if (name == "V_e") return r.v_ego;
    if (name == "T") return r.first_case_day;
    if (name == "Y_aT") return r.mediator;
    if (name == "Y_eTs") return r.outcome;
    if (name == "U_a") return r.u_alter;
    if (name == "L_a") return r.l_alter;
    if (name == "U_e") return r.u_ego;
    if (name == "L_e") return r.l_ego;
    if (name == "M_u") return r.mutual_unvacc;
    if (name == "M_v") return r.mutual_vacc;
    throw ValidationError("unknown record field: " + name);
}

namespace {

Design design_for(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                  bool mediator_positive_only, const std::string& y_field) {
    std::vector<const GroupRecord*> rows;
    rows.reserve(records.size());
    for (const auto& r : records)
        if (!mediator_positive_only || r.mediator == 1) rows.push_back(&r);

    Design d;
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index p = 2 + static_cast<Eigen::Index>(spec.covariates.size());
    d.X.resize(n, p);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const GroupRecord& r = *rows[static_cast<std::size_t>(i)];
        d.X(i, 0) = 1.0;
        d.X(i, 1) = record_field(r, "V_a");
        for (std::size_t c = 0; c < spec.covariates.size(); ++c)
            d.X(i, 2 + static_cast<Eigen::Index>(c)) = record_field(r, spec.covariates[c]);
        d.y(i) = record_field(r, y_field);
    }
    return d;
}

}  // namespace

Design mediator_design(const std::vector<GroupRecord>& records, const ModelSpec& spec) {
    return design_for(records, spec, false, "Y_aT");
}

Design outcome_design(const std::vector<GroupRecord>& records, const ModelSpec& spec) {
    Design d = design_for(records, spec, true, "Y_eTs");
    if (d.y.size() == 0) throw EmptyStratum("outcome model: no records with Y_aT=1");
    const double va_min = d.X.col(1).minCoeff();
    const double va_max = d.X.col(1).maxCoeff();
    if (va_min == va_max)
        throw EmptyStratum("outcome model: single V_a value in the Y_aT=1 stratum");
    // An all-ones arm pins the arm mean to the log link's feasibility
    // boundary mu=1, where the ratio fit and its bootstrap intervals
    // degenerate; such datasets count as empty-strata failures. An all-zeros
    // arm is different: the boundary MLE at zero risk is informative (the
    // fitted ratio collapses toward zero) and flows through.
    for (const double arm : {0.0, 1.0}) {
        bool any0 = false;
        for (Eigen::Index i = 0; i < d.y.size(); ++i) {
            if (d.X(i, 1) != arm) continue;
            if (d.y(i) < 0.5) any0 = true;
        }
        if (!any0)
            throw EmptyStratum("outcome model: all outcomes are 1 in the V_a=" +
                               std::to_string(static_cast<int>(arm)) + " arm");
    }
    return d;
}

GlmFit fit_mediator_model(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                          const GlmOptions& options) {
    const Design d = mediator_design(records, spec);
    return fit_glm(d.X, d.y, Link::logit, options);
}

GlmFit fit_outcome_model(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                         const GlmOptions& options) {
    const Design d = outcome_design(records, spec);
    return fit_glm(d.X, d.y, Link::log, options);
}

Eigen::VectorXd covariate_evaluation_point(const std::vector<GroupRecord>& records,
                                           const ModelSpec& spec, bool subset_only) {
    if (records.empty()) throw ValidationError("covariate_evaluation_point: no records");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.covariates.size()));
    long n = 0;
    for (const auto& r : records) {
        if (subset_only && r.mediator != 1) continue;
        ++n;
        for (std::size_t k = 0; k < spec.covariates.size(); ++k)
            c(static_cast<Eigen::Index>(k)) += record_field(r, spec.covariates[k]);
    }
    if (n == 0) throw EmptyStratum("covariate_evaluation_point: empty Y_aT=1 subset");
    return c / static_cast<double>(n);
}

namespace {

void require_converged(const GlmFit& fit, const char* which) {
    if (!fit.converged)
        throw NonConvergence(std::string(which) + " fit did not converge: " + fit.note);
}

// Linear predictor at treatment v and covariate vector c.
double linear_predictor(const GlmFit& fit, double v, const Eigen::VectorXd& c) {
    if (fit.coefficients.size() != c.size() + 2)
        throw ValidationError("effects: evaluation point has wrong length");
    double eta = fit.coefficients(0) + fit.coefficients(1) * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) eta += fit.coefficients(k + 2) * c(k);
    return eta;
}

double odds_ratio(double p1, double p0) { return p1 * (1.0 - p0) / (p0 * (1.0 - p1)); }

}  // namespace

ModelMeans model_means(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                       const Eigen::VectorXd& c) {
    ModelMeans m;
    m.mediator_treated = expit(linear_predictor(mediator_fit, 1.0, c));
    m.mediator_control = expit(linear_predictor(mediator_fit, 0.0, c));
    m.outcome_treated = std::exp(linear_predictor(outcome_fit, 1.0, c));
    m.outcome_control = std::exp(linear_predictor(outcome_fit, 0.0, c));
    return m;
}

double contagion_effect(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                        const Eigen::VectorXd& c, EffectScale scale) {
    require_converged(mediator_fit, "mediator");
    require_converged(outcome_fit, "outcome");
    const ModelMeans m = model_means(mediator_fit, outcome_fit, c);
    switch (scale) {
        case EffectScale::ratio:
            // Undefined when the control-arm outcome mean vanishes; defined
            // to the null value 1 in that case.
            if (m.outcome_control == 0.0) return 1.0;
            return m.mediator_treated / m.mediator_control;
        case EffectScale::difference:
            return m.outcome_control * (m.mediator_treated - m.mediator_control);
        case EffectScale::odds_ratio:
            return odds_ratio(m.mediator_treated * m.outcome_control,
                              m.mediator_control * m.outcome_control);
    }
    throw ValidationError("contagion_effect: bad scale");
}

double infectiousness_effect(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                             const Eigen::VectorXd& c, EffectScale scale) {
    require_converged(mediator_fit, "mediator");
    require_converged(outcome_fit, "outcome");
    const ModelMeans m = model_means(mediator_fit, outcome_fit, c);
    switch (scale) {
        case EffectScale::ratio:
            // Covariates cancel under the log link, so the ratio is
            // exp(gamma1) exactly, independent of the evaluation point.
            return std::exp(outcome_fit.coefficients(1));
        case EffectScale::difference:
            return m.mediator_treated * (m.outcome_treated - m.outcome_control);
        case EffectScale::odds_ratio:
            return odds_ratio(m.mediator_treated * m.outcome_treated,
                              m.mediator_treated * m.outcome_control);
    }
    throw ValidationError("infectiousness_effect: bad scale");
}

double indirect_effect(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                       const Eigen::VectorXd& c, EffectScale scale) {
    require_converged(mediator_fit, "mediator");
    require_converged(outcome_fit, "outcome");
    const ModelMeans m = model_means(mediator_fit, outcome_fit, c);
    const double treated = m.mediator_treated * m.outcome_treated;
    const double control = m.mediator_control * m.outcome_control;
    switch (scale) {
        case EffectScale::ratio:
            if (control == 0.0) return 1.0;
            return treated / control;
        case EffectScale::difference:
            return treated - control;
        case EffectScale::odds_ratio:
            return odds_ratio(treated, control);
    }
    throw ValidationError("indirect_effect: bad scale");
}

EffectEstimate estimate_effects(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                                const Eigen::VectorXd& c, EffectScale scale) {
    EffectEstimate e;
    e.scale = scale;
    e.contagion = contagion_effect(mediator_fit, outcome_fit, c, scale);
    e.infectiousness = infectiousness_effect(mediator_fit, outcome_fit, c, scale);
    e.indirect = indirect_effect(mediator_fit, outcome_fit, c, scale);
    e.eval_point = c;
    return e;
}

PairProductStat pair_product_statistic(const Eigen::VectorXd& res, Rng& rng) {
    PairProductStat stat;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(res.size()));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const long n_pairs = static_cast<long>(order.size() / 2);
    if (n_pairs == 0) return stat;
    double sum = 0.0, sum_sq = 0.0;
    for (long k = 0; k < n_pairs; ++k) {
        const double prod = res(order[static_cast<std::size_t>(2 * k)]) *
                            res(order[static_cast<std::size_t>(2 * k + 1)]);
        sum += prod;
        sum_sq += prod * prod;
    }
    stat.n_pairs = n_pairs;
    stat.mean = sum / static_cast<double>(n_pairs);
    if (n_pairs > 1) {
        const double var =
            (sum_sq - sum * sum / static_cast<double>(n_pairs)) / static_cast<double>(n_pairs - 1);
        stat.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_pairs));
    }
    return stat;
}

ResidualCrossCorrelation residual_cross_correlation(const std::vector<GroupRecord>& records,
                                                    const ModelSpec& spec,
                                                    const GlmFit& mediator_fit,
                                                    const GlmFit& outcome_fit, Rng& rng) {
    require_converged(mediator_fit, "mediator");
    require_converged(outcome_fit, "outcome");
    const Design md = mediator_design(records, spec);
    const Design od = outcome_design(records, spec);
    const Eigen::VectorXd med_res = residuals(mediator_fit, md.X, md.y);
    const Eigen::VectorXd out_res = residuals(outcome_fit, od.X, od.y);

    ResidualCrossCorrelation rc;
    const PairProductStat ms = pair_product_statistic(med_res, rng);
    rc.mediator_mean = ms.mean;
    rc.mediator_se = ms.se;
    rc.mediator_pairs = ms.n_pairs;
    const PairProductStat os = pair_product_statistic(out_res, rng);
    rc.outcome_mean = os.mean;
    rc.outcome_se = os.se;
    rc.outcome_pairs = os.n_pairs;
    return rc;
}

std::string scale_name(EffectScale scale) {
    switch (scale) {
        case EffectScale::difference: return "difference";
        case EffectScale::ratio: return "ratio";
        case EffectScale::odds_ratio: return "odds-ratio";
    }
    return "?";
}

}  // namespace contagion
