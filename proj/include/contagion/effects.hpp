#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "contagion/glm.hpp"
#include "contagion/records.hpp"
#include "contagion/rng.hpp"

namespace contagion {

enum class AnalysisMode { group, network };

// Shared covariate list for the mediator and outcome models. The treatment
// V_a is always present; the design is intercept | V_a | covariates.
struct ModelSpec {
    AnalysisMode mode = AnalysisMode::group;
    std::vector<std::string> covariates;
    // Evaluate effects at covariate means over the Y_aT=1 stratum rather
    // than over all records.
    bool eval_at_stratum_means = true;

    // V_e plus the alter-side mutual-contact sums.
    static ModelSpec group_mode();
    // Adds the ego-side window counts; mutual-contact counts are optional.
    static ModelSpec network_mode(bool include_mutual_counts = false);
};

double record_field(const GroupRecord& record, const std::string& name);

struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

// All records; y = Y_aT.
Design mediator_design(const std::vector<GroupRecord>& records, const ModelSpec& spec);
// Y_aT = 1 subset only; y = Y_eTs. Throws EmptyStratum when the subset is
// empty or has a single V_a value.
Design outcome_design(const std::vector<GroupRecord>& records, const ModelSpec& spec);

// logit{E[Y_aT | V_a, C]} over all records.
GlmFit fit_mediator_model(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                          const GlmOptions& options = {});
// log{E[Y_eTs | V_a, C]} over the Y_aT = 1 stratum.
GlmFit fit_outcome_model(const std::vector<GroupRecord>& records, const ModelSpec& spec,
                         const GlmOptions& options = {});

// Componentwise covariate means; over all records by default, over the
// Y_aT = 1 subset when subset_only is set.
Eigen::VectorXd covariate_evaluation_point(const std::vector<GroupRecord>& records,
                                           const ModelSpec& spec, bool subset_only = false);

enum class EffectScale { difference, ratio, odds_ratio };

struct EffectEstimate {
    EffectScale scale = EffectScale::ratio;
    double contagion = 0.0;
    double infectiousness = 0.0;
    double indirect = 0.0;
    Eigen::VectorXd eval_point;
};

// Model-implied means at the evaluation point: mediator means under
// treatment/control and stratum outcome means under treatment/control.
struct ModelMeans {
    double mediator_treated = 0.0;    // expit(eta0 + eta1 + eta2'c)
    double mediator_control = 0.0;    // expit(eta0 + eta2'c)
    double outcome_treated = 0.0;     // exp(gamma0 + gamma1 + gamma2'c)
    double outcome_control = 0.0;     // exp(gamma0 + gamma2'c)
};

ModelMeans model_means(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                       const Eigen::VectorXd& eval_point);

double contagion_effect(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                        const Eigen::VectorXd& eval_point, EffectScale scale);
double infectiousness_effect(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                             const Eigen::VectorXd& eval_point, EffectScale scale);
double indirect_effect(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                       const Eigen::VectorXd& eval_point, EffectScale scale);

EffectEstimate estimate_effects(const GlmFit& mediator_fit, const GlmFit& outcome_fit,
                                const Eigen::VectorXd& eval_point, EffectScale scale);

// Average product of response residuals over randomly matched disjoint
// record pairs, with its Monte Carlo standard error; computed separately for
// the mediator model (all records) and the outcome model (mediator-positive
// stratum).
struct ResidualCrossCorrelation {
    double mediator_mean = 0.0;
    double mediator_se = 0.0;
    long mediator_pairs = 0;
    double outcome_mean = 0.0;
    double outcome_se = 0.0;
    long outcome_pairs = 0;
};

ResidualCrossCorrelation residual_cross_correlation(const std::vector<GroupRecord>& records,
                                                    const ModelSpec& spec,
                                                    const GlmFit& mediator_fit,
                                                    const GlmFit& outcome_fit, Rng& rng);

// Mean and Monte Carlo SE of products over consecutive disjoint pairs of a
// shuffled residual vector; the building block behind the diagnostic.
struct PairProductStat {
    double mean = 0.0;
    double se = 0.0;
    long n_pairs = 0;
};

PairProductStat pair_product_statistic(const Eigen::VectorXd& residuals, Rng& rng);

std::string scale_name(EffectScale scale);

}  // namespace contagion
