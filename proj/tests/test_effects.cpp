#include <doctest.h>

#include <cmath>

#include "contagion/effects.hpp"
#include "contagion/errors.hpp"

using namespace contagion;

namespace {

GlmFit make_fit(Link link, std::vector<double> coeffs) {
    GlmFit fit;
    fit.link = link;
    fit.converged = true;
    fit.coefficients = Eigen::Map<Eigen::VectorXd>(coeffs.data(),
                                                   static_cast<Eigen::Index>(coeffs.size()));
    return fit;
}

// Records with exact stratum counts for a saturated V_a x Y_aT / outcome
// layout. counts[v] = {n, mediator_events, outcome_events_within_mediator}.
std::vector<GroupRecord> two_arm_records(int n0, int med0, int out0, int n1, int med1, int out1) {
    std::vector<GroupRecord> records;
    int id = 0;
    auto add = [&](int v, int n, int med, int out) {
        for (int i = 0; i < n; ++i) {
            GroupRecord r;
            r.pair_id = id++;
            r.v_alter = v;
            r.first_case_day = 10;
            r.mediator = i < med ? 1 : 0;
            r.outcome = (i < med && i < out) ? 1 : 0;
            records.push_back(r);
        }
    };
    add(0, n0, med0, out0);
    add(1, n1, med1, out1);
    return records;
}

const ModelSpec kNoCovariates{AnalysisMode::group, {}};

}  // namespace

TEST_CASE("model specs carry the documented covariate lists") {
    CHECK(ModelSpec::group_mode().covariates == std::vector<std::string>{"V_e", "U_a", "L_a"});
    CHECK(ModelSpec::network_mode().covariates ==
          std::vector<std::string>{"V_e", "U_a", "L_a", "U_e", "L_e"});
    CHECK(ModelSpec::network_mode(true).covariates ==
          std::vector<std::string>{"V_e", "U_a", "L_a", "U_e", "L_e", "M_u", "M_v"});
    GroupRecord r;
    r.mutual_vacc = 7;
    CHECK(record_field(r, "M_v") == 7.0);
    CHECK_THROWS_AS(record_field(r, "nope"), ValidationError);
}

TEST_CASE("mediator model: hand 2x2 gives the log odds ratio") {
    const auto records = two_arm_records(100, 30, 0, 100, 60, 0);
    const GlmFit fit = fit_mediator_model(records, kNoCovariates);
    REQUIRE(fit.converged);
    CHECK(fit.coefficients(1) == doctest::Approx(std::log(3.5)).epsilon(1e-6));
}

TEST_CASE("mediator model: null association gives a zero coefficient") {
    const auto records = two_arm_records(80, 32, 0, 80, 32, 0);
    const GlmFit fit = fit_mediator_model(records, kNoCovariates);
    REQUIRE(fit.converged);
    CHECK(std::abs(fit.coefficients(1)) < 1e-6);
}

TEST_CASE("mediator model: all-zero mediators fail to converge") {
    const auto records = two_arm_records(40, 0, 0, 40, 0, 0);
    const GlmFit fit = fit_mediator_model(records, kNoCovariates);
    CHECK_FALSE(fit.converged);
}

TEST_CASE("outcome model: saturated log-link closed form") {
    // Risks 0.5 (V_a=0) and 0.2 (V_a=1) within the mediator-positive subset.
    const auto records = two_arm_records(60, 20, 10, 60, 20, 4);
    const GlmFit fit = fit_outcome_model(records, kNoCovariates);
    REQUIRE(fit.converged);
    CHECK(fit.coefficients(0) == doctest::Approx(std::log(0.5)).epsilon(1e-6));
    CHECK(fit.coefficients(1) == doctest::Approx(std::log(0.4)).epsilon(1e-6));
}

TEST_CASE("outcome model: empty or degenerate strata throw") {
    CHECK_THROWS_AS(fit_outcome_model(two_arm_records(40, 0, 0, 40, 0, 0), kNoCovariates),
                    EmptyStratum);
    // Mediator-positive rows exist only in one arm.
    CHECK_THROWS_AS(fit_outcome_model(two_arm_records(40, 10, 5, 40, 0, 0), kNoCovariates),
                    EmptyStratum);
    // All-ones arm: the empty-strata failure mode.
    CHECK_THROWS_AS(fit_outcome_model(two_arm_records(60, 20, 10, 60, 20, 20), kNoCovariates),
                    EmptyStratum);
    // All-zeros arm: a boundary MLE at zero risk; the ratio collapses to ~0.
    const GlmFit zero_arm = fit_outcome_model(two_arm_records(60, 20, 10, 60, 20, 0),
                                              kNoCovariates);
    CHECK(zero_arm.converged);
    CHECK(zero_arm.coefficients(1) < -10.0);
}

TEST_CASE("evaluation point: componentwise means") {
    std::vector<GroupRecord> records(2);
    records[0].u_alter = 0;
    records[1].u_alter = 2;
    records[0].v_ego = 1;
    records[1].v_ego = 1;
    records[0].mediator = 1;
    const ModelSpec spec{AnalysisMode::group, {"V_e", "U_a"}};
    const Eigen::VectorXd c = covariate_evaluation_point(records, spec);
    CHECK(c(0) == doctest::Approx(1.0));
    CHECK(c(1) == doctest::Approx(1.0));
    // Subset mean uses only the mediator-positive record.
    const Eigen::VectorXd cs = covariate_evaluation_point(records, spec, true);
    CHECK(cs(1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(covariate_evaluation_point({}, spec), ValidationError);
}

TEST_CASE("contagion effect closed forms") {
    // eta0 + eta2'c = 0 and eta1 = ln 2: ratio expit(ln2)/expit(0) = 4/3.
    const GlmFit med = make_fit(Link::logit, {0.0, std::log(2.0)});
    const GlmFit out = make_fit(Link::log, {std::log(0.3), std::log(0.7)});
    const Eigen::VectorXd c(0);
    CHECK(contagion_effect(med, out, c, EffectScale::ratio) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    // eta1 = 0: null on every scale.
    const GlmFit med_null = make_fit(Link::logit, {0.4, 0.0});
    CHECK(contagion_effect(med_null, out, c, EffectScale::ratio) == doctest::Approx(1.0));
    CHECK(contagion_effect(med_null, out, c, EffectScale::difference) ==
          doctest::Approx(0.0));
    CHECK(contagion_effect(med_null, out, c, EffectScale::odds_ratio) == doctest::Approx(1.0));
}

TEST_CASE("contagion ratio equals the alternate closed form at random parameters") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const double eta0 = 2.0 * rng.uniform() - 1.0;
        const double eta1 = 2.0 * rng.uniform() - 1.0;
        const double eta2 = rng.uniform() - 0.5;
        const double cval = 3.0 * rng.uniform();
        const GlmFit med = make_fit(Link::logit, {eta0, eta1, eta2});
        const GlmFit out = make_fit(Link::log, {-1.0, -0.5, 0.0});
        Eigen::VectorXd c(1);
        c << cval;
        const double via_expits = contagion_effect(med, out, c, EffectScale::ratio);
        // (e^{eta1} + e^{eta0+eta1+eta2'c}) / (1 + e^{eta0+eta1+eta2'c})
        const double t = std::exp(eta0 + eta1 + eta2 * cval);
        const double closed = (std::exp(eta1) + t) / (1.0 + t);
        CHECK(std::abs(via_expits - closed) <= 1e-12 * std::abs(closed));
    }
}

TEST_CASE("infectiousness effect: exp(gamma1), exactly invariant to c") {
    const GlmFit med = make_fit(Link::logit, {0.3, 0.2, 0.1});
    const GlmFit out = make_fit(Link::log, {-2.0, std::log(0.4), -0.3});
    Eigen::VectorXd c1(1), c2(1);
    c1 << 0.0;
    c2 << 7.5;
    const double r1 = infectiousness_effect(med, out, c1, EffectScale::ratio);
    const double r2 = infectiousness_effect(med, out, c2, EffectScale::ratio);
    CHECK(r1 == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r1 == r2);  // exact

    const GlmFit out_null = make_fit(Link::log, {-2.0, 0.0, -0.3});
    CHECK(infectiousness_effect(med, out_null, c1, EffectScale::ratio) == doctest::Approx(1.0));
    CHECK(infectiousness_effect(med, out_null, c1, EffectScale::difference) ==
          doctest::Approx(0.0));
}

TEST_CASE("difference-scale effects match direct mean products") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const double eta0 = rng.uniform() - 0.5, eta1 = rng.uniform() - 0.5,
                     eta2 = 0.3 * rng.uniform();
        const double g0 = -2.0 - rng.uniform(), g1 = rng.uniform() - 0.5,
                     g2 = 0.1 * rng.uniform();
        const double cv = 2.0 * rng.uniform();
        const GlmFit med = make_fit(Link::logit, {eta0, eta1, eta2});
        const GlmFit out = make_fit(Link::log, {g0, g1, g2});
        Eigen::VectorXd c(1);
        c << cv;
        // Direct evaluation of the mean contrasts.
        const double m1 = expit(eta0 + eta1 + eta2 * cv);
        const double m0 = expit(eta0 + eta2 * cv);
        const double r1 = std::exp(g0 + g1 + g2 * cv);
        const double r0 = std::exp(g0 + g2 * cv);
        CHECK(contagion_effect(med, out, c, EffectScale::difference) ==
              doctest::Approx(r0 * (m1 - m0)).epsilon(1e-12));
        CHECK(infectiousness_effect(med, out, c, EffectScale::difference) ==
              doctest::Approx(m1 * (r1 - r0)).epsilon(1e-12));
    }
}

TEST_CASE("decomposition identities on both scales") {
    Rng rng(17);
    const Eigen::VectorXd empty(0);
    // Trivial composition: con 4/3 times inf 0.4 = 8/15.
    const GlmFit med = make_fit(Link::logit, {0.0, std::log(2.0)});
    const GlmFit out = make_fit(Link::log, {std::log(0.5), std::log(0.4)});
    CHECK(indirect_effect(med, out, empty, EffectScale::ratio) ==
          doctest::Approx(8.0 / 15.0).epsilon(1e-12));

    for (int trial = 0; trial < 300; ++trial) {
        const GlmFit m = make_fit(
            Link::logit, {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, rng.uniform()});
        const GlmFit o = make_fit(
            Link::log, {-2.5 + rng.uniform(), rng.uniform() - 0.5, 0.2 * rng.uniform()});
        Eigen::VectorXd c(1);
        c << 2.0 * rng.uniform();
        const double con_r = contagion_effect(m, o, c, EffectScale::ratio);
        const double inf_r = infectiousness_effect(m, o, c, EffectScale::ratio);
        const double ind_r = indirect_effect(m, o, c, EffectScale::ratio);
        CHECK(std::abs(ind_r - con_r * inf_r) <= 1e-10 * std::abs(ind_r));
        CHECK(con_r > 0.0);
        CHECK(inf_r > 0.0);

        const double con_d = contagion_effect(m, o, c, EffectScale::difference);
        const double inf_d = infectiousness_effect(m, o, c, EffectScale::difference);
        const double ind_d = indirect_effect(m, o, c, EffectScale::difference);
        CHECK(std::abs(ind_d - (con_d + inf_d)) <= 1e-10);

        const double con_or = contagion_effect(m, o, c, EffectScale::odds_ratio);
        const double inf_or = infectiousness_effect(m, o, c, EffectScale::odds_ratio);
        const double ind_or = indirect_effect(m, o, c, EffectScale::odds_ratio);
        CHECK(ind_or == doctest::Approx(con_or * inf_or).epsilon(1e-10));
    }
}

TEST_CASE("effects require converged fits") {
    GlmFit bad = make_fit(Link::logit, {0.0, 0.0});
    bad.converged = false;
    const GlmFit out = make_fit(Link::log, {-1.0, 0.0});
    const Eigen::VectorXd c(0);
    CHECK_THROWS_AS(contagion_effect(bad, out, c, EffectScale::ratio), NonConvergence);
    CHECK_THROWS_AS(infectiousness_effect(out, bad, c, EffectScale::ratio), NonConvergence);
}

TEST_CASE("pair product statistic: zero, independent, correlated residuals") {
    Rng match_rng(23);

    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(300);
    const PairProductStat z = pair_product_statistic(zeros, match_rng);
    CHECK(z.mean == 0.0);
    CHECK(z.n_pairs == 150);

    // Independent symmetric residuals: mean within 4 SEs of zero.
    Rng gen(29);
    Eigen::VectorXd indep(2000);
    for (Eigen::Index i = 0; i < indep.size(); ++i) indep(i) = gen.bernoulli(0.5) ? 0.5 : -0.5;
    const PairProductStat s = pair_product_statistic(indep, match_rng);
    CHECK(std::abs(s.mean) < 4.0 * s.se);

    // Shared-shock residuals: every entry leans toward one common shock, so
    // matched products skew positive far beyond the Monte Carlo noise.
    Eigen::VectorXd global(2000);
    const double shock = 0.45;
    for (Eigen::Index i = 0; i < global.size(); ++i)
        global(i) = gen.bernoulli(0.85) ? shock : -shock;
    double zstat = 0.0;
    const PairProductStat g = pair_product_statistic(global, match_rng);
    if (g.se > 0.0) zstat = g.mean / g.se;
    CHECK(std::abs(zstat) > 3.0);
}

TEST_CASE("residual cross correlation runs on well-specified data") {
    // Construct records whose mediator/outcome are Bernoulli draws from the
    // fitted models themselves; residuals should be uncorrelated noise.
    Rng gen(31);
    std::vector<GroupRecord> records;
    for (int i = 0; i < 800; ++i) {
        GroupRecord r;
        r.pair_id = i;
        r.v_alter = gen.bernoulli(0.5) ? 1 : 0;
        r.mediator = gen.bernoulli(0.5) ? 1 : 0;
        r.outcome = r.mediator == 1 && gen.bernoulli(0.3) ? 1 : 0;
        records.push_back(r);
    }
    const GlmFit med = fit_mediator_model(records, kNoCovariates);
    const GlmFit out = fit_outcome_model(records, kNoCovariates);
    REQUIRE(med.converged);
    REQUIRE(out.converged);
    Rng rng(37);
    const ResidualCrossCorrelation rc =
        residual_cross_correlation(records, kNoCovariates, med, out, rng);
    CHECK(rc.mediator_pairs == 400);
    CHECK(std::abs(rc.mediator_mean) < 4.0 * rc.mediator_se);
    CHECK(std::abs(rc.outcome_mean) < 4.0 * rc.outcome_se);
}
