#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include <sparenet/curves.hpp>
#include <sparenet/network.hpp>
#include <sparenet/policy.hpp>

#include "oracles.hpp"

using namespace sparenet;

namespace {

Policy lowest(PolicyKind kind) { return Policy{kind, TieBreak::lowest_index, true}; }

const PolicyKind kAllKinds[] = {PolicyKind::random, PolicyKind::pe, PolicyKind::pp,
                                PolicyKind::pe_pp, PolicyKind::pp_pe};

oracle::Rule rule_of(PolicyKind k) {
    switch (k) {
        case PolicyKind::random: return oracle::Rule::random_first;
        case PolicyKind::pe: return oracle::Rule::pe;
        case PolicyKind::pp: return oracle::Rule::pp;
        case PolicyKind::pe_pp: return oracle::Rule::pe_pp;
        case PolicyKind::pp_pe: return oracle::Rule::pp_pe;
    }
    throw std::logic_error("rule_of");
}

void check_curve_shape(const Curve& curve, int n_spares) {
    REQUIRE_FALSE(curve.points.empty());
    CHECK(curve.at(0) == 1.0);
    for (int f = 0; f <= curve.max_faults(); ++f) {
        const CurvePoint& pt = curve.points[static_cast<std::size_t>(f)];
        CHECK(pt.faults == f);
        CHECK(pt.repairability >= 0.0);
        CHECK(pt.repairability <= 1.0);
        if (f > 0) CHECK(pt.repairability <= curve.at(f - 1));
        if (f > n_spares) CHECK(pt.repairability == 0.0);
    }
}

}  // namespace

TEST_CASE("exact policy enumeration reproduces the by-hand fractions") {
    const SpareNetwork n0 = reference_network();
    const Curve pp = exact_curve_policy(n0, lowest(PolicyKind::pp), 4);
    CHECK(pp.estimator == CurveEstimator::exact_policy);
    CHECK(pp.at(0) == 1.0);
    CHECK(pp.at(1) == 1.0);
    CHECK(pp.at(2) == 13.0 / 16.0);
    CHECK(pp.at(4) == 0.0);
    CHECK(pp.points[2].trials == 16);
    check_curve_shape(pp, n0.spare_count());

    for (PolicyKind k : kAllKinds) {
        const Curve c = exact_curve_policy(n0, lowest(k), 4);
        CHECK(c.at(1) == 1.0);
        CHECK(c.at(4) == 0.0);
        check_curve_shape(c, n0.spare_count());
    }

    CHECK_THROWS_AS(
        exact_curve_policy(n0, Policy{PolicyKind::pp, TieBreak::seeded_random, true}, 2),
        std::invalid_argument);
}

TEST_CASE("exact offline enumeration reproduces the by-hand fractions") {
    const SpareNetwork n0 = reference_network();
    const Curve off = exact_curve_offline(n0, 4);
    CHECK(off.estimator == CurveEstimator::exact_offline);
    CHECK(off.at(1) == 1.0);
    CHECK(off.at(2) == 14.0 / 16.0);
    CHECK(off.at(3) == oracle::offline_fraction(n0, 3));
    CHECK(off.at(4) == 0.0);
    CHECK(off.points[2].trials == 10);
    check_curve_shape(off, n0.spare_count());
}

TEST_CASE("exact curves agree with plain ordered enumeration on random networks") {
    for (std::uint64_t instance = 0; instance < 30; ++instance) {
        SplitMix64 rng(derive_seed(501, instance));
        const int n_units = 1 + rng.bounded_int(5);
        const int n_spares = 1 + rng.bounded_int(4);
        const int n_edges = rng.bounded_int(n_units * n_spares + 1);
        const SpareNetwork net = oracle::random_net(n_units, n_spares, n_edges, rng.next());
        const int f_max = n_spares + 1;

        const Curve off = exact_curve_offline(net, f_max);
        check_curve_shape(off, n_spares);
        for (int f = 1; f <= f_max; ++f)
            REQUIRE(off.at(f) == Catch::Approx(oracle::offline_fraction(net, f)).epsilon(1e-12));

        for (PolicyKind k : kAllKinds) {
            const Curve c = exact_curve_policy(net, lowest(k), f_max);
            check_curve_shape(c, n_spares);
            for (int f = 1; f <= f_max; ++f) {
                REQUIRE(c.at(f) ==
                        Catch::Approx(oracle::policy_fraction(net, rule_of(k), f)).epsilon(1e-12));
                // Offline reassignment can only beat step-by-step choices.
                REQUIRE(off.at(f) >= c.at(f) - 1e-12);
            }
        }
    }
}

TEST_CASE("monte carlo estimates track the exact values") {
    const SpareNetwork n0 = reference_network();
    const Curve mc =
        estimate_curve_mc(n0, Policy{PolicyKind::random, TieBreak::seeded_random, true}, 2, 10000, 7);
    CHECK(mc.estimator == CurveEstimator::mc_policy);
    CHECK(mc.at(0) == 1.0);
    CHECK(mc.at(1) == 1.0);
    CHECK(mc.at(2) == Catch::Approx(0.78125).margin(0.013));
    CHECK(mc.points[2].trials == 10000);
    CHECK(mc.points[2].ci_half_width ==
          Catch::Approx(1.96 * std::sqrt(mc.at(2) * (1 - mc.at(2)) / 10000.0)));

    // Deterministic policies: the estimate must sit within four standard
    // errors of the exhaustive value on a batch of random topologies.
    for (std::uint64_t instance = 0; instance < 21; ++instance) {
        SplitMix64 seeder(derive_seed(502, instance));
        const SpareNetwork net = instance == 0
                                     ? n0
                                     : oracle::random_net(5, 4, 8 + seeder.bounded_int(9),
                                                          seeder.next());
        const int f_max = net.spare_count() + 1;
        for (PolicyKind k : kAllKinds) {
            const Curve exact = exact_curve_policy(net, lowest(k), f_max);
            const Curve mc_curve = estimate_curve_mc(net, lowest(k), f_max, 10000, seeder.next());
            check_curve_shape(mc_curve, net.spare_count());
            for (int f = 0; f <= f_max; ++f) {
                const double p = exact.at(f);
                const double band = 4.0 * std::sqrt(p * (1 - p) / 10000.0);
                REQUIRE(mc_curve.at(f) == Catch::Approx(p).margin(band + 1e-15));
            }
        }
    }
}

TEST_CASE("monte carlo results do not depend on the worker count") {
    const SpareNetwork n0 = reference_network();
    const Policy policy{PolicyKind::pe_pp, TieBreak::seeded_random, true};
    McStats s1;
    McStats s2;
    McStats s8;
    const Curve c1 = estimate_curve_mc(n0, policy, 3, 10000, 99, 1, &s1);
    const Curve c2 = estimate_curve_mc(n0, policy, 3, 10000, 99, 2, &s2);
    const Curve c8 = estimate_curve_mc(n0, policy, 3, 10000, 99, 8, &s8);
    for (int f = 0; f <= 3; ++f) {
        REQUIRE(c1.at(f) == c2.at(f));
        REQUIRE(c1.at(f) == c8.at(f));
    }
    CHECK(s1.decisions == s2.decisions);
    CHECK(s1.decisions == s8.decisions);
    CHECK(s1.tie_decisions == s2.tie_decisions);
    CHECK(s1.tie_decisions == s8.tie_decisions);
    CHECK(s1.decisions > 0);
}

TEST_CASE("tie statistics count only ranked-stage ties") {
    const SpareNetwork n0 = reference_network();
    McStats random_stats;
    estimate_curve_mc(n0, Policy{PolicyKind::random, TieBreak::seeded_random, true}, 3, 2000, 5, 1,
                      &random_stats);
    CHECK(random_stats.tie_decisions == 0);

    McStats pe_stats;
    estimate_curve_mc(n0, Policy{PolicyKind::pe, TieBreak::seeded_random, true}, 3, 2000, 5, 1,
                      &pe_stats);
    CHECK(pe_stats.tie_decisions > 0);
    CHECK(pe_stats.tie_decisions < pe_stats.decisions);
}

TEST_CASE("enumeration budgets fail loudly") {
    const SpareNetwork n0 = reference_network();
    try {
        exact_curve_policy(n0, lowest(PolicyKind::pe), 30, 1000);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.required > 1000);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("budget"));
    }
    CHECK_THROWS_AS(exact_curve_offline(n0, 2, 5), BudgetExceeded);
    CHECK_THROWS_AS(adversarial_survival(n0, lowest(PolicyKind::pe), 2), BudgetExceeded);
}

TEST_CASE("worst-case survival matches the small examples") {
    const SpareNetwork n0 = reference_network();
    CHECK(adversarial_survival(n0, lowest(PolicyKind::pe)) == 1);

    const SpareNetwork k23(2, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}});
    for (PolicyKind k : kAllKinds) CHECK(adversarial_survival(k23, lowest(k)) == 3);

    CHECK_THROWS_AS(adversarial_survival(n0, Policy{PolicyKind::pe, TieBreak::seeded_random, true}),
                    std::invalid_argument);
    const SpareNetwork wide(1, 65, {});
    CHECK_THROWS_AS(adversarial_survival(wide, lowest(PolicyKind::pe)), std::invalid_argument);
}

TEST_CASE("worst-case survival agrees with the memo-free search") {
    for (std::uint64_t instance = 0; instance < 40; ++instance) {
        SplitMix64 rng(derive_seed(503, instance));
        const int n_units = 1 + rng.bounded_int(4);
        const int n_spares = 1 + rng.bounded_int(4);
        const int n_edges = rng.bounded_int(n_units * n_spares + 1);
        const SpareNetwork net = oracle::random_net(n_units, n_spares, n_edges, rng.next());
        for (PolicyKind k : kAllKinds) {
            REQUIRE(adversarial_survival(net, lowest(k)) ==
                    oracle::adversarial(net, rule_of(k)));
        }
        // No policy can dip below the weakest slot's spare count.
        SystemState fresh(net);
        const int floor = static_cast<int>(min_unit_degree(fresh).value());
        for (PolicyKind k : kAllKinds) CHECK(adversarial_survival(net, lowest(k)) >= floor);
    }
}

TEST_CASE("keeping the weakest slot's spares free buys one extra guaranteed fault") {
    // u0 is the weakest slot. s2 repairs u1 without touching u0's spares; s1
    // burns one of them. Guaranteed survival from the repaired state differs.
    const SpareNetwork net(4, 5, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {2, 4},
                                  {3, 0}, {3, 3}, {3, 4}});
    SystemState fresh(net);
    const int min_deg = static_cast<int>(min_unit_degree(fresh).value());
    REQUIRE(min_deg == 2);
    CHECK(adversarial_survival(net, lowest(PolicyKind::pe)) == min_deg);

    SplitMix64 rng(1);
    SystemState state(net);
    const Decision d = select_spare(state, 1, lowest(PolicyKind::pe), rng);
    CHECK(d.chosen_spare == 2);
    state.apply_repair(1, d.chosen_spare);
    CHECK(1 + adversarial_survival_from(state, lowest(PolicyKind::pe)) == min_deg + 1);

    SystemState bad(net);
    bad.apply_repair(1, 1);
    CHECK(1 + adversarial_survival_from(bad, lowest(PolicyKind::pe)) == min_deg);
}

TEST_CASE("structural curve points") {
    CHECK(structural_points(reference_network()).hundred_point == 1);
    CHECK(structural_points(reference_network()).zero_point == 4);

    std::vector<std::pair<int, int>> full;
    for (int u = 0; u < 4; ++u)
        for (int s = 0; s < 4; ++s) full.emplace_back(u, s);
    const SpareNetwork k44(4, 4, full);
    CHECK(structural_points(k44).hundred_point == 4);
    CHECK(structural_points(k44).zero_point == 5);

    const SpareNetwork isolated(2, 2, {{0, 0}, {0, 1}});
    CHECK(structural_points(isolated).hundred_point == 0);
    CHECK(structural_points(isolated).zero_point == 3);
}

TEST_CASE("mean repairability over a fault range") {
    Curve curve;
    curve.points.resize(5);
    const double values[] = {1.0, 1.0, 1.0, 0.5, 0.0};
    for (int f = 0; f < 5; ++f) {
        curve.points[static_cast<std::size_t>(f)].faults = f;
        curve.points[static_cast<std::size_t>(f)].repairability = values[f];
    }
    CHECK(mean_repairability(curve, 1, 4) == 0.625);
    CHECK(mean_repairability(curve, 4, 4) == 0.0);
    CHECK_THROWS_AS(mean_repairability(curve, 1, 5), std::invalid_argument);
    CHECK_THROWS_AS(mean_repairability(curve, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(mean_repairability(curve, -1, 2), std::invalid_argument);

    Curve zeros;
    zeros.points.resize(3);
    for (int f = 0; f < 3; ++f) zeros.points[static_cast<std::size_t>(f)].faults = f;
    CHECK(mean_repairability(zeros, 1, 2) == 0.0);

    const Curve off = exact_curve_offline(reference_network(), 3);
    CHECK(mean_repairability(off, 1, 3) ==
          Catch::Approx((off.at(1) + off.at(2) + off.at(3)) / 3.0).epsilon(1e-15));
}

TEST_CASE("curve CSV layout") {
    const Curve pp = exact_curve_policy(reference_network(), lowest(PolicyKind::pp), 2);
    CHECK(curve_csv(pp) ==
          "f,repairability,ci95,trials,estimator\n"
          "0,1,0,1,exact_policy\n"
          "1,1,0,4,exact_policy\n"
          "2,0.8125,0,16,exact_policy\n");

    const Curve mc = estimate_curve_mc(reference_network(),
                                       Policy{PolicyKind::pe, TieBreak::seeded_random, true}, 2,
                                       100, 3);
    const std::string text = mc.points.empty() ? "" : curve_csv(mc);
    CHECK(text.rfind("f,repairability,ci95,trials,estimator\n0,1,0,100,mc_policy\n", 0) == 0);
}
