#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "opmax/dynamics.hpp"
#include "opmax/error.hpp"
#include "opmax/toy.hpp"

using namespace opmax;
using namespace opmax::toy;

namespace {

Instance unit_instance() { return {Receiver{}, Receiver{}}; }

// Opinion gain in class 1 after k simultaneous class-1 messages, by update.
double gain_by_update(const Receiver& r, int k) {
    const std::vector<double> alpha{r.alpha1, r.alpha2};
    const std::vector<int> n{k, 0};
    return opinion(belief_update(alpha, r.beta, r.zeta, n))[0] - opinion(alpha)[0];
}

double grid_argmax(const JointRewards& r, int steps) {
    double best_p = 0.0, best = expected_reward(0.0, r);
    for (int i = 1; i <= steps; ++i) {
        const double p = static_cast<double>(i) / steps;
        if (expected_reward(p, r) > best) {
            best = expected_reward(p, r);
            best_p = p;
        }
    }
    return best_p;
}

}  // namespace

TEST_CASE("individual reward examples") {
    const Receiver unit;
    CHECK(individual_reward(unit) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    Receiver tiny = unit;
    tiny.alpha2 = 1e-12;
    CHECK(individual_reward(tiny) < 1e-11);
    const auto r = individual_rewards(unit_instance());
    CHECK(r.r_c == r.r_d);
}

TEST_CASE("rewards equal opinion gains from belief updates") {
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const Instance inst = random_instance(rng);
        CHECK(individual_reward(inst.c) == doctest::Approx(gain_by_update(inst.c, 1)).epsilon(1e-10));
        CHECK(double_reward(inst.d) == doctest::Approx(gain_by_update(inst.d, 2)).epsilon(1e-10));
    }
}

TEST_CASE("joint reward examples") {
    const auto j = joint_rewards(unit_instance());
    CHECK(j.cd == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(j.cc == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(j.dd == doctest::Approx(0.25).epsilon(1e-15));

    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        const Instance inst = random_instance(rng);
        const auto ind = individual_rewards(inst);
        const auto jr = joint_rewards(inst);
        CHECK(jr.cd == doctest::Approx(ind.r_c + ind.r_d).epsilon(1e-15));
        CHECK(jr.cc < 2.0 * ind.r_c);
        CHECK(jr.dd < 2.0 * ind.r_d);
        // Diminishing returns: the second message adds less than the first.
        CHECK(gain_by_update(inst.c, 2) - gain_by_update(inst.c, 1) < gain_by_update(inst.c, 1));
    }
}

TEST_CASE("proposition condition examples") {
    CHECK_FALSE(proposition1_condition(unit_instance()));
    CHECK_FALSE(proposition1_condition(unit_instance(), LowerBound::Statement));

    // r_d far below r_c: d is entrenched.
    Instance lopsided = unit_instance();
    lopsided.d.alpha1 = 50.0;
    lopsided.d.alpha2 = 0.5;
    CHECK_FALSE(proposition1_condition(lopsided));
}

TEST_CASE("proposition condition implies the reward ordering") {
    Rng rng(3);
    int hits = 0;
    for (int i = 0; i < 1000; ++i) {
        const Instance inst = ordered(random_instance(rng));
        if (!proposition1_condition(inst)) continue;
        ++hits;
        const auto jr = joint_rewards(inst);
        CHECK(jr.cd > jr.cc);
        CHECK(jr.cc > jr.dd);
        const double e = optimal_expected_reward(jr);
        CHECK(e > std::max(jr.cc, jr.dd));
        CHECK(e < jr.cd);
    }
    CHECK(hits > 20);
}

TEST_CASE("ordered puts the larger reward first") {
    Instance inst = unit_instance();
    inst.c.alpha1 = 10.0;
    const Instance o = ordered(inst);
    CHECK(individual_reward(o.c) >= individual_reward(o.d));
    CHECK(o.c.alpha1 == 1.0);
}

TEST_CASE("optimal_p examples") {
    const JointRewards sym{0.25, 1.0 / 3.0, 0.25};
    CHECK(optimal_p(sym) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(optimal_expected_reward(sym) == doctest::Approx(expected_reward(0.5, sym)).epsilon(1e-15));
    CHECK(grid_argmax(sym, 1000000) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(optimal_p({0.3, 0.5, 0.3}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(optimal_p({0.1, 0.2, 0.2}), InvalidArgument);
}

TEST_CASE("optimal_p matches a grid search where the optimum is interior") {
    Rng rng(4);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto jr = joint_rewards(ordered(random_instance(rng)));
        const double p = optimal_p(jr);
        if (p <= 0.0 || p >= 1.0) continue;
        ++checked;
        CHECK(std::abs(p - grid_argmax(jr, 100000)) < 1e-5);
        CHECK(expected_reward(p, jr) == doctest::Approx(optimal_expected_reward(jr)).epsilon(1e-12));
    }
    CHECK(checked > 50);
}

TEST_CASE("statement denominator disagrees with the quadratic optimum") {
    Rng rng(5);
    int worse = 0;
    for (int i = 0; i < 200; ++i) {
        const auto jr = joint_rewards(ordered(random_instance(rng)));
        const double p = optimal_p(jr, Denominator::Difference);
        if (p <= 0.0 || p >= 1.0) continue;
        const double alt = optimal_p(jr, Denominator::Sum);
        if (expected_reward(alt, jr) < expected_reward(p, jr) - 1e-15) ++worse;
        CHECK(expected_reward(alt, jr) <= expected_reward(p, jr) + 1e-15);
    }
    CHECK(worse > 0);
}

TEST_CASE("brute force matches the quadratic") {
    const JointRewards r{0.2, 0.7, 0.1};
    CHECK(brute_force_expected_reward(0.0, r) == r.dd);
    CHECK(brute_force_expected_reward(1.0, r) == r.cc);
    CHECK(brute_force_expected_reward(0.5, r) == doctest::Approx((r.cc + 2 * r.cd + r.dd) / 4).epsilon(1e-15));
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
        const auto jr = joint_rewards(random_instance(rng));
        const double p = rng.uniform();
        CHECK(std::abs(brute_force_expected_reward(p, jr) - expected_reward(p, jr)) < 1e-14);
    }
}

TEST_CASE("sampled reward closed form limits") {
    const auto jr = joint_rewards(unit_instance());
    for (int n : {1, 5, 50}) CHECK(expected_sampled_reward(1.0, jr, n) == doctest::Approx(jr.cc));
    CHECK(expected_sampled_reward(0.3, jr, 2000) == doctest::Approx(jr.cd).epsilon(1e-12));
}

TEST_CASE("sampled reward Monte Carlo") {
    const auto jr = joint_rewards(unit_instance());
    const auto mc = sampled_reward_monte_carlo(0.5, jr, 3, 1000000, 7);
    // With R_cc = R_dd the best of N draws is R_cd unless all N draws agree.
    for (int n = 1; n <= 3; ++n) {
        const double miss = std::pow(0.5, n);
        const double exact = (1.0 - miss) * jr.cd + miss * jr.cc;
        const double sd = (jr.cd - jr.cc) * std::sqrt(miss * (1.0 - miss) / 1e6);
        CHECK(std::abs(mc[n - 1] - exact) < 4.0 * sd);
    }
    const double closed = expected_sampled_reward(0.5, jr, 3);
    MESSAGE("N_s=3 closed form " << closed << " vs Monte Carlo " << mc[2] << " (delta " << closed - mc[2] << ")");
    CHECK(std::is_sorted(mc.begin(), mc.end()));

    Rng rng(8);
    const auto longer = sampled_reward_monte_carlo(0.3, joint_rewards(random_instance(rng)), 40, 2000, 9);
    CHECK(std::is_sorted(longer.begin(), longer.end()));
    CHECK_THROWS_AS(sampled_reward_monte_carlo(0.5, jr, 0, 10, 1), InvalidArgument);
}

TEST_CASE("instance validation") {
    Instance bad = unit_instance();
    CHECK_NOTHROW(bad.validate());
    bad.c.zeta = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = unit_instance();
    bad.d.beta = 1.5;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
