#include "opmax/toy.hpp"

#include <algorithm>
#include <cmath>

#include "opmax/error.hpp"
#include "opmax/rng.hpp"

namespace opmax::toy {

void Instance::validate() const {
    for (const Receiver* r : {&c, &d}) {
        if (!(r->alpha1 > 0.0) || !(r->alpha2 > 0.0)) throw InvalidArgument("toy: alphas must be positive");
        if (!(r->beta > 0.0) || r->beta > 1.0) throw InvalidArgument("toy: beta must be in (0,1]");
        if (!(r->zeta > 0.0)) throw InvalidArgument("toy: zeta must be positive");
    }
}

Instance random_instance(Rng& rng) {
    auto receiver = [&] {
        Receiver r;
        r.alpha1 = rng.uniform(0.1, 10.0);
        r.alpha2 = rng.uniform(0.1, 10.0);
        r.beta = rng.uniform(0.9, 1.0);
        r.zeta = 2.0 * (1.0 - rng.uniform());
        return r;
    };
    Instance inst;
    inst.c = receiver();
    inst.d = receiver();
    return inst;
}

double individual_reward(const Receiver& r) {
    const double rho = r.rho();
    return r.alpha2 * r.zeta / ((r.beta * rho + r.zeta) * rho);
}

double double_reward(const Receiver& r) {
    const double rho = r.rho();
    return 2.0 * r.alpha2 * r.zeta / ((r.beta * rho + 2.0 * r.zeta) * rho);
}

IndividualRewards individual_rewards(const Instance& inst) {
    return {individual_reward(inst.c), individual_reward(inst.d)};
}

JointRewards joint_rewards(const Instance& inst) {
    const auto ind = individual_rewards(inst);
    return {double_reward(inst.c), ind.r_c + ind.r_d, double_reward(inst.d)};
}

Instance ordered(const Instance& inst) {
    if (individual_reward(inst.c) >= individual_reward(inst.d)) return inst;
    return {inst.d, inst.c};
}

bool proposition1_condition(const Instance& inst, LowerBound bound) {
    const Instance o = ordered(inst);
    const auto r = individual_rewards(o);
    const double ratio = r.r_d / r.r_c;
    const double ec = o.c.eta();
    const double ed = o.d.eta();
    const double lower = bound == LowerBound::Proof ? 1.0 / (1.0 + 2.0 * ec) : 1.0 / (1.0 + ec);
    const double upper = std::min(1.0, ((1.0 + ec) / (1.0 + 2.0 * ec)) * ((1.0 + 2.0 * ed) / (1.0 + ed)));
    return lower < ratio && ratio < upper;
}

double optimal_p(const JointRewards& r, Denominator denom) {
    const double bottom = denom == Denominator::Difference ? r.cd - r.dd : r.cd + r.dd;
    if (bottom == 0.0) throw InvalidArgument("optimal_p: degenerate denominator");
    return 1.0 / (1.0 + (r.cd - r.cc) / bottom);
}

double expected_reward(double p, const JointRewards& r) {
    const double q = 1.0 - p;
    return r.cc * p * p + 2.0 * r.cd * p * q + r.dd * q * q;
}

double optimal_expected_reward(const JointRewards& r) {
    return r.cc + (r.cd - r.cc) * (r.cd - r.cc) / (2.0 * r.cd - r.cc - r.dd);
}

double brute_force_expected_reward(double p, const JointRewards& r) {
    const double q = 1.0 - p;
    // (x, y) in {c, d}^2, each sender independently picks c with probability p.
    const double prob[2] = {p, q};
    const double reward[2][2] = {{r.cc, r.cd}, {r.cd, r.dd}};
    double total = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) total += prob[x] * prob[y] * reward[x][y];
    }
    return total;
}

double expected_sampled_reward(double p, const JointRewards& r, int n_samples) {
    const double q = 1.0 - p;
    const double p1 = 1.0 - 2.0 * p * q;
    const double p2 = 1.0 - p * p / (p * p + q * q);
    const double n = static_cast<double>(n_samples);
    return (1.0 - std::pow(p1, n)) * r.cd +
           std::pow(p1, n) * (std::pow(1.0 - p2, n) * r.cc + std::pow(p2, n) * r.dd);
}

std::vector<double> sampled_reward_monte_carlo(double p, const JointRewards& r, int max_samples,
                                               std::uint64_t trials, std::uint64_t seed) {
    if (max_samples < 1) throw InvalidArgument("max_samples must be >= 1");
    if (trials == 0) throw InvalidArgument("trials must be positive");
    Rng rng(seed);
    const double reward[2][2] = {{r.cc, r.cd}, {r.cd, r.dd}};
    std::vector<double> sums(static_cast<std::size_t>(max_samples), 0.0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        double best = -INFINITY;
        for (int k = 0; k < max_samples; ++k) {
            const int x = rng.bernoulli(p) ? 0 : 1;
            const int y = rng.bernoulli(p) ? 0 : 1;
            best = std::max(best, reward[x][y]);
            sums[static_cast<std::size_t>(k)] += best;
        }
    }
    for (double& s : sums) s /= static_cast<double>(trials);
    return sums;
}

}  // namespace opmax::toy
