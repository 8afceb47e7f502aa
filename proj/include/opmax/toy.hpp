#pragma once

#include <cstdint>
#include <vector>

#include "opmax/rng.hpp"

namespace opmax::toy {

// One receiver of the two-sender/two-receiver game. The senders push class 1;
// alpha2 is the receiver's belief in the competing class.
struct Receiver {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double beta = 1.0;
    double zeta = 1.0;

    double rho() const noexcept { return alpha1 + alpha2; }
    double eta() const noexcept { return zeta / (beta * rho()); }
};

struct Instance {
    Receiver c;
    Receiver d;

    void validate() const;
};

// alpha1, alpha2 ~ U[0.1, 10], beta ~ U[0.9, 1], zeta ~ U(0, 2] per receiver.
Instance random_instance(Rng& rng);

struct IndividualRewards {
    double r_c = 0.0;
    double r_d = 0.0;
};

struct JointRewards {
    double cc = 0.0;
    double cd = 0.0;
    double dd = 0.0;
};

// alpha2 zeta / ((beta rho + zeta) rho): opinion gain from a single message.
double individual_reward(const Receiver& r);
// 2 alpha2 zeta / ((beta rho + 2 zeta) rho): gain from two messages at once.
double double_reward(const Receiver& r);

IndividualRewards individual_rewards(const Instance& inst);
JointRewards joint_rewards(const Instance& inst);

enum class LowerBound {
    Proof,      // 1 / (1 + 2 eta_c)
    Statement,  // 1 / (1 + eta_c)
};

// Receivers are relabeled so that r_c >= r_d before the test.
bool proposition1_condition(const Instance& inst, LowerBound bound = LowerBound::Proof);

// Same relabeling as proposition1_condition.
Instance ordered(const Instance& inst);

enum class Denominator {
    Difference,  // p = 1 / (1 + (R_cd - R_cc) / (R_cd - R_dd))
    Sum,         // p = 1 / (1 + (R_cd - R_cc) / (R_cd + R_dd))
};

// Maximizer of R_cc p^2 + 2 R_cd p (1-p) + R_dd (1-p)^2.
double optimal_p(const JointRewards& r, Denominator denom = Denominator::Difference);

// The quadratic above.
double expected_reward(double p, const JointRewards& r);
// R_cc + (R_cd - R_cc)^2 / (2 R_cd - R_cc - R_dd)
double optimal_expected_reward(const JointRewards& r);

// Enumerates the four joint actions of two independent senders.
double brute_force_expected_reward(double p, const JointRewards& r);

// Closed form for the expected best-of-N joint reward when both senders draw
// from (p, 1-p) N times, with p' = 1 - 2 p pbar and p'' = 1 - p^2/(p^2 + pbar^2).
double expected_sampled_reward(double p, const JointRewards& r, int n_samples);

// Monte Carlo of the same experiment. Uses common random numbers so
// result[k] estimates best-of-(k+1) for k < max_samples, and the sequence is
// non-decreasing.
std::vector<double> sampled_reward_monte_carlo(double p, const JointRewards& r, int max_samples,
                                               std::uint64_t trials, std::uint64_t seed);

}  // namespace opmax::toy
