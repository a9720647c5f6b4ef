#pragma once

#include <vector>

namespace diffshape {

// Per-step noise variances of a T-step diffusion, plus the derived tables
// everything else needs. Step indices are 1-based (t = 1..T); alpha_bar(0)
// is defined as 1 so the step-1 posterior variance is exactly zero.
class VarianceSchedule {
public:
    // Evenly spaced betas from beta_min to beta_max inclusive. Requires
    // 0 < beta_min < beta_max < 1 when t_steps > 1; equality is allowed for
    // a single-step schedule.
    static VarianceSchedule linear(int t_steps, double beta_min, double beta_max);

    // Arbitrary betas, e.g. restored from a checkpoint. Each must lie in (0, 1).
    static VarianceSchedule from_betas(std::vector<double> betas);

    int t_steps() const { return static_cast<int>(beta_.size()); }

    double beta(int t) const;
    double alpha(int t) const;       // 1 - beta_t
    double alpha_bar(int t) const;   // prod_{i<=t} alpha_i; accepts t = 0
    double posterior_var(int t) const;  // (1 - alpha_bar_{t-1}) / (1 - alpha_bar_t) * beta_t

    const std::vector<double>& betas() const { return beta_; }

private:
    explicit VarianceSchedule(std::vector<double> betas);

    int checked(int t) const;  // validates 1 <= t <= T, returns t

    std::vector<double> beta_;
    std::vector<double> alpha_;
    std::vector<double> alpha_bar_;      // alpha_bar_[t] is for step t; index 0 holds 1
    std::vector<double> posterior_var_;
};

}  // namespace diffshape
