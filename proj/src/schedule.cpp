#include "diffshape/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace diffshape {

VarianceSchedule VarianceSchedule::linear(int t_steps, double beta_min, double beta_max) {
    if (t_steps < 1) {
        throw std::invalid_argument("schedule: t_steps must be >= 1, got " + std::to_string(t_steps));
    }
    if (!(beta_min > 0.0) || !(beta_max < 1.0)) {
        throw std::invalid_argument("schedule: betas must lie in (0, 1)");
    }
    if (t_steps > 1 && !(beta_min < beta_max)) {
        throw std::invalid_argument("schedule: beta_min must be < beta_max");
    }
    if (t_steps == 1 && beta_min > beta_max) {
        throw std::invalid_argument("schedule: beta_min must be <= beta_max");
    }

    std::vector<double> betas(static_cast<std::size_t>(t_steps));
    if (t_steps == 1) {
        betas[0] = beta_min;
    } else {
        const double step = (beta_max - beta_min) / (t_steps - 1);
        for (int i = 0; i < t_steps; ++i) {
            betas[static_cast<std::size_t>(i)] = beta_min + step * i;
        }
        betas.back() = beta_max;  // avoid accumulation drift at the endpoint
    }
    return VarianceSchedule(std::move(betas));
}

VarianceSchedule VarianceSchedule::from_betas(std::vector<double> betas) {
    if (betas.empty()) {
        throw std::invalid_argument("schedule: beta list is empty");
    }
    for (double b : betas) {
        if (!std::isfinite(b) || !(b > 0.0) || !(b < 1.0)) {
            throw std::invalid_argument("schedule: every beta must lie in (0, 1)");
        }
    }
    for (std::size_t i = 1; i < betas.size(); ++i) {
        if (!(betas[i - 1] < betas[i])) {
            throw std::invalid_argument("schedule: betas must be strictly increasing");
        }
    }
    return VarianceSchedule(std::move(betas));
}

VarianceSchedule::VarianceSchedule(std::vector<double> betas) : beta_(std::move(betas)) {
    const std::size_t t = beta_.size();
    alpha_.resize(t);
    alpha_bar_.resize(t + 1);
    posterior_var_.resize(t);

    alpha_bar_[0] = 1.0;
    for (std::size_t i = 0; i < t; ++i) {
        alpha_[i] = 1.0 - beta_[i];
        alpha_bar_[i + 1] = alpha_bar_[i] * alpha_[i];
        posterior_var_[i] = (1.0 - alpha_bar_[i]) / (1.0 - alpha_bar_[i + 1]) * beta_[i];
    }
}

int VarianceSchedule::checked(int t) const {
    if (t < 1 || t > t_steps()) {
        throw std::out_of_range("schedule: step " + std::to_string(t) + " outside 1.." +
                                std::to_string(t_steps()));
    }
    return t;
}

double VarianceSchedule::beta(int t) const { return beta_[static_cast<std::size_t>(checked(t)) - 1]; }
double VarianceSchedule::alpha(int t) const { return alpha_[static_cast<std::size_t>(checked(t)) - 1]; }

double VarianceSchedule::alpha_bar(int t) const {
    if (t == 0) return 1.0;
    return alpha_bar_[static_cast<std::size_t>(checked(t))];
}

double VarianceSchedule::posterior_var(int t) const {
    return posterior_var_[static_cast<std::size_t>(checked(t)) - 1];
}

}  // namespace diffshape
