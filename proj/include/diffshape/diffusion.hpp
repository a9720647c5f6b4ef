#pragma once

#include "diffshape/batch.hpp"
#include "diffshape/schedule.hpp"

namespace diffshape {

// Closed-form jump from clean symbols to step t:
//   x_t = sqrt(alpha_bar_t) x_0 + sqrt(1 - alpha_bar_t) eps.
SymbolBatch diffuse_to(const SymbolBatch& x0, int t, const SymbolBatch& eps,
                       const VarianceSchedule& sched);

// Single forward step from x_{t-1} to x_t:
//   x_t = sqrt(1 - beta_t) x_{t-1} + sqrt(beta_t) eps.
SymbolBatch forward_step(const SymbolBatch& x_prev, int t, const SymbolBatch& eps,
                         const VarianceSchedule& sched);

struct PosteriorParams {
    SymbolBatch mean;   // per-sample mean of q(x_{t-1} | x_t, x_0)
    double var = 0.0;   // shared scalar variance (zero at t = 1)
};

PosteriorParams posterior_params(const SymbolBatch& x0, const SymbolBatch& xt, int t,
                                 const VarianceSchedule& sched);

// Inverts diffuse_to given a noise estimate:
//   x_0 = (x_t - sqrt(1 - alpha_bar_t) eps_hat) / sqrt(alpha_bar_t).
SymbolBatch predict_x0(const SymbolBatch& xt, const SymbolBatch& eps_hat, int t,
                       const VarianceSchedule& sched);

// One sampling update of the reverse chain:
//   x_{t-1} = (x_t - beta_t / sqrt(1 - alpha_bar_t) eps_hat) / sqrt(alpha_t)
//             + sqrt(beta_t) z.
// The caller must pass z = 0 at t = 1 (the final, deterministic step).
SymbolBatch reverse_step(const SymbolBatch& xt, const SymbolBatch& eps_hat, const SymbolBatch& z,
                         int t, const VarianceSchedule& sched);

// Training objective: mean over the batch of the squared noise-prediction
// error ||eps - eps_hat||^2 (both I and Q contribute to each row's norm).
double loss_target(const SymbolBatch& eps, const SymbolBatch& eps_hat);

}  // namespace diffshape
