#include "diffshape/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace diffshape {

SymbolBatch diffuse_to(const SymbolBatch& x0, int t, const SymbolBatch& eps,
                       const VarianceSchedule& sched) {
    require_same_shape(x0, eps, "diffuse_to");
    require_finite(x0, "diffuse_to");
    require_finite(eps, "diffuse_to");
    const double ab = sched.alpha_bar(t);
    return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * eps;
}

SymbolBatch forward_step(const SymbolBatch& x_prev, int t, const SymbolBatch& eps,
                         const VarianceSchedule& sched) {
    require_same_shape(x_prev, eps, "forward_step");
    require_finite(x_prev, "forward_step");
    require_finite(eps, "forward_step");
    const double b = sched.beta(t);
    return std::sqrt(1.0 - b) * x_prev + std::sqrt(b) * eps;
}

PosteriorParams posterior_params(const SymbolBatch& x0, const SymbolBatch& xt, int t,
                                 const VarianceSchedule& sched) {
    require_same_shape(x0, xt, "posterior_params");
    require_finite(x0, "posterior_params");
    require_finite(xt, "posterior_params");
    const double a = sched.alpha(t);
    const double ab_prev = sched.alpha_bar(t - 1);
    const double ab = sched.alpha_bar(t);
    const double b = sched.beta(t);

    PosteriorParams out;
    out.mean = (std::sqrt(a) * (1.0 - ab_prev) * xt + std::sqrt(ab_prev) * b * x0) / (1.0 - ab);
    out.var = sched.posterior_var(t);
    return out;
}

SymbolBatch predict_x0(const SymbolBatch& xt, const SymbolBatch& eps_hat, int t,
                       const VarianceSchedule& sched) {
    require_same_shape(xt, eps_hat, "predict_x0");
    require_finite(xt, "predict_x0");
    require_finite(eps_hat, "predict_x0");
    const double ab = sched.alpha_bar(t);
    return (xt - std::sqrt(1.0 - ab) * eps_hat) / std::sqrt(ab);
}

SymbolBatch reverse_step(const SymbolBatch& xt, const SymbolBatch& eps_hat, const SymbolBatch& z,
                         int t, const VarianceSchedule& sched) {
    require_same_shape(xt, eps_hat, "reverse_step");
    require_same_shape(xt, z, "reverse_step");
    require_finite(xt, "reverse_step");
    require_finite(eps_hat, "reverse_step");
    require_finite(z, "reverse_step");
    if (t == 1 && !z.isZero(0.0)) {
        throw std::invalid_argument("reverse_step: the t=1 step is deterministic, z must be zero");
    }
    const double a = sched.alpha(t);
    const double b = sched.beta(t);
    const double ab = sched.alpha_bar(t);
    return (xt - (b / std::sqrt(1.0 - ab)) * eps_hat) / std::sqrt(a) + std::sqrt(b) * z;
}

double loss_target(const SymbolBatch& eps, const SymbolBatch& eps_hat) {
    require_same_shape(eps, eps_hat, "loss_target");
    if (eps.rows() == 0) {
        throw std::invalid_argument("loss_target: empty batch");
    }
    return (eps - eps_hat).rowwise().squaredNorm().mean();
}

}  // namespace diffshape
