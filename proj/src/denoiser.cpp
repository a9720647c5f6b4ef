#include "diffshape/denoiser.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace diffshape {
namespace {

void check_params(const DenoiserParams& p) {
    const Eigen::Index h = p.time_embed.cols();
    if (p.time_embed.rows() < 1 || h < 1) {
        throw std::invalid_argument("denoiser: empty parameter shapes");
    }
    const auto& l = p.layers;
    const bool ok = l[0].w.rows() == 2 && l[0].w.cols() == h && l[0].b.size() == h &&
                    l[1].w.rows() == h && l[1].w.cols() == h && l[1].b.size() == h &&
                    l[2].w.rows() == h && l[2].w.cols() == h && l[2].b.size() == h &&
                    l[3].w.rows() == h && l[3].w.cols() == 2 && l[3].b.size() == 2;
    if (!ok) throw std::invalid_argument("denoiser: inconsistent layer shapes");
}

void check_step(const DenoiserParams& p, int t) {
    if (t < 1 || t > p.t_steps()) {
        throw std::out_of_range("denoiser: step " + std::to_string(t) + " outside 1.." +
                                std::to_string(p.t_steps()));
    }
}

void check_steps(const DenoiserParams& p, const std::vector<int>& ts, Eigen::Index rows) {
    if (static_cast<Eigen::Index>(ts.size()) != rows) {
        throw std::invalid_argument("denoiser: need one step index per batch row");
    }
    for (int t : ts) check_step(p, t);
}

Eigen::MatrixXd softplus(const Eigen::MatrixXd& a) {
    return (a.array().max(0.0) + (-a.array().abs()).exp().log1p()).matrix();
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& a) {
    return (0.5 * ((0.5 * a.array()).tanh() + 1.0)).matrix();
}

Eigen::MatrixXd gather_embed(const DenoiserParams& p, const std::vector<int>& ts) {
    Eigen::MatrixXd e(static_cast<Eigen::Index>(ts.size()), p.hidden_width());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        e.row(static_cast<Eigen::Index>(i)) = p.time_embed.row(ts[i] - 1);
    }
    return e;
}

struct ForwardCache {
    Eigen::MatrixXd e;
    Eigen::MatrixXd a1, s1, h1;
    Eigen::MatrixXd a2, s2, h2;
    Eigen::MatrixXd a3, s3, h3;
    Eigen::MatrixXd out;
};

ForwardCache run_forward(const DenoiserParams& p, const SymbolBatch& xt,
                         const std::vector<int>& ts) {
    ForwardCache c;
    c.e = gather_embed(p, ts);
    c.a1 = (xt * p.layers[0].w).rowwise() + p.layers[0].b.transpose();
    c.s1 = softplus(c.a1);
    c.h1 = c.s1.cwiseProduct(c.e);
    c.a2 = (c.h1 * p.layers[1].w).rowwise() + p.layers[1].b.transpose();
    c.s2 = softplus(c.a2);
    c.h2 = c.s2.cwiseProduct(c.e);
    c.a3 = (c.h2 * p.layers[2].w).rowwise() + p.layers[2].b.transpose();
    c.s3 = softplus(c.a3);
    c.h3 = c.s3.cwiseProduct(c.e);
    c.out = (c.h3 * p.layers[3].w).rowwise() + p.layers[3].b.transpose();
    return c;
}

}  // namespace

DenoiserParams DenoiserParams::init(int t_steps, int hidden_width, std::mt19937_64& rng) {
    if (t_steps < 1 || hidden_width < 1) {
        throw std::invalid_argument("denoiser: t_steps and hidden_width must be positive");
    }
    DenoiserParams p;
    const int dims[5] = {2, hidden_width, hidden_width, hidden_width, 2};
    for (int k = 0; k < 4; ++k) {
        const int fan_in = dims[k];
        const int fan_out = dims[k + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> u(-bound, bound);
        p.layers[k].w.resize(fan_in, fan_out);
        for (int r = 0; r < fan_in; ++r) {
            for (int col = 0; col < fan_out; ++col) p.layers[k].w(r, col) = u(rng);
        }
        p.layers[k].b.resize(fan_out);
        for (int i = 0; i < fan_out; ++i) p.layers[k].b(i) = u(rng);
    }
    p.time_embed = Eigen::MatrixXd::Ones(t_steps, hidden_width);
    return p;
}

DenoiserParams DenoiserParams::zeros_like(const DenoiserParams& shape) {
    DenoiserParams p;
    for (int k = 0; k < 4; ++k) {
        p.layers[k].w = Eigen::MatrixXd::Zero(shape.layers[k].w.rows(), shape.layers[k].w.cols());
        p.layers[k].b = Eigen::VectorXd::Zero(shape.layers[k].b.size());
    }
    p.time_embed = Eigen::MatrixXd::Zero(shape.time_embed.rows(), shape.time_embed.cols());
    return p;
}

SymbolBatch denoiser_forward(const DenoiserParams& p, const SymbolBatch& xt, int t) {
    check_params(p);
    check_step(p, t);
    require_finite(xt, "denoiser_forward");

    const auto e = p.time_embed.row(t - 1).array();
    Eigen::MatrixXd h = (xt * p.layers[0].w).rowwise() + p.layers[0].b.transpose();
    h = softplus(h);
    h.array().rowwise() *= e;
    Eigen::MatrixXd h2 = (h * p.layers[1].w).rowwise() + p.layers[1].b.transpose();
    h2 = softplus(h2);
    h2.array().rowwise() *= e;
    Eigen::MatrixXd h3 = (h2 * p.layers[2].w).rowwise() + p.layers[2].b.transpose();
    h3 = softplus(h3);
    h3.array().rowwise() *= e;
    return (h3 * p.layers[3].w).rowwise() + p.layers[3].b.transpose();
}

SymbolBatch denoiser_forward(const DenoiserParams& p, const SymbolBatch& xt,
                             const std::vector<int>& ts) {
    check_params(p);
    check_steps(p, ts, xt.rows());
    require_finite(xt, "denoiser_forward");
    return run_forward(p, xt, ts).out;
}

BackwardResult denoiser_backward(const DenoiserParams& p, const SymbolBatch& xt,
                                 const std::vector<int>& ts, const SymbolBatch& eps) {
    check_params(p);
    check_steps(p, ts, xt.rows());
    require_same_shape(xt, eps, "denoiser_backward");
    require_finite(xt, "denoiser_backward");
    require_finite(eps, "denoiser_backward");
    const Eigen::Index n = xt.rows();
    if (n == 0) throw std::invalid_argument("denoiser_backward: empty batch");

    const ForwardCache c = run_forward(p, xt, ts);

    BackwardResult r;
    r.grads = DenoiserParams::zeros_like(p);
    const Eigen::MatrixXd diff = c.out - eps;
    r.loss = diff.rowwise().squaredNorm().mean();

    Eigen::MatrixXd d = (2.0 / static_cast<double>(n)) * diff;
    r.grads.layers[3].w = c.h3.transpose() * d;
    r.grads.layers[3].b = d.colwise().sum().transpose();
    Eigen::MatrixXd dh = d * p.layers[3].w.transpose();

    auto hidden = [&](int k, const Eigen::MatrixXd& a, const Eigen::MatrixXd& s,
                      const Eigen::MatrixXd& in) {
        // dh arrives as the gradient w.r.t. h_k = s_k .* e
        const Eigen::MatrixXd de = dh.cwiseProduct(s);
        for (Eigen::Index i = 0; i < n; ++i) {
            r.grads.time_embed.row(ts[static_cast<std::size_t>(i)] - 1) += de.row(i);
        }
        const Eigen::MatrixXd da = dh.cwiseProduct(c.e).cwiseProduct(sigmoid(a));
        r.grads.layers[k].w = in.transpose() * da;
        r.grads.layers[k].b = da.colwise().sum().transpose();
        if (k > 0) dh = da * p.layers[k].w.transpose();
    };
    hidden(2, c.a3, c.s3, c.h2);
    hidden(1, c.a2, c.s2, c.h1);
    hidden(0, c.a1, c.s1, xt);
    return r;
}

BackwardResult denoiser_backward(const DenoiserParams& p, const SymbolBatch& xt, int t,
                                 const SymbolBatch& eps) {
    check_step(p, t);
    return denoiser_backward(p, xt, std::vector<int>(static_cast<std::size_t>(xt.rows()), t), eps);
}

AdamState AdamState::init_like(const DenoiserParams& p) {
    AdamState st;
    st.m = DenoiserParams::zeros_like(p);
    st.v = DenoiserParams::zeros_like(p);
    return st;
}

void adam_update(DenoiserParams& p, const DenoiserParams& grads, AdamState& state,
                 const AdamHyper& hyper) {
    if (grads.time_embed.rows() != p.time_embed.rows() ||
        grads.time_embed.cols() != p.time_embed.cols()) {
        throw std::invalid_argument("adam_update: gradient shapes do not match parameters");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));
    auto upd = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m = hyper.beta1 * m + (1.0 - hyper.beta1) * grad;
        v.array() = hyper.beta2 * v.array() + (1.0 - hyper.beta2) * grad.array().square();
        param.array() -=
            hyper.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + hyper.eps);
    };
    for (int k = 0; k < 4; ++k) {
        upd(p.layers[k].w, grads.layers[k].w, state.m.layers[k].w, state.v.layers[k].w);
        upd(p.layers[k].b, grads.layers[k].b, state.m.layers[k].b, state.v.layers[k].b);
    }
    upd(p.time_embed, grads.time_embed, state.m.time_embed, state.v.time_embed);
}

TrainResult train_denoiser(const Constellation& c, const VarianceSchedule& sched,
                           const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
    if (cfg.draws_per_point < 1) throw std::invalid_argument("train: draws_per_point must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be > 0");
    if (cfg.hidden_width < 1) throw std::invalid_argument("train: hidden_width must be >= 1");

    auto rng = RngStream::root(cfg.seed).child("train").engine();
    DenoiserParams params = DenoiserParams::init(sched.t_steps(), cfg.hidden_width, rng);
    AdamState adam = AdamState::init_like(params);
    const AdamHyper hyper{cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps};

    const long long per_epoch_samples =
        static_cast<long long>(c.order) * static_cast<long long>(cfg.draws_per_point);
    const long long steps_per_epoch = (per_epoch_samples + cfg.batch_size - 1) / cfg.batch_size;

    std::uniform_int_distribution<int> pick_symbol(0, c.order - 1);
    std::uniform_int_distribution<int> pick_step(1, sched.t_steps());

    TrainResult out;
    out.losses.reserve(static_cast<std::size_t>(steps_per_epoch * cfg.epochs));

    SymbolBatch x0(cfg.batch_size, 2);
    SymbolBatch xt(cfg.batch_size, 2);
    std::vector<int> ts(static_cast<std::size_t>(cfg.batch_size));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (long long step = 0; step < steps_per_epoch; ++step) {
            for (int r = 0; r < cfg.batch_size; ++r) {
                x0.row(r) = c.points.row(pick_symbol(rng));
            }
            for (int r = 0; r < cfg.batch_size; ++r) {
                ts[static_cast<std::size_t>(r)] = pick_step(rng);
            }
            const SymbolBatch eps = gaussian_batch(cfg.batch_size, rng);
            for (int r = 0; r < cfg.batch_size; ++r) {
                const double ab = sched.alpha_bar(ts[static_cast<std::size_t>(r)]);
                xt.row(r) = std::sqrt(ab) * x0.row(r) + std::sqrt(1.0 - ab) * eps.row(r);
            }
            BackwardResult bw = denoiser_backward(params, xt, ts, eps);
            adam_update(params, bw.grads, adam, hyper);
            out.losses.push_back(bw.loss);
        }
    }
    out.params = std::move(params);
    return out;
}

}  // namespace diffshape
