#include "diffshape/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "diffshape/rng.hpp"

namespace diffshape {
namespace {

void check_params(const DemapperParams& p) {
    const Eigen::Index h = p.layers[0].w.cols();
    const Eigen::Index m = p.layers[2].w.cols();
    const auto& l = p.layers;
    const bool ok = h >= 1 && m >= 2 && l[0].w.rows() == 2 && l[0].b.size() == h &&
                    l[1].w.rows() == h && l[1].w.cols() == h && l[1].b.size() == h &&
                    l[2].w.rows() == h && l[2].b.size() == m;
    if (!ok) throw std::invalid_argument("demapper: inconsistent layer shapes");
}

struct DemapperCache {
    Eigen::MatrixXd a1, h1, a2, h2, logits;
};

DemapperCache run_forward(const DemapperParams& p, const SymbolBatch& y) {
    DemapperCache c;
    c.a1 = (y * p.layers[0].w).rowwise() + p.layers[0].b.transpose();
    c.h1 = c.a1.cwiseMax(0.0);
    c.a2 = (c.h1 * p.layers[1].w).rowwise() + p.layers[1].b.transpose();
    c.h2 = c.a2.cwiseMax(0.0);
    c.logits = (c.h2 * p.layers[2].w).rowwise() + p.layers[2].b.transpose();
    return c;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd p = (logits.colwise() - logits.rowwise().maxCoeff()).array().exp();
    p.array().colwise() /= p.rowwise().sum().array();
    return p;
}

}  // namespace

ShapingDistribution uniform_shaping(const Constellation& c) {
    return ShapingDistribution{
        std::vector<double>(static_cast<std::size_t>(c.order), 1.0 / static_cast<double>(c.order))};
}

DemapperParams DemapperParams::init(int order, int hidden_width, std::mt19937_64& rng) {
    if (order < 2 || hidden_width < 1) {
        throw std::invalid_argument("demapper: order must be >= 2 and hidden_width >= 1");
    }
    DemapperParams p;
    const int dims[4] = {2, hidden_width, hidden_width, order};
    for (int k = 0; k < 3; ++k) {
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
    return p;
}

DemapperParams DemapperParams::zeros(int order, int hidden_width) {
    if (order < 2 || hidden_width < 1) {
        throw std::invalid_argument("demapper: order must be >= 2 and hidden_width >= 1");
    }
    DemapperParams p;
    const int dims[4] = {2, hidden_width, hidden_width, order};
    for (int k = 0; k < 3; ++k) {
        p.layers[k].w = Eigen::MatrixXd::Zero(dims[k], dims[k + 1]);
        p.layers[k].b = Eigen::VectorXd::Zero(dims[k + 1]);
    }
    return p;
}

DemapperTrainResult train_demapper(const Constellation& c, const ChannelSpec& channel,
                                   const DemapperConfig& cfg) {
    if (cfg.iterations < 1) throw std::invalid_argument("demapper: iterations must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("demapper: batch_size must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("demapper: learning_rate must be > 0");

    auto rng = RngStream::root(cfg.seed).child("demapper-train").engine();
    DemapperParams params = DemapperParams::init(c.order, cfg.hidden_width, rng);
    DemapperParams m = DemapperParams::zeros(c.order, cfg.hidden_width);
    DemapperParams v = DemapperParams::zeros(c.order, cfg.hidden_width);

    std::uniform_int_distribution<int> pick_symbol(0, c.order - 1);
    const int n = cfg.batch_size;
    const double inv_n = 1.0 / static_cast<double>(n);

    DemapperTrainResult out;
    out.losses.reserve(static_cast<std::size_t>(cfg.iterations));

    SymbolBatch x(n, 2);
    std::vector<int> targets(static_cast<std::size_t>(n));
    for (int it = 1; it <= cfg.iterations; ++it) {
        for (int r = 0; r < n; ++r) {
            const int k = pick_symbol(rng);
            targets[static_cast<std::size_t>(r)] = k;
            x.row(r) = c.points.row(k);
        }
        const SymbolBatch y = transmit(x, channel, rng);

        const DemapperCache cache = run_forward(params, y);
        const Eigen::MatrixXd probs = softmax_rows(cache.logits);

        double loss = 0.0;
        Eigen::MatrixXd dlogits = probs;
        for (int r = 0; r < n; ++r) {
            const int tgt = targets[static_cast<std::size_t>(r)];
            loss -= std::log(std::max(probs(r, tgt), 1e-300));
            dlogits(r, tgt) -= 1.0;
        }
        loss *= inv_n;
        dlogits *= inv_n;
        out.losses.push_back(loss);

        DemapperParams grads = DemapperParams::zeros(c.order, cfg.hidden_width);
        grads.layers[2].w = cache.h2.transpose() * dlogits;
        grads.layers[2].b = dlogits.colwise().sum().transpose();
        Eigen::MatrixXd dh = dlogits * params.layers[2].w.transpose();

        Eigen::MatrixXd da = dh.cwiseProduct((cache.a2.array() > 0.0).cast<double>().matrix());
        grads.layers[1].w = cache.h1.transpose() * da;
        grads.layers[1].b = da.colwise().sum().transpose();
        dh = da * params.layers[1].w.transpose();

        da = dh.cwiseProduct((cache.a1.array() > 0.0).cast<double>().matrix());
        grads.layers[0].w = y.transpose() * da;
        grads.layers[0].b = da.colwise().sum().transpose();

        const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(it));
        const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(it));
        auto upd = [&](auto& param, const auto& grad, auto& m_, auto& v_) {
            m_ = cfg.adam_beta1 * m_ + (1.0 - cfg.adam_beta1) * grad;
            v_.array() = cfg.adam_beta2 * v_.array() + (1.0 - cfg.adam_beta2) * grad.array().square();
            param.array() -=
                cfg.learning_rate * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + cfg.adam_eps);
        };
        for (int k = 0; k < 3; ++k) {
            upd(params.layers[k].w, grads.layers[k].w, m.layers[k].w, v.layers[k].w);
            upd(params.layers[k].b, grads.layers[k].b, m.layers[k].b, v.layers[k].b);
        }
    }
    out.params = std::move(params);
    return out;
}

Eigen::MatrixXd demapper_posteriors(const DemapperParams& p, const SymbolBatch& y) {
    check_params(p);
    require_finite(y, "demapper_posteriors");
    return softmax_rows(run_forward(p, y).logits);
}

std::vector<int> demap(const DemapperParams& p, const SymbolBatch& y) {
    check_params(p);
    require_finite(y, "demap");
    const Eigen::MatrixXd logits = run_forward(p, y).logits;
    std::vector<int> out(static_cast<std::size_t>(y.rows()));
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
        int best = 0;
        for (int k = 1; k < logits.cols(); ++k) {
            if (logits(r, k) > logits(r, best)) best = k;  // strict: lowest index wins ties
        }
        out[static_cast<std::size_t>(r)] = best + 1;
    }
    return out;
}

}  // namespace diffshape
