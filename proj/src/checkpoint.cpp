#include "diffshape/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace diffshape {
namespace {

constexpr int kFormatVersion = 1;

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

double checked_number(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) throw CheckpointError("checkpoint: " + where + " is not a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw CheckpointError("checkpoint: " + where + " is not finite");
    return v;
}

Eigen::MatrixXd json_to_matrix(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw CheckpointError("checkpoint: " + where + " must be a non-empty 2-D array");
    }
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) {
        throw CheckpointError("checkpoint: " + where + " must be a non-empty 2-D array");
    }
    const std::size_t cols = j[0].size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw CheckpointError("checkpoint: " + where + " rows have unequal lengths");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                checked_number(j[r][c], where);
        }
    }
    return m;
}

Eigen::VectorXd json_to_vector(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw CheckpointError("checkpoint: " + where + " must be a non-empty array");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = checked_number(j[i], where);
    }
    return v;
}

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw CheckpointError(std::string("checkpoint: missing field '") + name + "'");
    return *it;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ck) {
    nlohmann::json j;
    j["version"] = kFormatVersion;
    j["modulation_order"] = ck.modulation_order;
    j["t_steps"] = ck.schedule.t_steps();
    j["beta"] = ck.schedule.betas();

    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : ck.params.layers) {
        nlohmann::json l;
        l["w"] = matrix_to_json(layer.w);
        l["b"] = vector_to_json(layer.b);
        layers.push_back(std::move(l));
    }
    j["layers"] = std::move(layers);
    j["time_embed"] = matrix_to_json(ck.params.time_embed);
    j["meta"] = ck.meta;
    return j.dump(2) + "\n";
}

Checkpoint parse_checkpoint(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw CheckpointError(std::string("checkpoint: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CheckpointError("checkpoint: top level must be an object");

    const int version = static_cast<int>(checked_number(field(j, "version"), "version"));
    if (version != kFormatVersion) {
        throw CheckpointError("checkpoint: unsupported version " + std::to_string(version));
    }

    const int order = static_cast<int>(checked_number(field(j, "modulation_order"), "modulation_order"));
    const int t_steps = static_cast<int>(checked_number(field(j, "t_steps"), "t_steps"));

    const nlohmann::json& beta_json = field(j, "beta");
    if (!beta_json.is_array()) throw CheckpointError("checkpoint: beta must be an array");
    std::vector<double> betas;
    betas.reserve(beta_json.size());
    for (std::size_t i = 0; i < beta_json.size(); ++i) {
        betas.push_back(checked_number(beta_json[i], "beta[" + std::to_string(i) + "]"));
    }
    if (static_cast<int>(betas.size()) != t_steps) {
        throw CheckpointError("checkpoint: t_steps does not match beta length");
    }

    const nlohmann::json& layers_json = field(j, "layers");
    if (!layers_json.is_array() || layers_json.size() != 4) {
        throw CheckpointError("checkpoint: expected exactly 4 layers");
    }

    DenoiserParams params;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::string where = "layers[" + std::to_string(k) + "]";
        if (!layers_json[k].is_object()) throw CheckpointError("checkpoint: " + where + " must be an object");
        params.layers[k].w = json_to_matrix(field(layers_json[k], "w"), where + ".w");
        params.layers[k].b = json_to_vector(field(layers_json[k], "b"), where + ".b");
    }
    params.time_embed = json_to_matrix(field(j, "time_embed"), "time_embed");

    if (params.time_embed.rows() != t_steps) {
        throw CheckpointError("checkpoint: time_embed row count does not match t_steps");
    }
    const Eigen::Index h = params.time_embed.cols();
    const auto& l = params.layers;
    const bool shapes_ok = l[0].w.rows() == 2 && l[0].w.cols() == h && l[0].b.size() == h &&
                           l[1].w.rows() == h && l[1].w.cols() == h && l[1].b.size() == h &&
                           l[2].w.rows() == h && l[2].w.cols() == h && l[2].b.size() == h &&
                           l[3].w.rows() == h && l[3].w.cols() == 2 && l[3].b.size() == 2;
    if (!shapes_ok) throw CheckpointError("checkpoint: layer shapes are inconsistent");

    if (order != 4 && order != 16 && order != 64 && order != 256) {
        throw CheckpointError("checkpoint: unsupported modulation_order " + std::to_string(order));
    }

    VarianceSchedule sched = [&] {
        try {
            return VarianceSchedule::from_betas(betas);
        } catch (const std::invalid_argument& e) {
            throw CheckpointError(std::string("checkpoint: ") + e.what());
        }
    }();

    nlohmann::json meta = j.contains("meta") ? j["meta"] : nlohmann::json::object();
    return Checkpoint{std::move(params), std::move(sched), order, std::move(meta)};
}

void save_checkpoint_file(const Checkpoint& ck, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("checkpoint: cannot open '" + path + "' for writing");
    out << serialize_checkpoint(ck);
    if (!out) throw CheckpointError("checkpoint: write to '" + path + "' failed");
}

Checkpoint load_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("checkpoint: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_checkpoint(buf.str());
}

}  // namespace diffshape
