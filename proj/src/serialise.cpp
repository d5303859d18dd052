#include "afcfit/serialise.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "afcfit/common.hpp"

namespace afcfit {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(cat("cannot open: ", path.string()));
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw ParseError(cat(path.string(), ": ", err.what()));
    }
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError(cat("cannot write: ", path.string()));
    out << j.dump(2) << '\n';
    if (!out) throw InputError(cat("write failed: ", path.string()));
}

const char* source_name(SurfaceSource source) {
    return source == SurfaceSource::mlp ? "mlp" : "density";
}

SurfaceSource source_from(const std::string& name) {
    if (name == "density") return SurfaceSource::density;
    if (name == "mlp") return SurfaceSource::mlp;
    throw ParseError(cat("unknown surface source '", name, "'"));
}

json scores_to_json(const EvalScores& s) {
    return json{{"aj", s.aj},
                {"nll", s.nll},
                {"afc2_distance_only", s.afc2_distance_only},
                {"afc2_surface", s.afc2_surface},
                {"aj_simulated", s.aj_simulated},
                {"nll_simulated", s.nll_simulated},
                {"t_count", s.t_count}};
}

const char* family_name(TruthFamily family) {
    switch (family) {
        case TruthFamily::logistic: return "logistic";
        case TruthFamily::constant: return "constant";
        case TruthFamily::step: return "step";
    }
    return "logistic";
}

}  // namespace

void save_uniformiser(const UniformiserMap& map, const std::filesystem::path& path,
                      const std::string& fit_id) {
    json j{{"bins", map.bins}, {"bin_edges", map.bin_edges}, {"cum_mass", map.cum_mass}};
    if (!fit_id.empty()) j["fit_id"] = fit_id;
    write_json(j, path);
}

UniformiserMap load_uniformiser(const std::filesystem::path& path, std::string* fit_id) {
    const json j = read_json(path);
    UniformiserMap map;
    map.bins = j.at("bins").get<int>();
    map.bin_edges = j.at("bin_edges").get<std::vector<double>>();
    map.cum_mass = j.at("cum_mass").get<std::vector<double>>();
    if (map.bin_edges.size() != static_cast<std::size_t>(map.bins) + 1 ||
        map.cum_mass.size() != map.bin_edges.size()) {
        throw ParseError(cat(path.string(), ": inconsistent uniformiser sizes"));
    }
    if (fit_id) *fit_id = j.value("fit_id", "");
    return map;
}

void save_surface(const DecisionSurface& surface, const std::filesystem::path& path,
                  const std::string& fit_id) {
    json j{{"sigma", surface.sigma},
           {"G", surface.resolution},
           {"source", source_name(surface.source)},
           {"values", surface.values},
           {"undefined_mask", surface.undefined}};
    if (!fit_id.empty()) j["fit_id"] = fit_id;
    write_json(j, path);
}

DecisionSurface load_surface(const std::filesystem::path& path, std::string* fit_id) {
    const json j = read_json(path);
    DecisionSurface surface;
    surface.sigma = j.at("sigma").get<double>();
    surface.resolution = j.at("G").get<int>();
    surface.source = source_from(j.at("source").get<std::string>());
    surface.values = j.at("values").get<std::vector<double>>();
    surface.undefined = j.at("undefined_mask").get<std::vector<std::uint8_t>>();
    const std::size_t cells =
        static_cast<std::size_t>(surface.resolution) * surface.resolution;
    if (surface.resolution < 2 || surface.values.size() != cells ||
        surface.undefined.size() != cells) {
        throw ParseError(cat(path.string(), ": inconsistent surface sizes"));
    }
    if (fit_id) *fit_id = j.value("fit_id", "");
    return surface;
}

void save_surface_csv(const DecisionSurface& surface, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError(cat("cannot write: ", path.string()));
    out << "i,k,d0_center,d1_center,p_hat,defined\n";
    const int g = surface.resolution;
    char buf[64];
    for (int i = 0; i < g; ++i) {
        for (int k = 0; k < g; ++k) {
            const std::size_t c = static_cast<std::size_t>(i) * g + k;
            out << i << ',' << k << ',';
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g",
                          DensityGrid::cell_center(i, g), DensityGrid::cell_center(k, g),
                          surface.values[c]);
            out << buf << ',' << (surface.undefined[c] ? 0 : 1) << '\n';
        }
    }
    if (!out) throw InputError(cat("write failed: ", path.string()));
}

void save_mlp(const MlpModel& model, const std::filesystem::path& path,
              const std::string& fit_id) {
    json j{{"dims", {MlpModel::kInput, MlpModel::kHidden, MlpModel::kHidden, 1}},
           {"activation",
            model.config.activation == HiddenActivation::relu ? "relu" : "tanh"},
           {"weights", {{"w1", model.w1}, {"w2", model.w2}, {"w3", model.w3}}},
           {"biases", {{"b1", model.b1}, {"b2", model.b2}, {"b3", model.b3}}},
           {"config",
            {{"epochs", model.config.epochs},
             {"batch_size", model.config.batch_size},
             {"learning_rate", model.config.learning_rate},
             {"beta1", model.config.beta1},
             {"beta2", model.config.beta2},
             {"adam_epsilon", model.config.adam_epsilon}}},
           {"seed", model.config.seed},
           {"parameter_count", MlpModel::parameter_count()},
           {"epoch_loss", model.epoch_loss}};
    if (!fit_id.empty()) j["fit_id"] = fit_id;
    write_json(j, path);
}

MlpModel load_mlp(const std::filesystem::path& path, std::string* fit_id) {
    const json j = read_json(path);
    MlpModel model;
    const auto dims = j.at("dims").get<std::vector<int>>();
    if (dims != std::vector<int>{MlpModel::kInput, MlpModel::kHidden, MlpModel::kHidden, 1}) {
        throw ParseError(cat(path.string(), ": unsupported dims"));
    }
    const std::string act = j.at("activation").get<std::string>();
    if (act == "relu") {
        model.config.activation = HiddenActivation::relu;
    } else if (act == "tanh") {
        model.config.activation = HiddenActivation::tanh;
    } else {
        throw ParseError(cat(path.string(), ": unknown activation '", act, "'"));
    }
    const auto& weights = j.at("weights");
    model.w1 = weights.at("w1").get<std::vector<double>>();
    model.w2 = weights.at("w2").get<std::vector<double>>();
    model.w3 = weights.at("w3").get<std::vector<double>>();
    const auto& biases = j.at("biases");
    model.b1 = biases.at("b1").get<std::vector<double>>();
    model.b2 = biases.at("b2").get<std::vector<double>>();
    model.b3 = biases.at("b3").get<std::vector<double>>();
    const auto& cfg = j.at("config");
    model.config.epochs = cfg.at("epochs").get<int>();
    model.config.batch_size = cfg.at("batch_size").get<int>();
    model.config.learning_rate = cfg.at("learning_rate").get<double>();
    model.config.beta1 = cfg.at("beta1").get<double>();
    model.config.beta2 = cfg.at("beta2").get<double>();
    model.config.adam_epsilon = cfg.at("adam_epsilon").get<double>();
    model.config.seed = j.at("seed").get<std::uint64_t>();
    model.epoch_loss = j.value("epoch_loss", std::vector<double>{});
    if (model.w1.size() != MlpModel::kHidden * MlpModel::kInput ||
        model.b1.size() != MlpModel::kHidden ||
        model.w2.size() != static_cast<std::size_t>(MlpModel::kHidden) * MlpModel::kHidden ||
        model.b2.size() != MlpModel::kHidden || model.w3.size() != MlpModel::kHidden ||
        model.b3.size() != 1) {
        throw ParseError(cat(path.string(), ": inconsistent weight sizes"));
    }
    if (fit_id) *fit_id = j.value("fit_id", "");
    return model;
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
    json j = scores_to_json(report.scores);
    j["seed"] = report.seed;
    if (!report.per_group.empty()) {
        json groups = json::object();
        for (const auto& [label, scores] : report.per_group) {
            groups[label] = scores_to_json(scores);
        }
        j["per_group"] = groups;
    }
    write_json(j, path);
}

void save_truth(const Truth& truth, const SyntheticSpec& spec,
                const std::filesystem::path& path) {
    json j{{"family", family_name(truth.family)},
           {"param", truth.param},
           {"t_count", spec.t_count},
           {"seed", spec.seed},
           {"sampler",
            spec.sampler == SyntheticSpec::Sampler::unit_square ? "unit_square"
                                                                : "lognormal_raw"}};
    if (spec.m_weights.empty()) {
        j["fixed_m"] = spec.fixed_m;
    } else {
        j["m_weights"] = spec.m_weights;
    }
    if (spec.sampler == SyntheticSpec::Sampler::lognormal_raw) {
        j["lognormal_mu"] = spec.lognormal_mu;
        j["lognormal_sigma"] = spec.lognormal_sigma;
    }
    write_json(j, path);
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(cat("cannot open for digest: ", path.string()));
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001B3ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

}  // namespace afcfit
