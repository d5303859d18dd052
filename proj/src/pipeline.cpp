#include "afcfit/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "afcfit/common.hpp"
#include "afcfit/distances.hpp"
#include "afcfit/serialise.hpp"
#include "afcfit/uniformiser.hpp"

namespace afcfit {

namespace {

using nlohmann::json;

std::string string_digest(const std::string& s) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

void ensure_out_dir(const std::filesystem::path& dir) {
    if (dir.empty()) throw ConfigError("missing --out directory");
    std::filesystem::create_directories(dir);
}

void require_file(const std::filesystem::path& path, const char* what) {
    if (path.empty()) throw ConfigError(cat("missing ", what, " path"));
    if (!std::filesystem::exists(path)) {
        throw InputError(cat(what, " file not found: ", path.string()));
    }
}

json config_json(const RunConfig& config) {
    json j{{"command", config.command},
           {"sigma", config.sigma},
           {"grid", config.grid},
           {"bins", config.bins},
           {"method", config.method},
           {"seed", config.seed},
           {"refit_uniformiser", config.refit_uniformiser}};
    if (config.method == "mlp") {
        j["mlp"] = {{"epochs", config.mlp.epochs},
                    {"batch_size", config.mlp.batch_size},
                    {"learning_rate", config.mlp.learning_rate},
                    {"raw_input", config.raw_mlp_input}};
    }
    return j;
}

void write_manifest(const RunConfig& config, const json& inputs,
                    const std::vector<std::string>& outputs, const std::string& fit_id,
                    const std::filesystem::path& path) {
    json j{{"config", config_json(config)},
           {"inputs", inputs},
           {"outputs", outputs},
           {"seed", config.seed}};
    if (!fit_id.empty()) j["fit_id"] = fit_id;
    std::ofstream out(path);
    if (!out) throw InputError(cat("cannot write: ", path.string()));
    out << j.dump(2) << '\n';
}

std::string make_fit_id(const RunConfig& config, const std::string& train_digest) {
    return string_digest(cat(config.method, '|', config.sigma, '|', config.grid, '|',
                             config.bins, '|', config.seed, '|', config.raw_mlp_input, '|',
                             train_digest));
}

DecisionSurface fit_density_surface(const JudgementDataset& uniformised, double sigma,
                                    int grid) {
    if (uniformised.fixed_m) {
        return mle_surface(accumulate(uniformised, sigma, grid));
    }
    return binary_surface(uniformised, sigma, grid);
}

std::string label_for(const RunConfig& config, const std::filesystem::path& input) {
    if (!config.distance_name.empty()) return config.distance_name;
    return input.stem().string();
}

void append_scores_rows(std::ostringstream& out, const EvalScores& s) {
    char buf[64];
    const auto row = [&](const char* name, double value) {
        std::snprintf(buf, sizeof(buf), "  %-24s %10.4f\n", name, value);
        out << buf;
    };
    row("AJ(n, P, M) %", s.aj);
    row("NLL(n, P, M)", s.nll);
    row("2AFC (distance only) %", s.afc2_distance_only);
    row("2AFC (surface) %", s.afc2_surface);
    row("AJ(sim, P, M) %", s.aj_simulated);
    row("NLL(sim, P, M)", s.nll_simulated);
    out << "  triplets: " << s.t_count << "\n";
}

}  // namespace

void RunConfig::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError(cat("sigma must be positive, got ", sigma));
    }
    if (grid < 2) throw ConfigError(cat("grid must be >= 2, got ", grid));
    if (bins < 2) throw ConfigError(cat("bins must be >= 2, got ", bins));
    if (method != "density" && method != "mlp") {
        throw ConfigError(cat("method must be density or mlp, got '", method, "'"));
    }
    for (double s : sigma_list) {
        if (!(s > 0.0)) throw ConfigError(cat("sweep sigma must be positive, got ", s));
    }
    for (int g : grid_list) {
        if (g < 2) throw ConfigError(cat("sweep grid must be >= 2, got ", g));
    }
}

void cmd_fit(const RunConfig& config) {
    config.validate();
    require_file(config.train_path, "--train");
    ensure_out_dir(config.out_dir);

    const auto train = load_dataset(config.train_path, config.group_col);
    const auto map = fit_uniformiser(train, config.bins);
    const auto uniformised = transform_dataset(map, train);

    const std::string train_digest = file_digest(config.train_path);
    const std::string fit_id = make_fit_id(config, train_digest);

    DecisionSurface surface;
    std::vector<std::string> outputs = {"uniformiser.json", "surface.json", "surface.csv",
                                        "manifest.json"};
    if (config.method == "density") {
        surface = fit_density_surface(uniformised, config.sigma, config.grid);
    } else {
        MlpConfig mlp_config = config.mlp;
        mlp_config.seed = config.seed;
        const auto& inputs = config.raw_mlp_input ? train : uniformised;
        const MlpModel model = train_mlp(inputs, mlp_config);
        surface = mlp_surface(model, config.grid);
        save_mlp(model, config.out_dir / "model.json", fit_id);
        outputs.insert(outputs.begin() + 2, "model.json");
    }

    save_uniformiser(map, config.out_dir / "uniformiser.json", fit_id);
    save_surface(surface, config.out_dir / "surface.json", fit_id);
    save_surface_csv(surface, config.out_dir / "surface.csv");

    json inputs{{"train", {{"path", config.train_path.string()}, {"digest", train_digest}}}};
    write_manifest(config, inputs, outputs, fit_id, config.out_dir / "manifest.json");

    std::int64_t undefined_cells = 0;
    for (auto flag : surface.undefined) undefined_cells += flag;
    const std::size_t cells = surface.values.size();
    std::cout << "fit: T=" << train.size() << ", m="
              << (train.fixed_m ? cat("fixed ", *train.fixed_m) : std::string("variable"))
              << ", method=" << config.method << ", sigma=" << config.sigma << ", grid="
              << config.grid << "\n"
              << "     defined cells: " << (cells - undefined_cells) << "/" << cells;
    if (config.method == "mlp") std::cout << ", parameters: " << MlpModel::parameter_count();
    std::cout << "\n     artifacts: " << config.out_dir.string() << "\n";
}

EvalReport cmd_eval(const RunConfig& config) {
    config.validate();
    require_file(config.test_path, "--test");
    require_file(config.out_dir / "uniformiser.json", "fit artifact uniformiser.json");
    require_file(config.out_dir / "surface.json", "fit artifact surface.json");

    std::string map_fit_id, surface_fit_id;
    UniformiserMap map = load_uniformiser(config.out_dir / "uniformiser.json", &map_fit_id);
    const DecisionSurface surface = load_surface(config.out_dir / "surface.json",
                                                 &surface_fit_id);
    if (map_fit_id != surface_fit_id) {
        throw ValidationError(cat("fit id mismatch between uniformiser (", map_fit_id,
                                  ") and surface (", surface_fit_id, ")"));
    }

    const auto test = load_dataset(config.test_path, config.group_col);
    if (config.refit_uniformiser) {
        map = fit_uniformiser(test, config.bins);
    }
    const auto uniformised = transform_dataset(map, test);

    const EvalReport report = full_report(uniformised, surface, config.seed);
    save_report(report, config.out_dir / "report.json");

    json inputs{{"test", {{"path", config.test_path.string()},
                          {"digest", file_digest(config.test_path)}}},
                {"surface", {{"path", (config.out_dir / "surface.json").string()},
                             {"digest", file_digest(config.out_dir / "surface.json")}}}};
    write_manifest(config, inputs, {"report.json"}, surface_fit_id,
                   config.out_dir / "eval_manifest.json");

    std::cout << format_report_table(report, label_for(config, config.test_path));
    return report;
}

std::vector<SweepPoint> cmd_sweep(const RunConfig& config) {
    config.validate();
    require_file(config.train_path, "--train");
    require_file(config.test_path, "--test");
    if (config.sigma_list.empty() && config.grid_list.empty()) {
        throw ConfigError("sweep needs --sigma-list and/or --grid-list");
    }
    ensure_out_dir(config.out_dir);

    const auto train = load_dataset(config.train_path, config.group_col);
    const auto test = load_dataset(config.test_path, config.group_col);
    const auto map = fit_uniformiser(train, config.bins);
    const auto train_u = transform_dataset(map, train);
    const auto test_u = transform_dataset(map, test);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<SweepPoint> points;

    const auto run_point = [&](const std::string& param, double value, double sigma, int grid) {
        SweepPoint point{param, value, nan, nan};
        try {
            const auto surface = fit_density_surface(train_u, sigma, grid);
            point.nll = nll(test_u, surface);
            point.aj = aj(test_u, surface);
        } catch (const Error& err) {
            std::cerr << "sweep point " << param << "=" << value << " failed: " << err.what()
                      << "\n";
        }
        points.push_back(point);
    };

    // Sigma sweep holds the grid at 100x100 to isolate the kernel width.
    for (double sigma : config.sigma_list) run_point("sigma", sigma, sigma, 100);
    for (int grid : config.grid_list) {
        run_point("grid", static_cast<double>(grid), config.sigma, grid);
    }

    const auto csv_path = config.out_dir / "sweep.csv";
    std::ofstream out(csv_path);
    if (!out) throw InputError(cat("cannot write: ", csv_path.string()));
    out << "param,value,nll,aj\n";
    char buf[96];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", p.param.c_str(), p.value,
                      p.nll, p.aj);
        out << buf;
    }
    out.close();

    json inputs{{"train", {{"path", config.train_path.string()},
                           {"digest", file_digest(config.train_path)}}},
                {"test", {{"path", config.test_path.string()},
                          {"digest", file_digest(config.test_path)}}}};
    write_manifest(config, inputs, {"sweep.csv"}, {}, config.out_dir / "manifest.json");
    std::cout << "sweep: " << points.size() << " points -> " << csv_path.string() << "\n";
    return points;
}

void cmd_simulate(const RunConfig& config) {
    config.validate();
    ensure_out_dir(config.out_dir);

    SyntheticSpec spec = config.synthetic;
    spec.seed = config.seed;
    const auto [dataset, truth] = generate(spec);
    save_dataset(dataset, config.out_dir / "dataset.csv");
    save_truth(truth, spec, config.out_dir / "truth.json");
    write_manifest(config, json::object(), {"dataset.csv", "truth.json"}, {},
                   config.out_dir / "manifest.json");
    std::cout << "simulate: T=" << dataset.size() << " -> "
              << (config.out_dir / "dataset.csv").string() << "\n";
}

void cmd_distances(const RunConfig& config) {
    config.validate();
    require_file(config.triplets_path, "--triplets");
    ensure_out_dir(config.out_dir);
    if (config.patch_metric != "euclidean" && config.patch_metric != "ssim") {
        throw ConfigError(cat("metric must be euclidean or ssim, got '", config.patch_metric,
                              "'"));
    }
    const PatchMetric metric = config.patch_metric == "euclidean" ? PatchMetric::euclidean
                                                                  : PatchMetric::ssim;
    const auto base = config.triplets_path.parent_path();

    std::ifstream in(config.triplets_path);
    if (!in) throw InputError(cat("cannot open: ", config.triplets_path.string()));
    std::string line;
    if (!std::getline(in, line)) throw ParseError("triplet manifest: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool with_group = false;
    if (line == "id,ref,x0,x1,n,m") {
        with_group = false;
    } else if (line == "id,ref,x0,x1,n,m,group") {
        with_group = true;
    } else {
        throw ParseError(cat("triplet manifest header must be 'id,ref,x0,x1,n,m[,group]', got '",
                             line, "'"));
    }

    std::vector<TripletRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<std::string> fields;
        std::string cell;
        while (std::getline(row, cell, ',')) fields.push_back(cell);
        if (line.back() == ',') fields.push_back("");
        const std::size_t expected = with_group ? 7u : 6u;
        if (fields.size() != expected) {
            throw ParseError(cat("triplet manifest line ", line_no, ": expected ", expected,
                                 " fields, got ", fields.size()));
        }
        const auto ref = load_patch(base / fields[1]);
        const auto x0 = load_patch(base / fields[2]);
        const auto x1 = load_patch(base / fields[3]);
        TripletRecord rec;
        rec.id = fields[0];
        std::tie(rec.d0, rec.d1) = triplet_distances(ref, x0, x1, metric);
        rec.n = std::stoi(fields[4]);
        rec.m = std::stoi(fields[5]);
        if (with_group) rec.group = fields[6];
        records.push_back(std::move(rec));
    }

    auto dataset = JudgementDataset::from_records(std::move(records), config.patch_metric);
    dataset.has_group = with_group;
    save_dataset(dataset, config.out_dir / "dataset.csv");

    json inputs{{"triplets", {{"path", config.triplets_path.string()},
                              {"digest", file_digest(config.triplets_path)}}}};
    write_manifest(config, inputs, {"dataset.csv"}, {}, config.out_dir / "manifest.json");
    std::cout << "distances: " << dataset.size() << " triplets (" << config.patch_metric
              << ") -> " << (config.out_dir / "dataset.csv").string() << "\n";
}

void cmd_export_surface(const RunConfig& config) {
    config.validate();
    require_file(config.surface_path, "--surface");
    ensure_out_dir(config.out_dir);
    const auto surface = load_surface(config.surface_path);
    save_surface_csv(surface, config.out_dir / "surface.csv");
    json inputs{{"surface", {{"path", config.surface_path.string()},
                             {"digest", file_digest(config.surface_path)}}}};
    write_manifest(config, inputs, {"surface.csv"}, {}, config.out_dir / "manifest.json");
    std::cout << "export-surface -> " << (config.out_dir / "surface.csv").string() << "\n";
}

std::string format_report_table(const EvalReport& report, const std::string& distance_name) {
    std::ostringstream out;
    out << "evaluation (" << distance_name << "), seed " << report.seed << ":\n";
    append_scores_rows(out, report.scores);
    for (const auto& [label, scores] : report.per_group) {
        out << " group " << label << ":\n";
        append_scores_rows(out, scores);
    }
    return out.str();
}

}  // namespace afcfit
