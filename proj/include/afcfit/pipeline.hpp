#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "afcfit/density.hpp"
#include "afcfit/metrics.hpp"
#include "afcfit/mlp.hpp"
#include "afcfit/synthetic.hpp"

namespace afcfit {

// Everything a subcommand needs, validated up front. Each command writes its
// outputs plus a manifest (config, input digests, seed) into out_dir; outputs
// are bit-reproducible from the manifest.
struct RunConfig {
    std::string command;

    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::filesystem::path out_dir;
    std::filesystem::path surface_path;   // export-surface input
    std::filesystem::path triplets_path;  // distances manifest

    double sigma = kDefaultSigma;
    int grid = kDefaultGrid;
    int bins = 1000;
    std::string method = "density";  // density | mlp
    std::uint64_t seed = 0;
    std::string group_col = "group";
    std::string distance_name;  // label for reports; defaults to the input stem

    bool refit_uniformiser = false;
    bool raw_mlp_input = false;
    MlpConfig mlp;

    std::vector<double> sigma_list;  // sweep
    std::vector<int> grid_list;      // sweep

    // simulate
    SyntheticSpec synthetic;

    // distances
    std::string patch_metric = "euclidean";  // euclidean | ssim

    void validate() const;
};

struct SweepPoint {
    std::string param;  // "sigma" | "grid"
    double value = 0.0;
    double nll = 0.0;   // NaN when the point failed
    double aj = 0.0;
};

// fit: uniformiser + decision surface (+ model for --method mlp) to out_dir.
void cmd_fit(const RunConfig& config);

// eval: full report of a previous fit (artifacts in out_dir) on a test CSV.
EvalReport cmd_eval(const RunConfig& config);

// sweep: one fit+eval per sigma (grid fixed at 100x100) and per grid size
// (sigma at its default); emits plot-ready sweep.csv. Failed points continue
// with NaN markers.
std::vector<SweepPoint> cmd_sweep(const RunConfig& config);

// simulate: synthetic dataset.csv + truth.json.
void cmd_simulate(const RunConfig& config);

// distances: dataset.csv from a triplet patch manifest `id,ref,x0,x1,n,m[,group]`.
void cmd_distances(const RunConfig& config);

// export-surface: surface.json -> surface.csv.
void cmd_export_surface(const RunConfig& config);

// Human-readable table in the AJ / NLL / 2AFC row layout.
std::string format_report_table(const EvalReport& report, const std::string& distance_name);

}  // namespace afcfit
