#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "afcfit/common.hpp"
#include "afcfit/pipeline.hpp"

namespace {

using afcfit::RunConfig;

void add_common_fit_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--sigma", config.sigma, "Gaussian kernel width (uniformised units)")
        ->capture_default_str();
    cmd->add_option("--grid", config.grid, "decision-surface grid resolution G")
        ->capture_default_str();
    cmd->add_option("--bins", config.bins, "uniformiser histogram bins")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "random seed")->capture_default_str();
    cmd->add_option("--group-col", config.group_col, "name of the group column")
        ->capture_default_str();
    cmd->add_option("--name", config.distance_name, "distance model label for reports");
}

int dispatch(const RunConfig& config) {
    if (config.command == "fit") {
        afcfit::cmd_fit(config);
    } else if (config.command == "eval") {
        afcfit::cmd_eval(config);
    } else if (config.command == "sweep") {
        afcfit::cmd_sweep(config);
    } else if (config.command == "simulate") {
        afcfit::cmd_simulate(config);
    } else if (config.command == "distances") {
        afcfit::cmd_distances(config);
    } else if (config.command == "export-surface") {
        afcfit::cmd_export_surface(config);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2AFC judgement-data evaluation of perceptual distance models"};
    app.require_subcommand(1);

    RunConfig config;
    std::string truth_family = "logistic";
    std::string sampler = "unit_square";

    auto* fit = app.add_subcommand("fit", "fit a decision surface from a training CSV");
    fit->add_option("--train", config.train_path, "training dataset CSV")->required();
    fit->add_option("--out", config.out_dir, "output directory")->required();
    fit->add_option("--method", config.method, "density | mlp")->capture_default_str();
    add_common_fit_options(fit, config);
    fit->add_option("--mlp-epochs", config.mlp.epochs, "mlp training epochs")
        ->capture_default_str();
    fit->add_option("--mlp-batch", config.mlp.batch_size, "mlp batch size")
        ->capture_default_str();
    fit->add_option("--mlp-lr", config.mlp.learning_rate, "mlp learning rate")
        ->capture_default_str();
    fit->add_flag("--raw-mlp-input", config.raw_mlp_input,
                  "feed raw (non-uniformised) distances to the mlp");

    auto* eval = app.add_subcommand("eval", "evaluate a fitted surface on a test CSV");
    eval->add_option("--test", config.test_path, "test dataset CSV")->required();
    eval->add_option("--out", config.out_dir, "fit directory (artifacts in, report out)")
        ->required();
    add_common_fit_options(eval, config);
    eval->add_flag("--refit-uniformiser", config.refit_uniformiser,
                   "refit the uniformiser on the test set instead of reusing the fit's map");

    auto* sweep = app.add_subcommand("sweep", "NLL/AJ across sigma and grid values");
    sweep->add_option("--train", config.train_path, "training dataset CSV")->required();
    sweep->add_option("--test", config.test_path, "test dataset CSV")->required();
    sweep->add_option("--out", config.out_dir, "output directory")->required();
    sweep->add_option("--sigma-list", config.sigma_list, "sigma values (grid fixed at 100)")
        ->delimiter(',');
    sweep->add_option("--grid-list", config.grid_list, "grid sizes (sigma at default)")
        ->delimiter(',');
    add_common_fit_options(sweep, config);

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic 2AFC dataset");
    simulate->add_option("--out", config.out_dir, "output directory")->required();
    simulate->add_option("--truth", truth_family, "logistic | constant | step")
        ->capture_default_str();
    simulate->add_option("--param", config.synthetic.param,
                         "truth parameter (slope, constant, or ramp half-width)")
        ->capture_default_str();
    simulate->add_option("--t", config.synthetic.t_count, "number of triplets")
        ->capture_default_str();
    simulate->add_option("--m", config.synthetic.fixed_m, "judgements per triplet")
        ->capture_default_str();
    simulate->add_option("--m-weights", config.synthetic.m_weights,
                         "weights of m=1,2,... for variable-M data")
        ->delimiter(',');
    simulate->add_option("--sampler", sampler, "unit_square | lognormal_raw")
        ->capture_default_str();
    simulate->add_option("--lognormal-mu", config.synthetic.lognormal_mu, "lognormal mu")
        ->capture_default_str();
    simulate->add_option("--lognormal-sigma", config.synthetic.lognormal_sigma,
                         "lognormal sigma")
        ->capture_default_str();
    simulate->add_option("--seed", config.seed, "random seed")->capture_default_str();

    auto* distances = app.add_subcommand("distances",
                                         "compute (d0,d1) from a triplet patch manifest");
    distances->add_option("--triplets", config.triplets_path,
                          "manifest CSV: id,ref,x0,x1,n,m[,group]")
        ->required();
    distances->add_option("--out", config.out_dir, "output directory")->required();
    distances->add_option("--metric", config.patch_metric, "euclidean | ssim")
        ->capture_default_str();

    auto* export_surface = app.add_subcommand("export-surface",
                                              "flatten a surface JSON to plot-ready CSV");
    export_surface->add_option("--surface", config.surface_path, "surface.json path")
        ->required();
    export_surface->add_option("--out", config.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    config.command = app.get_subcommands().front()->get_name();
    if (simulate->parsed()) {
        if (truth_family == "logistic") {
            config.synthetic.family = afcfit::TruthFamily::logistic;
        } else if (truth_family == "constant") {
            config.synthetic.family = afcfit::TruthFamily::constant;
        } else if (truth_family == "step") {
            config.synthetic.family = afcfit::TruthFamily::step;
        } else {
            std::cerr << "error: unknown truth family '" << truth_family << "'\n";
            return 2;
        }
        if (sampler == "unit_square") {
            config.synthetic.sampler = afcfit::SyntheticSpec::Sampler::unit_square;
        } else if (sampler == "lognormal_raw") {
            config.synthetic.sampler = afcfit::SyntheticSpec::Sampler::lognormal_raw;
        } else {
            std::cerr << "error: unknown sampler '" << sampler << "'\n";
            return 2;
        }
    }

    try {
        return dispatch(config);
    } catch (const afcfit::TrainingError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const afcfit::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return 1;
    }
}
