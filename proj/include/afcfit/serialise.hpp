#pragma once

#include <filesystem>
#include <string>

#include "afcfit/density.hpp"
#include "afcfit/metrics.hpp"
#include "afcfit/mlp.hpp"
#include "afcfit/synthetic.hpp"
#include "afcfit/uniformiser.hpp"

namespace afcfit {

// JSON artifact IO. Every artifact carries an optional fit_id so eval can
// refuse to mix a surface with a uniformiser from a different run.

void save_uniformiser(const UniformiserMap& map, const std::filesystem::path& path,
                      const std::string& fit_id = {});
UniformiserMap load_uniformiser(const std::filesystem::path& path, std::string* fit_id = nullptr);

void save_surface(const DecisionSurface& surface, const std::filesystem::path& path,
                  const std::string& fit_id = {});
DecisionSurface load_surface(const std::filesystem::path& path, std::string* fit_id = nullptr);

// Flat CSV for plotting: i,k,d0_center,d1_center,p_hat,defined.
void save_surface_csv(const DecisionSurface& surface, const std::filesystem::path& path);

void save_mlp(const MlpModel& model, const std::filesystem::path& path,
              const std::string& fit_id = {});
MlpModel load_mlp(const std::filesystem::path& path, std::string* fit_id = nullptr);

void save_report(const EvalReport& report, const std::filesystem::path& path);

void save_truth(const Truth& truth, const SyntheticSpec& spec,
                const std::filesystem::path& path);

// 64-bit FNV-1a over the file bytes, hex-encoded; used for manifest digests.
std::string file_digest(const std::filesystem::path& path);

}  // namespace afcfit
