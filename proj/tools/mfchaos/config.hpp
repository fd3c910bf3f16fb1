#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mfchaos::cli {

using json = nlohmann::json;

inline constexpr const char* kConfigSchema = "mfchaos.config/1";
inline constexpr const char* kManifestSchema = "mfchaos.manifest/1";

struct OtParams {
  std::string a;                 ///< CSV cloud
  std::string b;
  std::string method = "auto";   ///< auto | assignment | bruteforce | sinkhorn
  double epsilon = 0.0;          ///< sinkhorn only; 0 picks 0.005 * mean cost
  std::string out;
};

struct SimulateParams {
  std::string model;
  std::string initial;           ///< CSV; empty draws n standard normal points
  std::size_t n = 100;
  double dt = 1e-3;
  double t = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> checkpoints;
  bool exact_compound_poisson = true;
  std::string out;
};

struct MeanfieldParams {
  std::string model;
  std::string initial;
  std::size_t m = 1000;
  double dt = 1e-3;
  double mesh = 0.01;
  double t = 1.0;
  double picard_tol = 1e-8;
  std::size_t max_picard_iters = 50;
  double window = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> pca_meshes;  ///< optional refinement table
  std::string out;
};

struct ChaosParams {
  std::string model;
  std::string initial;
  std::vector<std::size_t> n_list{8, 16, 32, 64, 128, 256};
  std::size_t trials = 20;
  double t = 1.0;
  double dt = 1e-3;
  std::size_t m = 1000;
  double mesh = 0.01;
  std::size_t aleph_trials = 400;
  double slope_lo = -1.3;
  double slope_hi = -0.7;
  std::uint64_t seed = 0;
  std::string out;
};

struct OmegaParams {
  std::string mode = "probe";    ///< probe | stability
  json a;                        ///< triplets inline
  json b;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> dt_grid{0.04, 0.02, 0.01};
  std::vector<double> t_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t mc_size = 20000;
  std::size_t replicates = 20;
  std::uint64_t seed = 0;
  std::string out;
};

using Params = std::variant<OtParams, SimulateParams, MeanfieldParams, ChaosParams, OmegaParams>;

struct ExperimentConfig {
  std::string schema = kConfigSchema;
  std::string subcommand;
  Params params;
};

/// Subcommand names in CLI order.
const std::vector<std::string>& subcommands();

/// Defaults of a subcommand as a JSON object (every known key present).
json defaults(const std::string& subcommand);

/// Merge layers with precedence flags > file > defaults, then validate.
/// Keys outside the subcommand's schema raise UnknownKey; absent required
/// fields raise MissingField; bad values raise RangeError.
ExperimentConfig parse_config(const std::string& subcommand, const json& file_layer, const json& flag_layer);
ExperimentConfig parse_config_file(const std::string& subcommand, const std::filesystem::path& path,
                                   const json& flag_layer = json::object());

json to_json(const ExperimentConfig& c);
/// Inverse of to_json.
ExperimentConfig from_json(const json& j);

/// Output directory of a config.
const std::string& output_dir(const ExperimentConfig& c);

}  // namespace mfchaos::cli
