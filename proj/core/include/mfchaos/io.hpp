#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfchaos/chaos.hpp"
#include "mfchaos/cloud.hpp"
#include "mfchaos/levy.hpp"
#include "mfchaos/mf_solver.hpp"
#include "mfchaos/model.hpp"
#include "mfchaos/simulator.hpp"

namespace mfchaos::io {

using json = nlohmann::json;

/// CSV with header x0..x{d-1}, one point per row, shortest round-trip formatting.
void write_cloud_csv(std::ostream& os, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& is);
void save_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud load_cloud_csv(const std::filesystem::path& path);

/// Array of points, each an array of d numbers.
json cloud_to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const json& j);

/// Row-major nested arrays.
json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& j);
json vector_to_json(const Vec& v);
Vec vector_from_json(const json& j);

/// {"atoms": [{"z": [...], "lambda": r}]}
json levy_to_json(const DiscreteLevyMeasure& m);
DiscreteLevyMeasure levy_from_json(const json& j, std::size_t dim);

/// {"b": [...], "sigma": [[...]], "jump": {"eta": [[...]], "base": {"atoms": [...]}}}
json triplet_to_json(const LevyTriplet& t);
LevyTriplet triplet_from_json(const json& j);

/// Model definition. Average forms name kernels from the built-in library:
///   {"kind": "average_form", "dim": 1,
///    "drift": {"name": "linear_attraction", "kappa": 1},
///    "sigma": {"name": "constant_sigma", "s": 0.5},
///    "eta":   {"name": "linear_eta", "eta0": 1, "eta1": 0},
///    "jump":  {"atoms": [...]}, "lipschitz": {...}}
/// General forms name a built-in field: {"kind": "general", "builtin": "ou", "theta": 1, "s": 0.5}.
/// Omitted lipschitz constants are filled in for the built-ins that have known ones.
MeanFieldModel model_from_json(const json& j);
MeanFieldModel load_model(const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);

json to_json(const LinearFit& f);
json to_json(const ChaosReport& r);
json to_json(const OmegaReport& r);
json to_json(const ExpStabilityReport& r);
json to_json(const FgReport& r);
json to_json(const StabilityReport& r);
json to_json(const std::vector<PcaRow>& rows);
/// Picard log of a mean-field solve (without the clouds).
json convergence_log(const MeanFieldSolution& s);

/// Columns N, t, distance, stderr, aleph, aleph_stderr, bound, verdict.
void write_chaos_csv(std::ostream& os, const ChaosReport& r);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace mfchaos::io
