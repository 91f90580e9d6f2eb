#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapthermal/bohmian.hpp"
#include "gapthermal/errors.hpp"
#include "gapthermal/sampler.hpp"
#include "gapthermal/thermal_spectrum.hpp"

namespace gapthermal::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 4;

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ModelConfig {
  ModelKind kind = ModelKind::circle;
  int particles = 1;
  int dimension = 1;
  double mass = 1.0;
  double hbar = 1.0;
  Symmetry symmetry = Symmetry::none;
  CustomBasis basis = CustomBasis::abstract;
  std::vector<CustomWeight> weights;
};

struct DiagnosticsConfig {
  std::vector<std::string> names;
  std::vector<int> ell{1, 2, 3};
  std::vector<double> alpha{0.25, 0.5};
  /// Defaults to beta / 4.
  std::optional<double> epsilon;
  std::vector<double> dq_grid{1e-2, 1e-3, 1e-4};
  double q = 1.0;
  double sigma = 1.0;
  /// Number of standard errors allowed between value and expectation.
  double tolerance_se = 5.0;
  /// Coefficient files to analyse instead of fresh samples.
  std::vector<std::string> inputs;
};

enum class PsiSource { sample, mode, file };

struct BohmConfig {
  /// Empty means one point at the centre of the configuration space.
  std::vector<std::vector<double>> q0;
  std::vector<double> t_grid;
  std::vector<double> masses;
  PsiSource source = PsiSource::sample;
  std::vector<int> mode;
  std::string path;
  TrajectoryOptions options;
};

/// Parsed experiment.  `document` is the effective configuration (file plus
/// command-line overrides) that is echoed into every output.
struct ExperimentConfig {
  nlohmann::json document;
  std::string hash;
  ModelConfig model;
  double beta = 0.0;
  double tail_mass = kDefaultTailMass;
  SamplerKind sampler = SamplerKind::gap;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  DiagnosticsConfig diagnostics;
  BohmConfig bohm;
  std::string output_dir = "out";
};

struct Overrides {
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out;
};

/// Throws ConfigError on anything malformed; model kind and beta are required.
ExperimentConfig parse_config(nlohmann::json document, const Overrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// The spectrum the configuration describes.
SpectrumPtr build_spectrum(const ExperimentConfig& config);

/// Each command throws ConfigError, IoError or a library error; run() maps
/// them to exit codes.
void cmd_model(const ExperimentConfig& config, std::ostream& out);
void cmd_sample(const ExperimentConfig& config, std::ostream& log);
void cmd_diagnose(const ExperimentConfig& config, std::ostream& log);
void cmd_bohm(const ExperimentConfig& config, std::ostream& log);

/// Entry point of the gap-thermal executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gapthermal::cli
