#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gapthermal/cli.hpp"
#include "gapthermal/diagnostics.hpp"
#include "gapthermal/field.hpp"
#include "gapthermal/parallel.hpp"
#include "gapthermal/serialization.hpp"

namespace gapthermal::cli {

namespace {

using nlohmann::json;

std::filesystem::path prepare_output_dir(const ExperimentConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

std::string numbered(const char* stem, std::size_t i) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%s_%06zu.csv", stem, i);
  return buffer;
}

json provenance_header(const ExperimentConfig& config) {
  return {{"config_hash", config.hash}, {"config", config.document}};
}

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

/// Source of wave functions for Monte Carlo diagnostics: fresh draws or files.
class Ensemble {
public:
  Ensemble(const ExperimentConfig& config, SpectrumPtr spectrum)
      : spectrum_(std::move(spectrum)), kind_(config.sampler), samples_(config.samples),
        seed_(config.seed) {
    for (const auto& path : config.diagnostics.inputs) {
      std::ifstream in(path);
      if (!in) throw IoError("cannot read coefficient file '" + path + "'");
      try {
        loaded_.push_back(read_wave_function_csv(in, spectrum_));
      } catch (const InvalidParameter& e) {
        throw ConfigError("'" + path + "': " + e.what());
      }
    }
    if (!loaded_.empty()) {
      samples_ = loaded_.size();
      const Provenance p = loaded_.front().provenance();
      kind_ = p == Provenance::g ? SamplerKind::g : p == Provenance::ga ? SamplerKind::ga : SamplerKind::gap;
    }
    if (samples_ < 2) throw ConfigError("diagnostics need at least two samples");
  }

  SamplerKind kind() const { return kind_; }
  std::size_t samples() const { return samples_; }

  MonteCarloMean mean(const std::function<double(const WaveFunction&)>& statistic) const {
    if (loaded_.empty()) return sample_statistic(kind_, spectrum_, samples_, seed_, statistic);
    std::vector<double> values(loaded_.size());
    for (std::size_t i = 0; i < loaded_.size(); ++i) values[i] = statistic(loaded_[i]);
    const double m = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / m;
    double squares = 0.0;
    for (double v : values) squares += (v - mean) * (v - mean);
    return {mean, std::sqrt(squares / (m - 1.0) / m), values.size()};
  }

  /// E|c_n|^2 under the ensemble's measure.
  double second_moment(double p) const { return kind_ == SamplerKind::ga ? p * (1.0 + p) : p; }

private:
  SpectrumPtr spectrum_;
  SamplerKind kind_;
  std::size_t samples_;
  std::uint64_t seed_;
  std::vector<WaveFunction> loaded_;
};

DiagnosticEntry compared(const MonteCarloMean& mc, double expectation, double tolerance_se) {
  DiagnosticEntry entry;
  entry.value = mc.mean;
  entry.expectation = expectation;
  entry.standard_error = mc.standard_error;
  entry.flags["pass"] = std::abs(mc.mean - expectation) <= tolerance_se * mc.standard_error;
  return entry;
}

double relative_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

const std::vector<std::string> kDiagnosticNames = {
    "sobolev",          "exp_weighted",       "domain_power", "analytic_vector", "theorem1",
    "theorem1_analytic", "gaussian_modulus", "increment_variance", "holder", "covariance"};

std::string label(const std::string& name, const std::string& parameter, double value) {
  std::ostringstream out;
  out << name << '[' << parameter << '=' << value << ']';
  return out.str();
}

}  // namespace

void cmd_model(const ExperimentConfig& config, std::ostream& out) {
  const SpectrumPtr spectrum = build_spectrum(config);
  json doc = spectrum_to_json(*spectrum);
  doc["config_hash"] = config.hash;
  doc["config"] = config.document;
  const std::string text = doc.dump(2) + "\n";
  out << text;
  if (config.document.contains("output_dir")) {
    write_file(prepare_output_dir(config) / "model.json", text);
  }
}

void cmd_sample(const ExperimentConfig& config, std::ostream& log) {
  const SpectrumPtr spectrum = build_spectrum(config);
  const auto dir = prepare_output_dir(config);
  const auto draws = sample_batch(config.sampler, spectrum, config.samples, config.seed);
  const json header = provenance_header(config);

  json manifest;
  manifest["config"] = config.document;
  manifest["config_hash"] = config.hash;
  manifest["generator"] = kGeneratorName;
  manifest["sampler"] = to_string(config.sampler);
  manifest["seed"] = config.seed;
  manifest["spectrum_hash"] = hash_hex(spectrum->hash());
  manifest["model_file"] = "model.json";
  auto& files = manifest["samples"] = json::array();
  for (std::size_t i = 0; i < draws.size(); ++i) {
    std::ostringstream csv;
    write_wave_function_csv(csv, draws[i], header);
    const std::string name = numbered("sample", i);
    write_file(dir / name, csv.str());
    json item = {{"file", name}, {"stream", i}};
    if (draws[i].size_biased_mode()) {
      const std::size_t k = *draws[i].size_biased_mode();
      item["size_biased_mode"] = k;
      item["size_biased_index"] = spectrum->mode(k).index.components;
    }
    files.push_back(std::move(item));
  }
  json model = spectrum_to_json(*spectrum);
  model["config_hash"] = config.hash;
  model["config"] = config.document;
  write_file(dir / "model.json", model.dump(2) + "\n");
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  manifest["created_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  log << "wrote " << draws.size() << ' ' << to_string(config.sampler) << " samples to " << dir.string()
      << '\n';
}

void cmd_diagnose(const ExperimentConfig& config, std::ostream& log) {
  const SpectrumPtr spectrum = build_spectrum(config);
  const ThermalSpectrum& spec = *spectrum;
  const DiagnosticsConfig& dc = config.diagnostics;
  std::vector<std::string> names = dc.names;
  if (names.empty()) names = {"sobolev", "exp_weighted", "domain_power", "theorem1"};
  for (const auto& name : names) {
    if (std::find(kDiagnosticNames.begin(), kDiagnosticNames.end(), name) == kDiagnosticNames.end()) {
      throw ConfigError("unknown diagnostic '" + name + "'");
    }
  }
  const auto dir = prepare_output_dir(config);
  const Ensemble ensemble(config, spectrum);
  const double tol = dc.tolerance_se;
  DiagnosticsReport report;
  std::optional<HolderEstimate> holder;

  auto run = [&](const std::string& name) {
    if (name == "sobolev") {
      for (int ell : dc.ell) {
        const auto mc = ensemble.mean([ell](const WaveFunction& psi) { return sobolev_sum(psi, ell); });
        const auto& model = spec.model();
        const double expectation = model.fourier_multiplicity() * expected_sum(spec, [&](const Mode& m) {
          const double k = model.mode_norm(m.index);
          return std::pow(k * k, ell) * ensemble.second_moment(m.weight) / m.weight;
        });
        auto entry = compared(mc, expectation, tol);
        entry.parameters["ell"] = ell;
        report.add(label(name, "ell", ell), entry);
      }
    } else if (name == "exp_weighted") {
      for (double alpha : dc.alpha) {
        const auto mc = ensemble.mean([alpha](const WaveFunction& psi) { return exp_weighted_sum(psi, alpha); });
        const auto& model = spec.model();
        const double expectation = model.fourier_multiplicity() * expected_sum(spec, [&](const Mode& m) {
          return std::exp(2.0 * alpha * model.mode_norm(m.index)) * ensemble.second_moment(m.weight) / m.weight;
        });
        auto entry = compared(mc, expectation, tol);
        entry.parameters["alpha"] = alpha;
        report.add(label(name, "alpha", alpha), entry);
      }
    } else if (name == "domain_power") {
      for (int ell : dc.ell) {
        if (ell < 1) continue;
        const auto mc = ensemble.mean([ell](const WaveFunction& psi) { return domain_power_sum(psi, ell); });
        const double expectation = expected_sum(spec, [&](const Mode& m) {
          return std::pow(m.energy, 2 * ell) * ensemble.second_moment(m.weight) / m.weight;
        });
        auto entry = compared(mc, expectation, tol);
        entry.parameters["ell"] = ell;
        report.add(label(name, "ell", ell), entry);
      }
    } else if (name == "analytic_vector") {
      const double eps = dc.epsilon.value_or(spec.beta() / 4.0);
      const auto mc = ensemble.mean([eps](const WaveFunction& psi) { return analytic_vector_sum(psi, eps); });
      DiagnosticEntry entry;
      entry.value = mc.mean;
      entry.standard_error = mc.standard_error;
      if (ensemble.kind() == SamplerKind::g) {
        entry = compared(mc, analytic_vector_expectation(spec, eps), tol);
      }
      entry.parameters["epsilon"] = eps;
      entry.flags["in_regime"] = analytic_vector_in_regime(spec, eps);
      report.add(label(name, "epsilon", eps), entry);
    } else if (name == "theorem1" || name == "theorem1_analytic") {
      if (!spec.model().has_index_norm()) throw ConfigError(name + " needs a circle or box model");
      const auto doubled = thermalize_to_cutoff(spec.model(), spec.beta(), 2 * spec.cutoff());
      const bool analytic = name == "theorem1_analytic";
      const std::vector<double> params =
          analytic ? dc.alpha : std::vector<double>(dc.ell.begin(), dc.ell.end());
      for (double param : params) {
        const double base = analytic ? theorem1_analytic_condition(spec, param)
                                     : theorem1_condition(spec, static_cast<int>(param));
        const double wide = analytic ? theorem1_analytic_condition(*doubled, param)
                                     : theorem1_condition(*doubled, static_cast<int>(param));
        DiagnosticEntry entry;
        entry.value = base;
        entry.parameters[analytic ? "alpha" : "ell"] = param;
        entry.parameters["doubled_cutoff_value"] = wide;
        entry.parameters["relative_change"] = relative_change(wide, base);
        entry.flags["pass"] = relative_change(wide, base) < 1e-8;
        report.add(label(name, analytic ? "alpha" : "ell", param), entry);
      }
    } else if (name == "gaussian_modulus") {
      const auto mc = sample_gaussian_modulus(dc.sigma, config.samples, config.seed);
      auto entry = compared(mc, gaussian_modulus_moment(dc.sigma), tol);
      entry.parameters["sigma"] = dc.sigma;
      report.add(label(name, "sigma", dc.sigma), entry);
    } else if (name == "increment_variance") {
      const double q = dc.q;
      for (double dq : dc.dq_grid) {
        const auto mc = ensemble.mean([q, dq](const WaveFunction& psi) {
          return std::norm(evaluate(psi, q + dq) - evaluate(psi, q));
        });
        DiagnosticEntry entry;
        entry.value = mc.mean;
        entry.standard_error = mc.standard_error;
        if (ensemble.kind() != SamplerKind::ga) {
          entry = compared(mc, increment_variance(spec, q, dq), tol);
        }
        entry.parameters["q"] = q;
        entry.parameters["dq"] = dq;
        report.add(label(name, "dq", dq), entry);
      }
    } else if (name == "holder") {
      holder = holder_fit(spectrum, dc.q, dc.dq_grid, config.samples, config.seed);
      DiagnosticEntry entry;
      entry.value = holder->degenerate ? 0.0 : holder->exponent;
      entry.parameters["q"] = dc.q;
      entry.parameters["intercept"] = holder->intercept;
      entry.flags["degenerate"] = holder->degenerate;
      entry.flags["pass"] = !holder->degenerate && holder->exponent >= 0.9 && holder->exponent <= 1.1;
      report.add(name, entry);
    } else if (name == "covariance") {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = 0; i + 1 < spec.size(); ++i) pairs.emplace_back(i, i + 1);
      const auto cov = estimate_covariance(config.sampler, spectrum, config.samples, config.seed, pairs);
      double worst = 0.0;
      for (std::size_t i = 0; i < spec.size(); ++i) {
        const double expected = ensemble.second_moment(spec.mode(i).weight);
        if (cov.standard_errors[i] > 0.0) {
          worst = std::max(worst, std::abs(cov.diagonal[i] - expected) / cov.standard_errors[i]);
        }
      }
      double off = 0.0;
      for (const auto& o : cov.off_diagonal) off = std::max(off, std::abs(o.value));
      const double bound = tol / std::sqrt(static_cast<double>(cov.samples));
      DiagnosticEntry entry;
      entry.value = worst;
      entry.parameters["max_off_diagonal"] = off;
      entry.parameters["off_diagonal_bound"] = bound;
      entry.flags["pass"] = worst <= tol && off <= bound;
      report.add(name, entry);
    }
  };

  try {
    for (const auto& name : names) run(name);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  } catch (const UnsupportedModel& e) {
    throw ConfigError(e.what());
  }

  json doc;
  doc["config"] = config.document;
  doc["config_hash"] = config.hash;
  doc["spectrum_hash"] = hash_hex(spec.hash());
  doc["sampler"] = to_string(ensemble.kind());
  doc["samples"] = ensemble.samples();
  doc["seed"] = config.seed;
  doc["diagnostics"] = report_to_json(report);
  write_file(dir / "report.json", doc.dump(2) + "\n");
  if (holder) {
    std::ostringstream csv;
    csv << "# " << json{{"config_hash", config.hash}}.dump() << '\n';
    write_holder_csv(csv, *holder);
    write_file(dir / "holder.csv", csv.str());
  }
  for (const auto& [name, entry] : report.entries()) {
    const auto pass = entry.flags.find("pass");
    log << name << ' ' << format_double(entry.value);
    if (pass != entry.flags.end()) log << (pass->second ? " pass" : " FAIL");
    log << '\n';
  }
}

void cmd_bohm(const ExperimentConfig& config, std::ostream& log) {
  const SpectrumPtr spectrum = build_spectrum(config);
  const auto& model = spectrum->model();
  if (!model.has_eigenfunctions()) throw ConfigError("Bohmian trajectories need a circle or box model");
  const BohmConfig& bc = config.bohm;

  std::optional<WaveFunction> psi;
  switch (bc.source) {
    case PsiSource::sample:
      psi = sample(config.sampler, spectrum, {config.seed, 0});
      break;
    case PsiSource::mode: {
      const auto i = spectrum->find(ModeIndex{bc.mode});
      if (!i) throw ConfigError("requested mode is not retained by the spectrum");
      psi = WaveFunction::eigenstate(spectrum, *i);
      break;
    }
    case PsiSource::file: {
      std::ifstream in(bc.path);
      if (!in) throw IoError("cannot read coefficient file '" + bc.path + "'");
      try {
        psi = read_wave_function_csv(in, spectrum);
      } catch (const InvalidParameter& e) {
        throw ConfigError("'" + bc.path + "': " + e.what());
      }
      break;
    }
  }

  const int dims = model.configuration_dimension();
  std::vector<std::vector<double>> q0 = bc.q0;
  if (q0.empty()) {
    const double centre = model.kind() == ModelKind::box ? std::numbers::pi / 2.0 : std::numbers::pi;
    q0.emplace_back(dims, centre);
  }
  std::vector<double> t_grid = bc.t_grid;
  if (t_grid.empty()) {
    for (int k = 0; k <= 10; ++k) t_grid.push_back(0.1 * k);
  }
  for (const auto& q : q0) {
    if (!model.contains(q)) throw ConfigError("initial point outside the configuration space");
  }

  const auto dir = prepare_output_dir(config);
  std::vector<Trajectory> trajectories(q0.size());
  try {
    parallel_for(q0.size(), [&](std::size_t i) {
      try {
        trajectories[i] = integrate_trajectory(*psi, q0[i], t_grid, bc.masses, bc.options);
      } catch (const NodeError& e) {
        trajectories[i].status = TrajectoryStatus::node_abort;
        trajectories[i].message = e.what();
        trajectories[i].seed = psi->seed();
        trajectories[i].spectrum_hash = spectrum->hash();
      }
    });
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }

  json header = provenance_header(config);
  std::ostringstream psi_csv;
  write_wave_function_csv(psi_csv, *psi, header);
  write_file(dir / "psi.csv", psi_csv.str());
  std::size_t aborted = 0;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    json footer = header;
    footer["q0"] = q0[i];
    std::ostringstream csv;
    write_trajectory_csv(csv, trajectories[i], footer);
    write_file(dir / numbered("trajectory", i), csv.str());
    if (trajectories[i].status != TrajectoryStatus::completed) ++aborted;
  }
  log << "wrote " << trajectories.size() << " trajectories to " << dir.string() << " (" << aborted
      << " aborted)\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermal random wave functions: sampling and regularity diagnostics", "gap-thermal"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out_dir;
  std::vector<CLI::App*> commands;
  for (const char* name : {"model", "sample", "diagnose", "bohm"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
    sub->add_option("--beta", beta, "Override inverse temperature");
    sub->add_option("--seed", seed, "Override seed");
    sub->add_option("--samples", samples, "Override sample count");
    sub->add_option("--out", out_dir, "Override output directory");
    commands.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    const ExperimentConfig config = load_config(config_path, {beta, seed, samples, out_dir});
    if (commands[0]->parsed()) cmd_model(config, out);
    if (commands[1]->parsed()) cmd_sample(config, err);
    if (commands[2]->parsed()) cmd_diagnose(config, err);
    if (commands[3]->parsed()) cmd_bohm(config, err);
    return kExitSuccess;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace gapthermal::cli
