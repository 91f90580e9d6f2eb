#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "gapthermal/cli.hpp"
#include "gapthermal/serialization.hpp"

namespace gapthermal::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& object, const std::string& key, T fallback) {
  if (!object.contains(key) || object.at(key).is_null()) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

double positive(double value, const std::string& name) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(name + " must be positive and finite");
  return value;
}

ModelConfig parse_model(const json& node) {
  if (!node.is_object()) throw ConfigError("'model' must be an object");
  reject_unknown(node, {"kind", "N", "d", "m", "hbar", "symmetry", "basis", "weights"}, "model");
  if (!node.contains("kind")) throw ConfigError("model kind is required");
  ModelConfig model;
  try {
    model.kind = parse_model_kind(node.at("kind").get<std::string>());
    model.symmetry = parse_symmetry(get<std::string>(node, "symmetry", "none"));
    model.basis = parse_custom_basis(get<std::string>(node, "basis", "abstract"));
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  } catch (const json::exception&) {
    throw ConfigError("model kind must be a string");
  }
  model.particles = get<int>(node, "N", 1);
  model.dimension = get<int>(node, "d", 1);
  model.mass = positive(get<double>(node, "m", 1.0), "m");
  model.hbar = positive(get<double>(node, "hbar", 1.0), "hbar");
  if (node.contains("weights")) {
    const json& weights = node.at("weights");
    if (!weights.is_array()) throw ConfigError("'weights' must be an array");
    for (const json& w : weights) {
      if (!w.is_object()) throw ConfigError("each weight must be an object {label, weight[, energy]}");
      reject_unknown(w, {"label", "weight", "energy"}, "weights");
      if (!w.contains("label") || !w.contains("weight")) {
        throw ConfigError("each weight needs 'label' and 'weight'");
      }
      CustomWeight entry{get<int>(w, "label", 0), get<double>(w, "weight", 0.0), std::nullopt};
      if (w.contains("energy")) entry.energy = get<double>(w, "energy", 0.0);
      model.weights.push_back(entry);
    }
  }
  if (model.kind == ModelKind::custom && model.weights.empty()) {
    throw ConfigError("custom model needs a 'weights' list");
  }
  if (model.kind != ModelKind::custom && !model.weights.empty()) {
    throw ConfigError("'weights' only applies to custom models");
  }
  return model;
}

DiagnosticsConfig parse_diagnostics(const json& node) {
  if (!node.is_object()) throw ConfigError("'diagnostics' must be an object");
  reject_unknown(node, {"names", "ell", "alpha", "epsilon", "dq_grid", "q", "sigma", "tolerance_se", "inputs"},
                 "diagnostics");
  DiagnosticsConfig out;
  out.names = get(node, "names", out.names);
  out.ell = get(node, "ell", out.ell);
  out.alpha = get(node, "alpha", out.alpha);
  if (node.contains("epsilon") && !node.at("epsilon").is_null()) {
    out.epsilon = positive(get<double>(node, "epsilon", 0.0), "epsilon");
  }
  out.dq_grid = get(node, "dq_grid", out.dq_grid);
  out.q = get(node, "q", out.q);
  out.sigma = get(node, "sigma", out.sigma);
  out.tolerance_se = positive(get(node, "tolerance_se", out.tolerance_se), "tolerance_se");
  out.inputs = get(node, "inputs", out.inputs);
  for (int ell : out.ell) {
    if (ell < 0) throw ConfigError("ell values must be >= 0");
  }
  for (double a : out.alpha) positive(a, "alpha");
  return out;
}

BohmConfig parse_bohm(const json& node) {
  if (!node.is_object()) throw ConfigError("'bohm' must be an object");
  reject_unknown(node, {"q0", "t_grid", "masses", "psi", "step_tolerance", "max_step", "min_step", "node_threshold"},
                 "bohm");
  BohmConfig out;
  out.q0 = get(node, "q0", out.q0);
  out.t_grid = get(node, "t_grid", out.t_grid);
  out.masses = get(node, "masses", out.masses);
  out.options.step_tolerance = positive(get(node, "step_tolerance", out.options.step_tolerance), "step_tolerance");
  out.options.max_step = positive(get(node, "max_step", out.options.max_step), "max_step");
  out.options.min_step = positive(get(node, "min_step", out.options.min_step), "min_step");
  out.options.node_threshold = get(node, "node_threshold", out.options.node_threshold);
  out.options.initial_step = std::min(out.options.initial_step, out.options.max_step);
  if (node.contains("psi")) {
    const json& psi = node.at("psi");
    if (!psi.is_object()) throw ConfigError("'bohm.psi' must be an object");
    reject_unknown(psi, {"source", "mode", "path"}, "bohm.psi");
    const std::string source = get<std::string>(psi, "source", "sample");
    if (source == "sample") {
      out.source = PsiSource::sample;
    } else if (source == "mode") {
      out.source = PsiSource::mode;
      out.mode = get(psi, "mode", out.mode);
      if (out.mode.empty()) throw ConfigError("psi source 'mode' needs a 'mode' index");
    } else if (source == "file") {
      out.source = PsiSource::file;
      out.path = get<std::string>(psi, "path", "");
      if (out.path.empty()) throw ConfigError("psi source 'file' needs a 'path'");
    } else {
      throw ConfigError("unknown psi source '" + source + "'");
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(nlohmann::json document, const Overrides& overrides) {
  if (!document.is_object()) throw ConfigError("configuration must be a JSON object");
  if (overrides.beta) document["beta"] = *overrides.beta;
  if (overrides.seed) document["seed"] = *overrides.seed;
  if (overrides.samples) document["samples"] = *overrides.samples;
  if (overrides.out) document["output_dir"] = *overrides.out;

  reject_unknown(document,
                 {"model", "beta", "tail_mass", "sampler", "samples", "seed", "diagnostics", "bohm", "output_dir"},
                 "configuration");
  ExperimentConfig config;
  if (!document.contains("model")) throw ConfigError("'model' with a kind is required");
  config.model = parse_model(document.at("model"));
  if (!document.contains("beta") || document.at("beta").is_null()) throw ConfigError("'beta' is required");
  config.beta = positive(get<double>(document, "beta", 0.0), "beta");
  config.tail_mass = positive(get(document, "tail_mass", config.tail_mass), "tail_mass");
  try {
    config.sampler = parse_sampler_kind(get<std::string>(document, "sampler", "GAP"));
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (document.contains("samples")) {
    const json& samples = document.at("samples");
    if (!samples.is_number_integer() || samples.get<long long>() < 1) {
      throw ConfigError("'samples' must be a positive integer");
    }
  }
  config.samples = get(document, "samples", config.samples);
  config.seed = get(document, "seed", config.seed);
  if (document.contains("diagnostics")) config.diagnostics = parse_diagnostics(document.at("diagnostics"));
  if (document.contains("bohm")) config.bohm = parse_bohm(document.at("bohm"));
  config.output_dir = get(document, "output_dir", config.output_dir);
  if (config.output_dir.empty()) throw ConfigError("'output_dir' must not be empty");

  config.hash = fnv1a_hex(document.dump());
  config.document = std::move(document);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read configuration '" + path.string() + "'");
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("configuration is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(std::move(document), overrides);
}

SpectrumPtr build_spectrum(const ExperimentConfig& config) {
  const ModelConfig& m = config.model;
  try {
    switch (m.kind) {
      case ModelKind::circle:
        return thermalize(SpectralModel::circle(m.mass, m.hbar), config.beta, config.tail_mass);
      case ModelKind::box:
        return thermalize(SpectralModel::box(m.particles, m.dimension, m.mass, m.hbar, m.symmetry),
                          config.beta, config.tail_mass);
      case ModelKind::custom:
        return build_custom_model(m.weights, m.basis, m.mass, m.hbar).spectrum;
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  } catch (const UnsupportedModel& e) {
    throw ConfigError(e.what());
  } catch (const ResourceLimit& e) {
    throw ConfigError(e.what());
  }
  throw InternalError("unhandled model kind");
}

}  // namespace gapthermal::cli
