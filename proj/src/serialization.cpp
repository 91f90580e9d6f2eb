#include "gapthermal/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "gapthermal/errors.hpp"
#include "gapthermal/field.hpp"
#include "gapthermal/rng.hpp"

namespace gapthermal {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, sep)) out.push_back(cell);
  return out;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidParameter("malformed number '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& text) {
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidParameter("malformed integer '" + text + "'");
  }
  return value;
}

nlohmann::json read_comment_json(const std::string& line) {
  if (line.rfind("# ", 0) != 0) throw InvalidParameter("missing JSON header line");
  try {
    return nlohmann::json::parse(line.substr(2));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed JSON header: ") + e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash_hex(hash);
}

std::string hash_hex(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

nlohmann::json spectrum_to_json(const ThermalSpectrum& spectrum) {
  const auto& model = spectrum.model();
  nlohmann::json doc;
  doc["kind"] = to_string(model.kind());
  doc["N"] = model.particles();
  doc["d"] = model.dimension();
  doc["m"] = model.mass();
  doc["hbar"] = model.hbar();
  doc["beta"] = spectrum.beta();
  doc["tail_mass"] = spectrum.tail_mass();
  doc["symmetry"] = to_string(model.symmetry());
  if (model.kind() == ModelKind::custom) doc["basis"] = to_string(model.custom_basis());
  doc["Z_trunc"] = spectrum.partition_sum();
  doc["tail_bound"] = spectrum.tail_bound();
  doc["cutoff"] = spectrum.cutoff();
  doc["energy_offset"] = spectrum.energy_offset();
  doc["spectrum_hash"] = hash_hex(spectrum.hash());
  auto& modes = doc["modes"] = nlohmann::json::array();
  for (const Mode& mode : spectrum.modes()) {
    modes.push_back({{"index", mode.index.components}, {"energy", mode.energy}, {"weight", mode.weight}});
  }
  return doc;
}

void write_wave_function_csv(std::ostream& out, const WaveFunction& psi, const nlohmann::json& extra) {
  nlohmann::json header = extra;
  header["provenance"] = to_string(psi.provenance());
  header["generator"] = kGeneratorName;
  header["spectrum_hash"] = hash_hex(psi.spectrum().hash());
  if (psi.seed()) {
    header["seed"] = psi.seed()->seed;
    header["stream"] = psi.seed()->stream;
  }
  if (psi.size_biased_mode()) header["size_biased_mode"] = *psi.size_biased_mode();
  out << "# " << header.dump() << '\n';

  const int dims = psi.model().index_dimension();
  for (int j = 0; j < dims; ++j) out << 'n' << j << ',';
  out << "energy,re,im\n";
  const auto modes = psi.spectrum().modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (int c : modes[i].index.components) out << c << ',';
    out << format_double(modes[i].energy) << ',' << format_double(psi.coefficient(i).real()) << ','
        << format_double(psi.coefficient(i).imag()) << '\n';
  }
}

WaveFunction read_wave_function_csv(std::istream& in, const SpectrumPtr& spectrum) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("empty coefficient file");
  const nlohmann::json header = read_comment_json(line);
  if (header.value("spectrum_hash", std::string()) != hash_hex(spectrum->hash())) {
    throw InvalidParameter("coefficient file was written for a different spectrum");
  }
  if (!std::getline(in, line)) throw InvalidParameter("missing column line");

  const int dims = spectrum->model().index_dimension();
  std::vector<Complex> coefficients;
  coefficients.reserve(spectrum->size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != dims + 3) throw InvalidParameter("malformed coefficient row");
    const std::size_t i = coefficients.size();
    if (i >= spectrum->size()) throw InvalidParameter("too many coefficient rows");
    for (int j = 0; j < dims; ++j) {
      if (parse_int(cells[j]) != spectrum->mode(i).index[j]) {
        throw InvalidParameter("coefficient rows are not in spectrum order");
      }
    }
    coefficients.emplace_back(parse_double(cells[dims + 1]), parse_double(cells[dims + 2]));
  }
  const Provenance provenance = parse_provenance(header.value("provenance", std::string("derived")));
  WaveFunction psi(spectrum, std::move(coefficients), provenance);
  if (header.contains("seed")) {
    psi.with_seed({header.at("seed").get<std::uint64_t>(), header.value("stream", std::uint64_t{0})});
  }
  if (header.contains("size_biased_mode")) {
    psi.with_size_biased_mode(header.at("size_biased_mode").get<std::size_t>());
  }
  return psi;
}

nlohmann::json report_to_json(const DiagnosticsReport& report) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [name, entry] : report.entries()) {
    nlohmann::json item;
    item["value"] = entry.value;
    item["expectation"] = entry.expectation ? nlohmann::json(*entry.expectation) : nlohmann::json();
    item["stderr"] = entry.standard_error ? nlohmann::json(*entry.standard_error) : nlohmann::json();
    item["params"] = entry.parameters;
    for (const auto& [flag, value] : entry.flags) item[flag] = value;
    doc[name] = std::move(item);
  }
  return doc;
}

void write_holder_csv(std::ostream& out, const HolderEstimate& estimate) {
  out << "dq,rms\n";
  for (std::size_t k = 0; k < estimate.dq_grid.size(); ++k) {
    out << format_double(estimate.dq_grid[k]) << ',' << format_double(estimate.rms_increments[k])
        << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const nlohmann::json& extra) {
  const std::size_t dims = trajectory.states.empty() ? 0 : trajectory.states.front().q.size();
  out << 't';
  for (std::size_t j = 0; j < dims; ++j) out << ",q" << j;
  out << ",density,step\n";
  for (const auto& state : trajectory.states) {
    out << format_double(state.t);
    for (double x : state.q) out << ',' << format_double(x);
    out << ',' << format_double(state.density) << ',' << format_double(state.step) << '\n';
  }
  nlohmann::json footer = extra;
  footer["status"] = to_string(trajectory.status);
  if (!trajectory.message.empty()) footer["message"] = trajectory.message;
  footer["spectrum_hash"] = hash_hex(trajectory.spectrum_hash);
  if (trajectory.seed) {
    footer["seed"] = trajectory.seed->seed;
    footer["stream"] = trajectory.seed->stream;
  }
  footer["min_density"] = trajectory.min_density;
  footer["accepted_steps"] = trajectory.accepted_steps;
  footer["rejected_steps"] = trajectory.rejected_steps;
  out << "# " << footer.dump() << '\n';
}

void write_evaluation_csv(std::ostream& out, const WaveFunction& psi,
                          std::span<const std::vector<double>> points, bool with_gradient) {
  const int dims = psi.model().configuration_dimension();
  for (int j = 0; j < dims; ++j) out << 'q' << j << ',';
  out << "re,im";
  if (with_gradient) {
    for (int j = 0; j < dims; ++j) out << ",d" << j << "_re,d" << j << "_im";
  }
  out << '\n';
  for (const auto& q : points) {
    const FieldJet jet = evaluate_jet(psi.spectrum(), psi.coefficients(), q);
    for (double x : q) out << format_double(x) << ',';
    out << format_double(jet.value.real()) << ',' << format_double(jet.value.imag());
    if (with_gradient) {
      for (const Complex& g : jet.gradient) {
        out << ',' << format_double(g.real()) << ',' << format_double(g.imag());
      }
    }
    out << '\n';
  }
}

}  // namespace gapthermal
