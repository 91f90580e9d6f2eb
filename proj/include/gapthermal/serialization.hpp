#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gapthermal/bohmian.hpp"
#include "gapthermal/diagnostics.hpp"
#include "gapthermal/wave_function.hpp"

namespace gapthermal {

/// Shortest text that reads back to the same double ("%.17g").
std::string format_double(double value);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);
std::string hash_hex(std::uint64_t hash);

/// {kind, N, d, m, hbar, beta, tail_mass, symmetry, modes: [{index, energy, weight}], ...}
nlohmann::json spectrum_to_json(const ThermalSpectrum& spectrum);

/// Coefficient CSV: a "# {json}" header line, a column line, then one row
/// per mode (index components, energy, re, im).  `extra` is merged into the header.
void write_wave_function_csv(std::ostream& out, const WaveFunction& psi,
                             const nlohmann::json& extra = nlohmann::json::object());

/// Reads a coefficient CSV written for `spectrum`; mode order and the spectrum
/// hash must match.
WaveFunction read_wave_function_csv(std::istream& in, const SpectrumPtr& spectrum);

nlohmann::json report_to_json(const DiagnosticsReport& report);

/// Hoelder fit as (dq, rms) rows.
void write_holder_csv(std::ostream& out, const HolderEstimate& estimate);

/// Rows of (t, q..., density, step) followed by a "# {json}" footer with the
/// status.  `extra` is merged into the footer.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const nlohmann::json& extra = nlohmann::json::object());

/// Point components, Re psi, Im psi and, when `with_gradient`, Re/Im of every
/// first partial derivative.
void write_evaluation_csv(std::ostream& out, const WaveFunction& psi,
                          std::span<const std::vector<double>> points, bool with_gradient);

}  // namespace gapthermal
