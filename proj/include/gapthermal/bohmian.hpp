#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapthermal/wave_function.hpp"

namespace gapthermal {

/// |psi(q)|^2 below node_threshold * (mean of |psi|^2 over configuration
/// space) counts as a node.
inline constexpr double kDefaultNodeThreshold = 1e-10;

struct VelocitySample {
  std::vector<double> q;
  std::vector<double> velocity;
  double density;
};

/// Bohmian velocity v_j = (hbar / m_j) Im(psi^* d_j psi) / |psi|^2.  `masses`
/// holds one mass per particle (applied to its d coordinates); empty means the
/// model mass.  Throws NodeError near nodes.
VelocitySample velocity(const WaveFunction& psi, std::span<const double> q,
                        std::span<const double> masses = {},
                        double node_threshold = kDefaultNodeThreshold);

/// Free evolution c_n -> e^{-i E_n t / hbar} c_n.
WaveFunction evolve_coefficients(const WaveFunction& psi, double t);

enum class TrajectoryStatus { completed, node_abort, step_floor_abort };

std::string to_string(TrajectoryStatus status);

struct TrajectoryOptions {
  /// Accepted local error per step (max norm over coordinates).
  double step_tolerance = 1e-8;
  double initial_step = 1e-2;
  double max_step = 0.1;
  double min_step = 1e-12;
  double node_threshold = kDefaultNodeThreshold;
  std::size_t max_steps = 10'000'000;
};

struct TrajectoryState {
  std::vector<double> q;
  double t;
  double density;
  /// Last accepted step size (0 at the initial point).
  double step;
};

struct Trajectory {
  std::vector<TrajectoryState> states;
  TrajectoryStatus status = TrajectoryStatus::completed;
  std::string message;
  /// Provenance of the guiding wave function.
  std::optional<RandomSeed> seed;
  std::uint64_t spectrum_hash = 0;
  /// Step diagnostics.
  double min_density = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Integrates dQ/dt = v^{psi_t}(Q) with an adaptive Runge-Kutta-Fehlberg 4(5)
/// scheme, reporting the state at every time in `t_grid` (increasing, first
/// entry is the start time).  Stages that land near a node or outside the box
/// are rejected and the step halved; hitting the step floor aborts.  Circle
/// coordinates are reported modulo 2 pi.
Trajectory integrate_trajectory(const WaveFunction& psi, std::span<const double> q0,
                                std::span<const double> t_grid,
                                std::span<const double> masses = {},
                                TrajectoryOptions options = {});

}  // namespace gapthermal
