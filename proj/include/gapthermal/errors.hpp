#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gapthermal {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A requested cutoff or enumeration would exceed the configured mode budget.
class ResourceLimit : public Error {
public:
  using Error::Error;
};

/// The operation needs model structure (eigenfunctions, index norms, ...) that
/// this model does not provide.
class UnsupportedModel : public Error {
public:
  using Error::Error;
};

/// Complex evaluation left the strip where the truncated series is reliable.
class StripDivergence : public Error {
public:
  StripDivergence(const std::string& what, double tail_estimate)
      : Error(what), tail_estimate_(tail_estimate) {}
  double tail_estimate() const noexcept { return tail_estimate_; }

private:
  double tail_estimate_;
};

/// The Bohmian velocity is undefined at a node of the wave function.
class NodeError : public Error {
public:
  NodeError(const std::string& what, std::vector<double> location, double density)
      : Error(what), location_(std::move(location)), density_(density) {}
  const std::vector<double>& location() const noexcept { return location_; }
  double density() const noexcept { return density_; }

private:
  std::vector<double> location_;
  double density_;
};

class InternalError : public Error {
public:
  using Error::Error;
};

}  // namespace gapthermal
