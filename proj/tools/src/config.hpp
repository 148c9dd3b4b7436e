#pragma once

// Run configuration: YAML schema, unit resolution and defaults.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geophase/dynamics.hpp"
#include "geophase/integrator.hpp"
#include "geophase/model.hpp"

namespace geophase::cli {

enum class Units { kMHz, kDimensionless };
enum class PhiDotUnit { kGamma, kAbsolute };
enum class SweepKind { kCycle, kRamsey };
enum class SweepParameter { kTheta, kPhiDot };

struct ScheduleSpec {
  double theta = 0.0;
  double phi_dot = 0.0;  // as written in the file; see PhiDotUnit
  PhiDotUnit phi_dot_unit = PhiDotUnit::kGamma;
  int cycles = 1;
};

struct OutputSpec {
  std::string prefix;  // file-name prefix, empty by default
  bool svg = true;
  bool trajectory = false;
};

struct SweepSpec {
  SweepKind kind = SweepKind::kCycle;
  SweepParameter parameter = SweepParameter::kTheta;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;
};

struct RamseySpec {
  std::size_t fringe_points = 13;
};

/// Scaled, dimensionless (g = 1) parameters for the model-reduction checks.
struct ValidationSpec {
  double theta = 0.7853981633974483;
  double phi_dot_over_gamma = 0.05;
  double delta_over_g = 10.0;
  double omega_over_g = 1.0;
  std::vector<double> kappa_over_lambda{10.0, 20.0, 50.0, 100.0};
  std::size_t n_max = 1;
  std::size_t samples = 256;
  std::vector<double> full_delta_over_g{20.0, 40.0, 80.0};
  double full_horizon_lambda = 10.0;  // horizon in units of 1/lambda
  std::size_t full_n_max = 2;
  std::size_t full_samples = 2000;
};

struct RunConfig {
  std::string source;
  Units units = Units::kDimensionless;
  double omega_total = 0.0;  // angular, before splitting by theta
  PhysicalParams physical;   // angular; omega1/omega2 split by schedule.theta
  ScheduleSpec schedule;
  IntegratorConfig integrator;
  Frame frame = Frame::kLab;
  std::size_t samples = 512;
  OutputSpec output;
  std::optional<SweepSpec> sweep;
  RamseySpec ramsey;
  ValidationSpec validation;
  std::vector<std::string> warnings;

  /// 2 pi for MHz input (linear -> angular), 1 otherwise.
  double angular_scale() const;
  /// Physical parameters re-split for a different mixing angle.
  PhysicalParams physical_at(double theta) const;
  /// Steering rate in internal angular units for the given reservoir.
  double phi_dot(const ReservoirParams& r) const;
  double phi_dot_at(double raw, const ReservoirParams& r) const;
};

/// Parses and validates a YAML run configuration. Throws geophase::Error with
/// ErrorKind::kConfig naming the offending field path.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");

/// Accepts plain numbers and multiples of pi written as "pi", "pi/4", "3*pi/8", "-0.5*pi".
double parse_angle(const std::string& text);

}  // namespace geophase::cli
