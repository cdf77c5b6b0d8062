#include "qkdcert/boundary.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qkdcert/errors.hpp"

namespace qkdcert {

namespace {

struct AxisInfo {
  SweepAxis axis;
  const char* name;
  double domain_min;
  double domain_max;
};

constexpr std::array<AxisInfo, 6> kAxes{{
    {SweepAxis::delta, "delta", 0.0, 1.0},
    {SweepAxis::delta_over_q, "delta_over_q", 0.0, 1.0},
    {SweepAxis::eta_z, "eta_z", 0.0, 1.0},
    {SweepAxis::epsilon_z, "epsilon_z", 0.0, 1.0},
    {SweepAxis::delta_x, "delta_x", 0.0, 1.0},
    {SweepAxis::delta_z, "delta_z", 0.0, 1.0},
}};

const AxisInfo& info(SweepAxis axis) {
  for (const AxisInfo& a : kAxes) {
    if (a.axis == axis) return a;
  }
  throw std::invalid_argument("sweep: unknown axis");
}

// Every tunable the sweep model knows about; q is fixed-only.
struct ParamSet {
  double q = 1.0;
  double delta = 0.0;
  double delta_x = 0.0;
  double delta_z = 0.0;
  double delta_over_q = 0.0;
  double eta_z = 1.0;
  double epsilon_z = 0.0;
};

double* slot(ParamSet& p, const std::string& name) {
  if (name == "q") return &p.q;
  if (name == "delta") return &p.delta;
  if (name == "delta_x") return &p.delta_x;
  if (name == "delta_z") return &p.delta_z;
  if (name == "delta_over_q") return &p.delta_over_q;
  if (name == "eta_z") return &p.eta_z;
  if (name == "epsilon_z") return &p.epsilon_z;
  return nullptr;
}

bool axis_allowed(SweepAxis axis, bool symmetric) {
  if (symmetric) {
    return axis != SweepAxis::delta_x && axis != SweepAxis::delta_z &&
           axis != SweepAxis::epsilon_z;
  }
  return axis != SweepAxis::delta;
}

double grid_value(const AxisRange& range, int i, int resolution) {
  if (i == resolution - 1) return range.max;
  return range.min +
         (range.max - range.min) * static_cast<double>(i) /
             static_cast<double>(resolution - 1);
}

// Appends one value with 9 significant digits.
void put9(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  os << buf;
}

}  // namespace

const char* to_string(SweepAxis axis) { return info(axis).name; }

SweepAxis sweep_axis_from_string(const std::string& name) {
  for (const AxisInfo& a : kAxes) {
    if (name == a.name) return a.axis;
  }
  throw std::invalid_argument("sweep: unknown axis name '" + name + "'");
}

void SweepSpec::validate() const {
  if (axis_x == axis_y) {
    throw std::invalid_argument("sweep: axis_x and axis_y must differ");
  }
  if (resolution < 2) {
    throw std::invalid_argument("sweep: resolution must be at least 2");
  }
  const auto check_axis = [&](SweepAxis axis, const AxisRange& range,
                              const char* which) {
    const AxisInfo& a = info(axis);
    if (!axis_allowed(axis, symmetric)) {
      throw std::invalid_argument(
          std::string("sweep: axis ") + a.name +
          (symmetric ? " requires symmetric = false"
                     : " requires symmetric = true"));
    }
    if (!(range.min <= range.max)) {
      throw std::invalid_argument(std::string("sweep: empty ") + which +
                                  " range");
    }
    if (range.min < a.domain_min || range.max > a.domain_max) {
      throw std::invalid_argument(std::string("sweep: ") + which +
                                  " range outside the domain of " + a.name);
    }
  };
  check_axis(axis_x, range_x, "x");
  check_axis(axis_y, range_y, "y");

  ParamSet probe;
  for (const auto& [name, value] : fixed) {
    if (slot(probe, name) == nullptr) {
      throw std::invalid_argument("sweep: unknown fixed parameter '" + name +
                                  "'");
    }
    if (name == to_string(axis_x) || name == to_string(axis_y)) {
      throw std::invalid_argument("sweep: parameter '" + name +
                                  "' is already an axis");
    }
    if (!std::isfinite(value)) {
      throw std::invalid_argument("sweep: fixed parameter '" + name +
                                  "' must be finite");
    }
  }

  const auto resolved = [&](const char* name) {
    return fixed.contains(name) || name == std::string(to_string(axis_x)) ||
           name == std::string(to_string(axis_y));
  };
  if (!fixed.contains("q")) {
    throw std::invalid_argument("sweep: missing fixed parameter 'q'");
  }
  const double q = fixed.at("q");
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("sweep: q must lie in (0, 1]");
  }
  const char* required_symmetric[] = {"delta", "delta_over_q", "eta_z"};
  const char* required_general[] = {"delta_x", "delta_z", "delta_over_q",
                                    "eta_z", "epsilon_z"};
  if (symmetric) {
    for (const char* name : required_symmetric) {
      if (!resolved(name)) {
        throw std::invalid_argument(
            std::string("sweep: missing fixed parameter '") + name + "'");
      }
    }
    if (fixed.contains("delta_x") || fixed.contains("delta_z") ||
        fixed.contains("epsilon_z")) {
      throw std::invalid_argument(
          "sweep: symmetric mode ties delta_x/delta_z to delta and forces "
          "epsilon_z = 0");
    }
  } else {
    for (const char* name : required_general) {
      if (!resolved(name)) {
        throw std::invalid_argument(
            std::string("sweep: missing fixed parameter '") + name + "'");
      }
    }
    if (fixed.contains("delta")) {
      throw std::invalid_argument(
          "sweep: 'delta' is only meaningful with symmetric = true");
    }
  }

  // Delta = delta_over_q * q must stay within [0, 1/2] everywhere.
  double max_doq = 0.0;
  if (axis_x == SweepAxis::delta_over_q) {
    max_doq = range_x.max;
  } else if (axis_y == SweepAxis::delta_over_q) {
    max_doq = range_y.max;
  } else {
    max_doq = fixed.at("delta_over_q");
  }
  if (max_doq * q > 0.5 + 1e-12) {
    throw std::invalid_argument(
        "sweep: delta_over_q * q exceeds 1/2 somewhere on the grid");
  }
}

SweepSample resolve_sweep_point(const SweepSpec& spec, double x, double y) {
  ParamSet p;
  for (const auto& [name, value] : spec.fixed) *slot(p, name) = value;
  *slot(p, to_string(spec.axis_x)) = x;
  *slot(p, to_string(spec.axis_y)) = y;
  if (spec.symmetric) {
    p.delta_x = p.delta;
    p.delta_z = p.delta;
    p.epsilon_z = 0.0;
  }
  return SweepSample{
      EstimatedStats(p.q, p.q, p.q, p.delta_x, p.delta_z),
      ImperfectionParams(p.delta_over_q * p.q, p.eta_z, p.epsilon_z)};
}

std::vector<SurfacePoint> rate_surface(const SweepSpec& spec) {
  spec.validate();
  std::vector<SurfacePoint> grid;
  grid.reserve(static_cast<std::size_t>(spec.resolution) * spec.resolution);
  for (int yi = 0; yi < spec.resolution; ++yi) {
    const double y = grid_value(spec.range_y, yi, spec.resolution);
    for (int xi = 0; xi < spec.resolution; ++xi) {
      const double x = grid_value(spec.range_x, xi, spec.resolution);
      try {
        const SweepSample sample = resolve_sweep_point(spec, x, y);
        const RateCertificate cert =
            certify(sample.stats, sample.imperfections);
        grid.push_back({x, y, cert.rate, true});
      } catch (const inconsistent_statistics&) {
        grid.push_back(
            {x, y, std::numeric_limits<double>::quiet_NaN(), false});
      }
    }
  }
  return grid;
}

std::vector<BoundaryPoint> trace_boundary(const SweepSpec& spec) {
  spec.validate();
  constexpr double kWidthTol = 1e-12;
  constexpr double kRateTol = 1e-9;

  const auto positive_at = [&](double x, double y) {
    try {
      const SweepSample sample = resolve_sweep_point(spec, x, y);
      return certify(sample.stats, sample.imperfections).positive;
    } catch (const inconsistent_statistics&) {
      return false;  // conservatively non-positive
    }
  };
  const auto rate_at = [&](double x, double y) {
    try {
      const SweepSample sample = resolve_sweep_point(spec, x, y);
      return certify(sample.stats, sample.imperfections).rate;
    } catch (const inconsistent_statistics&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  std::vector<BoundaryPoint> points;
  for (int yi = 0; yi < spec.resolution; ++yi) {
    const double y = grid_value(spec.range_y, yi, spec.resolution);
    double prev_x = grid_value(spec.range_x, 0, spec.resolution);
    bool prev_pos = positive_at(prev_x, y);
    for (int xi = 1; xi < spec.resolution; ++xi) {
      const double cur_x = grid_value(spec.range_x, xi, spec.resolution);
      const bool cur_pos = positive_at(cur_x, y);
      if (cur_pos != prev_pos) {
        double lo = prev_x;
        double hi = cur_x;
        const bool lo_pos = prev_pos;
        while (hi - lo > kWidthTol) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          if (positive_at(mid, y) == lo_pos) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        const double xb = 0.5 * (lo + hi);
        const double r = rate_at(xb, y);
        // A surviving |R| means the sign change is a jump (validity cutoff),
        // not a zero of the rate; such crossings are not boundary points.
        if (std::isfinite(r) && std::abs(r) <= kRateTol) {
          points.push_back({y, xb});
        }
      }
      prev_pos = cur_pos;
      prev_x = cur_x;
    }
  }
  return points;
}

void write_surface_csv(std::ostream& os, const std::vector<SurfacePoint>& pts) {
  os << "x,y,rate\n";
  for (const SurfacePoint& p : pts) {
    put9(os, p.x);
    os << ',';
    put9(os, p.y);
    os << ',';
    if (p.feasible) {
      put9(os, p.rate);
    } else {
      os << "nan";
    }
    os << '\n';
  }
}

void write_boundary_csv(std::ostream& os,
                        const std::vector<BoundaryPoint>& pts) {
  os << "y,x_boundary\n";
  for (const BoundaryPoint& p : pts) {
    put9(os, p.y);
    os << ',';
    put9(os, p.x_boundary);
    os << '\n';
  }
}

}  // namespace qkdcert
