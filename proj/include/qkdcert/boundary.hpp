#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qkdcert/rate_engine.hpp"

namespace qkdcert {

enum class SweepAxis { delta, delta_over_q, eta_z, epsilon_z, delta_x, delta_z };

const char* to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct AxisRange {
  double min = 0.0;
  double max = 0.0;
};

// Two-parameter sweep over the certify pipeline. The detection fractions are
// a common q (the symmetric-loss assumption) supplied in `fixed`; the source
// parameter enters as delta_over_q, so Delta = delta_over_q * q. With
// symmetric = true the error rates are tied (delta_x = delta_z = delta) and
// epsilon_z is forced to zero.
struct SweepSpec {
  SweepAxis axis_x = SweepAxis::delta;
  SweepAxis axis_y = SweepAxis::delta_over_q;
  AxisRange range_x;
  AxisRange range_y;
  int resolution = 2;  // grid points per axis
  std::map<std::string, double> fixed;
  bool symmetric = true;

  void validate() const;  // throws std::invalid_argument
};

struct SurfacePoint {
  double x = 0.0;
  double y = 0.0;
  double rate = 0.0;
  bool feasible = true;  // false marks the sentinel for infeasible statistics
};

struct BoundaryPoint {
  double y = 0.0;
  double x_boundary = 0.0;
};

// The certify inputs at one grid point; exposed so emitted points can be
// re-evaluated independently.
struct SweepSample {
  EstimatedStats stats;
  ImperfectionParams imperfections;
};
SweepSample resolve_sweep_point(const SweepSpec& spec, double x, double y);

// R_Z on the full grid, y-major order.
std::vector<SurfacePoint> rate_surface(const SweepSpec& spec);

// For each y grid line, bisects along x for the zero crossings of R_Z, to
// |R_Z| <= 1e-9. Rows without a sign change emit nothing; rows with several
// crossings report all of them. Infeasible or unproven points count as
// non-positive.
std::vector<BoundaryPoint> trace_boundary(const SweepSpec& spec);

// CSV output, 9 significant digits. Headers: "x,y,rate" and "y,x_boundary".
void write_surface_csv(std::ostream& os, const std::vector<SurfacePoint>& pts);
void write_boundary_csv(std::ostream& os,
                        const std::vector<BoundaryPoint>& pts);

}  // namespace qkdcert
