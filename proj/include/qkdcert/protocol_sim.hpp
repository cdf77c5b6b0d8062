#pragma once

#include <cstdint>
#include <optional>

#include "qkdcert/rate_engine.hpp"

namespace qkdcert {

// Qubit source. The Z-basis states are ideal; x_tilt squeezes the two X-basis
// encodings toward |0> by x_tilt radians each, which makes the average states
// of the two bases differ (a simple basis-dependence mechanism).
struct SourceModel {
  Probability p_basis_z{0.5};  // Alice's probability of choosing the Z basis
  Probability p_z{0.5};        // squared amplitude of bit 0 in the Z basis
  Probability p_x{0.5};        // squared amplitude of bit 0 in the X basis
  double x_tilt = 0.0;         // radians, in [0, pi/4]
};

struct ChannelModel {
  Probability transmittance{1.0};
  Probability depolarizing{0.0};  // replace by the maximally mixed state
  double rotation = 0.0;          // fixed misalignment, radians
};

// Threshold detectors with per-outcome efficiencies and independent dark
// counts per gate. Coincidence clicks yield a uniformly random bit (fixed
// double-click rule).
struct DetectorModel {
  Probability eta0{1.0};
  Probability eta1{1.0};
  Probability dark{0.0};
};

enum class EveKind { none, intercept_resend, blind };

struct EveStrategy {
  EveKind kind = EveKind::none;
  Probability blind_fraction{0.0};  // used when kind == blind
};

struct ProtocolConfig {
  std::uint64_t n = 1;  // number of signals
  std::uint64_t seed = 0;
  SourceModel source;
  ChannelModel channel;
  DetectorModel detector;
  EveStrategy eve;

  void validate() const;  // throws std::invalid_argument
};

// Raw tallies for one (alice basis, bob basis) cell. Bits: n0 and n1 count
// Bob's nonvacuum outcomes; errors counts nonvacuum outcomes differing from
// Alice's bit.
struct CellTally {
  std::uint64_t total = 0;
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  std::uint64_t vacuum = 0;
  std::uint64_t errors = 0;

  std::uint64_t nonvacuum() const { return n0 + n1; }
  bool operator==(const CellTally&) const = default;
};

// Basis index convention: 0 = Z, 1 = X.
struct TallyTable {
  CellTally cells[2][2];  // [alice basis][bob basis]

  CellTally& cell(int a, int b) { return cells[a][b]; }
  const CellTally& cell(int a, int b) const { return cells[a][b]; }
  bool operator==(const TallyTable&) const = default;
};

// The (Delta, eta_Z) implied by the configured models, for honest
// certification of a simulated setup.
struct DerivedImperfections {
  double delta = 0.0;
  double eta_z = 1.0;
};

struct SimulationReport {
  TallyTable counts;
  EstimatedStats stats;  // consistent with counts exactly
  DerivedImperfections derived_imperfections;
  std::optional<RateCertificate> certificate;
};

// Fractions and error rates from raw tallies. Throws insufficient_statistics
// when a required denominator cell is empty.
EstimatedStats estimate_stats(const TallyTable& counts);

// Delta via the source density operators, eta_Z via the efficiency ratio,
// scaled by (1 - blind_fraction) when blinding is active.
DerivedImperfections derived_imperfections(const ProtocolConfig& config);

// Average states emitted in each basis by a configured source.
HermitianOperator source_rho_z(const SourceModel& source);
HermitianOperator source_rho_x(const SourceModel& source);

// Runs the protocol for config.n signals. The result is a pure function of
// (config, seed): per-signal randomness comes from a counter-based generator
// keyed by (seed, signal index, draw tag), so any thread count yields
// bit-identical tallies. threads == 0 uses all hardware threads.
SimulationReport run_protocol(const ProtocolConfig& config,
                              unsigned threads = 0);

// run_protocol -> estimate_stats -> certify. The first overload certifies
// against the honest derived imperfections with epsilon_z = 0 (the simulator
// has no leakage mechanism); the second uses caller-supplied parameters.
SimulationReport simulate_and_certify(const ProtocolConfig& config,
                                      unsigned threads = 0);
SimulationReport simulate_and_certify(const ProtocolConfig& config,
                                      const ImperfectionParams& imperfections,
                                      unsigned threads = 0);

}  // namespace qkdcert
