#include "qkdcert/protocol_sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qkdcert/counter_rng.hpp"
#include "qkdcert/errors.hpp"

namespace qkdcert {

namespace {

constexpr double kPi = std::numbers::pi;

// One independent uniform per decision per signal.
enum DrawTag : std::uint64_t {
  kAliceBasis = 0,
  kAliceBit,
  kLoss,
  kDepolarize,
  kEveBasis,
  kEveOutcome,
  kBlind,
  kBobBasis,
  kProjection,
  kSignalClick,
  kDark0,
  kDark1,
  kCoincidenceBit,
};

// All states in this model live on the x-z great circle of the Bloch sphere:
// angle 0 is |0>, pi is |1>, pi/2 is |+>, 3pi/2 is |->. Depolarized signals
// carry the mixed flag instead of an angle.
struct Photon {
  bool vacuum = false;
  bool mixed = false;
  double angle = 0.0;
};

// Measurement axis for outcome 0 of each basis (0 = Z, 1 = X).
constexpr double kOutcome0Axis[2] = {0.0, kPi / 2.0};

int project(const Photon& photon, int basis, double u) {
  if (photon.mixed) return u < 0.5 ? 0 : 1;
  const double amp = std::cos(0.5 * (photon.angle - kOutcome0Axis[basis]));
  return u < amp * amp ? 0 : 1;
}

double source_angle(const SourceModel& source, int basis, int bit) {
  if (basis == 0) return bit == 0 ? 0.0 : kPi;
  return bit == 0 ? kPi / 2.0 - source.x_tilt : 3.0 * kPi / 2.0 + source.x_tilt;
}

struct SignalOutcome {
  int a = 0;
  int b = 0;
  int alice_bit = 0;
  int bob_bit = 0;
  bool vacuum = false;
};

SignalOutcome simulate_signal(const ProtocolConfig& cfg, std::uint64_t index) {
  const auto u = [&](DrawTag tag) {
    return uniform_draw(cfg.seed, index, tag);
  };

  SignalOutcome out;
  out.a = u(kAliceBasis) < cfg.source.p_basis_z.value() ? 0 : 1;
  const double p_bit0 =
      out.a == 0 ? cfg.source.p_z.value() : cfg.source.p_x.value();
  out.alice_bit = u(kAliceBit) < p_bit0 ? 0 : 1;

  Photon photon;
  photon.angle = source_angle(cfg.source, out.a, out.alice_bit);

  // Channel: loss, misalignment, depolarization.
  if (u(kLoss) >= cfg.channel.transmittance.value()) photon.vacuum = true;
  if (!photon.vacuum) {
    photon.angle += cfg.channel.rotation;
    if (u(kDepolarize) < cfg.channel.depolarizing.value()) photon.mixed = true;
  }

  bool blinded = false;
  switch (cfg.eve.kind) {
    case EveKind::none:
      break;
    case EveKind::intercept_resend:
      if (!photon.vacuum) {
        const int eve_basis = u(kEveBasis) < 0.5 ? 0 : 1;
        const int eve_bit = project(photon, eve_basis, u(kEveOutcome));
        photon = Photon{};
        photon.angle = kOutcome0Axis[eve_basis] + (eve_bit == 0 ? 0.0 : kPi);
      }
      break;
    case EveKind::blind:
      blinded = u(kBlind) < cfg.eve.blind_fraction.value();
      break;
  }

  // Bob: the photonic click goes through the per-outcome efficiency; blinding
  // suppresses it. Dark counts fire independently per detector per gate.
  out.b = u(kBobBasis) < 0.5 ? 0 : 1;
  bool click[2] = {false, false};
  if (!photon.vacuum && !blinded) {
    const int bit = project(photon, out.b, u(kProjection));
    const double eff = bit == 0 ? cfg.detector.eta0.value()
                                : cfg.detector.eta1.value();
    if (u(kSignalClick) < eff) click[bit] = true;
  }
  if (u(kDark0) < cfg.detector.dark.value()) click[0] = true;
  if (u(kDark1) < cfg.detector.dark.value()) click[1] = true;

  if (!click[0] && !click[1]) {
    out.vacuum = true;
  } else if (click[0] && click[1]) {
    out.bob_bit = u(kCoincidenceBit) < 0.5 ? 0 : 1;
  } else {
    out.bob_bit = click[1] ? 1 : 0;
  }
  return out;
}

void accumulate(TallyTable& table, const SignalOutcome& s) {
  CellTally& cell = table.cell(s.a, s.b);
  ++cell.total;
  if (s.vacuum) {
    ++cell.vacuum;
    return;
  }
  if (s.bob_bit == 0) {
    ++cell.n0;
  } else {
    ++cell.n1;
  }
  if (s.bob_bit != s.alice_bit) ++cell.errors;
}

void merge(TallyTable& into, const TallyTable& from) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      CellTally& dst = into.cell(a, b);
      const CellTally& src = from.cell(a, b);
      dst.total += src.total;
      dst.n0 += src.n0;
      dst.n1 += src.n1;
      dst.vacuum += src.vacuum;
      dst.errors += src.errors;
    }
  }
}

Eigen::MatrixXcd pure_state(double angle) {
  Eigen::Vector2cd state(std::cos(0.5 * angle), std::sin(0.5 * angle));
  return state * state.adjoint();
}

}  // namespace

void ProtocolConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be at least 1");
  if (!(source.x_tilt >= 0.0 && source.x_tilt <= kPi / 4.0)) {
    throw std::invalid_argument("config: x_tilt must lie in [0, pi/4]");
  }
  if (!std::isfinite(channel.rotation)) {
    throw std::invalid_argument("config: rotation must be finite");
  }
}

HermitianOperator source_rho_z(const SourceModel& source) {
  const double p = source.p_z.value();
  return HermitianOperator(p * pure_state(0.0) + (1.0 - p) * pure_state(kPi));
}

HermitianOperator source_rho_x(const SourceModel& source) {
  const double p = source.p_x.value();
  return HermitianOperator(
      p * pure_state(kPi / 2.0 - source.x_tilt) +
      (1.0 - p) * pure_state(3.0 * kPi / 2.0 + source.x_tilt));
}

EstimatedStats estimate_stats(const TallyTable& counts) {
  const CellTally& xx = counts.cell(1, 1);
  const CellTally& zx = counts.cell(0, 1);
  const CellTally& zz = counts.cell(0, 0);
  if (xx.total == 0) {
    throw insufficient_statistics("estimate_stats: empty a=X, b=X cell");
  }
  if (zx.total == 0) {
    throw insufficient_statistics("estimate_stats: empty a=Z, b=X cell");
  }
  if (zz.total == 0) {
    throw insufficient_statistics("estimate_stats: empty a=Z, b=Z cell");
  }
  if (xx.nonvacuum() == 0) {
    throw insufficient_statistics(
        "estimate_stats: no nonvacuum events for delta_x (a=X, b=X)");
  }
  if (zz.nonvacuum() == 0) {
    throw insufficient_statistics(
        "estimate_stats: no nonvacuum events for delta_z (a=Z, b=Z)");
  }
  return EstimatedStats(
      static_cast<double>(xx.nonvacuum()) / static_cast<double>(xx.total),
      static_cast<double>(zz.nonvacuum()) / static_cast<double>(zz.total),
      static_cast<double>(zx.nonvacuum()) / static_cast<double>(zx.total),
      static_cast<double>(xx.errors) / static_cast<double>(xx.nonvacuum()),
      static_cast<double>(zz.errors) / static_cast<double>(zz.nonvacuum()));
}

DerivedImperfections derived_imperfections(const ProtocolConfig& config) {
  DerivedImperfections derived;
  derived.delta =
      basis_dependence(source_rho_z(config.source), source_rho_x(config.source));
  const double top =
      std::max(config.detector.eta0.value(), config.detector.eta1.value());
  double eta = 0.0;  // dead detectors are fully blindable
  if (top > 0.0) {
    eta = factor_common_loss(config.detector.eta0, config.detector.eta1)
              .residual_eta;
  }
  if (config.eve.kind == EveKind::blind) {
    eta *= 1.0 - config.eve.blind_fraction.value();
  }
  derived.eta_z = eta;
  return derived;
}

SimulationReport run_protocol(const ProtocolConfig& config, unsigned threads) {
  config.validate();
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  const std::uint64_t n = config.n;
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, n));

  std::vector<TallyTable> partial(threads);
  const auto worker = [&](unsigned w) {
    const std::uint64_t begin = n * w / threads;
    const std::uint64_t end = n * (w + 1) / threads;
    TallyTable local;
    for (std::uint64_t i = begin; i < end; ++i) {
      accumulate(local, simulate_signal(config, i));
    }
    partial[w] = local;
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& t : pool) t.join();

  SimulationReport report;
  for (const TallyTable& t : partial) merge(report.counts, t);
  report.stats = estimate_stats(report.counts);
  report.derived_imperfections = derived_imperfections(config);
  return report;
}

SimulationReport simulate_and_certify(const ProtocolConfig& config,
                                      unsigned threads) {
  SimulationReport report = run_protocol(config, threads);
  const ImperfectionParams params(report.derived_imperfections.delta,
                                  report.derived_imperfections.eta_z, 0.0);
  report.certificate = certify(report.stats, params);
  return report;
}

SimulationReport simulate_and_certify(const ProtocolConfig& config,
                                      const ImperfectionParams& imperfections,
                                      unsigned threads) {
  SimulationReport report = run_protocol(config, threads);
  report.certificate = certify(report.stats, imperfections);
  return report;
}

}  // namespace qkdcert
