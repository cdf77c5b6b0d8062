#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qkdcert/counter_rng.hpp"
#include "qkdcert/errors.hpp"
#include "qkdcert/json_io.hpp"
#include "qkdcert/protocol_sim.hpp"

using namespace qkdcert;

namespace {

// Three-sigma binomial window around p given the observed trial count.
bool within_3sigma(double observed, double p, std::uint64_t trials) {
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return std::abs(observed - p) <= 3.0 * sigma;
}

ProtocolConfig ideal_config(std::uint64_t n, std::uint64_t seed) {
  ProtocolConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

void check_conservation(const TallyTable& t, std::uint64_t n) {
  std::uint64_t total = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const CellTally& c = t.cell(a, b);
      CHECK(c.vacuum + c.n0 + c.n1 == c.total);
      CHECK(c.errors <= c.nonvacuum());
      total += c.total;
    }
  }
  CHECK(total == n);
}

}  // namespace

TEST_CASE("counter rng matches the numpy Philox4x64-10 stream") {
  // numpy.random.Philox(counter=c, key=k).random_raw(4) emits the block for
  // counter c+1; references generated at those counters.
  const auto b0 = Philox4x64::block({0, 0}, {1, 0, 0, 0});
  CHECK(b0[0] == 0x02f4ba6408e4d89bull);
  CHECK(b0[1] == 0x3dd62b0b9ca8c5b2ull);
  CHECK(b0[2] == 0x1c8667a55d902e79ull);
  CHECK(b0[3] == 0x907d7a052fd5b4dcull);

  const auto b1 = Philox4x64::block({0xdeadbeefull, 0}, {2, 2, 3, 4});
  CHECK(b1[0] == 0x293c50a42da88dcdull);
  CHECK(b1[1] == 0x4895f4f3502c1b5bull);
  CHECK(b1[2] == 0xa58c634edb6a1112ull);
  CHECK(b1[3] == 0xc7cc5e9759a673bfull);

  const auto b2 = Philox4x64::block({42, 7}, {123456790, 0xabcdef, 0, 0});
  CHECK(b2[0] == 0xdc9e9aba76656452ull);
  CHECK(b2[1] == 0x3a31a8912630ac64ull);
  CHECK(b2[2] == 0x0bccd36732aa6c59ull);
  CHECK(b2[3] == 0x2367b6b796429180ull);

  const auto b3 = Philox4x64::block({~0ull, ~0ull}, {0, 0, 0, 0});
  CHECK(b3[0] == 0x44b7493d1acfc229ull);
  CHECK(b3[1] == 0x6636af8e997921ddull);
  CHECK(b3[2] == 0x3f73e132b5b3780eull);
  CHECK(b3[3] == 0x605644dde03b01b1ull);
}

TEST_CASE("uniform draws are reproducible, distinct, and well spread") {
  CHECK(uniform_draw(1, 2, 3) == uniform_draw(1, 2, 3));
  CHECK(uniform_draw(1, 2, 3) != uniform_draw(1, 2, 4));
  CHECK(uniform_draw(1, 2, 3) != uniform_draw(2, 2, 3));
  double sum = 0.0;
  double sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform_draw(17, static_cast<std::uint64_t>(i), i % 13);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 0.005);
  CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}

TEST_CASE("ideal configuration detects everything without errors") {
  const SimulationReport report = run_protocol(ideal_config(100000, 1), 2);
  CHECK(report.stats.q_x.value() == 1.0);
  CHECK(report.stats.q_z.value() == 1.0);
  CHECK(report.stats.q_ph.value() == 1.0);
  CHECK(report.stats.delta_x.value() == 0.0);
  CHECK(report.stats.delta_z.value() == 0.0);
  CHECK(report.derived_imperfections.delta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.derived_imperfections.eta_z == 1.0);
  check_conservation(report.counts, 100000);
}

TEST_CASE("identical config and seed give bit-identical reports at any thread count") {
  ProtocolConfig cfg = ideal_config(60000, 42);
  cfg.channel.depolarizing = Probability(0.08);
  cfg.detector.eta0 = Probability(0.7);
  cfg.detector.eta1 = Probability(0.9);
  cfg.detector.dark = Probability(0.01);

  const SimulationReport one = simulate_and_certify(cfg, 1);
  const SimulationReport four = simulate_and_certify(cfg, 4);
  const SimulationReport many = simulate_and_certify(cfg, 0);
  CHECK(one.counts == four.counts);
  CHECK(one.counts == many.counts);
  CHECK(to_json(one).dump() == to_json(four).dump());
  CHECK(to_json(one).dump() == to_json(many).dump());

  cfg.seed = 43;
  const SimulationReport other = simulate_and_certify(cfg, 1);
  CHECK(!(one.counts == other.counts));
}

TEST_CASE("depolarization produces the expected error rate") {
  ProtocolConfig cfg = ideal_config(200000, 7);
  cfg.channel.depolarizing = Probability(0.1);
  const SimulationReport report = run_protocol(cfg, 0);
  // Replacing the state by I/2 flips the matched-basis outcome half of the
  // time: error probability p/2 = 0.05.
  CHECK(within_3sigma(report.stats.delta_x.value(), 0.05,
                      report.counts.cell(1, 1).nonvacuum()));
  CHECK(within_3sigma(report.stats.delta_z.value(), 0.05,
                      report.counts.cell(0, 0).nonvacuum()));
  check_conservation(report.counts, 200000);
}

TEST_CASE("intercept-resend forces a quarter error rate and kills the rate") {
  ProtocolConfig cfg = ideal_config(200000, 11);
  cfg.eve.kind = EveKind::intercept_resend;
  const SimulationReport report = simulate_and_certify(cfg, 0);
  CHECK(within_3sigma(report.stats.delta_x.value(), 0.25,
                      report.counts.cell(1, 1).nonvacuum()));
  CHECK(within_3sigma(report.stats.delta_z.value(), 0.25,
                      report.counts.cell(0, 0).nonvacuum()));
  REQUIRE(report.certificate.has_value());
  CHECK(!report.certificate->positive);
  CHECK(report.certificate->rate < 0.0);
}

TEST_CASE("loss and efficiency compose into the detection fraction") {
  ProtocolConfig cfg = ideal_config(200000, 13);
  cfg.channel.transmittance = Probability(0.2);
  cfg.detector.eta0 = Probability(0.6);
  cfg.detector.eta1 = Probability(0.6);
  const SimulationReport report = run_protocol(cfg, 0);
  const double expected = 0.2 * 0.6;
  CHECK(within_3sigma(report.stats.q_x.value(), expected,
                      report.counts.cell(1, 1).total));
  CHECK(within_3sigma(report.stats.q_z.value(), expected,
                      report.counts.cell(0, 0).total));
  CHECK(within_3sigma(report.stats.q_ph.value(), expected,
                      report.counts.cell(0, 1).total));
  CHECK(report.derived_imperfections.eta_z == 1.0);  // matched efficiencies
}

TEST_CASE("misalignment rotates both bases equally") {
  ProtocolConfig cfg = ideal_config(200000, 17);
  cfg.channel.rotation = 0.2;
  const SimulationReport report = run_protocol(cfg, 0);
  const double expected = std::pow(std::sin(0.1), 2);
  CHECK(within_3sigma(report.stats.delta_x.value(), expected,
                      report.counts.cell(1, 1).nonvacuum()));
  CHECK(within_3sigma(report.stats.delta_z.value(), expected,
                      report.counts.cell(0, 0).nonvacuum()));
}

TEST_CASE("full blinding with dark counts yields the blinded-detector rate") {
  ProtocolConfig cfg = ideal_config(200000, 19);
  cfg.eve.kind = EveKind::blind;
  cfg.eve.blind_fraction = Probability(1.0);
  cfg.detector.dark = Probability(0.05);
  const SimulationReport report = simulate_and_certify(cfg, 0);
  CHECK(report.derived_imperfections.eta_z == 0.0);
  REQUIRE(report.certificate.has_value());
  // eta_z = 0 zeroes the entropic term exactly: R = -h(delta_z) <= 0.
  CHECK(report.certificate->rate ==
        -binary_entropy(report.stats.delta_z.value()));
  CHECK(report.certificate->rate <= 0.0);
  CHECK(!report.certificate->positive);
  // Dark clicks carry no signal correlation.
  CHECK(within_3sigma(report.stats.delta_z.value(), 0.5,
                      report.counts.cell(0, 0).nonvacuum()));
}

TEST_CASE("full blinding without dark counts leaves nothing to estimate") {
  ProtocolConfig cfg = ideal_config(5000, 23);
  cfg.eve.kind = EveKind::blind;
  cfg.eve.blind_fraction = Probability(1.0);
  CHECK_THROWS_AS(run_protocol(cfg, 1), insufficient_statistics);
}

TEST_CASE("statistical soundness across seeds") {
  int outliers = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ProtocolConfig cfg = ideal_config(200000, seed);
    cfg.channel.depolarizing = Probability(0.1);
    const SimulationReport report = run_protocol(cfg, 0);
    if (!within_3sigma(report.stats.delta_x.value(), 0.05,
                       report.counts.cell(1, 1).nonvacuum())) {
      ++outliers;
    }
  }
  CHECK(outliers <= 5);
}

TEST_CASE("derived imperfections follow the configured models") {
  ProtocolConfig cfg = ideal_config(1, 0);
  auto derived = derived_imperfections(cfg);
  CHECK(derived.delta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(derived.eta_z == 1.0);

  cfg.detector.eta0 = Probability(0.5);
  cfg.detector.eta1 = Probability(1.0);
  derived = derived_imperfections(cfg);
  CHECK(derived.eta_z == doctest::Approx(0.5).epsilon(1e-12));

  cfg.eve.kind = EveKind::blind;
  cfg.eve.blind_fraction = Probability(0.3);
  derived = derived_imperfections(cfg);
  CHECK(derived.eta_z == doctest::Approx(0.5 * 0.7).epsilon(1e-12));

  cfg.eve.blind_fraction = Probability(1.0);
  CHECK(derived_imperfections(cfg).eta_z == 0.0);

  // Tilted source: matches the closed-form reference used in the
  // characterization tests.
  ProtocolConfig tilted = ideal_config(1, 0);
  tilted.source.x_tilt = 0.1;
  CHECK(derived_imperfections(tilted).delta ==
        doctest::Approx(0.00062486980251687672).epsilon(1e-9));
}

TEST_CASE("estimation arithmetic on synthetic tallies") {
  TallyTable t;
  // a=X, b=X: 1000 signals, 800 detections, 40 errors.
  t.cell(1, 1) = {1000, 760, 40, 200, 40};
  t.cell(0, 0) = {1000, 900, 100, 0, 10};
  t.cell(0, 1) = {1000, 500, 300, 200, 400};
  t.cell(1, 0) = {1000, 500, 300, 200, 400};
  const EstimatedStats stats = estimate_stats(t);
  CHECK(stats.q_x.value() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(stats.delta_x.value() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(stats.q_z.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(stats.delta_z.value() == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(stats.q_ph.value() == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("estimation requires every denominator cell") {
  TallyTable empty;
  CHECK_THROWS_AS(estimate_stats(empty), insufficient_statistics);

  TallyTable no_z_detections;
  no_z_detections.cell(1, 1) = {10, 5, 5, 0, 0};
  no_z_detections.cell(0, 1) = {10, 5, 5, 0, 0};
  no_z_detections.cell(0, 0) = {10, 0, 0, 10, 0};
  CHECK_THROWS_AS(estimate_stats(no_z_detections), insufficient_statistics);
}

TEST_CASE("an empty phase cell drives the certificate non-positive") {
  // q_ph = 0 with q_x = 0.19 is still consistent when Delta >= 0.05; the
  // solver then clamps delta_ph to 1/2 and the rate collapses.
  const EstimatedStats stats(0.19, 0.2, 0.0, 0.01, 0.01);
  const RateCertificate cert = certify(stats, ImperfectionParams(0.05, 1, 0));
  CHECK(cert.delta_ph == 0.5);
  CHECK(cert.rate == doctest::Approx(-binary_entropy(0.01)).epsilon(1e-12));
  CHECK(!cert.positive);
}

TEST_CASE("source density operators reflect the bias parameters") {
  SourceModel source;
  source.p_z = Probability(0.8);
  const HermitianOperator rho_z = source_rho_z(source);
  CHECK(rho_z.matrix()(0, 0).real() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(rho_z.matrix()(1, 1).real() == doctest::Approx(0.2).epsilon(1e-12));

  // Biased X source without tilt: average state (I + (2 p_x - 1) sigma_x)/2.
  SourceModel biased;
  biased.p_x = Probability(0.7);
  const HermitianOperator rho_x = source_rho_x(biased);
  CHECK(rho_x.matrix()(0, 1).real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(rho_x.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("config validation") {
  ProtocolConfig cfg;
  cfg.n = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n = 1;
  cfg.source.x_tilt = 1.0;  // beyond pi/4
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
