// Command-line front end for the BB84 key-rate certification toolkit.
//
// Exit codes: 0 success (for certificate-producing commands: positive
// certificate), 1 non-positive certificate, 2 input error, 3 inconsistent
// statistics. Only the declared payload goes to stdout; diagnostics go to
// stderr.

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "qkdcert/boundary.hpp"
#include "qkdcert/errors.hpp"
#include "qkdcert/json_io.hpp"
#include "qkdcert/protocol_sim.hpp"

namespace {

using nlohmann::json;
using namespace qkdcert;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open input file '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in '" + path + "': " +
                                e.what());
  }
}

void write_payload(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw std::invalid_argument("cannot open output file '" + out_path + "'");
  }
  out << payload;
  if (!payload.empty() && payload.back() != '\n') out << '\n';
}

int emit_certificate(const RateCertificate& cert, const std::string& out_path) {
  write_payload(to_json(cert).dump(2), out_path);
  return cert.positive ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BB84 secure-key-rate certification toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  // certify --in FILE [--out FILE]
  {
    auto* cmd = app.add_subcommand(
        "certify", "Certify a key rate from statistics and imperfections");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--in", *in, "Input JSON: {stats, imperfections}")
        ->required();
    cmd->add_option("--out", *out, "Output file (default: stdout)");
    cmd->callback([&action, in, out] {
      action = [in, out] {
        const json j = read_json_file(*in);
        if (!j.is_object() || !j.contains("stats") ||
            !j.contains("imperfections")) {
          throw std::invalid_argument(
              "certify input: missing field 'stats' or 'imperfections'");
        }
        const RateCertificate cert = certify(
            stats_from_json(j.at("stats")),
            imperfections_from_json(j.at("imperfections")));
        return emit_certificate(cert, *out);
      };
    });
  }

  // rate --in FILE [--out FILE]  (perfect-source detector-only bound)
  {
    auto* cmd = app.add_subcommand(
        "rate", "Detector-only rate bound assuming a perfect source");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--in", *in, "Input JSON: {stats, eta_z, epsilon_z}")
        ->required();
    cmd->add_option("--out", *out, "Output file (default: stdout)");
    cmd->callback([&action, in, out] {
      action = [in, out] {
        const json j = read_json_file(*in);
        if (!j.is_object() || !j.contains("stats")) {
          throw std::invalid_argument("rate input: missing field 'stats'");
        }
        for (const auto& item : j.items()) {
          if (item.key() != "stats" && item.key() != "eta_z" &&
              item.key() != "epsilon_z") {
            throw std::invalid_argument("rate input: unknown field '" +
                                        item.key() + "'");
          }
        }
        if (!j.contains("eta_z") || !j.at("eta_z").is_number()) {
          throw std::invalid_argument(
              "rate input: field 'eta_z' must be a number");
        }
        double epsilon_z = 0.0;
        if (j.contains("epsilon_z")) {
          if (!j.at("epsilon_z").is_number()) {
            throw std::invalid_argument(
                "rate input: field 'epsilon_z' must be a number");
          }
          epsilon_z = j.at("epsilon_z").get<double>();
        }
        const RateCertificate cert =
            rate_detector_only(stats_from_json(j.at("stats")),
                               j.at("eta_z").get<double>(), epsilon_z);
        return emit_certificate(cert, *out);
      };
    });
  }

  // delta-ph --qx R --qph R --dx R --delta R
  {
    auto* cmd = app.add_subcommand(
        "delta-ph", "Solve the worst-case phase error rate");
    auto qx = std::make_shared<double>();
    auto qph = std::make_shared<double>();
    auto dx = std::make_shared<double>();
    auto delta = std::make_shared<double>();
    cmd->add_option("--qx", *qx, "Nonvacuum fraction, a = X, b = X")->required();
    cmd->add_option("--qph", *qph, "Nonvacuum fraction, a = Z, b = X")
        ->required();
    cmd->add_option("--dx", *dx, "X-basis error rate")->required();
    cmd->add_option("--delta", *delta, "Source basis dependence")->required();
    cmd->callback([&action, qx, qph, dx, delta] {
      action = [qx, qph, dx, delta] {
        const EstimatedStats stats(*qx, 1.0, *qph, *dx, 0.0);
        const PhaseErrorBound bound = solve_delta_ph(stats, *delta);
        write_payload(to_json(bound).dump(2), "");
        return 0;
      };
    });
  }

  // characterize --rho-z FILE --rho-x FILE
  {
    auto* cmd = app.add_subcommand(
        "characterize", "Source basis dependence from density operators");
    auto rho_z_path = std::make_shared<std::string>();
    auto rho_x_path = std::make_shared<std::string>();
    cmd->add_option("--rho-z", *rho_z_path,
                    "Z-basis average state (rows of [re, im] pairs)")
        ->required();
    cmd->add_option("--rho-x", *rho_x_path, "X-basis average state")
        ->required();
    cmd->callback([&action, rho_z_path, rho_x_path] {
      action = [rho_z_path, rho_x_path] {
        const HermitianOperator rho_z =
            matrix_from_json(read_json_file(*rho_z_path), "rho_z");
        const HermitianOperator rho_x =
            matrix_from_json(read_json_file(*rho_x_path), "rho_x");
        const double f = fidelity(rho_z, rho_x);
        const json out{{"fidelity", f},
                       {"delta", 0.5 * (1.0 - f)},
                       {"trace_distance", trace_distance(rho_z, rho_x)}};
        write_payload(out.dump(2), "");
        return 0;
      };
    });
  }

  // eta --povm FILE --projector FILE
  {
    auto* cmd = app.add_subcommand(
        "eta", "Blinding parameter of a POVM element on a subspace");
    auto povm_path = std::make_shared<std::string>();
    auto projector_path = std::make_shared<std::string>();
    cmd->add_option("--povm", *povm_path, "POVM element E")->required();
    cmd->add_option("--projector", *projector_path, "Subspace projector Q")
        ->required();
    cmd->callback([&action, povm_path, projector_path] {
      action = [povm_path, projector_path] {
        const HermitianOperator e =
            matrix_from_json(read_json_file(*povm_path), "povm");
        const HermitianOperator q =
            matrix_from_json(read_json_file(*projector_path), "projector");
        const json out{{"eta_z", blinding_parameter(e, q)}};
        write_payload(out.dump(2), "");
        return 0;
      };
    });
  }

  // simulate --config FILE [--seed N] [--threads N]
  {
    auto* cmd = app.add_subcommand("simulate", "Run the Monte Carlo protocol");
    auto config_path = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto seed_set = std::make_shared<bool>(false);
    auto threads = std::make_shared<unsigned>(0);
    cmd->add_option("--config", *config_path, "Protocol configuration JSON")
        ->required();
    cmd->add_option("--seed", *seed, "Override the configured seed")
        ->each([seed_set](const std::string&) { *seed_set = true; });
    cmd->add_option("--threads", *threads,
                    "Worker threads (default: all cores)");
    cmd->callback([&action, config_path, seed, seed_set, threads] {
      action = [config_path, seed, seed_set, threads] {
        ProtocolConfig config = config_from_json(read_json_file(*config_path));
        if (*seed_set) config.seed = *seed;
        const SimulationReport report = simulate_and_certify(config, *threads);
        write_payload(to_json(report).dump(2), "");
        return report.certificate->positive ? 0 : 1;
      };
    });
  }

  // boundary --sweep FILE --out FILE [--surface]
  {
    auto* cmd = app.add_subcommand(
        "boundary", "Trace the R_Z = 0 boundary over a parameter sweep");
    auto sweep_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto surface = std::make_shared<bool>(false);
    cmd->add_option("--sweep", *sweep_path, "Sweep specification JSON")
        ->required();
    cmd->add_option("--out", *out, "Output CSV file")->required();
    cmd->add_flag("--surface", *surface,
                  "Emit the full rate surface instead of the boundary");
    cmd->callback([&action, sweep_path, out, surface] {
      action = [sweep_path, out, surface] {
        const SweepSpec spec = sweep_from_json(read_json_file(*sweep_path));
        std::ostringstream csv;
        if (*surface) {
          write_surface_csv(csv, rate_surface(spec));
        } else {
          write_boundary_csv(csv, trace_boundary(spec));
        }
        write_payload(csv.str(), *out);
        return 0;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const inconsistent_statistics& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
