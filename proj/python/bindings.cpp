#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qkdcert/boundary.hpp"
#include "qkdcert/errors.hpp"
#include "qkdcert/json_io.hpp"
#include "qkdcert/protocol_sim.hpp"

namespace py = pybind11;
using namespace qkdcert;

namespace {

double prob(const Probability& p) { return p.value(); }

py::dict cell_dict(const CellTally& c) {
  py::dict d;
  d["total"] = c.total;
  d["n0"] = c.n0;
  d["n1"] = c.n1;
  d["vacuum"] = c.vacuum;
  d["errors"] = c.errors;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Secure-key-rate certification for BB84 with imperfect devices";

  py::register_exception<inconsistent_statistics>(m, "InconsistentStatistics");
  py::register_exception<insufficient_statistics>(m, "InsufficientStatistics");

  py::class_<EstimatedStats>(m, "EstimatedStats")
      .def(py::init<double, double, double, double, double>(), py::arg("q_x"),
           py::arg("q_z"), py::arg("q_ph"), py::arg("delta_x"),
           py::arg("delta_z"))
      .def_property_readonly("q_x", [](const EstimatedStats& s) { return prob(s.q_x); })
      .def_property_readonly("q_z", [](const EstimatedStats& s) { return prob(s.q_z); })
      .def_property_readonly("q_ph", [](const EstimatedStats& s) { return prob(s.q_ph); })
      .def_property_readonly("delta_x", [](const EstimatedStats& s) { return prob(s.delta_x); })
      .def_property_readonly("delta_z", [](const EstimatedStats& s) { return prob(s.delta_z); });

  py::class_<ImperfectionParams>(m, "ImperfectionParams")
      .def(py::init<double, double, double>(), py::arg("delta"),
           py::arg("eta_z"), py::arg("epsilon_z") = 0.0)
      .def_readonly("delta", &ImperfectionParams::delta)
      .def_readonly("eta_z", &ImperfectionParams::eta_z)
      .def_readonly("epsilon_z", &ImperfectionParams::epsilon_z);

  py::class_<PhaseErrorBound>(m, "PhaseErrorBound")
      .def(py::init([](double delta_ph, double delta_ph_tilde, bool clamped,
                       bool feasible) {
             return PhaseErrorBound{delta_ph, delta_ph_tilde, clamped, feasible};
           }),
           py::arg("delta_ph"), py::arg("delta_ph_tilde"),
           py::arg("clamped") = false, py::arg("feasible") = true)
      .def_readonly("delta_ph", &PhaseErrorBound::delta_ph)
      .def_readonly("delta_ph_tilde", &PhaseErrorBound::delta_ph_tilde)
      .def_readonly("clamped", &PhaseErrorBound::clamped)
      .def_readonly("feasible", &PhaseErrorBound::feasible);

  py::class_<RateCertificate>(m, "RateCertificate")
      .def_readonly("rate", &RateCertificate::rate)
      .def_readonly("delta_ph", &RateCertificate::delta_ph)
      .def_readonly("delta_ph_tilde", &RateCertificate::delta_ph_tilde)
      .def_readonly("valid_region", &RateCertificate::valid_region)
      .def_readonly("positive", &RateCertificate::positive)
      .def_readonly("stats", &RateCertificate::stats)
      .def_readonly("imperfections", &RateCertificate::imperfections);

  m.def("binary_entropy", &binary_entropy, py::arg("p"));

  m.def(
      "fidelity",
      [](const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
        return fidelity(HermitianOperator(rho), HermitianOperator(sigma));
      },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "basis_dependence",
      [](const Eigen::MatrixXcd& rho_z, const Eigen::MatrixXcd& rho_x) {
        return basis_dependence(HermitianOperator(rho_z),
                                HermitianOperator(rho_x));
      },
      py::arg("rho_z"), py::arg("rho_x"));
  m.def(
      "trace_distance",
      [](const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
        return trace_distance(HermitianOperator(rho), HermitianOperator(sigma));
      },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "blinding_parameter",
      [](const Eigen::MatrixXcd& povm, const Eigen::MatrixXcd& projector) {
        return blinding_parameter(HermitianOperator(povm),
                                  HermitianOperator(projector));
      },
      py::arg("povm_element"), py::arg("projector"));
  m.def(
      "factor_common_loss",
      [](double eta0, double eta1) {
        const CommonLossSplit split =
            factor_common_loss(Probability(eta0), Probability(eta1));
        return py::make_tuple(split.common, split.residual_eta);
      },
      py::arg("eta0"), py::arg("eta1"));

  m.def(
      "rhs_g",
      [](double delta, double q_x, double delta_x, double q_ph) {
        return rhs_g(delta, Probability(q_x), Probability(delta_x),
                     Probability(q_ph));
      },
      py::arg("delta"), py::arg("q_x"), py::arg("delta_x"), py::arg("q_ph"));
  m.def("solve_delta_ph", &solve_delta_ph, py::arg("stats"),
        py::arg("delta"));
  m.def(
      "solve_delta_ph_symmetric",
      [](double q, double delta_x, double delta) {
        return solve_delta_ph_symmetric(Probability(q), Probability(delta_x),
                                        delta);
      },
      py::arg("q"), py::arg("delta_x"), py::arg("delta"));
  m.def(
      "closed_form_delta_ph",
      [](double q, double delta_x, double delta) {
        return closed_form_delta_ph(Probability(q), Probability(delta_x),
                                    delta);
      },
      py::arg("q"), py::arg("delta_x"), py::arg("delta"));
  m.def(
      "apply_leakage",
      [](const PhaseErrorBound& bound, double q_ph, double eta_z,
         double epsilon_z) {
        return apply_leakage(bound, Probability(q_ph), eta_z, epsilon_z);
      },
      py::arg("bound"), py::arg("q_ph"), py::arg("eta_z"),
      py::arg("epsilon_z"));

  m.def("rate_detector_only", &rate_detector_only, py::arg("stats"),
        py::arg("eta_z"), py::arg("epsilon_z") = 0.0);
  m.def("rate_general", &rate_general, py::arg("stats"), py::arg("bound"),
        py::arg("eta_z"));
  m.def("certify", &certify, py::arg("stats"), py::arg("imperfections"));
  m.def(
      "rate_ideal",
      [](double delta_x, double delta_z) {
        return rate_ideal(Probability(delta_x), Probability(delta_z));
      },
      py::arg("delta_x"), py::arg("delta_z"));

  py::class_<DerivedImperfections>(m, "DerivedImperfections")
      .def_readonly("delta", &DerivedImperfections::delta)
      .def_readonly("eta_z", &DerivedImperfections::eta_z);

  py::class_<SimulationReport>(m, "SimulationReport")
      .def_readonly("stats", &SimulationReport::stats)
      .def_readonly("derived_imperfections",
                    &SimulationReport::derived_imperfections)
      .def_property_readonly(
          "certificate",
          [](const SimulationReport& r) -> py::object {
            if (!r.certificate) return py::none();
            return py::cast(*r.certificate);
          })
      .def_property_readonly("counts", [](const SimulationReport& r) {
        py::dict d;
        d["zz"] = cell_dict(r.counts.cell(0, 0));
        d["zx"] = cell_dict(r.counts.cell(0, 1));
        d["xz"] = cell_dict(r.counts.cell(1, 0));
        d["xx"] = cell_dict(r.counts.cell(1, 1));
        return d;
      });

  // Simulation and sweeps are exposed through the JSON wire formats, which
  // match the CLI files byte for byte.
  m.def(
      "simulate",
      [](const std::string& config_json, unsigned threads) {
        const ProtocolConfig config =
            config_from_json(nlohmann::json::parse(config_json));
        return simulate_and_certify(config, threads);
      },
      py::arg("config_json"), py::arg("threads") = 0);
  m.def(
      "simulate_report_json",
      [](const std::string& config_json, unsigned threads) {
        const ProtocolConfig config =
            config_from_json(nlohmann::json::parse(config_json));
        return to_json(simulate_and_certify(config, threads)).dump(2);
      },
      py::arg("config_json"), py::arg("threads") = 0);
  m.def(
      "trace_boundary",
      [](const std::string& sweep_json) {
        const SweepSpec spec =
            sweep_from_json(nlohmann::json::parse(sweep_json));
        std::vector<std::pair<double, double>> out;
        for (const BoundaryPoint& p : trace_boundary(spec)) {
          out.emplace_back(p.y, p.x_boundary);
        }
        return out;
      },
      py::arg("sweep_json"));
  m.def(
      "rate_surface",
      [](const std::string& sweep_json) {
        const SweepSpec spec =
            sweep_from_json(nlohmann::json::parse(sweep_json));
        std::vector<std::tuple<double, double, double>> out;
        for (const SurfacePoint& p : rate_surface(spec)) {
          out.emplace_back(p.x, p.y, p.rate);
        }
        return out;
      },
      py::arg("sweep_json"));
}
