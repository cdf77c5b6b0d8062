#include "qkdcert/json_io.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace qkdcert {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

const json& expect_object(const json& j, const char* where) {
  if (!j.is_object()) fail(where, "expected a JSON object");
  return j;
}

void expect_keys(const json& j, const char* where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    const bool known = std::any_of(
        allowed.begin(), allowed.end(),
        [&](const char* k) { return item.key() == k; });
    if (!known) fail(where, "unknown field '" + item.key() + "'");
  }
}

double need_number(const json& j, const char* where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) fail(where, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double opt_number(const json& j, const char* where, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(where, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t need_uint(const json& j, const char* where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    fail(where, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint64_t opt_uint(const json& j, const char* where, const char* key,
                       std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  return need_uint(j, where, key);
}

bool need_bool(const json& j, const char* where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(where, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

Probability need_probability(const json& j, const char* where,
                             const char* key) {
  const double v = need_number(j, where, key);
  try {
    return Probability(v);
  } catch (const std::exception&) {
    fail(where, std::string("field '") + key + "' must lie in [0, 1]");
  }
}

Probability opt_probability(const json& j, const char* where, const char* key,
                            double fallback) {
  if (!j.contains(key)) return Probability(fallback);
  return need_probability(j, where, key);
}

json cell_to_json(const CellTally& c) {
  return json{{"total", c.total},
              {"n0", c.n0},
              {"n1", c.n1},
              {"vacuum", c.vacuum},
              {"errors", c.errors}};
}

}  // namespace

json to_json(const EstimatedStats& stats) {
  return json{{"q_x", stats.q_x.value()},
              {"q_z", stats.q_z.value()},
              {"q_ph", stats.q_ph.value()},
              {"delta_x", stats.delta_x.value()},
              {"delta_z", stats.delta_z.value()}};
}

json to_json(const ImperfectionParams& imperfections) {
  return json{{"delta", imperfections.delta},
              {"eta_z", imperfections.eta_z},
              {"epsilon_z", imperfections.epsilon_z}};
}

json to_json(const PhaseErrorBound& bound) {
  return json{{"delta_ph", bound.delta_ph},
              {"delta_ph_tilde", bound.delta_ph_tilde},
              {"clamped", bound.clamped},
              {"feasible", bound.feasible}};
}

json to_json(const RateCertificate& certificate) {
  return json{{"rate", certificate.rate},
              {"delta_ph", certificate.delta_ph},
              {"delta_ph_tilde", certificate.delta_ph_tilde},
              {"valid_region", certificate.valid_region},
              {"positive", certificate.positive},
              {"inputs",
               json{{"stats", to_json(certificate.stats)},
                    {"imperfections", to_json(certificate.imperfections)}}}};
}

json to_json(const ProtocolConfig& config) {
  json eve;
  switch (config.eve.kind) {
    case EveKind::none:
      eve = "none";
      break;
    case EveKind::intercept_resend:
      eve = "intercept_resend";
      break;
    case EveKind::blind:
      eve = json{{"blind_fraction", config.eve.blind_fraction.value()}};
      break;
  }
  return json{
      {"n", config.n},
      {"seed", config.seed},
      {"source",
       json{{"p_basis_z", config.source.p_basis_z.value()},
            {"p_z", config.source.p_z.value()},
            {"p_x", config.source.p_x.value()},
            {"x_tilt", config.source.x_tilt}}},
      {"channel",
       json{{"transmittance", config.channel.transmittance.value()},
            {"depolarizing", config.channel.depolarizing.value()},
            {"rotation", config.channel.rotation}}},
      {"detector",
       json{{"eta0", config.detector.eta0.value()},
            {"eta1", config.detector.eta1.value()},
            {"dark", config.detector.dark.value()},
            {"double_click_rule", "random_bit"}}},
      {"eve", eve}};
}

json to_json(const TallyTable& counts) {
  return json{{"zz", cell_to_json(counts.cell(0, 0))},
              {"zx", cell_to_json(counts.cell(0, 1))},
              {"xz", cell_to_json(counts.cell(1, 0))},
              {"xx", cell_to_json(counts.cell(1, 1))}};
}

json to_json(const SimulationReport& report) {
  json j{{"stats", to_json(report.stats)},
         {"counts", to_json(report.counts)},
         {"derived_imperfections",
          json{{"delta", report.derived_imperfections.delta},
               {"eta_z", report.derived_imperfections.eta_z}}}};
  if (report.certificate) j["certificate"] = to_json(*report.certificate);
  return j;
}

EstimatedStats stats_from_json(const json& j) {
  const char* where = "stats";
  expect_object(j, where);
  expect_keys(j, where, {"q_x", "q_z", "q_ph", "delta_x", "delta_z"});
  EstimatedStats stats;
  stats.q_x = need_probability(j, where, "q_x");
  stats.q_z = need_probability(j, where, "q_z");
  stats.q_ph = need_probability(j, where, "q_ph");
  stats.delta_x = need_probability(j, where, "delta_x");
  stats.delta_z = need_probability(j, where, "delta_z");
  return stats;
}

ImperfectionParams imperfections_from_json(const json& j) {
  const char* where = "imperfections";
  expect_object(j, where);
  expect_keys(j, where, {"delta", "eta_z", "epsilon_z"});
  try {
    return ImperfectionParams(need_number(j, where, "delta"),
                              need_number(j, where, "eta_z"),
                              need_number(j, where, "epsilon_z"));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

PhaseErrorBound phase_bound_from_json(const json& j) {
  const char* where = "phase_error_bound";
  expect_object(j, where);
  expect_keys(j, where, {"delta_ph", "delta_ph_tilde", "clamped", "feasible"});
  PhaseErrorBound bound;
  bound.delta_ph = need_number(j, where, "delta_ph");
  bound.delta_ph_tilde = need_number(j, where, "delta_ph_tilde");
  bound.clamped = need_bool(j, where, "clamped");
  bound.feasible = need_bool(j, where, "feasible");
  return bound;
}

ProtocolConfig config_from_json(const json& j) {
  const char* where = "config";
  expect_object(j, where);
  expect_keys(j, where, {"n", "seed", "source", "channel", "detector", "eve"});

  ProtocolConfig config;
  config.n = need_uint(j, where, "n");
  config.seed = opt_uint(j, where, "seed", 0);

  if (j.contains("source")) {
    const json& s = expect_object(j.at("source"), "config.source");
    expect_keys(s, "config.source", {"p_basis_z", "p_z", "p_x", "x_tilt"});
    config.source.p_basis_z = opt_probability(s, "config.source", "p_basis_z", 0.5);
    config.source.p_z = opt_probability(s, "config.source", "p_z", 0.5);
    config.source.p_x = opt_probability(s, "config.source", "p_x", 0.5);
    config.source.x_tilt = opt_number(s, "config.source", "x_tilt", 0.0);
  }
  if (j.contains("channel")) {
    const json& c = expect_object(j.at("channel"), "config.channel");
    expect_keys(c, "config.channel", {"transmittance", "depolarizing", "rotation"});
    config.channel.transmittance =
        opt_probability(c, "config.channel", "transmittance", 1.0);
    config.channel.depolarizing =
        opt_probability(c, "config.channel", "depolarizing", 0.0);
    config.channel.rotation = opt_number(c, "config.channel", "rotation", 0.0);
  }
  if (j.contains("detector")) {
    const json& d = expect_object(j.at("detector"), "config.detector");
    expect_keys(d, "config.detector", {"eta0", "eta1", "dark", "double_click_rule"});
    config.detector.eta0 = opt_probability(d, "config.detector", "eta0", 1.0);
    config.detector.eta1 = opt_probability(d, "config.detector", "eta1", 1.0);
    config.detector.dark = opt_probability(d, "config.detector", "dark", 0.0);
    if (d.contains("double_click_rule") &&
        d.at("double_click_rule") != "random_bit") {
      fail("config.detector", "double_click_rule is fixed to 'random_bit'");
    }
  }
  if (j.contains("eve")) {
    const json& e = j.at("eve");
    if (e.is_string()) {
      const std::string kind = e.get<std::string>();
      if (kind == "none") {
        config.eve.kind = EveKind::none;
      } else if (kind == "intercept_resend") {
        config.eve.kind = EveKind::intercept_resend;
      } else {
        fail("config.eve",
             "expected 'none', 'intercept_resend', or {\"blind_fraction\": p}");
      }
    } else if (e.is_object()) {
      expect_keys(e, "config.eve", {"blind_fraction"});
      config.eve.kind = EveKind::blind;
      config.eve.blind_fraction =
          need_probability(e, "config.eve", "blind_fraction");
    } else {
      fail("config.eve", "expected a string or an object");
    }
  }
  config.validate();
  return config;
}

SweepSpec sweep_from_json(const json& j) {
  const char* where = "sweep";
  expect_object(j, where);
  expect_keys(j, where,
              {"axis_x", "axis_y", "ranges", "resolution", "fixed", "symmetric"});

  SweepSpec spec;
  const auto axis = [&](const char* key) {
    if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
    if (!j.at(key).is_string()) {
      fail(where, std::string("field '") + key + "' must be a string");
    }
    return sweep_axis_from_string(j.at(key).get<std::string>());
  };
  spec.axis_x = axis("axis_x");
  spec.axis_y = axis("axis_y");

  if (!j.contains("ranges")) fail(where, "missing field 'ranges'");
  const json& ranges = expect_object(j.at("ranges"), "sweep.ranges");
  expect_keys(ranges, "sweep.ranges", {"x", "y"});
  const auto range = [&](const char* key) {
    if (!ranges.contains(key)) {
      fail("sweep.ranges", std::string("missing field '") + key + "'");
    }
    const json& r = ranges.at(key);
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() ||
        !r[1].is_number()) {
      fail("sweep.ranges",
           std::string("field '") + key + "' must be a [min, max] pair");
    }
    return AxisRange{r[0].get<double>(), r[1].get<double>()};
  };
  spec.range_x = range("x");
  spec.range_y = range("y");

  if (!j.contains("resolution")) fail(where, "missing field 'resolution'");
  if (!j.at("resolution").is_number_integer()) {
    fail(where, "field 'resolution' must be an integer");
  }
  spec.resolution = j.at("resolution").get<int>();

  if (j.contains("fixed")) {
    const json& fixed = expect_object(j.at("fixed"), "sweep.fixed");
    for (const auto& item : fixed.items()) {
      if (!item.value().is_number()) {
        fail("sweep.fixed",
             "field '" + item.key() + "' must be a number");
      }
      spec.fixed[item.key()] = item.value().get<double>();
    }
  }
  if (j.contains("symmetric")) {
    spec.symmetric = need_bool(j, where, "symmetric");
  }
  spec.validate();
  return spec;
}

HermitianOperator matrix_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) {
    fail(name, "expected a non-empty array of matrix rows");
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      fail(name, "row " + std::to_string(r) + " must have " +
                     std::to_string(dim) + " entries");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        fail(name, "entry (" + std::to_string(r) + ", " + std::to_string(c) +
                       ") must be a [re, im] pair");
      }
      m(r, c) = std::complex<double>(entry[0].get<double>(),
                                     entry[1].get<double>());
    }
  }
  try {
    return HermitianOperator(std::move(m));
  } catch (const std::invalid_argument& e) {
    fail(name, e.what());
  }
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qkdcert
