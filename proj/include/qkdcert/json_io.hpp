#pragma once

#include <json.hpp>

#include "qkdcert/boundary.hpp"
#include "qkdcert/protocol_sim.hpp"

namespace qkdcert {

// JSON wire formats. Field names are lowercase snake case matching the struct
// members; parsers are strict and reject unknown keys, naming the offending
// field in the exception message (std::invalid_argument).

nlohmann::json to_json(const EstimatedStats& stats);
nlohmann::json to_json(const ImperfectionParams& imperfections);
nlohmann::json to_json(const PhaseErrorBound& bound);
nlohmann::json to_json(const RateCertificate& certificate);
nlohmann::json to_json(const ProtocolConfig& config);
nlohmann::json to_json(const TallyTable& counts);
nlohmann::json to_json(const SimulationReport& report);

EstimatedStats stats_from_json(const nlohmann::json& j);
ImperfectionParams imperfections_from_json(const nlohmann::json& j);
PhaseErrorBound phase_bound_from_json(const nlohmann::json& j);
ProtocolConfig config_from_json(const nlohmann::json& j);
SweepSpec sweep_from_json(const nlohmann::json& j);

// Matrices are arrays of rows, each entry a [re, im] pair.
HermitianOperator matrix_from_json(const nlohmann::json& j, const char* name);
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);

}  // namespace qkdcert
