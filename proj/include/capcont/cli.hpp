#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "capcont/channels.hpp"
#include "capcont/entropic.hpp"

namespace capcont::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchema = 1;

enum ExitCode { kExitOk = 0, kExitError = 1, kExitViolation = 2 };

/// "name:key=val,..." or the path of a channel JSON file. Errors carry
/// kUnknownChannel, kBadParameter, kMalformedJson, kIo, kCpViolation or
/// kTpViolation.
QuantumChannel parse_channel_spec(const std::string& text);

/// {"d_in", "d_out", "kraus": [[[re, im], ...] row-major per operator]}.
/// A "choi" array (row-major, input factor first) may replace "kraus".
nlohmann::json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const nlohmann::json& j);

/// {"dims": [...], "matrix": [[re, im], ...]} or {"dims": [...], "vector": [...]}.
DensityMatrix state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const DensityMatrix& rho);

/// {"ensemble": [{"p": ..., "state": {...}}, ...]}
Ensemble ensemble_from_json(const nlohmann::json& j);
nlohmann::json ensemble_to_json(const Ensemble& ens);

nlohmann::json read_json_file(const std::string& path);

/// Full command line (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace capcont::cli
