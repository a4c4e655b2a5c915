#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "predbound/error.hpp"
#include "predbound/predict.hpp"
#include "predbound/types.hpp"

namespace predbound::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidConfig = 1,
    kIoFailure = 2,
    kInsufficientData = 3,
    kBoundViolation = 4,
};

/// Environment variable naming the directory for outputs when --out is omitted.
inline constexpr const char* kOutputDirEnv = "PREDBOUND_OUTPUT_DIR";

class IoError : public Error {
public:
    using Error::Error;
};

// --- series files ---------------------------------------------------------

/// Reads a one-column CSV with header `x`. Throws IoError when the file
/// cannot be opened and InvalidInput naming the line of a malformed row.
[[nodiscard]] std::vector<double> read_series_csv(const std::filesystem::path& path);

/// Header `x`, one value per row, 17 significant digits.
[[nodiscard]] std::string format_series_csv(std::span<const double> values);

/// Writes every (path, contents) pair to a temporary sibling first and renames
/// only after all writes succeeded, so a failure leaves no partial output.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path& csv);

// --- JSON ------------------------------------------------------------------

[[nodiscard]] nlohmann::json to_json(const ProcessModel& model);
[[nodiscard]] ProcessModel model_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const EntropyValue& h);
[[nodiscard]] nlohmann::json to_json(const BoundReport& b);
[[nodiscard]] nlohmann::json to_json(const Predictor& p);
[[nodiscard]] nlohmann::json to_json(const ErrorDiagnostics& d);
[[nodiscard]] nlohmann::json to_json(const Certification& c);

/// Series plus the model and seed recorded in its sidecar, if any.
struct LoadedSeries {
    Series series;
    std::optional<ProcessModel> model;
    std::optional<std::uint64_t> seed;
};

[[nodiscard]] LoadedSeries load_series(const std::filesystem::path& csv);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace predbound::cli
