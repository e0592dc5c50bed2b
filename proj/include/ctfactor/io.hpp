#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctfactor/ct.hpp"
#include "ctfactor/graph.hpp"
#include "ctfactor/metrics.hpp"
#include "ctfactor/model.hpp"
#include "ctfactor/numerics.hpp"

namespace ctfactor::io {

using nlohmann::json;

struct CsvTable {
  std::vector<std::string> header;  // empty when the file had none
  DataMatrix values;
};

/// Comma separated, '.' decimal, optional header row (detected when every
/// cell of the first row is non-numeric). Blank lines are skipped.
/// Throws ParseError naming the line and column of the first bad cell.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);
std::string to_csv(const DataMatrix& values, const std::vector<std::string>& header = {});

std::string read_text(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: temp file then rename.
void write_text(const std::filesystem::path& path, std::string_view text);
json read_json(const std::filesystem::path& path);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::string_view what);

json to_json(const Structure& s);
Structure structure_from_json(const json& j);

json to_json(const FactorParams& theta);
FactorParams model_from_json(const json& j);

/// Accepts a structure document or a model document (support taken from the
/// nonzero loadings).
Structure structure_from_any(const json& j);

struct CorrInput {
  Matrix matrix;
  std::optional<double> n;
};
json corr_to_json(const Matrix& r, std::optional<double> n);
CorrInput corr_from_json(const json& j);

json to_json(const CliqueSet& cs);
json to_json(const FitResult& fit, std::optional<double> bic_value = std::nullopt);
json to_json(const MetricReport& m);
json to_json(const CtResult& res);

}  // namespace ctfactor::io
