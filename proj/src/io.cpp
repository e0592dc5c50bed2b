#include "ctfactor/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ctfactor/error.hpp"

namespace ctfactor::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

std::string where(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col + 1);
}

const json& require(const json& j, const char* key, std::string_view what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string(what) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

std::size_t require_size(const json& j, const char* key, std::string_view what) {
  const json& v = require(j, key, what);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ParseError(std::string(what) + ": field '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto cells = split_commas(line);

    if (first) {
      first = false;
      width = cells.size();
      std::size_t numeric = 0;
      for (auto c : cells) numeric += parse_number(c).has_value();
      if (numeric == 0) {
        for (auto c : cells) table.header.emplace_back(c);
        continue;
      }
    }
    if (cells.size() != width) {
      throw ParseError("CSV " + where(line_no, 0) + ": expected " + std::to_string(width) + " cells, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) throw ParseError("CSV " + where(line_no, c) + ": not a number: '" + std::string(cells[c]) + "'");
      row[c] = *v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("CSV: no data rows");
  table.values = DataMatrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InternalError("format_double: buffer too small");
  return std::string(buf, ptr);
}

std::string to_csv(const DataMatrix& values, const std::vector<std::string>& header) {
  std::string out;
  if (!header.empty()) {
    if (header.size() != static_cast<std::size_t>(values.cols())) throw DimensionMismatch("to_csv: header width");
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out += ',';
      out += header[c];
    }
    out += '\n';
  }
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out += ',';
      out += format_double(values(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw ParseError("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected a non-empty array of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError(std::string(what) + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ParseError(std::string(what) + ": non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json to_json(const Structure& s) {
  json support = json::array();
  for (const auto& [r, c] : s.support()) support.push_back({r, c});
  return {{"p", s.p()}, {"d", s.d()}, {"support", std::move(support)}};
}

Structure structure_from_json(const json& j) {
  const std::size_t p = require_size(j, "p", "structure");
  const std::size_t d = require_size(j, "d", "structure");
  const json& sup = require(j, "support", "structure");
  if (!sup.is_array()) throw ParseError("structure: support must be an array");
  std::vector<Pair> pairs;
  for (const auto& e : sup) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw ParseError("structure: support entries must be [row, col] pairs of non-negative integers");
    }
    pairs.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return Structure(p, d, std::move(pairs));
}

json to_json(const FactorParams& theta) {
  json omega = json::array();
  for (Eigen::Index i = 0; i < theta.omega.size(); ++i) omega.push_back(theta.omega(i));
  return {{"p", theta.p()},
          {"d", theta.d()},
          {"lambda", matrix_to_json(theta.lambda)},
          {"phi", matrix_to_json(theta.phi)},
          {"omega", std::move(omega)}};
}

FactorParams model_from_json(const json& j) {
  FactorParams th;
  th.lambda = matrix_from_json(require(j, "lambda", "model"), "model.lambda");
  th.phi = matrix_from_json(require(j, "phi", "model"), "model.phi");
  const json& om = require(j, "omega", "model");
  if (!om.is_array()) throw ParseError("model.omega must be an array");
  th.omega = Vector(static_cast<Eigen::Index>(om.size()));
  for (std::size_t i = 0; i < om.size(); ++i) {
    if (!om[i].is_number()) throw ParseError("model.omega: non-numeric entry");
    th.omega(static_cast<Eigen::Index>(i)) = om[i].get<double>();
  }
  if (j.contains("p") && require_size(j, "p", "model") != th.p()) throw ParseError("model: p disagrees with lambda");
  if (j.contains("d") && require_size(j, "d", "model") != th.d()) throw ParseError("model: d disagrees with lambda");
  th.validate();
  return th;
}

Structure structure_from_any(const json& j) {
  if (j.is_object() && j.contains("support")) return structure_from_json(j);
  if (j.is_object() && j.contains("lambda")) {
    return Structure::from_loadings(matrix_from_json(j.at("lambda"), "model.lambda"));
  }
  throw ParseError("expected a structure (support) or model (lambda) document");
}

json corr_to_json(const Matrix& r, std::optional<double> n) {
  json j = {{"matrix", matrix_to_json(r)}};
  j["n"] = optional_json(n);
  return j;
}

CorrInput corr_from_json(const json& j) {
  CorrInput in;
  in.matrix = matrix_from_json(require(j, "matrix", "correlation"), "correlation.matrix");
  if (in.matrix.rows() != in.matrix.cols()) throw ParseError("correlation.matrix must be square");
  if (j.contains("n") && !j.at("n").is_null()) {
    if (!j.at("n").is_number() || !(j.at("n").get<double>() > 0.0)) throw ParseError("correlation.n must be positive");
    in.n = j.at("n").get<double>();
  }
  return in;
}

json to_json(const CliqueSet& cs) {
  json arr = json::array();
  for (std::size_t k = 0; k < cs.size(); ++k) {
    arr.push_back({{"members", cs.cliques[k]}, {"unique_members", cs.unique_members[k]}});
  }
  return arr;
}

json to_json(const FitResult& fit, std::optional<double> bic_value) {
  json j = to_json(fit.theta);
  j["loglik"] = fit.loglik;
  j["bic"] = optional_json(bic_value);
  j["converged"] = fit.converged;
  j["n_iterations"] = fit.n_iterations;
  j["free_params"] = fit.n_free_params;
  j["sample_not_pd"] = fit.sample_not_pd;
  j["warnings"] = fit.warnings;
  return j;
}

json to_json(const MetricReport& m) {
  return {{"hd", m.hd}, {"f1", m.f1}, {"d_hat", m.d_hat}, {"d_true", m.d_true}, {"matching", m.best_permutation}};
}

json to_json(const CtResult& res) {
  json cands = json::array();
  for (const Candidate& c : res.candidates) {
    json jc = {{"taus", c.taus},
               {"d", c.structure.d()},
               {"support", to_json(c.structure).at("support")},
               {"trivial", c.trivial},
               {"zero_rows", c.zero_rows},
               {"bic", optional_json(c.bic)},
               {"loglik", c.fit ? json(c.fit->loglik) : json(nullptr)},
               {"converged", c.fit ? json(c.fit->converged) : json(nullptr)},
               {"hd", optional_json(c.hd)},
               {"f1", optional_json(c.f1)},
               {"fit_error", optional_json(c.fit_error)}};
    cands.push_back(std::move(jc));
  }
  json sweep = json::array();
  for (const SweepRecord& s : res.sweep) {
    sweep.push_back({{"tau", s.tau}, {"edges", s.edges}, {"cliques", s.cliques}, {"candidate", optional_json(s.candidate)}});
  }
  return {{"candidates", std::move(cands)},
          {"selected_index", optional_json(res.selected_index)},
          {"models_evaluated", res.models_evaluated},
          {"sweep", std::move(sweep)},
          {"warnings", res.warnings},
          {"timing",
           {{"graph_seconds", res.times.graph_seconds},
            {"clique_seconds", res.times.clique_seconds},
            {"fit_seconds", res.times.fit_seconds},
            {"select_seconds", res.times.select_seconds}}}};
}

}  // namespace ctfactor::io
