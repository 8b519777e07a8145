#include "ier/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "ier/errors.hpp"

namespace ier {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string graph_file_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "graph_%03d.csv", k);
  return buf;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return os.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

RealMatrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int row_no = 0;
  std::vector<std::string> pending_blank;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) {
      pending_blank.push_back(line);
      continue;
    }
    if (!pending_blank.empty())
      throw ParseError("row " + std::to_string(row_no - 1) + " is blank");
    std::vector<double> row;
    std::size_t start = 0;
    int col = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string cell =
          trim(std::string_view(line).substr(start, comma == std::string::npos
                                                        ? std::string::npos
                                                        : comma - start));
      ++col;
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != last)
        throw ParseError("malformed cell at row " + std::to_string(row_no) + ", column " +
                         std::to_string(col) + ": '" + cell + "'");
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DimensionError("row " + std::to_string(row_no) + " has " +
                           std::to_string(row.size()) + " cells, expected " +
                           std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DimensionError("matrix file is empty");
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (static_cast<Eigen::Index>(rows.front().size()) != n)
    throw DimensionError("matrix is not square: " + std::to_string(n) + " rows of " +
                         std::to_string(rows.front().size()) + " cells");
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  return m;
}

RealMatrix read_matrix_csv(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_matrix_csv(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  }
}

std::string format_matrix_csv(const RealMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += shortest(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string format_adjacency_csv(const AdjacencyMatrix& a) {
  const int n = a.n();
  std::string out;
  out.reserve(static_cast<std::size_t>(n) * (2 * n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out += ',';
      out += a(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

ProbabilityMatrix read_probability_matrix(const fs::path& path, ValidationNotes* notes) {
  return ProbabilityMatrix::validate(read_matrix_csv(path), notes);
}

void write_population(const fs::path& dir, const GraphPopulation& pop,
                      std::optional<std::uint64_t> seed) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  for (int k = 0; k < pop.m(); ++k)
    write_text_file(dir / graph_file_name(k), format_adjacency_csv(pop[k]));
  Json meta = {{"n", pop.n()}, {"m", pop.m()}};
  if (seed) meta["seed"] = *seed;
  write_text_file(dir / "meta.json", meta.dump(2) + "\n");
}

GraphPopulation read_population(const fs::path& dir, PopulationMeta* meta_out) {
  if (!fs::is_directory(dir))
    throw IoError("population directory '" + dir.string() + "' does not exist");
  Json meta;
  try {
    meta = Json::parse(read_text_file(dir / "meta.json"));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError((dir / "meta.json").string() + ": " + e.what());
  }
  PopulationMeta parsed;
  try {
    parsed.n = meta.at("n").get<int>();
    parsed.m = meta.at("m").get<int>();
    if (meta.contains("seed") && !meta.at("seed").is_null())
      parsed.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError((dir / "meta.json").string() + ": " + e.what());
  }
  if (parsed.m < 1) throw SampleSizeError("meta.json declares m < 1");

  std::vector<AdjacencyMatrix> graphs;
  graphs.reserve(static_cast<std::size_t>(parsed.m));
  for (int k = 0; k < parsed.m; ++k) {
    const fs::path file = dir / graph_file_name(k);
    const RealMatrix raw = read_matrix_csv(file);
    if (raw.rows() != parsed.n)
      throw DimensionError(file.string() + ": has " + std::to_string(raw.rows()) +
                           " vertices, meta.json declares " + std::to_string(parsed.n));
    EdgeMatrix edges(raw.rows(), raw.cols());
    for (Eigen::Index i = 0; i < raw.rows(); ++i)
      for (Eigen::Index j = 0; j < raw.cols(); ++j) {
        const double v = raw(i, j);
        if (v != 0.0 && v != 1.0)
          throw RangeError(file.string() + ": entry at row " + std::to_string(i + 1) +
                           ", column " + std::to_string(j + 1) + " is not 0 or 1");
        edges(i, j) = v == 1.0 ? 1 : 0;
      }
    try {
      graphs.push_back(AdjacencyMatrix::validate(edges));
    } catch (const Error& e) {
      throw RangeError(file.string() + ": " + e.what());
    }
  }
  if (meta_out) *meta_out = parsed;
  return GraphPopulation(std::move(graphs));
}

std::string to_json(const TestOutcome& o, int indent) {
  auto values = [](const std::vector<NamedValue>& v) {
    Json arr = Json::array();
    for (const auto& x : v) arr.push_back({{"name", x.name}, {"value", x.value}});
    return arr;
  };
  Json flags = Json::array();
  for (const auto& f : o.indicators) flags.push_back({{"name", f.name}, {"value", f.value}});
  const Json j = {
      {"test", o.test},
      {"statistic", o.statistic},
      {"thresholds", values(o.thresholds)},
      {"indicators", flags},
      {"reject", o.reject},
      {"eta", o.eta},
      {"guarantee",
       {{"rule", o.guarantee.rule},
        {"separation_measure", o.guarantee.separation_measure},
        {"min_separation", o.guarantee.min_separation},
        {"min_complexity", o.guarantee.min_complexity},
        {"parameters", values(o.guarantee.parameters)},
        {"note", o.guarantee.note}}},
      {"flagged", o.flagged},
      {"flag_reason", o.flag_reason},
  };
  return j.dump(indent);
}

TestOutcome outcome_from_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    auto values = [](const Json& arr) {
      std::vector<NamedValue> v;
      for (const auto& x : arr)
        v.push_back({x.at("name").get<std::string>(), x.at("value").get<double>()});
      return v;
    };
    TestOutcome o;
    o.test = j.at("test").get<std::string>();
    o.statistic = j.at("statistic").get<double>();
    o.thresholds = values(j.at("thresholds"));
    for (const auto& f : j.at("indicators"))
      o.indicators.push_back({f.at("name").get<std::string>(), f.at("value").get<bool>()});
    o.reject = j.at("reject").get<bool>();
    o.eta = j.at("eta").get<double>();
    const Json& g = j.at("guarantee");
    o.guarantee.rule = g.at("rule").get<std::string>();
    o.guarantee.separation_measure = g.at("separation_measure").get<std::string>();
    o.guarantee.min_separation = g.at("min_separation").get<double>();
    o.guarantee.min_complexity = g.at("min_complexity").get<double>();
    o.guarantee.parameters = values(g.at("parameters"));
    o.guarantee.note = g.at("note").get<std::string>();
    o.flagged = j.at("flagged").get<bool>();
    o.flag_reason = j.at("flag_reason").get<std::string>();
    return o;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed outcome JSON: ") + e.what());
  }
}

}  // namespace ier
