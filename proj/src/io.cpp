#include "lassopath/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace lassopath {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("not a number: '" + s + "'", line);
  return v;
}

std::ifstream open_in(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  return out;
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
}

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what(), 0);
  }
}

const char* kind_name(PathKind k) { return k == PathKind::Exact ? "exact" : "approx"; }

PathStatus status_from(const std::string& s) {
  for (auto st : {PathStatus::Complete, PathStatus::Singular, PathStatus::MaxKinks,
                  PathStatus::MaxSweeps}) {
    if (to_string(st) == s) return st;
  }
  throw ParseError("unknown path status '" + s + "'", 0);
}

}  // namespace

DataFormat format_from_extension(const std::filesystem::path& file) {
  return file.extension() == ".csv" ? DataFormat::Csv : DataFormat::Json;
}

std::optional<DataFormat> parse_format(const std::string& name) {
  if (name == "csv") return DataFormat::Csv;
  if (name == "json") return DataFormat::Json;
  return std::nullopt;
}

ProblemInstance normalize(const ProblemInstance& inst) {
  Matrix X = inst.X();
  Vector y = inst.y();
  for (Index j = 0; j < X.cols(); ++j) {
    X.col(j).array() -= X.col(j).mean();
    const double norm = X.col(j).norm();
    if (!(norm > 0.0)) throw DegenerateColumn("column " + std::to_string(j) + " is constant", j);
    X.col(j) /= norm;
  }
  y.array() -= y.mean();
  const double ynorm = y.norm();
  if (!(ynorm > 0.0)) throw DegenerateColumn("response is constant", -1);
  y /= ynorm;
  return ProblemInstance(std::move(y), std::move(X));
}

ProblemInstance read_csv_instance(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.size() < 2) throw ParseError("need a header with a response and at least one column", lineno);

  std::size_t ycol = header.size() - 1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "y") ycol = i;
  }

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", lineno);

  const Index n = static_cast<Index>(rows.size());
  const Index p = static_cast<Index>(header.size()) - 1;
  Vector y(n);
  Matrix X(n, p);
  for (Index i = 0; i < n; ++i) {
    Index c = 0;
    for (std::size_t k = 0; k < header.size(); ++k) {
      const double v = rows[static_cast<std::size_t>(i)][k];
      if (k == ycol) {
        y[i] = v;
      } else {
        X(i, c++) = v;
      }
    }
  }
  return ProblemInstance(std::move(y), std::move(X));
}

LoadedInstance read_json_instance(std::istream& in) {
  const json doc = parse_json(in);
  const auto yv = get_field<std::vector<double>>(doc, "y");
  const auto xv = get_field<std::vector<std::vector<double>>>(doc, "X");
  if (xv.size() != yv.size()) {
    throw ParseError("X has " + std::to_string(xv.size()) + " rows but y has " +
                         std::to_string(yv.size()) + " entries",
                     0);
  }
  if (xv.empty()) throw ParseError("empty instance", 0);
  const std::size_t p = xv.front().size();
  Matrix X(static_cast<Index>(xv.size()), static_cast<Index>(p));
  for (std::size_t i = 0; i < xv.size(); ++i) {
    if (xv[i].size() != p) throw ParseError("row " + std::to_string(i) + " of X has wrong length", 0);
    for (std::size_t j = 0; j < p; ++j) X(static_cast<Index>(i), static_cast<Index>(j)) = xv[i][j];
  }
  Vector y = Eigen::Map<const Vector>(yv.data(), static_cast<Index>(yv.size()));

  InstanceMeta meta;
  if (doc.contains("meta") && doc["meta"].is_object()) {
    const json& m = doc["meta"];
    meta.name = m.value("name", "");
    meta.generated_by = m.value("generated_by", "");
    if (m.contains("alpha_factor") && m["alpha_factor"].is_number()) {
      meta.alpha_factor = m["alpha_factor"].get<double>();
    }
  }
  return {ProblemInstance(std::move(y), std::move(X)), meta};
}

LoadedInstance ingest(const std::filesystem::path& file, DataFormat format, bool normalize_data) {
  auto in = open_in(file);
  LoadedInstance out = format == DataFormat::Csv
                           ? LoadedInstance{read_csv_instance(in), {file.stem().string(), "csv", {}}}
                           : read_json_instance(in);
  if (normalize_data) out.instance = normalize(out.instance);
  return out;
}

void write_instance(std::ostream& out, const ProblemInstance& inst, const InstanceMeta& meta) {
  json doc;
  doc["y"] = std::vector<double>(inst.y().begin(), inst.y().end());
  json rows = json::array();
  for (Index i = 0; i < inst.n(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(inst.p()));
    for (Index j = 0; j < inst.p(); ++j) row[static_cast<std::size_t>(j)] = inst.X()(i, j);
    rows.push_back(std::move(row));
  }
  doc["X"] = std::move(rows);
  json m;
  m["name"] = meta.name;
  m["generated_by"] = meta.generated_by;
  if (meta.alpha_factor) m["alpha_factor"] = *meta.alpha_factor;
  doc["meta"] = std::move(m);
  out << doc.dump() << '\n';
}

void write_instance(const std::filesystem::path& file, const ProblemInstance& inst,
                    const InstanceMeta& meta) {
  auto out = open_out(file);
  write_instance(out, inst, meta);
}

void write_path(std::ostream& out, const RegularizationPath& path) {
  json doc;
  doc["kind"] = kind_name(path.kind);
  if (path.kind == PathKind::Approximate) doc["epsilon"] = path.epsilon;
  doc["lambda_max"] = path.lambda_max;
  doc["p"] = path.kinks.empty() ? 0 : path.kinks.front().coeffs.size();
  doc["status"] = to_string(path.status);
  doc["simultaneous_events"] = path.simultaneous_events;
  doc["first_order_steps"] = path.first_order_steps;
  json kinks = json::array();
  for (const Kink& k : path.kinks) {
    json r;
    r["lambda"] = k.lambda;
    std::vector<double> values;
    std::vector<int> signs;
    for (Index j : k.active_set) {
      values.push_back(k.coeffs[j]);
      signs.push_back(k.pattern[j]);
    }
    for (Index j = 0; j < k.coeffs.size(); ++j) {
      if (k.coeffs[j] != 0.0 &&
          std::find(k.active_set.begin(), k.active_set.end(), j) == k.active_set.end()) {
        throw LassoError("record has a nonzero coefficient outside its active set");
      }
    }
    r["active"] = k.active_set;
    r["values"] = values;
    r["signs"] = signs;
    if (path.kind == PathKind::Approximate) r["valid_until"] = k.valid_until;
    kinks.push_back(std::move(r));
  }
  doc["kinks"] = std::move(kinks);
  out << doc.dump() << '\n';
}

void write_path(const std::filesystem::path& file, const RegularizationPath& path) {
  auto out = open_out(file);
  write_path(out, path);
}

RegularizationPath read_path(std::istream& in) {
  const json doc = parse_json(in);
  RegularizationPath path;
  const auto kind = get_field<std::string>(doc, "kind");
  if (kind == "exact") {
    path.kind = PathKind::Exact;
  } else if (kind == "approx") {
    path.kind = PathKind::Approximate;
  } else {
    throw ParseError("unknown path kind '" + kind + "'", 0);
  }
  path.epsilon = doc.value("epsilon", 0.0);
  path.lambda_max = get_field<double>(doc, "lambda_max");
  path.status = status_from(doc.value("status", std::string("complete")));
  path.simultaneous_events = doc.value("simultaneous_events", std::size_t{0});
  path.first_order_steps = doc.value("first_order_steps", std::size_t{0});

  if (!doc.contains("kinks")) throw ParseError("missing field 'kinks'", 0);
  const json& kinks = doc["kinks"];
  if (!kinks.is_array()) throw ParseError("'kinks' must be an array", 0);

  Index p = doc.value("p", Index{0});
  if (p == 0) {
    for (const json& r : kinks) {
      for (Index j : get_field<std::vector<Index>>(r, "active")) p = std::max(p, j + 1);
    }
  }

  double previous = INFINITY;
  for (std::size_t i = 0; i < kinks.size(); ++i) {
    const json& r = kinks[i];
    Kink k;
    k.lambda = get_field<double>(r, "lambda");
    if (!(k.lambda < previous)) {
      throw ParseError("kink " + std::to_string(i) + ": lambdas must be strictly decreasing", 0);
    }
    previous = k.lambda;
    k.active_set = get_field<std::vector<Index>>(r, "active");
    const auto values = get_field<std::vector<double>>(r, "values");
    if (values.size() != k.active_set.size()) {
      throw ParseError("kink " + std::to_string(i) + ": 'active' and 'values' differ in length", 0);
    }
    std::vector<int> signs;
    if (r.contains("signs")) {
      signs = get_field<std::vector<int>>(r, "signs");
      if (signs.size() != values.size()) {
        throw ParseError("kink " + std::to_string(i) + ": 'signs' has wrong length", 0);
      }
    }
    k.coeffs = Vector::Zero(p);
    k.pattern = SignPattern(p);
    for (std::size_t a = 0; a < values.size(); ++a) {
      const Index j = k.active_set[a];
      if (j < 0 || j >= p) throw ParseError("kink " + std::to_string(i) + ": index out of range", 0);
      k.coeffs[j] = values[a];
      const int s = signs.empty() ? (values[a] > 0.0) - (values[a] < 0.0) : signs[a];
      if (s < -1 || s > 1) throw ParseError("kink " + std::to_string(i) + ": bad sign", 0);
      k.pattern.set(j, s);
    }
    k.valid_until = r.contains("valid_until") ? get_field<double>(r, "valid_until") : k.lambda;
    path.kinks.push_back(std::move(k));
  }
  return path;
}

RegularizationPath read_path(const std::filesystem::path& file) {
  auto in = open_in(file);
  return read_path(in);
}

double plot_transform(double w) {
  if (w == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(w), 0.1), w);
}

void emit_plot_data(const RegularizationPath& path, std::ostream& out) {
  const Index p = path.kinks.empty() ? 0 : path.kinks.front().coeffs.size();
  out << "lambda";
  for (Index j = 0; j < p; ++j) out << ",w" << j;
  out << '\n' << std::setprecision(17);
  for (const Kink& k : path.kinks) {
    out << k.lambda;
    for (Index j = 0; j < p; ++j) out << ',' << plot_transform(k.coeffs[j]);
    out << '\n';
  }
}

std::string report_json(const VerificationReport& report) {
  json doc;
  doc["samples_checked"] = report.samples_checked;
  doc["max_relative_gap"] = report.max_relative_gap;
  doc["worst_lambda"] = report.worst_lambda;
  doc["epsilon_target"] = report.epsilon_target;
  doc["pass"] = report.pass;
  doc["pattern_count"] = report.pattern_count;
  doc["upper_bound_ok"] = report.upper_bound_ok;
  doc["antipodal_free"] = report.antipodal_free;
  return doc.dump(2);
}

}  // namespace lassopath
