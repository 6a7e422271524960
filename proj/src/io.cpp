#include "oneforms/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace oneforms::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_to_json(const RealMatrix& a) {
  json data = json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) data.push_back(a(i, j));
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

RealMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw FormatError("matrix must be an object with rows, cols and data");
  }
  const auto& r = j.at("rows");
  const auto& c = j.at("cols");
  const auto& data = j.at("data");
  if (!r.is_number_integer() || !c.is_number_integer() || r.get<long>() < 1 || c.get<long>() < 1) {
    throw FormatError("matrix rows and cols must be positive integers");
  }
  const Index rows = r.get<Index>();
  const Index cols = c.get<Index>();
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    throw FormatError("matrix data must hold rows * cols numbers");
  }
  RealMatrix a(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const auto& x = data[static_cast<std::size_t>(k)];
    if (!x.is_number()) throw FormatError("matrix data must be numeric");
    const double v = x.get<double>();
    if (!std::isfinite(v)) throw FormatError("matrix data must be finite");
    a(k / cols, k % cols) = v;
  }
  return a;
}

json form_to_json(const DiscreteOneForm& alpha) {
  json out = json::array();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out.push_back({{"theta", alpha.nodes[i]},
                   {"weight", alpha.weights[i]},
                   {"matrix", matrix_to_json(alpha.values[i].mat())}});
  }
  return out;
}

DiscreteOneForm form_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("form must be a non-empty array");
  std::vector<double> nodes, weights;
  std::vector<RealMatrix> values;
  bool have_weights = true;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("theta") || !e.contains("matrix")) {
      throw FormatError("form entries need theta and matrix");
    }
    nodes.push_back(e.at("theta").get<double>());
    values.push_back(matrix_from_json(e.at("matrix")));
    if (e.contains("weight")) {
      weights.push_back(e.at("weight").get<double>());
    } else {
      have_weights = false;
    }
  }
  if (!have_weights) weights.clear();
  return make_form(std::move(nodes), values, std::move(weights));
}

std::string curve_to_csv(const DiscreteCurve& c) {
  std::string out = "theta";
  for (Index k = 0; k < c.dim(); ++k) out += ",x" + std::to_string(k + 1);
  out += '\n';
  for (std::size_t i = 0; i < c.size(); ++i) {
    out += format_double(c.nodes[i]);
    for (Index k = 0; k < c.dim(); ++k) out += ',' + format_double(c.points[i](k));
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError("not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size() || !std::isfinite(v)) throw FormatError("not a finite number: '" + s + "'");
  return v;
}

}  // namespace

DiscreteCurve curve_from_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("curve CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "theta") {
    throw FormatError("curve CSV header must be theta,x1,..,xn");
  }
  const std::size_t n = header.size() - 1;
  std::vector<double> nodes;
  std::vector<Eigen::VectorXd> points;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != n + 1) throw FormatError("curve CSV row has the wrong number of columns");
    nodes.push_back(parse_double(cells[0]));
    Eigen::VectorXd p(static_cast<Index>(n));
    for (std::size_t k = 0; k < n; ++k) p(static_cast<Index>(k)) = parse_double(cells[k + 1]);
    points.push_back(std::move(p));
  }
  return make_curve(std::move(nodes), std::move(points));
}

std::string path_to_csv(const std::vector<double>& times, const std::vector<RealMatrix>& frames) {
  std::string out = "t";
  if (!frames.empty()) {
    for (Index i = 0; i < frames[0].rows(); ++i)
      for (Index j = 0; j < frames[0].cols(); ++j)
        out += ",a" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  }
  out += '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    out += format_double(times[k]);
    for (Index i = 0; i < frames[k].rows(); ++i)
      for (Index j = 0; j < frames[k].cols(); ++j) out += ',' + format_double(frames[k](i, j));
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw FormatError("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace oneforms::io
