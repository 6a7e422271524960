#pragma once

// File formats: matrices and forms as JSON, curves as CSV.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "oneforms/discrete_forms.hpp"

namespace oneforms::io {

using nlohmann::json;

/// Malformed input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g, enough to round-trip any double.
std::string format_double(double x);

/// {"rows": r, "cols": c, "data": [row-major entries]}
json matrix_to_json(const RealMatrix& a);
RealMatrix matrix_from_json(const json& j);

/// [{"theta": .., "weight": .., "matrix": {..}}, ...]
json form_to_json(const DiscreteOneForm& alpha);
DiscreteOneForm form_from_json(const json& j);

/// Header "theta,x1,..,xn", one row per node.
std::string curve_to_csv(const DiscreteCurve& c);
DiscreteCurve curve_from_csv(const std::string& text);

/// "t,a11,a12,..": one row per time, entries of a(t) row-major.
std::string path_to_csv(const std::vector<double>& times, const std::vector<RealMatrix>& frames);

std::string read_file(const std::string& path);
json read_json(const std::string& path);

/// Writes to a sibling temporary file, then renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace oneforms::io
