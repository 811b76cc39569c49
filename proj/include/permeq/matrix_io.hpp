#pragma once

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "permeq/linalg.hpp"

namespace permeq {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);
std::string format_complex(cdouble z);  // "a+bi"
cdouble parse_complex(const std::string& s);

// CSV: one row per line, comma separated.
Matrix read_csv(std::istream& in);
Matrix read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Matrix& m);
void write_csv_file(const std::string& path, const Matrix& m);

ComplexMatrix read_complex_csv(std::istream& in);
void write_complex_csv(std::ostream& out, const ComplexMatrix& m);

// {"rows": m, "cols": n, "data": [row-major entries]}
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
// complex entries are [re, im] pairs
nlohmann::json complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const nlohmann::json& j);

}  // namespace permeq
