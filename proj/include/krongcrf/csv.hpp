#pragma once

#include "krongcrf/types.hpp"

#include <string>

namespace krongcrf {

// Dense row-major CSV, one matrix row per line, %.17g so values round-trip.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

void write_vector_csv(const std::string& path, const Vector& v);
Vector read_vector_csv(const std::string& path);

} // namespace krongcrf
