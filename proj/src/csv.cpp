#include "krongcrf/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace krongcrf {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw KronGcrfError("cannot open " + path + " for writing");
    }
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw KronGcrfError("cannot open " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw KronGcrfError("ragged CSV in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        return Matrix(0, 0);
    }
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

void write_vector_csv(const std::string& path, const Vector& v) {
    write_matrix_csv(path, v);
}

Vector read_vector_csv(const std::string& path) {
    Matrix m = read_matrix_csv(path);
    if (m.cols() != 1) {
        throw KronGcrfError("expected a single-column CSV in " + path);
    }
    return m.col(0);
}

} // namespace krongcrf
