#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "itac/io.hpp"

namespace itac::testing {

inline std::string data_path(const std::string& rel) { return std::string(ITAC_DATA_DIR) + "/" + rel; }

inline const io::Project& reference_project() {
    static const io::Project p = io::load_project(ITAC_DATA_DIR);
    return p;
}

inline io::CsvTable reference_table(const std::string& name) {
    const auto path = data_path("reference/" + name);
    return io::CsvTable::parse(io::read_file(path), path);
}

// Dense solve by Gaussian elimination with partial pivoting; A is row-major n x n.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        }
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    return x;
}

}  // namespace itac::testing
