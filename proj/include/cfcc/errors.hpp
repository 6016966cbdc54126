#ifndef CFCC_ERRORS_HPP_
#define CFCC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cfcc {

// Malformed input files. CLI maps this to exit code 3.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Structurally invalid data (empty graph, bad node ids, infeasible k).
struct data_error : std::runtime_error {
    explicit data_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Numerical failure (singular Schur estimate, CG non-convergence). Exit code 4.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace cfcc

#endif // CFCC_ERRORS_HPP_
