#ifndef TRIWIN_ERRORS_HPP
#define TRIWIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace triwin {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct file_not_found : error {
    explicit file_not_found(const std::string& path)
        : error("file not found: " + path) {}
};

struct parse_error : error {
    std::size_t row, col;
    parse_error(std::size_t r, std::size_t c, const std::string& detail)
        : error("parse error at row " + std::to_string(r) + ", col " +
                std::to_string(c) + ": " + detail),
          row(r), col(c) {}
};

struct empty_class : error {
    explicit empty_class(const std::string& which)
        : error("class set matched zero rows: " + which) {}
};

struct unachievable_ir : error {
    explicit unachievable_ir(const std::string& detail)
        : error("unachievable imbalance ratio: " + detail) {}
};

struct too_few_samples : error {
    explicit too_few_samples(const std::string& detail)
        : error("too few samples: " + detail) {}
};

struct dimension_mismatch : error {
    explicit dimension_mismatch(const std::string& detail)
        : error("dimension mismatch: " + detail) {}
};

struct not_square : error {
    not_square() : error("matrix is not square") {}
};

struct k_too_large : error {
    k_too_large(int k, int m)
        : error("k = " + std::to_string(k) + " must be < sample count " +
                std::to_string(m)) {}
};

struct index_out_of_range : error {
    explicit index_out_of_range(const std::string& detail)
        : error("index out of range: " + detail) {}
};

struct not_converged : error {
    double residual;
    explicit not_converged(double r)
        : error("solver did not converge, residual " + std::to_string(r)),
          residual(r) {}
};

struct not_positive_definite : error {
    not_positive_definite() : error("matrix is not positive definite") {}
};

struct degenerate_plane : error {
    explicit degenerate_plane(int which)
        : error("recovered plane " + std::to_string(which) +
                " has numerically zero norm") {}
};

struct too_few_positives : error {
    explicit too_few_positives(const std::string& detail)
        : error("too few positive samples: " + detail) {}
};

struct empty_test_class : error {
    explicit empty_test_class(const std::string& which)
        : error("test fold contains no " + which + " samples") {}
};

struct missing_entry : error {
    explicit missing_entry(const std::string& detail)
        : error("missing entry: " + detail) {}
};

struct degenerate_denominator : error {
    degenerate_denominator() : error("degenerate denominator n(k-1) = tau") {}
};

struct config_error : error {
    explicit config_error(const std::string& detail) : error(detail) {}
};

} // namespace triwin

#endif
