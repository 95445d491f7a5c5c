#ifndef HELIXLAB_CORRELATION_HPP
#define HELIXLAB_CORRELATION_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "helixlab/errors.hpp"

namespace helix {

using Label = std::string;

/**
 * Symmetric positive semi-definite matrix with unit diagonal: the Gram
 * matrix of a projective configuration, equivalently the correlation
 * matrix of a zero-mean unit-variance Gaussian vector.
 *
 * Construction validates and normalizes:
 *   - square, labels unique and matching the dimension;
 *   - symmetric within tol_sym (then symmetrized);
 *   - diagonal within tol_sym of 1 (then set to exactly 1);
 *   - |entries| <= 1 + tol_sym (then clamped to [-1, 1]);
 *   - smallest eigenvalue >= -tol_psd * n * largest eigenvalue.
 */
class CorrelationMatrix {
public:
    CorrelationMatrix(std::vector<Label> labels, Eigen::MatrixXd entries,
                      double tol_sym = 1e-9, double tol_psd = 1e-9);

    Eigen::Index size() const { return matrix_.rows(); }
    const std::vector<Label>& labels() const { return labels_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    double entry(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }
    double entry(const Label& u, const Label& v) const {
        return matrix_(index_of(u), index_of(v));
    }

    /// Index of a label; throws InvalidParameters if absent.
    Eigen::Index index_of(const Label& label) const;

    /// Principal submatrix on the given labels, in the given order.
    CorrelationMatrix restricted(const std::vector<Label>& subset) const;

private:
    std::vector<Label> labels_;
    Eigen::MatrixXd matrix_;
};

/// Result of standardizing a raw covariance matrix.
struct StandardizedCovariance {
    CorrelationMatrix correlation;     // on the positive-variance labels
    std::vector<Label> zero_variance;  // labels with Var <= tol dropped
};

/// Divide a covariance matrix by the square roots of its diagonal.
/// Labels with variance <= tol_var are split out rather than divided by ~0.
StandardizedCovariance standardize_covariance(const std::vector<Label>& labels,
                                              const Eigen::MatrixXd& cov,
                                              double tol_var = 1e-12,
                                              double tol_sym = 1e-9,
                                              double tol_psd = 1e-9);

} // namespace helix

#endif // HELIXLAB_CORRELATION_HPP
