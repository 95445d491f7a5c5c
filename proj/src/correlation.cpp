#include "helixlab/correlation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace helix {

CorrelationMatrix::CorrelationMatrix(std::vector<Label> labels,
                                     Eigen::MatrixXd entries, double tol_sym,
                                     double tol_psd)
    : labels_(std::move(labels)), matrix_(std::move(entries)) {
    const Eigen::Index n = matrix_.rows();
    if (matrix_.cols() != n)
        throw InvalidParameters("correlation matrix must be square");
    if (static_cast<Eigen::Index>(labels_.size()) != n)
        throw InvalidParameters("label count does not match matrix dimension");

    std::set<Label> seen(labels_.begin(), labels_.end());
    if (static_cast<Eigen::Index>(seen.size()) != n)
        throw InvalidParameters("labels must be unique");

    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(matrix_(i, i) - 1.0) > tol_sym)
            throw InvalidParameters("diagonal entry of " + labels_[i] +
                                    " is not 1");
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(matrix_(i, j) - matrix_(j, i)) > tol_sym)
                throw InvalidParameters("matrix is not symmetric at (" +
                                        labels_[i] + ", " + labels_[j] + ")");
            if (std::abs(matrix_(i, j)) > 1.0 + tol_sym)
                throw InvalidParameters("entry (" + labels_[i] + ", " +
                                        labels_[j] + ") exceeds 1 in modulus");
        }
    }

    // Normalize: exact symmetry, unit diagonal, entries clamped to [-1, 1].
    matrix_ = ((matrix_ + matrix_.transpose()) / 2.0).eval();
    for (Eigen::Index i = 0; i < n; ++i) {
        matrix_(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = std::clamp(matrix_(i, j), -1.0, 1.0);
            matrix_(i, j) = v;
            matrix_(j, i) = v;
        }
    }

    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            matrix_, Eigen::EigenvaluesOnly);
        const double lambda_min = eig.eigenvalues().minCoeff();
        const double lambda_max = eig.eigenvalues().maxCoeff();
        if (lambda_min < -tol_psd * static_cast<double>(n) * lambda_max)
            throw NotPsd("matrix is not positive semi-definite (lambda_min = " +
                         std::to_string(lambda_min) + ")");
    }
}

Eigen::Index CorrelationMatrix::index_of(const Label& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw InvalidParameters("unknown label: " + label);
    return static_cast<Eigen::Index>(it - labels_.begin());
}

CorrelationMatrix CorrelationMatrix::restricted(
    const std::vector<Label>& subset) const {
    const Eigen::Index m = static_cast<Eigen::Index>(subset.size());
    Eigen::MatrixXd sub(m, m);
    std::vector<Eigen::Index> idx(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k)
        idx[k] = index_of(subset[k]);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            sub(i, j) = matrix_(idx[i], idx[j]);
    return CorrelationMatrix(subset, std::move(sub));
}

StandardizedCovariance standardize_covariance(const std::vector<Label>& labels,
                                              const Eigen::MatrixXd& cov,
                                              double tol_var, double tol_sym,
                                              double tol_psd) {
    const Eigen::Index n = cov.rows();
    if (cov.cols() != n || static_cast<Eigen::Index>(labels.size()) != n)
        throw InvalidParameters("covariance matrix/label shape mismatch");

    std::vector<Label> kept;
    std::vector<Eigen::Index> kept_idx;
    std::vector<Label> zero_variance;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (cov(i, i) < -tol_var)
            throw InvalidParameters("negative variance for " + labels[i]);
        if (cov(i, i) <= tol_var) {
            zero_variance.push_back(labels[i]);
        } else {
            kept.push_back(labels[i]);
            kept_idx.push_back(i);
        }
    }

    const Eigen::Index m = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXd corr(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            const Eigen::Index i = kept_idx[a], j = kept_idx[b];
            corr(a, b) = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
        }
    }
    return {CorrelationMatrix(kept, std::move(corr), tol_sym, tol_psd),
            std::move(zero_variance)};
}

} // namespace helix
