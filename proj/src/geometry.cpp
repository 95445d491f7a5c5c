#include "helixlab/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace helix::geo {

UnitVector::UnitVector(Eigen::VectorXd coords, double tol_norm)
    : coords_(std::move(coords)) {
    if (coords_.size() == 0)
        throw InvalidParameters("unit vector must have positive dimension");
    if (std::abs(coords_.norm() - 1.0) > tol_norm)
        throw InvalidParameters("vector norm is not 1 within tolerance");
}

UnitVector UnitVector::normalized(const Eigen::VectorXd& v) {
    const double n = v.norm();
    if (n == 0.0)
        throw InvalidParameters("cannot normalize the zero vector");
    return UnitVector(v / n);
}

UnitVector ProjectivePoint::canonical_rep() const {
    const Eigen::VectorXd& v = rep_.coords();
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-9 * scale)
            return v[i] > 0 ? rep_ : UnitVector(-v);
    }
    return rep_;
}

double abs_inner(const ProjectivePoint& p, const ProjectivePoint& q) {
    if (p.dim() != q.dim())
        throw DimensionMismatch("projective points have different dimensions");
    const double c = p.rep().coords().dot(q.rep().coords());
    return std::min(std::abs(c), 1.0);
}

bool same_point(const ProjectivePoint& p, const ProjectivePoint& q,
                double tol) {
    return abs_inner(p, q) >= 1.0 - tol;
}

double geodesic_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    return std::acos(abs_inner(p, q));
}

ProjectivePoint spherical_project(const ProjectivePoint& s0,
                                  const ProjectivePoint& y, double tol) {
    if (s0.dim() != y.dim())
        throw DimensionMismatch("projective points have different dimensions");
    const Eigen::VectorXd& base = s0.rep().coords();
    const Eigen::VectorXd& v = y.rep().coords();
    const double c = base.dot(v);
    if (std::abs(c) >= 1.0 - tol)
        throw ProjectionUndefined("spherical projection undefined at the base point");
    const Eigen::VectorXd w = v - base * c;
    return ProjectivePoint(UnitVector::normalized(w));
}

Configuration::Configuration(std::vector<Label> labels,
                             std::vector<ProjectivePoint> points)
    : labels_(std::move(labels)), points_(std::move(points)) {
    if (labels_.size() != points_.size())
        throw InvalidParameters("label count does not match point count");
    std::set<Label> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size())
        throw InvalidParameters("labels must be unique");
    for (const auto& p : points_) {
        if (p.dim() != points_.front().dim())
            throw DimensionMismatch("all points must share ambient dimension");
    }
}

Eigen::MatrixXd Configuration::gram() const {
    const Eigen::Index n = static_cast<Eigen::Index>(points_.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double c =
                points_[i].rep().coords().dot(points_[j].rep().coords());
            g(i, j) = c;
            g(j, i) = c;
        }
    }
    return g;
}

InvarianceReport verify_projection_invariance(const Configuration& config,
                                              double tol) {
    const std::size_t n = config.size();
    if (n < 3)
        throw InvalidParameters("invariance check needs at least 3 points");

    InvarianceReport report;
    const Eigen::MatrixXd gram = config.gram();

    for (std::size_t s = 0; s < n; ++s) {
        // Project every other point; undefined projections are structural
        // violations: the invariance property presumes distinct points.
        std::vector<std::optional<ProjectivePoint>> projected(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == s) continue;
            if (std::abs(gram(s, i)) >= 1.0 - tol) {
                report.violations.push_back(
                    {config.labels()[s], config.labels()[i], config.labels()[i],
                     std::numeric_limits<double>::quiet_NaN(), true});
                continue;
            }
            projected[i] =
                spherical_project(config.point(s), config.point(i), tol);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == s || !projected[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (j == s || !projected[j]) continue;
                const double before = std::abs(gram(i, j));
                const double after = abs_inner(*projected[i], *projected[j]);
                const double disc = std::abs(after - before);
                report.max_discrepancy = std::max(report.max_discrepancy, disc);
                if (disc > tol) {
                    report.violations.push_back({config.labels()[s],
                                                 config.labels()[i],
                                                 config.labels()[j], disc,
                                                 false});
                }
            }
        }
    }
    report.passed = report.violations.empty();
    return report;
}

Configuration embed_gram(const CorrelationMatrix& gram, double tol_psd) {
    const Eigen::Index n = gram.size();
    if (n == 0)
        throw InvalidParameters("cannot embed an empty matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.matrix());
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double lambda_max = lambda.maxCoeff();
    const double floor = -tol_psd * static_cast<double>(n) * lambda_max;

    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (lambda[k] < floor)
            throw NotPsd("matrix has an eigenvalue below the PSD tolerance");
        if (lambda[k] > -floor)  // numerical rank: eigenvalues above the band
            kept.push_back(k);
    }
    const Eigen::Index rank = static_cast<Eigen::Index>(kept.size());
    if (rank == 0)
        throw NotPsd("matrix has numerical rank zero");

    Eigen::MatrixXd factors(n, rank);
    for (Eigen::Index c = 0; c < rank; ++c)
        factors.col(c) =
            eig.eigenvectors().col(kept[c]) * std::sqrt(lambda[kept[c]]);

    std::vector<ProjectivePoint> points;
    points.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        // Row norms equal sqrt(diag) = 1 up to the clamped spectrum.
        points.emplace_back(UnitVector::normalized(factors.row(i).transpose()));
    }
    return Configuration(gram.labels(), std::move(points));
}

} // namespace helix::geo
