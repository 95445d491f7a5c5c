#ifndef HELIXLAB_GEOMETRY_HPP
#define HELIXLAB_GEOMETRY_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "helixlab/correlation.hpp"
#include "helixlab/errors.hpp"

namespace helix::geo {

/// Vector on the unit sphere of a finite-dimensional Hilbert space.
class UnitVector {
public:
    /// Validates Euclidean norm 1 within tol_norm.
    explicit UnitVector(Eigen::VectorXd coords, double tol_norm = 1e-10);

    /// Rescale an arbitrary nonzero vector to unit length.
    static UnitVector normalized(const Eigen::VectorXd& v);

    const Eigen::VectorXd& coords() const { return coords_; }
    Eigen::Index dim() const { return coords_.size(); }

private:
    Eigen::VectorXd coords_;
};

/**
 * Point of the projective space: a unit vector up to global sign.
 * The stored representative is kept as constructed so that inner products
 * of representatives are meaningful; canonical_rep() fixes the sign
 * (first nonzero coordinate positive) for equality checks and output.
 */
class ProjectivePoint {
public:
    explicit ProjectivePoint(UnitVector rep) : rep_(std::move(rep)) {}

    const UnitVector& rep() const { return rep_; }
    Eigen::Index dim() const { return rep_.dim(); }

    UnitVector canonical_rep() const;

private:
    UnitVector rep_;
};

/// |<p, q>| clamped to [0, 1]; throws DimensionMismatch.
double abs_inner(const ProjectivePoint& p, const ProjectivePoint& q);

/// True iff p and q agree up to sign within tol (|<p,q>| >= 1 - tol).
bool same_point(const ProjectivePoint& p, const ProjectivePoint& q,
                double tol = 1e-10);

/// Geodesic metric of the projective space: arccos|<p, q>|, in [0, pi/2].
double geodesic_distance(const ProjectivePoint& p, const ProjectivePoint& q);

/**
 * Spherical projection of y onto the projective space of the hyperplane
 * orthogonal to s0: project orthogonally, then rescale to unit length.
 * Throws ProjectionUndefined when |<s0, y>| >= 1 - tol (y at or too close
 * to the base point).
 */
ProjectivePoint spherical_project(const ProjectivePoint& s0,
                                  const ProjectivePoint& y,
                                  double tol = 1e-12);

/// Labeled finite configuration in one projective space.
class Configuration {
public:
    Configuration(std::vector<Label> labels, std::vector<ProjectivePoint> points);

    std::size_t size() const { return points_.size(); }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<ProjectivePoint>& points() const { return points_; }
    const ProjectivePoint& point(std::size_t i) const { return points_[i]; }

    /// Pairwise inner products of the stored representatives.
    Eigen::MatrixXd gram() const;

private:
    std::vector<Label> labels_;
    std::vector<ProjectivePoint> points_;
};

struct InvarianceViolation {
    Label s0;
    Label x;
    Label y;
    double discrepancy;         // NaN when the projection was undefined
    bool projection_undefined;
};

struct InvarianceReport {
    bool passed = true;
    double max_discrepancy = 0.0;  // over all defined checks
    std::vector<InvarianceViolation> violations;
};

/**
 * Checks whether the configuration keeps its isometry type under every
 * spherical projection: for each base point s0 and each pair {x, y}
 * disjoint from s0, |<p(x), p(y)>| must equal |<x, y>| within tol.
 * Pairs whose projection is undefined (|<s0, .>| within tol of 1) are
 * reported as structural violations.
 */
InvarianceReport verify_projection_invariance(const Configuration& config,
                                              double tol = 1e-8);

/**
 * Realize a correlation matrix as unit vectors via spectral factorization;
 * ambient dimension is the numerical rank. Eigenvalues in the band
 * [-tol_psd * n * lambda_max, 0) are clamped to zero; anything lower
 * throws NotPsd. The returned representatives reproduce the matrix
 * entrywise (signs included).
 */
Configuration embed_gram(const CorrelationMatrix& gram, double tol_psd = 1e-9);

} // namespace helix::geo

#endif // HELIXLAB_GEOMETRY_HPP
