// Test-only oracles, independent of the implementation paths they check.

#ifndef HELIXLAB_TESTS_ORACLES_HPP
#define HELIXLAB_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracles {

// Frozen reference values, computed with a 40-digit evaluator.
inline constexpr double kAcosSech1 = 0.8657694832396586;
inline constexpr double kAcosh2 = 1.3169578969248168;
inline constexpr double kSech1 = 0.6480542736638853;
inline constexpr double kLambda4At3And15 = 0.24913585753487227;   // (x,y)=(3,1.5)
inline constexpr double kLambda4At2And1 = -0.030306318493691108;  // (x,y)=(2,1)
inline constexpr double kConditionedCov12 = 0.475800003318574;    // s0=0,(1,2)

/// Exhaustive line-embedding oracle: fix the first point at 0, the second
/// at +d01, and try both signs for every remaining point. A 4-point space
/// embeds iff some sign assignment is an isometry. (Equivalent to trying
/// all orderings with greedy placement.)
inline bool embeds_in_line_brute(const Eigen::MatrixXd& dist, double tol_abs) {
    const Eigen::Index n = dist.rows();
    if (n <= 2) return true;
    const Eigen::Index free_points = n - 2;
    for (unsigned mask = 0; mask < (1u << free_points); ++mask) {
        std::vector<double> coord(static_cast<std::size_t>(n));
        coord[0] = 0.0;
        coord[1] = dist(0, 1);
        for (Eigen::Index k = 2; k < n; ++k) {
            const bool negative = (mask >> (k - 2)) & 1u;
            coord[static_cast<std::size_t>(k)] =
                negative ? -dist(0, k) : dist(0, k);
        }
        bool ok = true;
        for (Eigen::Index i = 0; i < n && ok; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                if (std::abs(std::abs(coord[static_cast<std::size_t>(i)] -
                                      coord[static_cast<std::size_t>(j)]) -
                             dist(i, j)) > tol_abs) {
                    ok = false;
                    break;
                }
            }
        if (ok) return true;
    }
    return false;
}

/// Eigenvalues by numerical eigensolver, ascending.
inline Eigen::VectorXd eigenvalues_oracle(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m,
                                                       Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Random instance generators (deterministic per std::mt19937_64 state)
// ---------------------------------------------------------------------------

/// Random correlation matrix: normalized A A^T with A n-by-k Gaussian.
inline Eigen::MatrixXd random_correlation(std::mt19937_64& gen, int n, int k) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) a(i, j) = normal(gen);
    Eigen::MatrixXd g = a * a.transpose();
    Eigen::VectorXd d = g.diagonal().cwiseSqrt();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) /= d(i) * d(j);
    return g;
}

/// Helix parameters with gaps in [0.05, 1.5] (keeps every correlation well
/// inside the resolvable range) and random signs.
struct HelixInstance {
    std::map<std::string, double> psi;
    std::map<std::string, int> signs;
};

inline HelixInstance random_helix(std::mt19937_64& gen, int n,
                                  const std::string& prefix = "p") {
    std::uniform_real_distribution<double> gap(0.05, 1.5);
    std::uniform_int_distribution<int> flip(0, 1);
    HelixInstance inst;
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::string label = prefix + std::to_string(i);
        if (i > 0) t += gap(gen);
        inst.psi[label] = t;
        inst.signs[label] = flip(gen) ? +1 : -1;
    }
    return inst;
}

/// Rejection-sample an admissible quadruple pair with a safety margin from
/// the PSD boundary and the diagonal.
inline std::pair<double, double> random_admissible_pair(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.05, 5.0);
    auto sech = [](double v) { return 1.0 / std::cosh(v); };
    for (;;) {
        const double x = u(gen);
        const double y = u(gen);
        if (std::abs(x - y) < 0.05) continue;
        const double sx = sech(x), sy = sech(y), sxy = sech(x - y);
        const double l2 = 1.0 + sy - sxy - sx;
        const double l3 = 1.0 - sy + sxy - sx;
        const double l4 = 1.0 - sy - sxy + sx;
        if (std::min({l2, l3, l4}) > 1e-4) return {x, y};
    }
}

/// Canonical parameters of an exceptional quadruple: the two largest of
/// {x, y, |x - y|}.
inline std::pair<double, double> canonical_pair(double x, double y) {
    std::vector<double> v = {std::max(x, y), std::min(x, y),
                             std::abs(x - y)};
    std::sort(v.begin(), v.end(), std::greater<>());
    return {v[0], v[1]};
}

} // namespace oracles

#endif // HELIXLAB_TESTS_ORACLES_HPP
