#ifndef HELIXLAB_PROCESS_HPP
#define HELIXLAB_PROCESS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "helixlab/correlation.hpp"
#include "helixlab/errors.hpp"

namespace helix::gp {

// Process kinds. Times are real for the three curves; index-valued
// (0..3 for A..D, 0..n-1 for explicit matrices) otherwise.
struct HelixX {};                        // sech(t - s), t in R
struct TaylorF {};                       // 1/(1 - st), |t| < 1
struct LaplaceG {};                      // 1/(s + t), t > 0
struct QuadrupleY { double x, y; };      // quadruple Gram, labels A..D
struct ExplicitMatrix { CorrelationMatrix corr; };

/// A named covariance kernel with its domain.
class ProcessSpec {
public:
    using Kind =
        std::variant<HelixX, TaylorF, LaplaceG, QuadrupleY, ExplicitMatrix>;

    static ProcessSpec helix_x() { return ProcessSpec(HelixX{}); }
    static ProcessSpec taylor_f() { return ProcessSpec(TaylorF{}); }
    static ProcessSpec laplace_g() { return ProcessSpec(LaplaceG{}); }
    /// Throws NotAdmissible when the quadruple Gram would not be PSD.
    static ProcessSpec quadruple_y(double x, double y);
    static ProcessSpec explicit_matrix(CorrelationMatrix corr) {
        return ProcessSpec(ExplicitMatrix{std::move(corr)});
    }

    const Kind& kind() const { return kind_; }
    /// True for the kinds whose variance is identically 1.
    bool unit_variance() const;
    std::string name() const;

private:
    explicit ProcessSpec(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

/// Covariance K(s, t); throws DomainError outside the kind's domain.
double kernel_eval(const ProcessSpec& spec, double s, double t);

/// Correlation of the unit-variance version: K(s,t)/sqrt(K(s,s)K(t,t)).
double standardized_kernel(const ProcessSpec& spec, double s, double t);

/// Kernel matrix on a finite time set.
Eigen::MatrixXd kernel_matrix(const ProcessSpec& spec,
                              std::span<const double> times);

struct TimeChangeCheck {
    bool passed = true;
    double max_discrepancy = 0.0;
};

/// Verifies both time-change identities on all pairs from `times`:
/// the Taylor kernel at (tanh s, tanh t) and the Laplace kernel at
/// (e^{2s}, e^{2t}), standardized, must equal sech(s - t).
TimeChangeCheck check_time_change(std::span<const double> times,
                                  double tol = 1e-12);

/**
 * Correlation matrix of the standardized residual after conditioning on
 * Z(s0) = 0: (K(s,t) - K(s,s0)K(t,s0)) / sqrt((1-K(s,s0)^2)(1-K(t,s0)^2)).
 * Requires a unit-variance spec and s0 not perfectly correlated with any
 * requested time (else DegenerateConditioning).
 */
CorrelationMatrix condition_residual(const ProcessSpec& spec,
                                     std::span<const double> times, double s0);

/// Multi-point conditioning as iterated single-point residuals; the pins
/// must be pairwise distinct. Order of pins does not change the result.
CorrelationMatrix iterated_condition_residual(const ProcessSpec& spec,
                                              std::span<const double> times,
                                              std::span<const double> pins);

struct ConditioningCheck {
    bool passed = false;
    double max_discrepancy = 0.0;
    /// (t, phi(t)): conditional law = law of (phi(t) Z(t)).
    std::vector<std::pair<double, double>> multipliers;
};

/**
 * Checks the conditioning identity: the covariance of the conditioned
 * process, K(s,t) - K(s,s0)K(t,s0), must equal phi(s)phi(t)K(s,t) with
 * phi(t) = tanh(t - s0) for the helix. For the other kinds only
 * |phi(t)| = sqrt(1 - K(t,s0)^2) is determined and a globally consistent
 * sign assignment need not exist, so the identity is verified entrywise
 * in absolute value; the reported multipliers carry signs recovered over
 * a spanning forest.
 */
ConditioningCheck check_conditioning_identity(const ProcessSpec& spec,
                                              double s0,
                                              std::span<const double> times,
                                              double tol = 1e-12);

/// Multi-point helix conditioning: iterating the residual over all pins
/// must reproduce the helix correlation up to the signs of the product
/// multiplier prod_i tanh(t - pin_i), which is reported per time.
ConditioningCheck check_multi_conditioning_helix(std::span<const double> pins,
                                                 std::span<const double> times,
                                                 double tol = 1e-12);

struct SamplePaths {
    std::vector<double> times;
    Eigen::MatrixXd samples;  // n_samples x n_times
    std::uint64_t seed = 0;
};

/**
 * n i.i.d. zero-mean Gaussian vectors with the spec's covariance on
 * `times`. The normal variate for (sample, coordinate) is derived from the
 * seed by a counter-based generator, so output is bitwise reproducible.
 * Spectral factorization; eigenvalues in the PSD tolerance band are
 * clamped to zero, anything below throws NotPsd.
 */
SamplePaths sample(const ProcessSpec& spec, std::span<const double> times,
                   std::size_t n, std::uint64_t seed);

/// Residual-constructed paths: sample the process on times plus s0, then
/// form (z(t) - K(t,s0) z(s0)) / sqrt(1 - K(t,s0)^2) per path. Their
/// covariance estimates the conditioned (multiplier-scaled) kernel.
SamplePaths conditioned_sample(const ProcessSpec& spec,
                               std::span<const double> times, double s0,
                               std::size_t n, std::uint64_t seed);

struct EmpiricalCovariance {
    Eigen::MatrixXd cov;             // unbiased sample covariance
    Eigen::MatrixXd standard_error;  // per-entry asymptotic standard error
};

/// Throws InvalidParameters for fewer than 2 samples.
EmpiricalCovariance empirical_covariance(const SamplePaths& paths);

} // namespace helix::gp

#endif // HELIXLAB_PROCESS_HPP
