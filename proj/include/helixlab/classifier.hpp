#ifndef HELIXLAB_CLASSIFIER_HPP
#define HELIXLAB_CLASSIFIER_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "helixlab/correlation.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/metric.hpp"

namespace helix::gram {

struct Tolerances {
    double tol_dup = 1e-9;      // |corr| within tol_dup of 1 merges labels
    double tol_orth = 1e-9;     // absolute threshold for "orthogonal"
    double tol_psd = 1e-9;      // scaled by n * lambda_max for matrices
    double tol_metric = 1e-9;   // triangle-equality checks, diameter-relative
    double tol_xy = 1e-8;       // minimal |x - y| for admissible quadruples
};

/// sech distance kernel: the correlation of two helix points at parameter
/// distance delta.
inline double sech(double delta) { return 1.0 / std::cosh(delta); }

// ---------------------------------------------------------------------------
// Pipeline stages
// ---------------------------------------------------------------------------

struct CollapseResult {
    CorrelationMatrix collapsed;
    std::map<Label, Label> representative;  // every original label -> rep
    std::map<Label, int> sign;              // original relative to rep; rep -> +1
};

/// Merge labels whose correlation is +-1 within tol onto one representative
/// (the lexicographically smallest of each group).
CollapseResult collapse_duplicates(const CorrelationMatrix& corr,
                                   double tol = 1e-9);

struct OrthogonalComponents {
    std::vector<std::vector<Label>> components;  // sorted, by smallest label
    /// Pairs orthogonal within tol yet connected through the same component:
    /// impossible for an invariant configuration (orthogonality must be
    /// transitive across the complement).
    struct IntransitivePair {
        Label u, v;
    };
    std::vector<IntransitivePair> intransitive;
};

/// Connected components of the graph with edges where |corr| > tol_orth.
/// Requires duplicates collapsed.
OrthogonalComponents orthogonal_components(const CorrelationMatrix& corr,
                                           double tol_orth = 1e-9);

struct SignRecovery {
    std::map<Label, int> signs;  // signs[s0] = +1
    /// True when the sign-adjusted matrix is entrywise strictly positive;
    /// a false value means the component cannot be invariant.
    bool positive = true;
    std::optional<std::pair<Label, Label>> negative_witness;
};

/// Signs relating each point to the reference s0: signs(u) = sign(corr(u, s0)).
/// Throws ZeroPivot if some correlation against s0 vanishes within tol_orth.
SignRecovery recover_signs(const CorrelationMatrix& component, const Label& s0,
                           double tol_orth = 1e-9);

/// Map an entrywise-positive correlation matrix to the metric
/// d(u, v) = arccosh(1 / corr(u, v)); inverse of the sech kernel.
/// Throws NonPositiveEntry.
metric::FiniteMetricSpace gram_to_metric(const CorrelationMatrix& positive);

// ---------------------------------------------------------------------------
// Exceptional quadruples in Gram form
// ---------------------------------------------------------------------------

/// Closed-form eigenvalues of the quadruple Gram matrix, in the order
///   1 + sech y + sech(x-y) + sech x,
///   1 + sech y - sech(x-y) - sech x,
///   1 - sech y + sech(x-y) - sech x,
///   1 - sech y - sech(x-y) + sech x.
/// Valid for all real (x, y), PSD or not.
std::array<double, 4> quadruple_eigenvalues(double x, double y);

/// True iff min(lambda2, lambda3, lambda4) >= -tol_psd and |x - y| > tol_xy.
/// Evaluated so that the decision is bitwise symmetric in (x, y).
bool is_admissible(double x, double y, double tol_psd = 1e-9,
                   double tol_xy = 1e-8);

/// Grid scan of (0, xmax]^2 at the given spacing; returns the admissible
/// points in lexicographic order.
std::vector<std::pair<double, double>> admissible_region(
    double xmax, double step, double tol_psd = 1e-9, double tol_xy = 1e-8);

/// The raw 4x4 pattern matrix of a quadruple (no admissibility check);
/// rows/columns ordered A, B, C, D.
Eigen::Matrix4d quadruple_pattern(double x, double y);

// ---------------------------------------------------------------------------
// Gram constructors
// ---------------------------------------------------------------------------

/// Correlation matrix of helix points: entry(u, v) =
/// signs(u) * signs(v) * sech(psi(u) - psi(v)). Labels absent from signs
/// default to +1.
CorrelationMatrix helix_gram(const std::map<Label, double>& psi,
                             const std::map<Label, int>& signs = {});

/// The quadruple Gram matrix on labels A, B, C, D with sign conjugation.
/// Throws NotAdmissible.
CorrelationMatrix quadruple_gram(double x, double y,
                                 const std::map<Label, int>& signs = {});

// ---------------------------------------------------------------------------
// Classification report
// ---------------------------------------------------------------------------

struct HelixComponent {
    std::vector<Label> labels;     // sorted
    std::map<Label, double> psi;   // canonical: min 0, orientation fixed by
                                   // the two smallest labels
    std::map<Label, int> signs;    // smallest label -> +1
};

struct QuadrupleComponent {
    std::array<Label, 4> labels;   // sorted
    double x = 0.0;                // canonical x > y
    double y = 0.0;
    std::map<Label, int> signs;
};

struct SingletonComponent {
    Label label;
    int sign = 1;  // 0 marks a zero-variance label from a covariance input
};

using ComponentReport =
    std::variant<HelixComponent, QuadrupleComponent, SingletonComponent>;

enum class Status { Classified, NotInvariant };

struct ClassificationReport {
    Status status = Status::Classified;
    std::vector<ComponentReport> components;
    std::map<Label, Label> collapsed;      // original -> representative
    std::map<Label, int> collapse_signs;
    std::vector<std::string> diagnostics;  // reasons when NotInvariant
};

/**
 * Full decomposition pipeline: collapse duplicates, split into orthogonal
 * components, recover signs, map to a metric, then realize each component
 * as a helix subset (line embedding) or an admissible exceptional
 * quadruple. Inputs that are not projection-invariant come back with
 * status NotInvariant and the failing diagnostics; no exception is thrown
 * for them.
 */
ClassificationReport classify(const CorrelationMatrix& corr,
                              const Tolerances& tol = {});

} // namespace helix::gram

#endif // HELIXLAB_CLASSIFIER_HPP
