#ifndef HELIXLAB_METRIC_HPP
#define HELIXLAB_METRIC_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "helixlab/correlation.hpp"
#include "helixlab/errors.hpp"

namespace helix::metric {

/**
 * Labeled finite metric space. Construction validates symmetry, a zero
 * diagonal, strictly positive off-diagonal entries and the triangle
 * inequality (within tol relative to the diameter).
 */
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::vector<Label> labels, Eigen::MatrixXd dist,
                      double tol = 1e-9);

    Eigen::Index size() const { return dist_.rows(); }
    const std::vector<Label>& labels() const { return labels_; }
    const Eigen::MatrixXd& dist() const { return dist_; }
    double distance(Eigen::Index i, Eigen::Index j) const { return dist_(i, j); }
    double diameter() const { return diameter_; }

    Eigen::Index index_of(const Label& label) const;

private:
    std::vector<Label> labels_;
    Eigen::MatrixXd dist_;
    double diameter_ = 0.0;
};

struct TriangleEqualityCheck {
    bool holds = true;
    std::optional<std::array<Label, 3>> witness;  // one violating triple
};

/// In every triple the largest side must equal the sum of the other two,
/// within tol relative to the diameter.
TriangleEqualityCheck check_triangle_equality(const FiniteMetricSpace& space,
                                              double tol = 1e-9);

/// Isometric embedding into the real line.
struct LineEmbedding {
    std::map<Label, double> coords;
};

struct NotEmbeddable {
    std::array<Label, 4> witness;  // a quadruple obstructing the embedding
};

using LineEmbedResult = std::variant<LineEmbedding, NotEmbeddable>;

/**
 * Constructive line embedding: the lexicographically smallest pair (A, B)
 * realizing the diameter is anchored at phi(A) = 0, phi(B) = d(A, B), and
 * every other point C is placed at d(A, C). Succeeds iff the placement is
 * an isometry; the only obstruction is an exceptional quadruple.
 * Throws NotTriangleEqual if the triangle equality fails.
 */
LineEmbedResult embed_line(const FiniteMetricSpace& space, double tol = 1e-9);

/// Opposite-pair matching of a quadruple and its common distance value.
struct PairMatching {
    std::array<Label, 2> first_pair;
    std::array<Label, 2> second_pair;
    double value;
};

struct ClassicalQuadruple {
    LineEmbedding embedding;
};

/// Four-point space with opposite-pair distances {x, y, x - y}, x > y > 0;
/// satisfies the triangle equality but embeds in no line.
struct ExceptionalQuadruple {
    double x;  // largest matching value
    double y;  // second largest; the third is x - y
    std::array<PairMatching, 3> matchings;
};

using QuadrupleClass = std::variant<ClassicalQuadruple, ExceptionalQuadruple>;

/**
 * Classifies a 4-point triangle-equality space: Classical when it embeds
 * in the line (the generic branch), Exceptional otherwise, with (x, y)
 * recovered as the two largest opposite-pair values.
 * Throws DegenerateQuadruple when two points coincide within tolerance,
 * NotTriangleEqual when the precondition fails.
 */
QuadrupleClass classify_quadruple(const FiniteMetricSpace& space,
                                  double tol = 1e-9);

/// The four-point space with d(A,B)=d(C,D)=x, d(A,D)=d(B,C)=y,
/// d(A,C)=d(B,D)=|x-y|. Requires x, y > 0 and x != y.
FiniteMetricSpace exceptional_quadruple(double x, double y);

} // namespace helix::metric

#endif // HELIXLAB_METRIC_HPP
