#include "helixlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace helix::metric {

FiniteMetricSpace::FiniteMetricSpace(std::vector<Label> labels,
                                     Eigen::MatrixXd dist, double tol)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
    const Eigen::Index n = dist_.rows();
    if (dist_.cols() != n)
        throw InvalidParameters("distance matrix must be square");
    if (static_cast<Eigen::Index>(labels_.size()) != n)
        throw InvalidParameters("label count does not match matrix dimension");
    std::set<Label> seen(labels_.begin(), labels_.end());
    if (static_cast<Eigen::Index>(seen.size()) != n)
        throw InvalidParameters("labels must be unique");

    diameter_ = (n > 0) ? dist_.maxCoeff() : 0.0;
    const double tol_abs = tol * diameter_;

    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(dist_(i, i)) > tol_abs)
            throw InvalidParameters("diagonal of " + labels_[i] + " is not 0");
        dist_(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(dist_(i, j) - dist_(j, i)) > tol_abs)
                throw InvalidParameters("distances are not symmetric at (" +
                                        labels_[i] + ", " + labels_[j] + ")");
            const double d = (dist_(i, j) + dist_(j, i)) / 2.0;
            if (d <= 0.0)
                throw InvalidParameters("distance between distinct points " +
                                        labels_[i] + ", " + labels_[j] +
                                        " must be positive");
            dist_(i, j) = d;
            dist_(j, i) = d;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (dist_(i, j) > dist_(i, k) + dist_(k, j) + tol_abs)
                    throw InvalidParameters(
                        "triangle inequality fails on (" + labels_[i] + ", " +
                        labels_[j] + ", " + labels_[k] + ")");
            }
}

Eigen::Index FiniteMetricSpace::index_of(const Label& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw InvalidParameters("unknown label: " + label);
    return static_cast<Eigen::Index>(it - labels_.begin());
}

TriangleEqualityCheck check_triangle_equality(const FiniteMetricSpace& space,
                                              double tol) {
    const Eigen::Index n = space.size();
    const double tol_abs = tol * space.diameter();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            for (Eigen::Index k = j + 1; k < n; ++k) {
                const double a = space.distance(i, j);
                const double b = space.distance(j, k);
                const double c = space.distance(i, k);
                const double largest = std::max({a, b, c});
                const double sum = a + b + c - largest;
                if (std::abs(largest - sum) > tol_abs) {
                    return {false,
                            std::array<Label, 3>{space.labels()[i],
                                                 space.labels()[j],
                                                 space.labels()[k]}};
                }
            }
    return {true, std::nullopt};
}

namespace {

// Lexicographically smallest pair realizing the diameter.
std::pair<Eigen::Index, Eigen::Index> diameter_anchor(
    const FiniteMetricSpace& space, double tol_abs) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(space.size()));
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<Eigen::Index>(i);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) {
                  return space.labels()[a] < space.labels()[b];
              });
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            if (space.distance(order[a], order[b]) >=
                space.diameter() - tol_abs)
                return {order[a], order[b]};
        }
    return {order[0], order[1]};  // unreachable for n >= 2
}

} // namespace

LineEmbedResult embed_line(const FiniteMetricSpace& space, double tol) {
    const Eigen::Index n = space.size();
    const auto eq = check_triangle_equality(space, tol);
    if (!eq.holds)
        throw NotTriangleEqual("triangle equality fails on (" +
                               (*eq.witness)[0] + ", " + (*eq.witness)[1] +
                               ", " + (*eq.witness)[2] + ")");
    LineEmbedding embedding;
    if (n == 0) return embedding;
    if (n == 1) {
        embedding.coords[space.labels()[0]] = 0.0;
        return embedding;
    }

    const double tol_abs = tol * space.diameter();
    const auto [a, b] = diameter_anchor(space, tol_abs);

    std::vector<double> coord(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        coord[static_cast<std::size_t>(i)] = space.distance(a, i);

    // The anchor pair realizes the diameter, so the triangle equality
    // forces every other point between them; only cross-distances can fail,
    // and then only through an exceptional quadruple.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double got = std::abs(coord[static_cast<std::size_t>(i)] -
                                        coord[static_cast<std::size_t>(j)]);
            if (std::abs(got - space.distance(i, j)) > tol_abs) {
                return NotEmbeddable{std::array<Label, 4>{
                    space.labels()[a], space.labels()[b], space.labels()[i],
                    space.labels()[j]}};
            }
        }
    for (Eigen::Index i = 0; i < n; ++i)
        embedding.coords[space.labels()[i]] = coord[static_cast<std::size_t>(i)];
    return embedding;
}

QuadrupleClass classify_quadruple(const FiniteMetricSpace& space, double tol) {
    if (space.size() != 4)
        throw InvalidParameters("quadruple classification needs exactly 4 points");
    const double tol_abs = tol * space.diameter();
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = i + 1; j < 4; ++j)
            if (space.distance(i, j) <= tol_abs)
                throw DegenerateQuadruple("points " + space.labels()[i] +
                                          " and " + space.labels()[j] +
                                          " coincide within tolerance");

    auto result = embed_line(space, tol);  // throws NotTriangleEqual
    if (auto* emb = std::get_if<LineEmbedding>(&result))
        return ClassicalQuadruple{std::move(*emb)};

    // Not embeddable: match the exceptional opposite-pair pattern.
    std::vector<Eigen::Index> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](Eigen::Index u, Eigen::Index v) {
        return space.labels()[u] < space.labels()[v];
    });
    // The three matchings pair the smallest label with each of the others.
    const std::array<std::array<Eigen::Index, 4>, 3> matchings_idx = {{
        {order[0], order[1], order[2], order[3]},
        {order[0], order[2], order[1], order[3]},
        {order[0], order[3], order[1], order[2]},
    }};
    std::array<PairMatching, 3> matchings;
    for (std::size_t m = 0; m < 3; ++m) {
        const auto& q = matchings_idx[m];
        const double v1 = space.distance(q[0], q[1]);
        const double v2 = space.distance(q[2], q[3]);
        if (std::abs(v1 - v2) > tol_abs)
            throw PatternMismatch(
                "quadruple is not line-embeddable and its opposite pairs are "
                "not equal");
        matchings[m] = {{space.labels()[q[0]], space.labels()[q[1]]},
                        {space.labels()[q[2]], space.labels()[q[3]]},
                        (v1 + v2) / 2.0};
    }
    std::array<double, 3> values = {matchings[0].value, matchings[1].value,
                                    matchings[2].value};
    std::sort(values.begin(), values.end(), std::greater<>());
    if (std::abs(values[0] - values[1] - values[2]) > tol_abs)
        throw PatternMismatch(
            "opposite-pair values do not satisfy the largest-equals-sum "
            "pattern");
    return ExceptionalQuadruple{values[0], values[1], matchings};
}

FiniteMetricSpace exceptional_quadruple(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0))
        throw InvalidParameters("exceptional quadruple needs x > 0 and y > 0");
    if (x == y)
        throw InvalidParameters("exceptional quadruple needs x != y");
    Eigen::MatrixXd d(4, 4);
    const double z = std::abs(x - y);
    d << 0, x, z, y,
         x, 0, y, z,
         z, y, 0, x,
         y, z, x, 0;
    return FiniteMetricSpace({"A", "B", "C", "D"}, std::move(d));
}

} // namespace helix::metric
