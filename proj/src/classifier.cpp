#include "helixlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace helix::gram {

namespace {

int sign_of(double v) { return v >= 0.0 ? +1 : -1; }

} // namespace

CollapseResult collapse_duplicates(const CorrelationMatrix& corr, double tol) {
    const Eigen::Index n = corr.size();
    const auto& labels = corr.labels();

    // Union labels with |corr| = 1 within tol; the representative of each
    // group is its lexicographically smallest label.
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index i) {
        while (parent[static_cast<std::size_t>(i)] != i)
            i = parent[static_cast<std::size_t>(i)] =
                parent[static_cast<std::size_t>(
                    parent[static_cast<std::size_t>(i)])];
        return i;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(corr.entry(i, j)) >= 1.0 - tol)
                parent[static_cast<std::size_t>(find(i))] = find(j);

    std::map<Eigen::Index, Eigen::Index> group_rep;  // root -> rep index
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index root = find(i);
        auto it = group_rep.find(root);
        if (it == group_rep.end() || labels[static_cast<std::size_t>(i)] <
                                         labels[static_cast<std::size_t>(it->second)])
            group_rep[root] = i;
    }

    CollapseResult result{corr, {}, {}};
    std::vector<Label> kept;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index rep = group_rep[find(i)];
        const Label& li = labels[static_cast<std::size_t>(i)];
        const Label& lr = labels[static_cast<std::size_t>(rep)];
        result.representative[li] = lr;
        result.sign[li] = (i == rep) ? +1 : sign_of(corr.entry(i, rep));
        if (i == rep) kept.push_back(li);
    }
    result.collapsed = corr.restricted(kept);
    return result;
}

OrthogonalComponents orthogonal_components(const CorrelationMatrix& corr,
                                           double tol_orth) {
    const Eigen::Index n = corr.size();
    const auto& labels = corr.labels();
    OrthogonalComponents out;

    std::vector<int> component_of(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (Eigen::Index start = 0; start < n; ++start) {
        if (component_of[static_cast<std::size_t>(start)] >= 0) continue;
        std::deque<Eigen::Index> queue{start};
        component_of[static_cast<std::size_t>(start)] = next;
        std::vector<Label> members;
        while (!queue.empty()) {
            const Eigen::Index u = queue.front();
            queue.pop_front();
            members.push_back(labels[static_cast<std::size_t>(u)]);
            for (Eigen::Index v = 0; v < n; ++v) {
                if (component_of[static_cast<std::size_t>(v)] >= 0) continue;
                if (std::abs(corr.entry(u, v)) > tol_orth) {
                    component_of[static_cast<std::size_t>(v)] = next;
                    queue.push_back(v);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.components.push_back(std::move(members));
        ++next;
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    // Orthogonal pairs joined through a component break the transitivity
    // that invariance forces on the non-orthogonality relation.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (component_of[static_cast<std::size_t>(i)] ==
                    component_of[static_cast<std::size_t>(j)] &&
                std::abs(corr.entry(i, j)) <= tol_orth) {
                Label u = labels[static_cast<std::size_t>(i)];
                Label v = labels[static_cast<std::size_t>(j)];
                if (v < u) std::swap(u, v);
                out.intransitive.push_back({std::move(u), std::move(v)});
            }
        }
    return out;
}

SignRecovery recover_signs(const CorrelationMatrix& component, const Label& s0,
                           double tol_orth) {
    const Eigen::Index n = component.size();
    const Eigen::Index s = component.index_of(s0);
    const auto& labels = component.labels();

    SignRecovery out;
    std::vector<int> sgn(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double c = component.entry(i, s);
        if (std::abs(c) <= tol_orth)
            throw ZeroPivot("label " + labels[static_cast<std::size_t>(i)] +
                            " is orthogonal to the reference " + s0);
        sgn[static_cast<std::size_t>(i)] = sign_of(c);
        out.signs[labels[static_cast<std::size_t>(i)]] =
            sgn[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 0; i < n && out.positive; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double adjusted = sgn[static_cast<std::size_t>(i)] *
                                    sgn[static_cast<std::size_t>(j)] *
                                    component.entry(i, j);
            if (adjusted <= tol_orth) {
                out.positive = false;
                out.negative_witness = {labels[static_cast<std::size_t>(i)],
                                        labels[static_cast<std::size_t>(j)]};
                break;
            }
        }
    return out;
}

metric::FiniteMetricSpace gram_to_metric(const CorrelationMatrix& positive) {
    const Eigen::Index n = positive.size();
    Eigen::MatrixXd dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double r = positive.entry(i, j);
            if (r <= 0.0)
                throw NonPositiveEntry("entry (" + positive.labels()[i] + ", " +
                                       positive.labels()[j] +
                                       ") is not positive");
            // arccosh(1/r) evaluated as log((1 + sqrt(1 - r^2)) / r).
            const double d =
                std::log((1.0 + std::sqrt((1.0 - r) * (1.0 + r))) / r);
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return metric::FiniteMetricSpace(positive.labels(), std::move(dist));
}

std::array<double, 4> quadruple_eigenvalues(double x, double y) {
    const double sx = sech(x);
    const double sy = sech(y);
    const double sxy = sech(x - y);
    return {1.0 + sy + sxy + sx, 1.0 + sy - sxy - sx, 1.0 - sy + sxy - sx,
            1.0 - sy - sxy + sx};
}

bool is_admissible(double x, double y, double tol_psd, double tol_xy) {
    if (!(x > 0.0) || !(y > 0.0)) return false;
    if (std::abs(x - y) <= tol_xy) return false;
    const double sx = sech(x);
    const double sy = sech(y);
    const double sxy = sech(x - y);
    // min(lambda2, lambda4) written so the result is bitwise symmetric
    // under (x, y) <-> (y, x); lambda3 is symmetric as written.
    const double min24 = (1.0 - sxy) - std::abs(sy - sx);
    const double l3 = (1.0 + sxy) - (sx + sy);
    return std::min(min24, l3) >= -tol_psd;
}

std::vector<std::pair<double, double>> admissible_region(double xmax,
                                                         double step,
                                                         double tol_psd,
                                                         double tol_xy) {
    if (!(xmax > 0.0) || !(step > 0.0) || !(step < xmax))
        throw InvalidParameters("admissible region scan needs 0 < step < xmax");
    const auto m = static_cast<Eigen::Index>(std::floor(xmax / step + 1e-9));
    std::vector<std::pair<double, double>> points;
    for (Eigen::Index i = 1; i <= m; ++i)
        for (Eigen::Index j = 1; j <= m; ++j) {
            const double x = static_cast<double>(i) * step;
            const double y = static_cast<double>(j) * step;
            if (is_admissible(x, y, tol_psd, tol_xy)) points.emplace_back(x, y);
        }
    return points;
}

Eigen::Matrix4d quadruple_pattern(double x, double y) {
    const double sx = sech(x);
    const double sy = sech(y);
    const double sxy = sech(x - y);
    Eigen::Matrix4d g;
    g << 1.0, sx, sxy, sy,
         sx, 1.0, sy, sxy,
         sxy, sy, 1.0, sx,
         sy, sxy, sx, 1.0;
    return g;
}

namespace {

int sign_for(const std::map<Label, int>& signs, const Label& label) {
    const auto it = signs.find(label);
    if (it == signs.end()) return +1;
    if (it->second != +1 && it->second != -1)
        throw InvalidParameters("sign of " + label + " must be +1 or -1");
    return it->second;
}

} // namespace

CorrelationMatrix helix_gram(const std::map<Label, double>& psi,
                             const std::map<Label, int>& signs) {
    if (psi.empty())
        throw InvalidParameters("helix Gram needs at least one label");
    std::vector<Label> labels;
    std::vector<double> t;
    std::vector<int> a;
    for (const auto& [label, value] : psi) {
        if (!std::isfinite(value))
            throw InvalidParameters("helix parameter of " + label +
                                    " must be finite");
        labels.push_back(label);
        t.push_back(value);
        a.push_back(sign_for(signs, label));
    }
    const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v =
                a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)] *
                sech(t[static_cast<std::size_t>(i)] -
                     t[static_cast<std::size_t>(j)]);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return CorrelationMatrix(std::move(labels), std::move(g));
}

CorrelationMatrix quadruple_gram(double x, double y,
                                 const std::map<Label, int>& signs) {
    if (!is_admissible(x, y))
        throw NotAdmissible("pair (" + std::to_string(x) + ", " +
                            std::to_string(y) + ") is not admissible");
    const std::vector<Label> labels = {"A", "B", "C", "D"};
    Eigen::MatrixXd g = quadruple_pattern(x, y);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j)
            g(i, j) *= sign_for(signs, labels[static_cast<std::size_t>(i)]) *
                       sign_for(signs, labels[static_cast<std::size_t>(j)]);
    return CorrelationMatrix(labels, std::move(g));
}

namespace {

std::map<Label, double> canonical_psi(const std::map<Label, double>& coords,
                                      const std::vector<Label>& sorted_labels) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [label, c] : coords) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    // Shift the minimum to 0; reflect so the second-smallest label does not
    // sit left of the smallest one.
    const bool reflect = coords.at(sorted_labels[1]) < coords.at(sorted_labels[0]);
    std::map<Label, double> psi;
    for (const auto& [label, c] : coords)
        psi[label] = reflect ? hi - c : c - lo;
    return psi;
}

Label smallest_label(const ComponentReport& component) {
    return std::visit(
        [](const auto& c) -> Label {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SingletonComponent>)
                return c.label;
            else
                return c.labels.front();
        },
        component);
}

} // namespace

ClassificationReport classify(const CorrelationMatrix& corr,
                              const Tolerances& tol) {
    ClassificationReport report;

    auto collapse = collapse_duplicates(corr, tol.tol_dup);
    report.collapsed = std::move(collapse.representative);
    report.collapse_signs = std::move(collapse.sign);
    const CorrelationMatrix& reduced = collapse.collapsed;

    auto split = orthogonal_components(reduced, tol.tol_orth);
    for (const auto& pair : split.intransitive) {
        report.status = Status::NotInvariant;
        report.diagnostics.push_back("labels " + pair.u + " and " + pair.v +
                                     " are orthogonal yet lie in one "
                                     "component (intransitive orthogonality)");
    }

    for (const auto& members : split.components) {
        if (members.size() == 1) {
            report.components.push_back(SingletonComponent{members[0], +1});
            continue;
        }
        const CorrelationMatrix sub = reduced.restricted(members);

        SignRecovery signs;
        try {
            signs = recover_signs(sub, members.front(), tol.tol_orth);
        } catch (const ZeroPivot& e) {
            report.status = Status::NotInvariant;
            report.diagnostics.push_back("component at " + members.front() +
                                         ": " + e.what());
            continue;
        }
        if (!signs.positive) {
            report.status = Status::NotInvariant;
            report.diagnostics.push_back(
                "component at " + members.front() +
                ": sign-adjusted correlation of (" +
                signs.negative_witness->first + ", " +
                signs.negative_witness->second + ") is not positive");
            continue;
        }

        Eigen::MatrixXd adjusted = sub.matrix();
        const Eigen::Index m = sub.size();
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                adjusted(i, j) *= signs.signs.at(members[static_cast<std::size_t>(i)]) *
                                  signs.signs.at(members[static_cast<std::size_t>(j)]);

        // A non-invariant component can produce arccosh distances that are
        // not even a metric; that is a diagnostic, not an error.
        std::optional<metric::FiniteMetricSpace> space;
        try {
            space = gram_to_metric(CorrelationMatrix(members, std::move(adjusted)));
        } catch (const Error& e) {
            report.status = Status::NotInvariant;
            report.diagnostics.push_back("component at " + members.front() +
                                         ": " + e.what());
            continue;
        }

        const auto eq = check_triangle_equality(*space, tol.tol_metric);
        if (!eq.holds) {
            report.status = Status::NotInvariant;
            report.diagnostics.push_back(
                "component at " + members.front() +
                ": recovered metric fails the triangle equality on (" +
                (*eq.witness)[0] + ", " + (*eq.witness)[1] + ", " +
                (*eq.witness)[2] + ")");
            continue;
        }

        if (space->size() == 4) {
            metric::QuadrupleClass quad;
            try {
                quad = classify_quadruple(*space, tol.tol_metric);
            } catch (const Error& e) {
                report.status = Status::NotInvariant;
                report.diagnostics.push_back("component at " + members.front() +
                                             ": " + e.what());
                continue;
            }
            if (auto* classical = std::get_if<metric::ClassicalQuadruple>(&quad)) {
                HelixComponent h;
                h.labels = members;
                h.psi = canonical_psi(classical->embedding.coords, members);
                h.signs = signs.signs;
                report.components.push_back(std::move(h));
            } else {
                const auto& exc = std::get<metric::ExceptionalQuadruple>(quad);
                if (!is_admissible(exc.x, exc.y, tol.tol_psd, tol.tol_xy)) {
                    report.status = Status::NotInvariant;
                    report.diagnostics.push_back(
                        "component at " + members.front() +
                        ": exceptional quadruple parameters are not admissible");
                    continue;
                }
                QuadrupleComponent q;
                q.labels = {members[0], members[1], members[2], members[3]};
                q.x = exc.x;
                q.y = exc.y;
                q.signs = signs.signs;
                report.components.push_back(std::move(q));
            }
            continue;
        }

        auto embedded = embed_line(*space, tol.tol_metric);
        if (auto* obstruction = std::get_if<metric::NotEmbeddable>(&embedded)) {
            report.status = Status::NotInvariant;
            report.diagnostics.push_back(
                "component at " + members.front() +
                ": metric embeds in no line (obstructing quadruple " +
                obstruction->witness[0] + ", " + obstruction->witness[1] + ", " +
                obstruction->witness[2] + ", " + obstruction->witness[3] + ")");
            continue;
        }
        HelixComponent h;
        h.labels = members;
        h.psi = canonical_psi(std::get<metric::LineEmbedding>(embedded).coords,
                              members);
        h.signs = signs.signs;
        report.components.push_back(std::move(h));
    }

    std::sort(report.components.begin(), report.components.end(),
              [](const ComponentReport& a, const ComponentReport& b) {
                  return smallest_label(a) < smallest_label(b);
              });
    return report;
}

} // namespace helix::gram
