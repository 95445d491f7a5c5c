#include "helixlab/process.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "helixlab/classifier.hpp"
#include "helixlab/format.hpp"
#include "helixlab/rng.hpp"

namespace helix::gp {

namespace {

constexpr double kDegenerateTol = 1e-12;
constexpr double kOrthTol = 1e-9;

Eigen::Index index_time(double t, Eigen::Index n, const char* what) {
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(n))
        throw DomainError(std::string(what) +
                          " takes integer time indices in [0, " +
                          std::to_string(n) + "); got " + format_double(t));
    return static_cast<Eigen::Index>(r);
}

} // namespace

ProcessSpec ProcessSpec::quadruple_y(double x, double y) {
    if (!gram::is_admissible(x, y))
        throw NotAdmissible("quadruple parameters (" + format_double(x) + ", " +
                            format_double(y) + ") are not admissible");
    return ProcessSpec(QuadrupleY{x, y});
}

bool ProcessSpec::unit_variance() const {
    return !std::holds_alternative<TaylorF>(kind_) &&
           !std::holds_alternative<LaplaceG>(kind_);
}

std::string ProcessSpec::name() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, HelixX>) return "helix";
            else if constexpr (std::is_same_v<T, TaylorF>) return "taylor";
            else if constexpr (std::is_same_v<T, LaplaceG>) return "laplace";
            else if constexpr (std::is_same_v<T, QuadrupleY>)
                return "quadruple(" + format_double(k.x) + ", " +
                       format_double(k.y) + ")";
            else return "explicit";
        },
        kind_);
}

double kernel_eval(const ProcessSpec& spec, double s, double t) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, HelixX>) {
                if (!std::isfinite(s) || !std::isfinite(t))
                    throw DomainError("helix kernel needs finite times");
                return 1.0 / std::cosh(t - s);
            } else if constexpr (std::is_same_v<T, TaylorF>) {
                if (!(std::abs(s) < 1.0) || !(std::abs(t) < 1.0))
                    throw DomainError("Taylor kernel needs |t| < 1");
                return 1.0 / (1.0 - s * t);
            } else if constexpr (std::is_same_v<T, LaplaceG>) {
                if (!(s > 0.0) || !(t > 0.0))
                    throw DomainError("Laplace kernel needs t > 0");
                return 1.0 / (s + t);
            } else if constexpr (std::is_same_v<T, QuadrupleY>) {
                const Eigen::Index i = index_time(s, 4, "quadruple process");
                const Eigen::Index j = index_time(t, 4, "quadruple process");
                return gram::quadruple_pattern(k.x, k.y)(i, j);
            } else {
                const Eigen::Index n = k.corr.size();
                return k.corr.entry(index_time(s, n, "explicit process"),
                                    index_time(t, n, "explicit process"));
            }
        },
        spec.kind());
}

double standardized_kernel(const ProcessSpec& spec, double s, double t) {
    const double vs = kernel_eval(spec, s, s);
    const double vt = kernel_eval(spec, t, t);
    if (vs <= 0.0 || vt <= 0.0)
        throw DomainError("standardization needs positive variance");
    return kernel_eval(spec, s, t) / std::sqrt(vs * vt);
}

Eigen::MatrixXd kernel_matrix(const ProcessSpec& spec,
                              std::span<const double> times) {
    const Eigen::Index n = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = kernel_eval(
                spec, times[static_cast<std::size_t>(i)],
                times[static_cast<std::size_t>(j)]);
            k(i, j) = v;
            k(j, i) = v;
        }
    return k;
}

TimeChangeCheck check_time_change(std::span<const double> times, double tol) {
    const ProcessSpec taylor = ProcessSpec::taylor_f();
    const ProcessSpec laplace = ProcessSpec::laplace_g();
    TimeChangeCheck out;
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = i; j < times.size(); ++j) {
            const double s = times[i], t = times[j];
            const double target = 1.0 / std::cosh(s - t);
            const double via_taylor =
                standardized_kernel(taylor, std::tanh(s), std::tanh(t));
            const double via_laplace = standardized_kernel(
                laplace, std::exp(2.0 * s), std::exp(2.0 * t));
            out.max_discrepancy =
                std::max({out.max_discrepancy, std::abs(via_taylor - target),
                          std::abs(via_laplace - target)});
        }
    out.passed = out.max_discrepancy <= tol;
    return out;
}

namespace {

// Correlations of each requested time against the conditioning point;
// throws if conditioning degenerates.
std::vector<double> pin_correlations(const ProcessSpec& spec,
                                     std::span<const double> times, double s0) {
    if (!spec.unit_variance())
        throw DomainError("conditioning requires a unit-variance process");
    std::vector<double> c(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        c[i] = kernel_eval(spec, times[i], s0);
        if (std::abs(c[i]) >= 1.0 - kDegenerateTol)
            throw DegenerateConditioning(
                "time " + format_double(times[i]) +
                " is perfectly correlated with the conditioning point " +
                format_double(s0));
    }
    return c;
}

Eigen::MatrixXd residual_matrix(const Eigen::MatrixXd& k,
                                const std::vector<double>& c) {
    const Eigen::Index n = k.rows();
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double ci = c[static_cast<std::size_t>(i)];
            const double cj = c[static_cast<std::size_t>(j)];
            const double v = (k(i, j) - ci * cj) /
                             std::sqrt((1.0 - ci * ci) * (1.0 - cj * cj));
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return r;
}

std::vector<Label> time_labels(std::span<const double> times) {
    std::vector<Label> labels;
    labels.reserve(times.size());
    for (double t : times) labels.push_back(format_double(t));
    return labels;
}

} // namespace

CorrelationMatrix condition_residual(const ProcessSpec& spec,
                                     std::span<const double> times,
                                     double s0) {
    const auto c = pin_correlations(spec, times, s0);
    Eigen::MatrixXd k(times.size(), times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = 0; j < times.size(); ++j)
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                kernel_eval(spec, times[i], times[j]);
    return CorrelationMatrix(time_labels(times), residual_matrix(k, c));
}

CorrelationMatrix iterated_condition_residual(const ProcessSpec& spec,
                                              std::span<const double> times,
                                              std::span<const double> pins) {
    if (!spec.unit_variance())
        throw DomainError("conditioning requires a unit-variance process");
    std::set<double> distinct(pins.begin(), pins.end());
    if (distinct.size() != pins.size())
        throw InvalidParameters("conditioning points must be pairwise distinct");

    // Kernel on [times..., pins...]; strip one pin per step.
    std::vector<double> all(times.begin(), times.end());
    all.insert(all.end(), pins.begin(), pins.end());
    Eigen::MatrixXd m = kernel_matrix(spec, all);

    for (std::size_t step = 0; step < pins.size(); ++step) {
        const Eigen::Index last = m.rows() - 1;  // pins occupy the tail
        std::vector<double> c(static_cast<std::size_t>(last));
        for (Eigen::Index i = 0; i < last; ++i) {
            c[static_cast<std::size_t>(i)] = m(i, last);
            if (std::abs(m(i, last)) >= 1.0 - kDegenerateTol)
                throw DegenerateConditioning(
                    "conditioning degenerates at pin " +
                    format_double(pins[pins.size() - 1 - step]));
        }
        m = residual_matrix(m.topLeftCorner(last, last), c);
    }
    return CorrelationMatrix(time_labels(times), std::move(m));
}

ConditioningCheck check_conditioning_identity(const ProcessSpec& spec,
                                              double s0,
                                              std::span<const double> times,
                                              double tol) {
    const auto c = pin_correlations(spec, times, s0);
    const std::size_t n = times.size();

    Eigen::MatrixXd k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                kernel_eval(spec, times[i], times[j]);

    const bool is_helix = std::holds_alternative<HelixX>(spec.kind());

    // Multipliers: tanh(t - s0) for the helix, which makes the identity
    // hold with signs. For the other kinds only |phi| is determined; a
    // sign assignment consistent on every pair need not exist (the
    // exceptional quadruple: the conditioned covariance flips the sign of
    // exactly one opposite pair), so signs are propagated over a spanning
    // forest and the identity is verified entrywise in absolute value.
    std::vector<double> phi(n);
    if (is_helix) {
        for (std::size_t i = 0; i < n; ++i) phi[i] = std::tanh(times[i] - s0);
    } else {
        std::vector<int> sgn(n, 0);
        for (std::size_t root = 0; root < n; ++root) {
            if (sgn[root] != 0) continue;
            sgn[root] = +1;
            std::deque<std::size_t> queue{root};
            while (!queue.empty()) {
                const std::size_t u = queue.front();
                queue.pop_front();
                for (std::size_t v = 0; v < n; ++v) {
                    if (sgn[v] != 0 ||
                        std::abs(k(static_cast<Eigen::Index>(u),
                                   static_cast<Eigen::Index>(v))) <= kOrthTol)
                        continue;
                    const double cond =
                        k(static_cast<Eigen::Index>(u),
                          static_cast<Eigen::Index>(v)) -
                        c[u] * c[v];
                    const double ratio =
                        cond / k(static_cast<Eigen::Index>(u),
                                 static_cast<Eigen::Index>(v));
                    sgn[v] = (ratio >= 0.0 ? +1 : -1) * sgn[u];
                    queue.push_back(v);
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            phi[i] = sgn[i] * std::sqrt((1.0 - c[i]) * (1.0 + c[i]));
    }

    ConditioningCheck out;
    for (std::size_t i = 0; i < n; ++i)
        out.multipliers.emplace_back(times[i], phi[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double conditioned =
                k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                c[i] * c[j];
            double scaled =
                phi[i] * phi[j] *
                k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (!is_helix) {
                conditioned = std::abs(conditioned);
                scaled = std::abs(scaled);
            }
            out.max_discrepancy =
                std::max(out.max_discrepancy, std::abs(conditioned - scaled));
        }
    out.passed = out.max_discrepancy <= tol;
    return out;
}

ConditioningCheck check_multi_conditioning_helix(std::span<const double> pins,
                                                 std::span<const double> times,
                                                 double tol) {
    const ProcessSpec spec = ProcessSpec::helix_x();
    const CorrelationMatrix residual =
        iterated_condition_residual(spec, times, pins);

    ConditioningCheck out;
    std::vector<double> phi(times.size(), 1.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (double pin : pins) phi[i] *= std::tanh(times[i] - pin);
        out.multipliers.emplace_back(times[i], phi[i]);
    }
    // Standardized residual = sign(phi(s)) sign(phi(t)) sech(s - t).
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = i; j < times.size(); ++j) {
            const double sign =
                (phi[i] >= 0.0 ? 1.0 : -1.0) * (phi[j] >= 0.0 ? 1.0 : -1.0);
            const double expected =
                sign / std::cosh(times[i] - times[j]);
            out.max_discrepancy = std::max(
                out.max_discrepancy,
                std::abs(residual.entry(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(j)) -
                         expected));
        }
    out.passed = out.max_discrepancy <= tol;
    return out;
}

SamplePaths sample(const ProcessSpec& spec, std::span<const double> times,
                   std::size_t n, std::uint64_t seed) {
    const Eigen::Index dim = static_cast<Eigen::Index>(times.size());
    SamplePaths paths;
    paths.times.assign(times.begin(), times.end());
    paths.seed = seed;
    paths.samples.resize(static_cast<Eigen::Index>(n), dim);
    if (n == 0 || dim == 0) return paths;

    const Eigen::MatrixXd k = kernel_matrix(spec, times);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    const double lambda_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    const double floor = -1e-9 * static_cast<double>(dim) * lambda_max;

    Eigen::MatrixXd factor(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const double lambda = eig.eigenvalues()[col];
        if (lambda < floor)
            throw NotPsd("kernel matrix is not positive semi-definite");
        factor.col(col) =
            eig.eigenvectors().col(col) * std::sqrt(std::max(lambda, 0.0));
    }

    Eigen::VectorXd z(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j)
            z[j] = rng::standard_normal(seed, i, static_cast<std::uint32_t>(j));
        paths.samples.row(static_cast<Eigen::Index>(i)) =
            (factor * z).transpose();
    }
    return paths;
}

SamplePaths conditioned_sample(const ProcessSpec& spec,
                               std::span<const double> times, double s0,
                               std::size_t n, std::uint64_t seed) {
    const auto c = pin_correlations(spec, times, s0);
    std::vector<double> extended(times.begin(), times.end());
    extended.push_back(s0);
    const SamplePaths raw = sample(spec, extended, n, seed);

    SamplePaths out;
    out.times.assign(times.begin(), times.end());
    out.seed = seed;
    const Eigen::Index d = static_cast<Eigen::Index>(times.size());
    out.samples.resize(raw.samples.rows(), d);
    for (Eigen::Index i = 0; i < raw.samples.rows(); ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            const double cj = c[static_cast<std::size_t>(j)];
            out.samples(i, j) = (raw.samples(i, j) - cj * raw.samples(i, d)) /
                                std::sqrt((1.0 - cj) * (1.0 + cj));
        }
    return out;
}

EmpiricalCovariance empirical_covariance(const SamplePaths& paths) {
    const Eigen::Index n = paths.samples.rows();
    const Eigen::Index d = paths.samples.cols();
    if (n < 2)
        throw InvalidParameters("empirical covariance needs at least 2 samples");

    const Eigen::RowVectorXd mean = paths.samples.colwise().mean();
    const Eigen::MatrixXd centered = paths.samples.rowwise() - mean;
    EmpiricalCovariance out;
    out.cov = centered.transpose() * centered / static_cast<double>(n - 1);
    out.standard_error.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            out.standard_error(i, j) =
                std::sqrt((out.cov(i, i) * out.cov(j, j) +
                           out.cov(i, j) * out.cov(i, j)) /
                          static_cast<double>(n - 1));
    return out;
}

} // namespace helix::gp
