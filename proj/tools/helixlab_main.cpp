// helixlab — classify projective configurations invariant under spherical
// projections, and verify the related Gaussian-process identities.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "helixlab/classifier.hpp"
#include "helixlab/format.hpp"
#include "helixlab/geometry.hpp"
#include "helixlab/io.hpp"
#include "helixlab/metric.hpp"
#include "helixlab/process.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitViolated = 2;

std::vector<double> parse_time_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw helix::ParseError("cannot parse number '" + item + "'");
        }
    }
    if (values.empty()) throw helix::ParseError("empty number list");
    return values;
}

helix::gp::ProcessSpec parse_process(const std::string& text) {
    using helix::gp::ProcessSpec;
    if (text == "helix") return ProcessSpec::helix_x();
    if (text == "taylor") return ProcessSpec::taylor_f();
    if (text == "laplace") return ProcessSpec::laplace_g();
    if (text.rfind("quadruple:", 0) == 0) {
        std::string params_text = text.substr(10);
        std::replace(params_text.begin(), params_text.end(), ':', ',');
        const auto params = parse_time_list(params_text);
        if (params.size() != 2)
            throw helix::ParseError("expected quadruple:<x>,<y> with two "
                                    "numbers separated by a comma or colon");
        return ProcessSpec::quadruple_y(params[0], params[1]);
    }
    if (text.rfind("file:", 0) == 0) {
        const auto file = helix::io::read_gram_file(text.substr(5));
        return ProcessSpec::explicit_matrix(
            helix::CorrelationMatrix(file.labels, file.gram));
    }
    throw helix::ParseError(
        "unknown process '" + text +
        "' (expected helix, taylor, laplace, quadruple:x,y or file:PATH)");
}

helix::CorrelationMatrix load_correlation(const std::string& path,
                                          bool standardize) {
    const auto file = helix::io::read_gram_file(path);
    if (!standardize)
        return helix::CorrelationMatrix(file.labels, file.gram);
    return helix::standardize_covariance(file.labels, file.gram).correlation;
}

struct OutputTarget {
    std::string path;  // empty -> stdout

    int write(const std::function<void(std::ostream&)>& fn) const {
        if (path.empty()) {
            fn(std::cout);
            return kExitOk;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << path << "\n";
            return kExitInputError;
        }
        fn(out);
        return kExitOk;
    }
};

int run_classify(const std::string& input, double tol, bool standardize) {
    auto file = helix::io::read_gram_file(input);

    helix::gram::Tolerances tolerances;
    tolerances.tol_xy = tol;

    helix::gram::ClassificationReport report;
    if (standardize) {
        auto std_cov = helix::standardize_covariance(file.labels, file.gram);
        report = helix::gram::classify(std_cov.correlation, tolerances);
        // Zero-variance labels form their own singleton classes with a = 0.
        for (const auto& label : std_cov.zero_variance)
            report.components.push_back(
                helix::gram::SingletonComponent{label, 0});
        std::sort(report.components.begin(), report.components.end(),
                  [](const auto& a, const auto& b) {
                      auto key = [](const auto& component) {
                          return std::visit(
                              [](const auto& c) -> helix::Label {
                                  using T = std::decay_t<decltype(c)>;
                                  if constexpr (std::is_same_v<
                                                    T, helix::gram::
                                                           SingletonComponent>)
                                      return c.label;
                                  else
                                      return c.labels.front();
                              },
                              component);
                      };
                      return key(a) < key(b);
                  });
    } else {
        report = helix::gram::classify(
            helix::CorrelationMatrix(file.labels, file.gram), tolerances);
    }

    std::cout << helix::io::classification_json(report).dump(2) << "\n";
    return report.status == helix::gram::Status::Classified ? kExitOk
                                                            : kExitViolated;
}

int run_verify_invariance(const std::string& input, double tol,
                          bool standardize) {
    const auto corr = load_correlation(input, standardize);
    const auto config = helix::geo::embed_gram(corr);
    const auto report = helix::geo::verify_projection_invariance(config, tol);
    std::cout << helix::io::invariance_json(report).dump(2) << "\n";
    return report.passed ? kExitOk : kExitViolated;
}

int run_embed(const std::string& input, double tol) {
    const auto file = helix::io::read_metric_file(input);
    helix::metric::FiniteMetricSpace space(file.labels, file.dist);

    try {
        if (space.size() == 4) {
            const auto quad = helix::metric::classify_quadruple(space, tol);
            if (const auto* classical =
                    std::get_if<helix::metric::ClassicalQuadruple>(&quad)) {
                std::cout << helix::io::embedding_json(classical->embedding)
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << helix::io::quadruple_json(
                                 std::get<helix::metric::ExceptionalQuadruple>(
                                     quad))
                                 .dump(2)
                          << "\n";
            }
            return kExitOk;
        }
        const auto result = helix::metric::embed_line(space, tol);
        if (const auto* embedding =
                std::get_if<helix::metric::LineEmbedding>(&result)) {
            std::cout << helix::io::embedding_json(*embedding).dump(2) << "\n";
            return kExitOk;
        }
        const auto& witness =
            std::get<helix::metric::NotEmbeddable>(result).witness;
        nlohmann::json j;
        j["version"] = 1;
        j["result"] = "not_embeddable";
        j["witness"] = witness;
        std::cout << j.dump(2) << "\n";
        return kExitViolated;
    } catch (const helix::NotTriangleEqual& e) {
        nlohmann::json j;
        j["version"] = 1;
        j["result"] = "not_triangle_equal";
        j["detail"] = e.what();
        std::cout << j.dump(2) << "\n";
        return kExitViolated;
    }
}

int run_admissible_region(double xmax, double step, const OutputTarget& out) {
    const auto points = helix::gram::admissible_region(xmax, step);
    return out.write([&](std::ostream& os) {
        helix::io::write_region_csv(os, points);
    });
}

int run_simulate(const std::string& process, const std::string& times_text,
                 std::size_t samples, std::uint64_t seed,
                 const OutputTarget& out) {
    const auto spec = parse_process(process);
    const auto times = parse_time_list(times_text);
    const auto paths = helix::gp::sample(spec, times, samples, seed);
    return out.write([&](std::ostream& os) {
        helix::io::write_samples_csv(os, paths);
    });
}

int run_condition_check(const std::string& process,
                        const std::string& s0_text,
                        const std::string& times_text, double tol,
                        std::size_t samples, std::uint64_t seed) {
    const auto spec = parse_process(process);
    const auto pins = parse_time_list(s0_text);
    const auto times = parse_time_list(times_text);

    bool ok = true;
    if (pins.size() == 1) {
        const auto check =
            helix::gp::check_conditioning_identity(spec, pins[0], times, tol);
        std::cout << "process: " << spec.name() << "\n";
        std::cout << "conditioning point: " << helix::format_double(pins[0])
                  << "\n";
        for (const auto& [t, phi] : check.multipliers)
            std::cout << "phi(" << helix::format_double(t)
                      << ") = " << helix::format_double(phi) << "\n";
        std::cout << "analytic max discrepancy: "
                  << helix::format_double(check.max_discrepancy) << " (tol "
                  << helix::format_double(tol) << ") "
                  << (check.passed ? "PASS" : "FAIL") << "\n";
        ok = check.passed;

        if (samples > 0) {
            const auto paths =
                helix::gp::conditioned_sample(spec, times, pins[0], samples, seed);
            const auto emp = helix::gp::empirical_covariance(paths);
            const auto expected =
                helix::gp::condition_residual(spec, times, pins[0]);
            double worst = 0.0;
            for (Eigen::Index i = 0; i < emp.cov.rows(); ++i)
                for (Eigen::Index j = 0; j < emp.cov.cols(); ++j) {
                    const double se = std::max(emp.standard_error(i, j), 1e-300);
                    worst = std::max(
                        worst,
                        std::abs(emp.cov(i, j) - expected.entry(i, j)) / se);
                }
            const bool mc_ok = worst <= 4.0;
            std::cout << "monte carlo (n=" << samples << ", seed=" << seed
                      << "): max |emp - expected| / SE = "
                      << helix::format_double(worst) << " "
                      << (mc_ok ? "PASS" : "FAIL") << "\n";
            ok = ok && mc_ok;
        }
    } else {
        if (samples > 0)
            throw helix::ParseError(
                "--samples supports a single conditioning point");
        if (!std::holds_alternative<helix::gp::HelixX>(spec.kind()))
            throw helix::ParseError(
                "multiple conditioning points are supported for the helix "
                "process only");
        const auto check =
            helix::gp::check_multi_conditioning_helix(pins, times, tol);
        std::cout << "process: " << spec.name() << "\n";
        std::cout << "conditioning points:";
        for (double pin : pins) std::cout << " " << helix::format_double(pin);
        std::cout << "\n";
        for (const auto& [t, phi] : check.multipliers)
            std::cout << "phi(" << helix::format_double(t)
                      << ") = " << helix::format_double(phi) << "\n";
        std::cout << "iterated residual max discrepancy: "
                  << helix::format_double(check.max_discrepancy) << " (tol "
                  << helix::format_double(tol) << ") "
                  << (check.passed ? "PASS" : "FAIL") << "\n";
        ok = check.passed;
    }
    return ok ? kExitOk : kExitViolated;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical-projection-invariant configurations: "
                 "classification, line embeddings and Gaussian process "
                 "identity checks"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand(
        "classify", "Decompose a correlation matrix into helix / quadruple / "
                    "singleton components");
    std::string classify_input;
    double classify_tol = 1e-8;
    bool classify_standardize = false;
    classify->add_option("input", classify_input, "gram JSON file")->required();
    classify->add_option("--tol", classify_tol, "tolerance");
    classify->add_flag("--standardize", classify_standardize,
                       "accept a covariance matrix and standardize it");

    // verify-invariance
    auto* verify = app.add_subcommand(
        "verify-invariance",
        "Check invariance under all spherical projections");
    std::string verify_input;
    double verify_tol = 1e-8;
    bool verify_standardize = false;
    verify->add_option("input", verify_input, "gram JSON file")->required();
    verify->add_option("--tol", verify_tol, "tolerance");
    verify->add_flag("--standardize", verify_standardize,
                     "accept a covariance matrix and standardize it");

    // embed
    auto* embed = app.add_subcommand(
        "embed", "Embed a triangle-equality metric space into the line");
    std::string embed_input;
    double embed_tol = 1e-9;
    embed->add_option("input", embed_input, "metric JSON file")->required();
    embed->add_option("--tol", embed_tol, "tolerance (diameter-relative)");

    // admissible-region
    auto* region = app.add_subcommand(
        "admissible-region",
        "Grid scan of admissible quadruple parameters (x, y)");
    double region_xmax = 0.0, region_step = 0.0;
    std::string region_out;
    region->add_option("--xmax", region_xmax, "upper bound")->required();
    region->add_option("--step", region_step, "grid spacing")->required();
    region->add_option("--out", region_out, "output CSV (default stdout)");

    // simulate
    auto* simulate =
        app.add_subcommand("simulate", "Sample Gaussian paths from a kernel");
    std::string sim_process, sim_times, sim_out;
    std::size_t sim_samples = 100;
    std::uint64_t sim_seed = 0;
    simulate
        ->add_option("--process", sim_process,
                     "helix | taylor | laplace | quadruple:x,y | file:PATH")
        ->required();
    simulate->add_option("--times", sim_times, "comma-separated times")
        ->required();
    simulate->add_option("--samples", sim_samples, "number of paths");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--out", sim_out, "output CSV (default stdout)");

    // condition-check
    auto* condition = app.add_subcommand(
        "condition-check",
        "Verify the conditioning identity analytically (and by Monte Carlo "
        "with --samples)");
    std::string cond_process, cond_s0, cond_times;
    double cond_tol = 1e-8;
    std::size_t cond_samples = 0;
    std::uint64_t cond_seed = 0;
    condition
        ->add_option("--process", cond_process,
                     "helix | quadruple:x,y | file:PATH")
        ->required();
    condition->add_option("--s0", cond_s0, "conditioning point(s)")->required();
    condition->add_option("--times", cond_times, "comma-separated times")
        ->required();
    condition->add_option("--tol", cond_tol, "tolerance");
    condition->add_option("--samples", cond_samples,
                          "Monte Carlo sample count (0 = analytic only)");
    condition->add_option("--seed", cond_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (app.got_subcommand(classify))
            return run_classify(classify_input, classify_tol,
                                classify_standardize);
        if (app.got_subcommand(verify))
            return run_verify_invariance(verify_input, verify_tol,
                                         verify_standardize);
        if (app.got_subcommand(embed)) return run_embed(embed_input, embed_tol);
        if (app.got_subcommand(region))
            return run_admissible_region(region_xmax, region_step,
                                         OutputTarget{region_out});
        if (app.got_subcommand(simulate))
            return run_simulate(sim_process, sim_times, sim_samples, sim_seed,
                                OutputTarget{sim_out});
        if (app.got_subcommand(condition))
            return run_condition_check(cond_process, cond_s0, cond_times,
                                       cond_tol, cond_samples, cond_seed);
    } catch (const helix::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
