#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "helixlab/format.hpp"
#include "helixlab/io.hpp"

using namespace helix;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

// Runs a shell command, capturing stdout; stderr is discarded.
CommandResult run(const std::string& command) {
    CommandResult result;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer;
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string cli() {
    const char* bin = std::getenv("HELIXLAB_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

std::string data(const std::string& name) {
    const char* dir = std::getenv("HELIXLAB_DATA");
    REQUIRE(dir != nullptr);
    return std::string(dir) + "/" + name;
}

} // namespace

TEST_CASE("gram file parsing") {
    const auto good = nlohmann::json::parse(R"({
        "version": 1,
        "labels": ["a", "b"],
        "gram": [[1.0, 0.5], [0.5, 1.0]]
    })");
    const auto file = io::parse_gram(good);
    CHECK(file.labels == std::vector<Label>{"a", "b"});
    CHECK(file.gram(0, 1) == 0.5);

    auto bad_version = good;
    bad_version["version"] = 2;
    CHECK_THROWS_AS(io::read_gram_file("/nonexistent.json"), ParseError);

    auto short_row = good;
    short_row["gram"] = {{1.0, 0.5}, {0.5}};
    CHECK_THROWS_AS(io::parse_gram(short_row), ParseError);

    auto not_square = good;
    not_square["gram"] = {{1.0, 0.5}};
    CHECK_THROWS_AS(io::parse_gram(not_square), ParseError);

    auto text_entry = good;
    text_entry["gram"] = {{1.0, "x"}, {"x", 1.0}};
    CHECK_THROWS_AS(io::parse_gram(text_entry), ParseError);

    auto no_labels = good;
    no_labels.erase("labels");
    CHECK_THROWS_AS(io::parse_gram(no_labels), ParseError);
}

TEST_CASE("metric file parsing") {
    const auto good = nlohmann::json::parse(R"({
        "version": 1,
        "labels": ["a", "b"],
        "dist": [[0.0, 2.0], [2.0, 0.0]]
    })");
    const auto file = io::parse_metric(good);
    CHECK(file.dist(0, 1) == 2.0);
}

TEST_CASE("csv writers are deterministic") {
    std::ostringstream a, b;
    const std::vector<std::pair<double, double>> pts = {{0.1, 0.2},
                                                        {0.30000000000000004, 1.0}};
    io::write_region_csv(a, pts);
    io::write_region_csv(b, pts);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("# version: 1\nx,y\n", 0) == 0);
    CHECK(a.str().find("0.30000000000000004,1\n") != std::string::npos);

    gp::SamplePaths paths;
    paths.times = {0.0, 1.5};
    paths.samples.resize(2, 2);
    paths.samples << 0.25, -1.0, 3.5, 0.125;
    std::ostringstream s;
    io::write_samples_csv(s, paths);
    CHECK(s.str() == "# version: 1\n0,1.5\n0.25,-1\n3.5,0.125\n");
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

// ---------------------------------------------------------------------------
// CLI round trips over the shipped example files (documented exit codes)
// ---------------------------------------------------------------------------

TEST_CASE("cli classify") {
    const auto helix = run(cli() + " classify " + data("helix_gram.json"));
    CHECK(helix.exit_code == 0);
    CHECK(helix.output.find("\"status\": \"classified\"") != std::string::npos);
    CHECK(helix.output.find("\"type\": \"helix\"") != std::string::npos);

    const auto quad = run(cli() + " classify " + data("quadruple_gram.json"));
    CHECK(quad.exit_code == 0);
    CHECK(quad.output.find("\"type\": \"quadruple\"") != std::string::npos);

    const auto perturbed =
        run(cli() + " classify " + data("perturbed_gram.json"));
    CHECK(perturbed.exit_code == 2);
    CHECK(perturbed.output.find("\"status\": \"not_invariant\"") !=
          std::string::npos);

    const auto missing = run(cli() + " classify /nonexistent.json");
    CHECK(missing.exit_code == 1);

    const auto standardized = run(cli() + " classify --standardize " +
                                  data("raw_covariance.json"));
    CHECK(standardized.exit_code == 0);
    CHECK(standardized.output.find("\"label\": \"zero\"") != std::string::npos);
    CHECK(standardized.output.find("\"sign\": 0") != std::string::npos);
}

TEST_CASE("cli verify-invariance") {
    const auto helix =
        run(cli() + " verify-invariance " + data("helix_gram.json"));
    CHECK(helix.exit_code == 0);
    CHECK(helix.output.find("\"passed\": true") != std::string::npos);

    const auto perturbed =
        run(cli() + " verify-invariance " + data("perturbed_gram.json"));
    CHECK(perturbed.exit_code == 2);
    CHECK(perturbed.output.find("\"passed\": false") != std::string::npos);
}

TEST_CASE("cli embed") {
    const auto line = run(cli() + " embed " + data("line_metric.json"));
    CHECK(line.exit_code == 0);
    CHECK(line.output.find("\"result\": \"line_embedding\"") !=
          std::string::npos);

    const auto quad = run(cli() + " embed " + data("exceptional_metric.json"));
    CHECK(quad.exit_code == 0);
    CHECK(quad.output.find("\"result\": \"exceptional_quadruple\"") !=
          std::string::npos);
    CHECK(quad.output.find("\"x\": 2.0") != std::string::npos);
}

TEST_CASE("cli admissible-region and simulate are byte-deterministic") {
    const std::string region_cmd =
        cli() + " admissible-region --xmax 4 --step 0.25";
    const auto r1 = run(region_cmd);
    const auto r2 = run(region_cmd);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output == r2.output);

    // The emitted file itself is symmetric in (x, y) and avoids x = y.
    std::set<std::pair<std::string, std::string>> rows;
    std::istringstream lines(r1.output);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line == "x,y") continue;
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        rows.emplace(line.substr(0, comma), line.substr(comma + 1));
    }
    CHECK_FALSE(rows.empty());
    for (const auto& [x, y] : rows) {
        CHECK(x != y);
        CHECK(rows.count({y, x}) == 1);
    }

    const std::string sim_cmd =
        cli() + " simulate --process helix --times 0,1,2 --samples 5 --seed 7";
    const auto s1 = run(sim_cmd);
    const auto s2 = run(sim_cmd);
    CHECK(s1.exit_code == 0);
    CHECK(s1.output == s2.output);
    CHECK(s1.output.rfind("# version: 1\n0,1,2\n", 0) == 0);

    const auto other_seed = run(
        cli() + " simulate --process helix --times 0,1,2 --samples 5 --seed 8");
    CHECK(other_seed.output != s1.output);

    // Explicit matrices loaded from a file are valid index-time processes.
    const auto from_file = run(cli() + " simulate --process file:" +
                               data("helix_gram.json") +
                               " --times 0,1,2 --samples 3 --seed 1");
    CHECK(from_file.exit_code == 0);
}

TEST_CASE("cli condition-check") {
    const auto analytic = run(cli() +
                              " condition-check --process helix --s0 0 "
                              "--times 1,2 --tol 1e-12");
    CHECK(analytic.exit_code == 0);
    CHECK(analytic.output.find("PASS") != std::string::npos);

    const auto multi = run(cli() +
                           " condition-check --process helix --s0 0,4 "
                           "--times 1,2 --tol 1e-12");
    CHECK(multi.exit_code == 0);

    const auto mc = run(cli() +
                        " condition-check --process quadruple:3,1.5 --s0 0 "
                        "--times 1,2,3 --tol 1e-12 --samples 20000 --seed 1");
    CHECK(mc.exit_code == 0);

    const auto broken = run(cli() + " condition-check --process file:" +
                            data("perturbed_gram.json") +
                            " --s0 0 --times 1,2,3 --tol 1e-10");
    CHECK(broken.exit_code == 2);
}

TEST_CASE("cli rejects malformed invocations with exit 1") {
    CHECK(run(cli()).exit_code == 1);
    CHECK(run(cli() + " classify").exit_code == 1);
    CHECK(run(cli() + " simulate --process unknown --times 0,1").exit_code ==
          1);
    CHECK(run(cli() + " embed " + data("helix_gram.json")).exit_code == 1);
}
