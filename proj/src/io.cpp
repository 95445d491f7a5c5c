#include "helixlab/io.hpp"

#include <fstream>
#include <ostream>

#include "helixlab/format.hpp"

namespace helix::io {

namespace {

nlohmann::json load_versioned(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("version") ||
        !j["version"].is_number_integer() || j["version"].get<int>() != 1)
        throw ParseError(path + ": expected an object with \"version\": 1");
    return j;
}

Eigen::MatrixXd parse_matrix(const nlohmann::json& j, const std::string& key,
                             std::size_t n) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != n)
        throw ParseError("field \"" + key + "\" must be a " +
                         std::to_string(n) + "x" + std::to_string(n) +
                         " array of arrays");
    Eigen::MatrixXd m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = j[key][r];
        if (!row.is_array() || row.size() != n)
            throw ParseError("row " + std::to_string(r) + " of \"" + key +
                             "\" has the wrong length");
        for (std::size_t c = 0; c < n; ++c) {
            if (!row[c].is_number())
                throw ParseError("non-numeric entry in \"" + key + "\"");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                row[c].get<double>();
        }
    }
    return m;
}

std::vector<Label> parse_labels(const nlohmann::json& j) {
    if (!j.contains("labels") || !j["labels"].is_array() || j["labels"].empty())
        throw ParseError("field \"labels\" must be a non-empty string array");
    std::vector<Label> labels;
    for (const auto& item : j["labels"]) {
        if (!item.is_string())
            throw ParseError("labels must be strings");
        labels.push_back(item.get<Label>());
    }
    return labels;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

GramFile parse_gram(const nlohmann::json& j) {
    auto labels = parse_labels(j);
    auto gram = parse_matrix(j, "gram", labels.size());
    return {std::move(labels), std::move(gram)};
}

MetricFile parse_metric(const nlohmann::json& j) {
    auto labels = parse_labels(j);
    auto dist = parse_matrix(j, "dist", labels.size());
    return {std::move(labels), std::move(dist)};
}

GramFile read_gram_file(const std::string& path) {
    return parse_gram(load_versioned(path));
}

MetricFile read_metric_file(const std::string& path) {
    return parse_metric(load_versioned(path));
}

nlohmann::json classification_json(const gram::ClassificationReport& report) {
    nlohmann::json j;
    j["version"] = 1;
    j["status"] = report.status == gram::Status::Classified ? "classified"
                                                            : "not_invariant";
    j["components"] = nlohmann::json::array();
    for (const auto& component : report.components) {
        nlohmann::json c;
        std::visit(
            [&](const auto& comp) {
                using T = std::decay_t<decltype(comp)>;
                if constexpr (std::is_same_v<T, gram::HelixComponent>) {
                    c["type"] = "helix";
                    c["labels"] = comp.labels;
                    c["psi"] = comp.psi;
                    c["signs"] = comp.signs;
                } else if constexpr (std::is_same_v<T,
                                                    gram::QuadrupleComponent>) {
                    c["type"] = "quadruple";
                    c["labels"] = comp.labels;
                    c["x"] = comp.x;
                    c["y"] = comp.y;
                    c["signs"] = comp.signs;
                } else {
                    c["type"] = "singleton";
                    c["label"] = comp.label;
                    c["sign"] = comp.sign;
                }
            },
            component);
        j["components"].push_back(std::move(c));
    }
    j["collapsed"] = report.collapsed;
    j["collapse_signs"] = report.collapse_signs;
    j["diagnostics"] = report.diagnostics;
    return j;
}

nlohmann::json invariance_json(const geo::InvarianceReport& report) {
    nlohmann::json j;
    j["version"] = 1;
    j["passed"] = report.passed;
    j["max_discrepancy"] = report.max_discrepancy;
    j["violations"] = nlohmann::json::array();
    for (const auto& v : report.violations) {
        nlohmann::json item;
        item["s0"] = v.s0;
        item["x"] = v.x;
        item["y"] = v.y;
        if (v.projection_undefined) {
            item["projection_undefined"] = true;
        } else {
            item["discrepancy"] = v.discrepancy;
        }
        j["violations"].push_back(std::move(item));
    }
    return j;
}

nlohmann::json embedding_json(const metric::LineEmbedding& embedding) {
    nlohmann::json j;
    j["version"] = 1;
    j["result"] = "line_embedding";
    j["coords"] = embedding.coords;
    return j;
}

nlohmann::json quadruple_json(const metric::ExceptionalQuadruple& quadruple) {
    nlohmann::json j;
    j["version"] = 1;
    j["result"] = "exceptional_quadruple";
    j["x"] = quadruple.x;
    j["y"] = quadruple.y;
    j["matchings"] = nlohmann::json::array();
    for (const auto& m : quadruple.matchings) {
        nlohmann::json item;
        item["pairs"] = nlohmann::json::array({m.first_pair, m.second_pair});
        item["value"] = m.value;
        j["matchings"].push_back(std::move(item));
    }
    return j;
}

void write_region_csv(std::ostream& os,
                      const std::vector<std::pair<double, double>>& points) {
    os << "# version: 1\n";
    os << "x,y\n";
    for (const auto& [x, y] : points)
        os << format_double(x) << ',' << format_double(y) << '\n';
}

void write_samples_csv(std::ostream& os, const gp::SamplePaths& paths) {
    os << "# version: 1\n";
    for (std::size_t i = 0; i < paths.times.size(); ++i) {
        if (i > 0) os << ',';
        os << format_double(paths.times[i]);
    }
    os << '\n';
    for (Eigen::Index r = 0; r < paths.samples.rows(); ++r) {
        for (Eigen::Index c = 0; c < paths.samples.cols(); ++c) {
            if (c > 0) os << ',';
            os << format_double(paths.samples(r, c));
        }
        os << '\n';
    }
}

} // namespace helix::io
