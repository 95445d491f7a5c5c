#ifndef HELIXLAB_IO_HPP
#define HELIXLAB_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "helixlab/classifier.hpp"
#include "helixlab/geometry.hpp"
#include "helixlab/metric.hpp"
#include "helixlab/process.hpp"

namespace helix::io {

// File formats are JSON with a mandatory "version": 1 field.
//   gram file:   {"version": 1, "labels": [...], "gram": [[...], ...]}
//   metric file: {"version": 1, "labels": [...], "dist": [[...], ...]}

struct GramFile {
    std::vector<Label> labels;
    Eigen::MatrixXd gram;
};

struct MetricFile {
    std::vector<Label> labels;
    Eigen::MatrixXd dist;
};

/// Throws ParseError on malformed input or unsupported version.
GramFile read_gram_file(const std::string& path);
MetricFile read_metric_file(const std::string& path);

GramFile parse_gram(const nlohmann::json& j);
MetricFile parse_metric(const nlohmann::json& j);

nlohmann::json classification_json(const gram::ClassificationReport& report);
nlohmann::json invariance_json(const geo::InvarianceReport& report);
nlohmann::json embedding_json(const metric::LineEmbedding& embedding);
nlohmann::json quadruple_json(const metric::ExceptionalQuadruple& quadruple);

/// CSV of admissible (x, y) grid points, one "x,y" row per point.
void write_region_csv(std::ostream& os,
                      const std::vector<std::pair<double, double>>& points);

/// CSV of sample paths: header row of times, one row per sample.
void write_samples_csv(std::ostream& os, const gp::SamplePaths& paths);

} // namespace helix::io

#endif // HELIXLAB_IO_HPP
