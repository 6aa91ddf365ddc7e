#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsvm/overlap.hpp"
#include "qsvm/pipeline.hpp"
#include "qsvm/preprocess.hpp"

#include <json.hpp>

namespace qsvm {

enum class DatasetKind { SixNine, Banknote };
enum class Method { Qsvm, Innerprod };
enum class Preprocessing { None, Averages, KMeans };
enum class ReportFormat { Json, Csv };

struct LayerRange {
    int from = 1;
    int to = 1;

    bool single() const { return from == to; }
};

struct ExperimentConfig {
    DatasetKind dataset = DatasetKind::SixNine;
    std::filesystem::path data_path;
    Method method = Method::Innerprod;
    Preprocessing preprocessing = Preprocessing::None;
    double gamma = 2.0;
    LayerRange layers;
    std::optional<std::uint64_t> shots;  // empty = exact probabilities
    bool post_select = true;
    std::uint64_t seed = 7;
    ReportFormat format = ReportFormat::Json;
    std::optional<std::filesystem::path> out;
    int n_test = 28;  // banknote test-set size
};

/// Throws ConfigError naming the offending field for every combination the
/// experiments do not define.
void validate(const ExperimentConfig& cfg);

struct PointRecord {
    int index = 0;
    int true_label = 0;
    int predicted_label = 0;
    double score = 0.0;  // sign score (qsvm) or p1 - p2 (innerprod)
    std::optional<double> p1;
    std::optional<double> p2;
    bool tie = false;
    std::optional<double> success_probability;
};

struct DatasetInfo {
    int rows = 0;
    std::array<int, 2> class_counts{0, 0};
    std::optional<std::array<int, 2>> train_counts;
    std::optional<std::array<int, 2>> test_counts;
    std::array<double, 3> kernel{1.0, 0.0, 1.0};  // k11, k12, k22
    std::vector<double> train1;                   // normalized training vectors
    std::vector<double> train2;
};

struct ClassificationReport {
    int schema_version = 1;
    ExperimentConfig config;
    DatasetInfo dataset;
    std::vector<PointRecord> points;
    int n_test = 0;
    int n_correct = 0;
    std::optional<double> accuracy;  // absent when the test set is empty
    std::vector<LayerAccuracy> layers;            // sweeps only
    std::optional<LayerAccuracy> peak;            // sweeps only
    std::optional<int> points_layer;  // layer the point records belong to
};

/// Loads, splits, pre-processes, encodes, and classifies every test point.
/// Deterministic: (config, seed) fully determines the report bytes.
ClassificationReport run_experiment(const ExperimentConfig& cfg);

nlohmann::ordered_json report_to_json(const ClassificationReport& report);
ClassificationReport report_from_json(const nlohmann::ordered_json& j);

void emit_report(const ClassificationReport& report, ReportFormat format,
                 std::ostream& out);
void emit_report(const ClassificationReport& report, ReportFormat format,
                 const std::filesystem::path& path);

std::string to_string(DatasetKind k);
std::string to_string(Method m);
std::string to_string(Preprocessing p);
std::string to_string(ReportFormat f);

} // namespace qsvm
