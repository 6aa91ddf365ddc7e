#include "qsvm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "qsvm/errors.hpp"
#include "qsvm/rng.hpp"

namespace qsvm {

namespace {

// fixed seed streams so concurrent evaluation cannot change output bytes
constexpr std::uint64_t kSplitStream = 1000;
constexpr std::uint64_t kKmeansStream = 2000;
constexpr std::uint64_t kPointStreamBase = 3000;
constexpr std::uint64_t kSweepStream = 4000;

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

/// Index-sliced parallel map; results land in order, so scheduling cannot
/// affect the report.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                              count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct PreparedData {
    FeatureVector center0;
    FeatureVector center1;
    std::vector<FeatureVector> tests;
    DatasetInfo info;
};

PreparedData prepare_six_nine(const Dataset& data) {
    PreparedData out;
    out.info.rows = int(data.rows.size());
    out.info.class_counts = data.class_counts();
    std::optional<std::size_t> first0;
    std::optional<std::size_t> first1;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        const int label = data.rows[i].label.value_or(-1);
        if (label == 0 && !first0) first0 = i;
        if (label == 1 && !first1) first1 = i;
    }
    if (!first0 || !first1)
        throw DataError("six-nine data must contain a class-0 and a class-1 "
                        "training row");
    out.center0 = data.rows[*first0];
    out.center1 = data.rows[*first1];
    for (std::size_t i = 0; i < data.rows.size(); ++i)
        if (i != *first0 && i != *first1) out.tests.push_back(data.rows[i]);
    return out;
}

PreparedData prepare_banknote(const Dataset& data, const ExperimentConfig& cfg) {
    PreparedData out;
    out.info.rows = int(data.rows.size());
    out.info.class_counts = data.class_counts();
    const SplitResult parts =
        split(data, cfg.n_test, derive_seed(cfg.seed, kSplitStream));
    out.info.train_counts = parts.train.class_counts();
    out.info.test_counts = parts.test.class_counts();
    if (cfg.preprocessing == Preprocessing::Averages) {
        auto [c0, c1] = class_averages(parts.train);
        out.center0 = c0;
        out.center1 = c1;
    } else {
        const KMeansResult km =
            kmeans(parts.train, 2, KMeansInit::ClassMeans,
                   derive_seed(cfg.seed, kKmeansStream));
        const int cluster_for_class0 = km.label_map[0] == 0 ? 0 : 1;
        out.center0 = km.centers[std::size_t(cluster_for_class0)];
        out.center1 = km.centers[std::size_t(1 - cluster_for_class0)];
    }
    out.tests = parts.test.rows;
    return out;
}

Circuit encode_any(const FeatureVector& unit) {
    return unit.values.size() == 2 ? encode2(unit) : encode4(unit);
}

} // namespace

void validate(const ExperimentConfig& cfg) {
    if (cfg.dataset == DatasetKind::SixNine &&
        cfg.preprocessing != Preprocessing::None)
        throw ConfigError("preprocess: not defined for the six-nine dataset");
    if (cfg.dataset == DatasetKind::Banknote &&
        cfg.preprocessing == Preprocessing::None)
        throw ConfigError("preprocess: banknote runs need 'averages' or "
                          "'kmeans'");
    if (cfg.method == Method::Qsvm && !(cfg.layers.from == 1 && cfg.layers.to == 1))
        throw ConfigError("layers: only the innerprod method takes layers");
    if (cfg.layers.from < 1 || cfg.layers.to > 60 ||
        cfg.layers.from > cfg.layers.to)
        throw ConfigError("layers: range must sit inside [1, 60]");
    if (cfg.gamma <= 0.0) throw ConfigError("gamma: must be positive");
    if (cfg.shots && *cfg.shots < 1) throw ConfigError("shots: must be >= 1");
    if (cfg.n_test < 1) throw ConfigError("n-test: must be >= 1");
    if (cfg.data_path.empty()) throw ConfigError("data-path: missing");
}

ClassificationReport run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const Dataset data = load_dataset(
        cfg.data_path, cfg.dataset == DatasetKind::Banknote ? 4 : 2);
    PreparedData prep = cfg.dataset == DatasetKind::Banknote
                            ? prepare_banknote(data, cfg)
                            : prepare_six_nine(data);

    const FeatureVector train1 = normalize(prep.center0);
    const FeatureVector train2 = normalize(prep.center1);
    const TrainedModel model = make_model(train1, train2, {0, 1}, cfg.gamma);

    ClassificationReport report;
    report.config = cfg;
    report.dataset = prep.info;
    report.dataset.kernel = {model.f.k11, model.f.k12, model.f.k22};
    report.dataset.train1 = train1.values;
    report.dataset.train2 = train2.values;
    report.n_test = int(prep.tests.size());

    std::vector<FeatureVector> tests;
    tests.reserve(prep.tests.size());
    for (const auto& t : prep.tests) tests.push_back(normalize(t));

    const auto fill_point = [&](std::size_t i, PointRecord& rec) {
        rec.index = int(i);
        rec.true_label = prep.tests[i].label.value_or(-1);
    };

    report.points.resize(tests.size());
    if (cfg.method == Method::Qsvm) {
        HhlConfig hhl;
        hhl.post_select = cfg.post_select;
        report.points_layer.reset();
        parallel_for(tests.size(), [&](std::size_t i) {
            PointRecord rec;
            fill_point(i, rec);
            const QsvmResult r =
                classify_qsvm(model, tests[i], hhl, cfg.shots,
                              derive_seed(cfg.seed, kPointStreamBase + i));
            rec.predicted_label = r.label;
            rec.score = r.score;
            rec.tie = r.tie;
            rec.success_probability = r.success_probability;
            report.points[i] = rec;
        });
    } else {
        std::vector<Circuit> test_preps(tests.size());
        for (std::size_t i = 0; i < tests.size(); ++i)
            test_preps[i] = encode_any(tests[i]);

        int points_layer = cfg.layers.from;
        if (!cfg.layers.single()) {
            std::vector<std::pair<Circuit, int>> labeled;
            labeled.reserve(tests.size());
            for (std::size_t i = 0; i < tests.size(); ++i)
                labeled.emplace_back(test_preps[i],
                                     prep.tests[i].label.value_or(-1));
            report.layers = layer_sweep(
                model.train1_circuit, model.train2_circuit, labeled,
                cfg.layers.from, cfg.layers.to, cfg.shots,
                derive_seed(cfg.seed, kSweepStream), model.labels);
            const auto best = std::max_element(
                report.layers.begin(), report.layers.end(),
                [](const LayerAccuracy& a, const LayerAccuracy& b) {
                    return a.accuracy < b.accuracy;
                });
            report.peak = *best;
            points_layer = best->layer;
        }
        report.points_layer = points_layer;

        // per-point records at points_layer; sweep runs reuse the sweep's
        // per-(layer, point) seed derivation so the records recount to the
        // reported series entry
        parallel_for(tests.size(), [&](std::size_t i) {
            PointRecord rec;
            fill_point(i, rec);
            const std::uint64_t point_seed =
                cfg.layers.single()
                    ? derive_seed(cfg.seed, kPointStreamBase + i)
                    : derive_seed(derive_seed(derive_seed(cfg.seed, kSweepStream),
                                              std::uint64_t(points_layer)),
                                  i);
            const InnerprodResult r = classify_innerprod(
                model.train1_circuit, model.train2_circuit, test_preps[i],
                points_layer, cfg.shots, point_seed, model.labels);
            rec.predicted_label = r.label;
            rec.p1 = r.p1;
            rec.p2 = r.p2;
            rec.score = r.p1 - r.p2;
            rec.tie = r.tie;
            report.points[i] = rec;
        });
    }

    report.n_correct = 0;
    for (const auto& p : report.points)
        if (p.predicted_label == p.true_label) report.n_correct++;
    if (report.n_test > 0)
        report.accuracy = double(report.n_correct) / double(report.n_test);
    return report;
}

std::string to_string(DatasetKind k) {
    return k == DatasetKind::SixNine ? "six-nine" : "banknote";
}
std::string to_string(Method m) {
    return m == Method::Qsvm ? "qsvm" : "innerprod";
}
std::string to_string(Preprocessing p) {
    switch (p) {
        case Preprocessing::None: return "none";
        case Preprocessing::Averages: return "averages";
        case Preprocessing::KMeans: return "kmeans";
    }
    return "none";
}
std::string to_string(ReportFormat f) {
    return f == ReportFormat::Json ? "json" : "csv";
}

namespace {

DatasetKind dataset_from_string(const std::string& s) {
    if (s == "six-nine") return DatasetKind::SixNine;
    if (s == "banknote") return DatasetKind::Banknote;
    throw ConfigError("dataset: unknown value '" + s + "'");
}
Method method_from_string(const std::string& s) {
    if (s == "qsvm") return Method::Qsvm;
    if (s == "innerprod") return Method::Innerprod;
    throw ConfigError("method: unknown value '" + s + "'");
}
Preprocessing preprocessing_from_string(const std::string& s) {
    if (s == "none") return Preprocessing::None;
    if (s == "averages") return Preprocessing::Averages;
    if (s == "kmeans") return Preprocessing::KMeans;
    throw ConfigError("preprocess: unknown value '" + s + "'");
}
ReportFormat format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    throw ConfigError("format: unknown value '" + s + "'");
}

} // namespace

nlohmann::ordered_json report_to_json(const ClassificationReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = report.schema_version;

    nlohmann::ordered_json cfg;
    cfg["dataset"] = to_string(report.config.dataset);
    cfg["data_path"] = report.config.data_path.string();
    cfg["method"] = to_string(report.config.method);
    cfg["preprocess"] = to_string(report.config.preprocessing);
    cfg["gamma"] = report.config.gamma;
    cfg["layers"] = {{"from", report.config.layers.from},
                     {"to", report.config.layers.to}};
    if (report.config.shots)
        cfg["shots"] = *report.config.shots;
    else
        cfg["shots"] = nullptr;
    cfg["post_select"] = report.config.post_select;
    cfg["seed"] = report.config.seed;
    cfg["format"] = to_string(report.config.format);
    if (report.config.out)
        cfg["out"] = report.config.out->string();
    else
        cfg["out"] = nullptr;
    cfg["n_test"] = report.config.n_test;
    j["config"] = cfg;

    nlohmann::ordered_json info;
    info["rows"] = report.dataset.rows;
    info["class_counts"] = report.dataset.class_counts;
    if (report.dataset.train_counts)
        info["train_counts"] = *report.dataset.train_counts;
    if (report.dataset.test_counts)
        info["test_counts"] = *report.dataset.test_counts;
    info["kernel"] = {{"k11", report.dataset.kernel[0]},
                      {"k12", report.dataset.kernel[1]},
                      {"k22", report.dataset.kernel[2]}};
    info["train1"] = report.dataset.train1;
    info["train2"] = report.dataset.train2;
    j["dataset"] = info;

    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : report.points) {
        nlohmann::ordered_json e;
        e["index"] = p.index;
        e["true_label"] = p.true_label;
        e["predicted_label"] = p.predicted_label;
        e["score"] = p.score;
        if (p.p1) e["p1"] = *p.p1;
        if (p.p2) e["p2"] = *p.p2;
        e["tie"] = p.tie;
        if (p.success_probability)
            e["success_probability"] = *p.success_probability;
        pts.push_back(e);
    }
    j["points"] = pts;
    if (report.points_layer) j["points_layer"] = *report.points_layer;
    j["n_test"] = report.n_test;
    j["n_correct"] = report.n_correct;
    if (report.accuracy)
        j["accuracy"] = *report.accuracy;
    else
        j["accuracy"] = nullptr;
    if (!report.layers.empty()) {
        nlohmann::ordered_json series = nlohmann::ordered_json::array();
        for (const auto& la : report.layers)
            series.push_back({{"layer", la.layer}, {"accuracy", la.accuracy}});
        j["layers"] = series;
    }
    if (report.peak)
        j["peak"] = {{"layer", report.peak->layer},
                     {"accuracy", report.peak->accuracy}};
    return j;
}

ClassificationReport report_from_json(const nlohmann::ordered_json& j) {
    ClassificationReport r;
    r.schema_version = j.at("schema_version").get<int>();
    const auto& cfg = j.at("config");
    r.config.dataset = dataset_from_string(cfg.at("dataset").get<std::string>());
    r.config.data_path = cfg.at("data_path").get<std::string>();
    r.config.method = method_from_string(cfg.at("method").get<std::string>());
    r.config.preprocessing =
        preprocessing_from_string(cfg.at("preprocess").get<std::string>());
    r.config.gamma = cfg.at("gamma").get<double>();
    r.config.layers.from = cfg.at("layers").at("from").get<int>();
    r.config.layers.to = cfg.at("layers").at("to").get<int>();
    if (!cfg.at("shots").is_null())
        r.config.shots = cfg.at("shots").get<std::uint64_t>();
    r.config.post_select = cfg.at("post_select").get<bool>();
    r.config.seed = cfg.at("seed").get<std::uint64_t>();
    r.config.format = format_from_string(cfg.at("format").get<std::string>());
    if (!cfg.at("out").is_null())
        r.config.out = std::filesystem::path(cfg.at("out").get<std::string>());
    r.config.n_test = cfg.at("n_test").get<int>();

    const auto& info = j.at("dataset");
    r.dataset.rows = info.at("rows").get<int>();
    r.dataset.class_counts = info.at("class_counts").get<std::array<int, 2>>();
    if (info.contains("train_counts"))
        r.dataset.train_counts = info.at("train_counts").get<std::array<int, 2>>();
    if (info.contains("test_counts"))
        r.dataset.test_counts = info.at("test_counts").get<std::array<int, 2>>();
    r.dataset.kernel = {info.at("kernel").at("k11").get<double>(),
                        info.at("kernel").at("k12").get<double>(),
                        info.at("kernel").at("k22").get<double>()};
    r.dataset.train1 = info.at("train1").get<std::vector<double>>();
    r.dataset.train2 = info.at("train2").get<std::vector<double>>();

    for (const auto& e : j.at("points")) {
        PointRecord p;
        p.index = e.at("index").get<int>();
        p.true_label = e.at("true_label").get<int>();
        p.predicted_label = e.at("predicted_label").get<int>();
        p.score = e.at("score").get<double>();
        if (e.contains("p1")) p.p1 = e.at("p1").get<double>();
        if (e.contains("p2")) p.p2 = e.at("p2").get<double>();
        p.tie = e.at("tie").get<bool>();
        if (e.contains("success_probability"))
            p.success_probability = e.at("success_probability").get<double>();
        r.points.push_back(p);
    }
    if (j.contains("points_layer"))
        r.points_layer = j.at("points_layer").get<int>();
    r.n_test = j.at("n_test").get<int>();
    r.n_correct = j.at("n_correct").get<int>();
    if (!j.at("accuracy").is_null())
        r.accuracy = j.at("accuracy").get<double>();
    if (j.contains("layers"))
        for (const auto& e : j.at("layers"))
            r.layers.push_back({e.at("layer").get<int>(),
                                e.at("accuracy").get<double>()});
    if (j.contains("peak"))
        r.peak = LayerAccuracy{j.at("peak").at("layer").get<int>(),
                               j.at("peak").at("accuracy").get<double>()};
    return r;
}

void emit_report(const ClassificationReport& report, ReportFormat format,
                 std::ostream& out) {
    if (format == ReportFormat::Json) {
        out << report_to_json(report).dump(2) << "\n";
        return;
    }
    // delimiter-separated: the layer series for sweeps, else the point table
    if (!report.layers.empty()) {
        out << "layer,accuracy\n";
        for (const auto& la : report.layers)
            out << la.layer << "," << format_double(la.accuracy) << "\n";
        return;
    }
    out << "index,true_label,predicted_label,score,p1,p2,tie,"
           "success_probability\n";
    for (const auto& p : report.points) {
        out << p.index << "," << p.true_label << "," << p.predicted_label << ","
            << format_double(p.score) << ","
            << (p.p1 ? format_double(*p.p1) : "") << ","
            << (p.p2 ? format_double(*p.p2) : "") << "," << (p.tie ? 1 : 0)
            << ","
            << (p.success_probability ? format_double(*p.success_probability)
                                      : "")
            << "\n";
    }
}

void emit_report(const ClassificationReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("emit_report: cannot open '" + path.string() +
                        "' for writing");
    emit_report(report, format, out);
    if (!out)
        throw DataError("emit_report: write to '" + path.string() + "' failed");
}

} // namespace qsvm
