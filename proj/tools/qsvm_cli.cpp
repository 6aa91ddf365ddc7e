#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsvm/errors.hpp"
#include "qsvm/experiment.hpp"

namespace {

qsvm::LayerRange parse_layers(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        const int from = std::stoi(text.substr(0, dots));
        const int to = std::stoi(text.substr(dots + 2));
        return {from, to};
    } catch (const std::exception&) {
        throw qsvm::ConfigError("layers: expected N or A..B, got '" + text + "'");
    }
}

std::optional<std::uint64_t> parse_shots(const std::string& text) {
    if (text == "exact") return std::nullopt;
    try {
        const long long v = std::stoll(text);
        if (v < 1) throw qsvm::ConfigError("shots: must be >= 1 or 'exact'");
        return std::uint64_t(v);
    } catch (const qsvm::ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw qsvm::ConfigError("shots: expected an integer or 'exact', got '" +
                                text + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QSVM laboratory: LS-SVM circuit pipeline and overlap "
                 "classifier on a dense state-vector simulator"};

    std::string dataset;
    std::string data_path;
    std::string method;
    std::string preprocess;
    double gamma = 2.0;
    std::string layers = "1";
    std::string shots = "exact";
    bool post_select = true;
    std::uint64_t seed = 7;
    std::string out_path;
    std::string format = "json";

    app.add_option("--dataset", dataset, "six-nine or banknote")
        ->required()
        ->check(CLI::IsMember({"six-nine", "banknote"}));
    app.add_option("--data-path", data_path,
                   "input CSV (defaults to the shipped file for the dataset)");
    app.add_option("--method", method, "qsvm or innerprod")
        ->required()
        ->check(CLI::IsMember({"qsvm", "innerprod"}));
    auto* opt_preprocess =
        app.add_option("--preprocess", preprocess,
                       "banknote pre-processing: averages or kmeans")
            ->check(CLI::IsMember({"averages", "kmeans"}));
    auto* opt_gamma =
        app.add_option("--gamma", gamma, "LS-SVM weight (default 2)");
    auto* opt_layers = app.add_option(
        "--layers", layers, "overlap layers: single N or range A..B (default 1)");
    app.add_option("--shots", shots, "shot count or 'exact' (default exact)");
    auto* opt_postsel = app.add_flag("--post-select,!--no-post-select",
                                     post_select,
                                     "condition the qsvm readout on the clock "
                                     "register (default on)");
    app.add_option("--seed", seed, "experiment seed (default 7)");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "json or csv (default json)")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qsvm::ExperimentConfig cfg;
        cfg.dataset = dataset == "banknote" ? qsvm::DatasetKind::Banknote
                                            : qsvm::DatasetKind::SixNine;
        cfg.data_path = !data_path.empty()
                            ? std::filesystem::path(data_path)
                            : (cfg.dataset == qsvm::DatasetKind::Banknote
                                   ? "data/banknote_synthetic.csv"
                                   : "data/six_nine.csv");
        cfg.method = method == "qsvm" ? qsvm::Method::Qsvm
                                      : qsvm::Method::Innerprod;
        if (opt_preprocess->count() > 0)
            cfg.preprocessing = preprocess == "kmeans"
                                    ? qsvm::Preprocessing::KMeans
                                    : qsvm::Preprocessing::Averages;
        cfg.gamma = gamma;
        cfg.layers = parse_layers(layers);
        cfg.shots = parse_shots(shots);
        cfg.post_select = post_select;
        cfg.seed = seed;
        cfg.format = format == "csv" ? qsvm::ReportFormat::Csv
                                     : qsvm::ReportFormat::Json;
        if (!out_path.empty()) cfg.out = out_path;

        // flags that only one method consumes are rejected when given
        // explicitly for the other
        if (cfg.method == qsvm::Method::Innerprod && opt_postsel->count() > 0)
            throw qsvm::ConfigError("post-select: only the qsvm method "
                                    "post-selects");
        if (cfg.method == qsvm::Method::Innerprod && opt_gamma->count() > 0)
            throw qsvm::ConfigError("gamma: only the qsvm method takes gamma");
        if (cfg.method == qsvm::Method::Qsvm && opt_layers->count() > 0)
            throw qsvm::ConfigError("layers: only the innerprod method takes "
                                    "layers");

        const qsvm::ClassificationReport report = qsvm::run_experiment(cfg);
        if (cfg.out)
            qsvm::emit_report(report, cfg.format, *cfg.out);
        else
            qsvm::emit_report(report, cfg.format, std::cout);
        return 0;
    } catch (const qsvm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qsvm::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const qsvm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
