#include "triage/common.hpp"
#include "triage/corpus.hpp"
#include "triage/costmodel.hpp"
#include "triage/evaluation.hpp"
#include "triage/featurizer.hpp"
#include "triage/forest.hpp"
#include "triage/history.hpp"
#include "triage/metrics.hpp"
#include "triage/synth.hpp"
#include "triage/version.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace triage;

namespace {

void writeTextFile(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << text;
}

std::vector<std::string> splitList(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            if (!current.empty()) parts.push_back(current);
            current.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            current.push_back(c);
        }
    }
    if (!current.empty()) parts.push_back(current);
    return parts;
}

int parseIntStrict(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("not an integer for ") + what + ": " + s);
    }
}

// Comma-separated search-space dimensions; "unlimited" is a legal depth.
SearchSpace parseSearchSpace(const std::string& trees, const std::string& depths,
                             const std::string& minSplits, const std::string& minLeafs,
                             const std::string& maxFeatures, const std::string& classWeights) {
    SearchSpace space;
    auto fill = [](std::vector<int>& dst, const std::string& src, const char* what,
                   bool allowUnlimited) {
        if (src.empty()) return;
        dst.clear();
        for (const auto& part : splitList(src)) {
            if (allowUnlimited && part == "unlimited") dst.push_back(kUnlimitedDepth);
            else dst.push_back(parseIntStrict(part, what));
        }
        if (dst.empty()) throw UsageError(std::string("empty list for ") + what);
    };
    fill(space.nTrees, trees, "--trees", false);
    fill(space.maxDepth, depths, "--depths", true);
    fill(space.minSamplesSplit, minSplits, "--min-splits", false);
    fill(space.minSamplesLeaf, minLeafs, "--min-leafs", false);
    if (!maxFeatures.empty()) {
        space.maxFeatures.clear();
        for (const auto& part : splitList(maxFeatures))
            space.maxFeatures.push_back(MaxFeatures::parse(part));
    }
    if (!classWeights.empty()) {
        space.classWeight.clear();
        for (const auto& part : splitList(classWeights)) {
            auto cw = parseClassWeight(part);
            if (!cw) throw UsageError("unknown class weight: " + part);
            space.classWeight.push_back(*cw);
        }
    }
    return space;
}

std::string fileStem(const std::string& strategyName) {
    std::string stem;
    for (char c : strategyName) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            stem.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else if (!stem.empty() && stem.back() != '_')
            stem.push_back('_');
    }
    return stem; // "All->GUI" -> "all_gui"
}

struct MassPolicyOptions {
    std::vector<std::string> excludeBuilds;
    bool autoRule = false;
    double autoFactor = 10.0;
    std::int64_t autoFloor = 50;

    bool any() const { return !excludeBuilds.empty() || autoRule; }

    MassFailurePolicy toPolicy() const {
        MassFailurePolicy policy;
        for (const auto& spec : excludeBuilds) {
            // builder:first-last or builder:build
            auto colon = spec.rfind(':');
            if (colon == std::string::npos)
                throw UsageError("--exclude-build expects builder:first-last: " + spec);
            BuildRange range;
            range.builder = spec.substr(0, colon);
            auto ids = spec.substr(colon + 1);
            auto dash = ids.find('-');
            if (dash == std::string::npos) {
                range.firstBuildId = parseIntStrict(ids, "--exclude-build");
                range.lastBuildId = range.firstBuildId;
            } else {
                range.firstBuildId = parseIntStrict(ids.substr(0, dash), "--exclude-build");
                range.lastBuildId = parseIntStrict(ids.substr(dash + 1), "--exclude-build");
            }
            policy.explicitBuildExclusions.push_back(std::move(range));
        }
        if (autoRule) policy.autoRule = AutoExclusionRule{autoFactor, autoFloor};
        return policy;
    }
};

void addMassPolicyOptions(CLI::App* cmd, MassPolicyOptions& opts) {
    cmd->add_option("--exclude-build", opts.excludeBuilds,
                    "Exclude a build range, builder:first-last (repeatable)");
    cmd->add_flag("--auto-exclude", opts.autoRule,
                  "Drop builds whose failure count exceeds max(floor, factor x median)");
    cmd->add_option("--auto-factor", opts.autoFactor, "Median multiplier for --auto-exclude");
    cmd->add_option("--auto-floor", opts.autoFloor, "Absolute floor for --auto-exclude");
}

void writeExclusionReport(const std::string& path, const std::vector<ExcludedBuild>& excluded) {
    std::ostringstream out;
    for (const auto& e : excluded) {
        out << "{\"builder\":\"" << e.builder << "\",\"buildId\":" << e.buildId
            << ",\"records\":" << e.recordCount << ",\"reason\":\"" << e.reason << "\"}\n";
    }
    writeTextFile(path, out.str());
}

struct EvalCliOptions {
    std::string records;
    std::string mapping;
    bool strictMapping = false;
    double ratio = 0.8;
    int folds = 5;
    int nIter = 25;
    std::uint64_t seed = 0;
    std::size_t vocabCap = 2000;
    std::string trees, depths, minSplits, minLeafs, maxFeatures, classWeights;

    EvalConfig toConfig() const {
        EvalConfig config;
        config.trainRatio = ratio;
        config.folds = folds;
        config.nIter = nIter;
        config.seed = seed;
        config.featurizer = FeaturizerConfig::uniform(vocabCap);
        config.space =
            parseSearchSpace(trees, depths, minSplits, minLeafs, maxFeatures, classWeights);
        return config;
    }
};

void addEvalOptions(CLI::App* cmd, EvalCliOptions& opts) {
    cmd->add_option("--records", opts.records, "Failure records, one JSON object per line")
        ->required();
    cmd->add_option("--mapping", opts.mapping, "Suite-to-category mapping file")->required();
    cmd->add_flag("--strict-mapping", opts.strictMapping, "Reject unmapped suites");
    cmd->add_option("--ratio", opts.ratio, "Training fraction of the stratified split");
    cmd->add_option("--folds", opts.folds, "Cross-validation folds");
    cmd->add_option("--n-iter", opts.nIter, "Random search iterations");
    cmd->add_option("--seed", opts.seed, "Master seed");
    cmd->add_option("--vocab-cap", opts.vocabCap, "Vocabulary cap per artifact namespace");
    cmd->add_option("--trees", opts.trees, "Search space: tree counts, e.g. 50,100,200,400");
    cmd->add_option("--depths", opts.depths, "Search space: max depths, e.g. 8,16,unlimited");
    cmd->add_option("--min-splits", opts.minSplits, "Search space: min samples to split");
    cmd->add_option("--min-leafs", opts.minLeafs, "Search space: min samples per leaf");
    cmd->add_option("--max-features", opts.maxFeatures,
                    "Search space: sqrt, log2, all, or fractions");
    cmd->add_option("--class-weights", opts.classWeights, "Search space: uniform,balanced");
}

int runIngest(const std::string& records, const std::string& out, const std::string& rejects,
              const std::string& statsPath) {
    LoadResult loaded = loadRecordsFile(records);
    if (!out.empty()) writeRecordsFile(out, loaded.dataset);
    if (!rejects.empty()) {
        std::ofstream rej(rejects);
        if (!rej) throw DataError("cannot write rejection report: " + rejects);
        writeRejections(rej, loaded.rejected);
    }
    std::string stats = statsJson(datasetStats(loaded.dataset));
    if (!statsPath.empty()) writeTextFile(statsPath, stats + "\n");
    std::cout << "ingested " << loaded.dataset.records.size() << " records, rejected "
              << loaded.rejected.size() << " lines\n"
              << stats << '\n';
    return 0;
}

int runClean(const std::string& records, const std::string& out,
             const MassPolicyOptions& massOpts, const std::string& exclusionsOut,
             const std::string& historyPath, int window, bool filterUnreliableFlag,
             const std::string& unreliableOut) {
    LoadResult loaded = loadRecordsFile(records);
    Dataset ds = std::move(loaded.dataset);
    std::size_t before = ds.records.size();

    std::size_t buildExcluded = 0;
    if (massOpts.any()) {
        MassFilterResult filtered = filterMassFailureBuilds(ds, massOpts.toPolicy());
        for (const auto& e : filtered.excluded) buildExcluded += e.recordCount;
        if (!exclusionsOut.empty()) writeExclusionReport(exclusionsOut, filtered.excluded);
        ds = std::move(filtered.dataset);
    }

    std::size_t unreliableRemoved = 0;
    if (filterUnreliableFlag) {
        if (historyPath.empty())
            throw UsageError("--filter-unreliable needs --history");
        TestHistory hist = loadHistoryFile(historyPath);
        UnreliableFilterResult filtered = filterUnreliable(ds, hist, HistoryWindow{window});
        unreliableRemoved = filtered.removed.size();
        if (!unreliableOut.empty()) {
            std::ostringstream rows;
            for (const auto& r : filtered.removed)
                rows << "{\"builder\":\"" << r.builder << "\",\"testId\":\"" << r.testId
                     << "\",\"buildId\":" << r.buildId << ",\"commitIndex\":" << r.commitIndex
                     << ",\"flakeRate\":" << r.flakeRateValue << "}\n";
            writeTextFile(unreliableOut, rows.str());
        }
        ds = std::move(filtered.dataset);
    }

    writeRecordsFile(out, ds);
    std::cout << "cleaned " << before << " -> " << ds.records.size() << " records ("
              << buildExcluded << " from excluded builds, " << unreliableRemoved
              << " unreliable)\n";
    return 0;
}

int runSynth(const SynthConfig& cfg, const std::string& out, const std::string& historyOut,
             const std::string& truthOut, const std::string& mappingOut) {
    SynthResult result = generateSynthetic(cfg);
    writeRecordsFile(out, result.dataset);
    if (!historyOut.empty()) writeHistoryFile(historyOut, result.history);
    if (!truthOut.empty()) writeTextFile(truthOut, truthJson(result.truth) + "\n");
    if (!mappingOut.empty()) writeTextFile(mappingOut, mappingJsonl(result.truth));
    std::cout << "generated " << result.dataset.records.size() << " records ("
              << result.truth.legitimate << " legitimate, " << result.truth.falseAlerts
              << " false alerts), seed " << cfg.seed << '\n';
    return 0;
}

int runTrain(const EvalCliOptions& opts, const std::string& strategyText,
             const std::string& modelOut, const std::string& featurizerOut,
             const std::string& reportOut) {
    Dataset ds = loadRecordsFile(opts.records).dataset;
    CategoryMapping mapping = loadMappingFile(opts.mapping, opts.strictMapping);
    Strategy strategy = Strategy::parse(strategyText);
    StrategyResult result = runStrategy(ds, strategy, mapping, opts.toConfig());

    if (!modelOut.empty()) saveModel(modelOut, result.forest);
    if (!featurizerOut.empty()) result.featurizer.save(featurizerOut);
    if (!reportOut.empty()) writeTextFile(reportOut, reportJson(result.report) + "\n");
    std::cout << reportTable({result.report});
    return 0;
}

int runEvaluate(const EvalCliOptions& opts, const std::vector<std::string>& strategyTexts,
                bool allStrategies, const MassPolicyOptions& massOpts,
                const std::string& historyPath, int window, bool filterUnreliableFlag,
                const std::string& outDir, double rerunFaSeconds, double rerunLegitSeconds) {
    std::vector<Strategy> strategies;
    if (allStrategies) strategies = sevenStrategies();
    for (const auto& text : strategyTexts) strategies.push_back(Strategy::parse(text));
    if (strategies.empty()) throw UsageError("no strategies requested");

    Dataset ds = loadRecordsFile(opts.records).dataset;
    CategoryMapping mapping = loadMappingFile(opts.mapping, opts.strictMapping);

    if (!outDir.empty()) fs::create_directories(outDir);
    auto outPath = [&](const std::string& name) { return (fs::path(outDir) / name).string(); };

    if (massOpts.any()) {
        MassFilterResult filtered = filterMassFailureBuilds(ds, massOpts.toPolicy());
        if (!outDir.empty())
            writeExclusionReport(outPath("excluded_builds.jsonl"), filtered.excluded);
        ds = std::move(filtered.dataset);
    }
    if (filterUnreliableFlag) {
        if (historyPath.empty()) throw UsageError("--filter-unreliable needs --history");
        TestHistory hist = loadHistoryFile(historyPath);
        UnreliableFilterResult filtered = filterUnreliable(ds, hist, HistoryWindow{window});
        if (!outDir.empty()) {
            std::ostringstream rows;
            for (const auto& r : filtered.removed)
                rows << "{\"builder\":\"" << r.builder << "\",\"testId\":\"" << r.testId
                     << "\",\"buildId\":" << r.buildId << ",\"commitIndex\":" << r.commitIndex
                     << ",\"flakeRate\":" << r.flakeRateValue << "}\n";
            writeTextFile(outPath("unreliable_records.jsonl"), rows.str());
        }
        ds = std::move(filtered.dataset);
    }

    EvalConfig config = opts.toConfig();
    std::vector<StrategyReport> reports;
    double trainingSecondsTotal = 0.0;
    double measuredPredictMs = 0.0;
    bool measured = false;

    for (const auto& strategy : strategies) {
        StrategyResult result = runStrategy(ds, strategy, mapping, config);
        trainingSecondsTotal += result.report.elapsedSeconds;
        std::string stem = fileStem(result.report.strategy);
        if (!outDir.empty()) {
            writeTextFile(outPath(stem + ".report.json"), reportJson(result.report) + "\n");
            saveModel(outPath(stem + ".model.json"), result.forest);
            result.featurizer.save(outPath(stem + ".featurizer.json"));
            writeTextFile(outPath(stem + ".importance.csv"),
                          importanceCsv(featureImportance(result.forest, result.featurizer)));
        }
        if (!measured) {
            // Per-failure prediction cost measured over the whole cleaned set.
            FeatureMatrix all = transformBatch(ds, result.featurizer);
            auto t0 = std::chrono::steady_clock::now();
            auto probs = predictBatch(result.forest, all);
            auto t1 = std::chrono::steady_clock::now();
            double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (!probs.empty()) {
                measuredPredictMs = ms / static_cast<double>(probs.size());
                measured = true;
            }
        }
        reports.push_back(std::move(result.report));
    }

    std::string table = reportTable(reports);
    std::cout << table;
    if (!outDir.empty()) writeTextFile(outPath("strategies.txt"), table);

    DatasetStats stats = datasetStats(ds);
    CostInputs ci;
    ci.falseAlertCount = static_cast<std::int64_t>(stats.falseAlertCount);
    ci.legitCount = static_cast<std::int64_t>(stats.legitimateCount);
    ci.rerunSecondsPerFalseAlert = rerunFaSeconds;
    ci.rerunSecondsPerLegit = rerunLegitSeconds;
    ci.predictMillisecondsPerFailure = measuredPredictMs;
    ci.trainingMinutes = trainingSecondsTotal / 60.0;
    ci.buildCount = std::max<std::int64_t>(1, static_cast<std::int64_t>(stats.buildCount));
    CostReport cost = compareCosts(ci);
    std::cout << costTable(ci, cost);
    if (!outDir.empty()) writeTextFile(outPath("cost.json"), costJson(ci, cost) + "\n");
    return 0;
}

int runImportance(const std::string& modelPath, const std::string& featurizerPath,
                  const std::string& out, std::size_t top) {
    RandomForest forest = loadModel(modelPath);
    FittedFeaturizer featurizer = FittedFeaturizer::load(featurizerPath);
    if (forest.featurizerHash != featurizer.hash())
        throw DataError("model was trained against a different featurizer (hash mismatch)");
    auto ranking = featureImportance(forest, featurizer);
    if (!out.empty()) writeTextFile(out, importanceCsv(ranking));
    std::cout << "feature,gain\n";
    for (std::size_t i = 0; i < ranking.size() && i < top; ++i)
        std::cout << ranking[i].name << ',' << ranking[i].gain << '\n';
    return 0;
}

int runProfileHistory(const std::string& records, const std::string& historyPath, int window,
                      const std::string& csvOut) {
    Dataset ds = loadRecordsFile(records).dataset;
    TestHistory hist = loadHistoryFile(historyPath);
    HistoryProfile profile = historyProfile(ds, hist, HistoryWindow{window});
    std::string csv = profileCsv(profile);
    if (!csvOut.empty()) writeTextFile(csvOut, csv);
    auto emit = [](const char* label, const LabelProfile& p) {
        std::cout << label << ": " << p.records << " records, flakeRate=0 on "
                  << p.fracFlakeRateZero * 100.0 << "%, failRate>0 on "
                  << p.fracFailRatePositive * 100.0 << "%, clean history on "
                  << p.fracCleanHistory * 100.0 << "%\n";
    };
    emit("false alerts", profile.falseAlert);
    emit("legitimate ", profile.legitimate);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CI failure triage: separates false alerts from legitimate test failures"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);
    // Config values live in [subcommand] sections; flags always win.
    app.set_config("--config", "", "INI config file with [subcommand] sections");
    app.fallthrough();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Load and validate failure records");
    std::string inRecords, inOut, inRejects, inStats;
    ingest->add_option("--records", inRecords, "Input records file")->required();
    ingest->add_option("--out", inOut, "Canonicalized records output");
    ingest->add_option("--rejects", inRejects, "Rejection report output");
    ingest->add_option("--stats", inStats, "Dataset stats output (JSON)");

    // clean
    auto* clean = app.add_subcommand("clean", "Apply build and history cleaning filters");
    std::string clRecords, clOut, clExclusions, clHistory, clUnreliable;
    int clWindow = 35;
    bool clFilterUnreliable = false;
    MassPolicyOptions clMass;
    clean->add_option("--records", clRecords, "Input records file")->required();
    clean->add_option("--out", clOut, "Cleaned records output")->required();
    addMassPolicyOptions(clean, clMass);
    clean->add_option("--exclusions-out", clExclusions, "Excluded builds report");
    clean->add_option("--history", clHistory, "Per-commit outcome history file");
    clean->add_option("--window", clWindow, "History window in commits");
    clean->add_flag("--filter-unreliable", clFilterUnreliable,
                    "Drop legitimate records whose test flaked in-window");
    clean->add_option("--unreliable-out", clUnreliable, "Removed-records report");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
    SynthConfig synthCfg;
    std::string syOut, syHistory, syTruth, syMapping;
    synth->add_option("--n", synthCfg.nFailures, "Number of failure records");
    synth->add_option("--legit-fraction", synthCfg.legitFraction, "Legitimate class fraction");
    synth->add_option("--separability", synthCfg.separability, "Class signal strength in [0,1]");
    synth->add_option("--history-flake-bias", synthCfg.historyFlakeBias,
                      "Per-commit flake probability for flaky tests");
    synth->add_option("--legit-flake-noise", synthCfg.legitFlakeNoise,
                      "Per-commit flake probability for legitimate-failure tests");
    synth->add_option("--builds", synthCfg.builds, "Number of builds to spread records over");
    synth->add_option("--seed", synthCfg.seed, "Generator seed");
    synth->add_option("--out", syOut, "Records output")->required();
    synth->add_option("--history-out", syHistory, "History output");
    synth->add_option("--truth-out", syTruth, "Ground-truth sidecar output");
    synth->add_option("--mapping-out", syMapping, "Suite-category mapping output");

    // train
    auto* train = app.add_subcommand("train", "Train one strategy and save its model");
    EvalCliOptions trOpts;
    std::string trStrategy = "all->all", trModel, trFeaturizer, trReport;
    addEvalOptions(train, trOpts);
    train->add_option("--strategy", trStrategy, "TRAIN->TEST scopes, e.g. all->all, gui->gui");
    train->add_option("--model-out", trModel, "Model output");
    train->add_option("--featurizer-out", trFeaturizer, "Featurizer output");
    train->add_option("--report-out", trReport, "Report output (JSON)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Run the full pipeline over strategies");
    EvalCliOptions evOpts;
    std::vector<std::string> evStrategies;
    bool evAll = false;
    MassPolicyOptions evMass;
    std::string evHistory, evOutDir;
    int evWindow = 35;
    bool evFilterUnreliable = false;
    double evRerunFa = 2.3, evRerunLegit = 1.0;
    addEvalOptions(evaluate, evOpts);
    evaluate->add_option("--strategy", evStrategies, "Strategy to run (repeatable)");
    evaluate->add_flag("--all-strategies", evAll, "Run all seven standard strategies");
    addMassPolicyOptions(evaluate, evMass);
    evaluate->add_option("--history", evHistory, "Per-commit outcome history file");
    evaluate->add_option("--window", evWindow, "History window in commits");
    evaluate->add_flag("--filter-unreliable", evFilterUnreliable,
                       "Drop legitimate records whose test flaked in-window");
    evaluate->add_option("--out-dir", evOutDir, "Directory for reports, models, importance");
    evaluate->add_option("--rerun-fa-seconds", evRerunFa, "Rerun cost per false alert");
    evaluate->add_option("--rerun-legit-seconds", evRerunLegit, "Rerun cost per legitimate failure");

    // importance
    auto* importance = app.add_subcommand("importance", "Rank features of a saved model");
    std::string imModel, imFeaturizer, imOut;
    std::size_t imTop = 20;
    importance->add_option("--model", imModel, "Model file")->required();
    importance->add_option("--featurizer", imFeaturizer, "Featurizer file")->required();
    importance->add_option("--out", imOut, "Full ranking output (CSV)");
    importance->add_option("--top", imTop, "Rows to print");

    // cost
    auto* cost = app.add_subcommand("cost", "Compare rerun and classifier detection costs");
    CostInputs costInputs;
    costInputs.falseAlertCount = 969417;
    costInputs.legitCount = 225762;
    costInputs.buildCount = 2000;
    std::string costJsonOut;
    cost->add_option("--false-alerts", costInputs.falseAlertCount, "False alert count");
    cost->add_option("--legit", costInputs.legitCount, "Legitimate failure count");
    cost->add_option("--rerun-fa-seconds", costInputs.rerunSecondsPerFalseAlert,
                     "Rerun seconds per false alert");
    cost->add_option("--rerun-legit-seconds", costInputs.rerunSecondsPerLegit,
                     "Rerun seconds per legitimate failure");
    cost->add_option("--predict-ms", costInputs.predictMillisecondsPerFailure,
                     "Prediction milliseconds per failure");
    cost->add_option("--training-minutes", costInputs.trainingMinutes, "One-off training cost");
    cost->add_option("--builds", costInputs.buildCount, "Build count");
    cost->add_option("--json-out", costJsonOut, "Machine-readable report output");

    // profile-history
    auto* profile = app.add_subcommand("profile-history", "Flake/fail rate distributions per label");
    std::string phRecords, phHistory, phCsv;
    int phWindow = 35;
    profile->add_option("--records", phRecords, "Records file")->required();
    profile->add_option("--history", phHistory, "History file")->required();
    profile->add_option("--window", phWindow, "History window in commits");
    profile->add_option("--csv-out", phCsv, "Profile output (CSV)");

    try {
        app.parse(argc, argv);

        if (ingest->parsed()) return runIngest(inRecords, inOut, inRejects, inStats);
        if (clean->parsed())
            return runClean(clRecords, clOut, clMass, clExclusions, clHistory, clWindow,
                            clFilterUnreliable, clUnreliable);
        if (synth->parsed()) return runSynth(synthCfg, syOut, syHistory, syTruth, syMapping);
        if (train->parsed()) return runTrain(trOpts, trStrategy, trModel, trFeaturizer, trReport);
        if (evaluate->parsed())
            return runEvaluate(evOpts, evStrategies, evAll, evMass, evHistory, evWindow,
                               evFilterUnreliable, evOutDir, evRerunFa, evRerunLegit);
        if (importance->parsed()) return runImportance(imModel, imFeaturizer, imOut, imTop);
        if (cost->parsed()) {
            CostReport report = compareCosts(costInputs);
            std::cout << costTable(costInputs, report);
            if (!costJsonOut.empty())
                writeTextFile(costJsonOut, costJson(costInputs, report) + "\n");
            return 0;
        }
        if (profile->parsed()) return runProfileHistory(phRecords, phHistory, phWindow, phCsv);

        std::cout << app.help();
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
