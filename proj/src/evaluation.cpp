#include "triage/evaluation.hpp"
#include "triage/common.hpp"
#include "triage/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace triage {

using nlohmann::json;

const char* toString(Category c) {
    switch (c) {
    case Category::Gui: return "GUI";
    case Category::Integration: return "INTEGRATION";
    case Category::Unit: return "UNIT";
    case Category::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::ostream& operator<<(std::ostream& out, Category c) { return out << toString(c); }

std::optional<Category> parseCategory(const std::string& s) {
    std::string up;
    up.reserve(s.size());
    for (char c : s) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "GUI") return Category::Gui;
    if (up == "INTEGRATION") return Category::Integration;
    if (up == "UNIT") return Category::Unit;
    if (up == "UNKNOWN") return Category::Unknown;
    return std::nullopt;
}

CategoryMapping loadMapping(std::istream& in, bool strict) {
    CategoryMapping mapping;
    mapping.strict = strict;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        std::ostringstream where;
        where << "mapping line " << lineNo;
        if (j.is_discarded() || !j.is_object() || !j.contains("suite") ||
            !j["suite"].is_string() || !j.contains("category") || !j["category"].is_string())
            throw DataError(where.str() + ": expected {suite, category}");
        auto category = parseCategory(j["category"].get<std::string>());
        if (!category)
            throw DataError(where.str() + ": unknown category " + j["category"].get<std::string>());
        auto suite = j["suite"].get<std::string>();
        auto [it, inserted] = mapping.bySuite.emplace(suite, *category);
        if (!inserted && it->second != *category)
            throw DataError(where.str() + ": suite " + suite + " mapped to two categories");
    }
    return mapping;
}

CategoryMapping loadMappingFile(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read mapping file: " + path);
    return loadMapping(in, strict);
}

Category mapCategory(const std::string& suite, const CategoryMapping& mapping) {
    auto it = mapping.bySuite.find(suite);
    if (it != mapping.bySuite.end()) return it->second;
    if (mapping.strict) throw DataError("unmapped suite: " + suite);
    return Category::Unknown;
}

std::string Strategy::name() const {
    std::string out = trainScope ? toString(*trainScope) : "All";
    out += "->";
    out += testScope ? toString(*testScope) : "All";
    return out;
}

Strategy Strategy::parse(const std::string& text) {
    auto arrow = text.find("->");
    std::size_t sepLen = 2;
    if (arrow == std::string::npos) {
        arrow = text.find(':');
        sepLen = 1;
    }
    if (arrow == std::string::npos)
        throw UsageError("strategy must look like TRAIN->TEST (e.g. all->all, gui->gui): " + text);

    auto parseScope = [&](std::string part) -> std::optional<Category> {
        if (auto cat = parseCategory(part)) {
            if (*cat == Category::Unknown)
                throw UsageError("UNKNOWN is not a valid strategy scope");
            return *cat;
        }
        std::string low;
        for (char c : part)
            low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (low == "all" || low == "*") return std::nullopt;
        throw UsageError("unknown strategy scope: " + part);
    };
    Strategy s;
    s.trainScope = parseScope(text.substr(0, arrow));
    s.testScope = parseScope(text.substr(arrow + sepLen));
    return s;
}

std::vector<Strategy> sevenStrategies() {
    std::vector<Strategy> out;
    out.push_back({std::nullopt, std::nullopt});
    for (Category c : {Category::Gui, Category::Integration, Category::Unit})
        out.push_back({std::nullopt, c});
    for (Category c : {Category::Gui, Category::Integration, Category::Unit})
        out.push_back({c, c});
    return out;
}

StrategySeeds deriveSeeds(std::uint64_t master) {
    StrategySeeds s;
    s.master = master;
    s.split = mix64(master ^ 1);
    s.search = mix64(master ^ 2);
    s.refit = mix64(master ^ 3);
    s.calibration = mix64(master ^ 4);
    return s;
}

namespace {

bool inScope(Category cat, const std::optional<Category>& scope) {
    if (!scope) return true; // ALL keeps every record, unmapped ones included
    return cat == *scope;
}

Dataset gather(const Dataset& ds, const std::vector<std::size_t>& indices,
               const std::vector<Category>& cats, const std::optional<Category>& scope) {
    Dataset out;
    for (std::size_t idx : indices)
        if (inScope(cats[idx], scope))
            out.records.push_back(ds.records[idx]);
    return out;
}

} // namespace

StrategyResult runStrategy(const Dataset& ds, const Strategy& strategy,
                           const CategoryMapping& mapping, const EvalConfig& config) {
    auto started = std::chrono::steady_clock::now();
    if (config.folds < 2) throw UsageError("evaluation needs at least 2 folds");
    if (config.nIter < 1) throw UsageError("evaluation needs nIter >= 1");

    StrategySeeds seeds = deriveSeeds(config.seed);

    std::vector<Category> cats;
    cats.reserve(ds.records.size());
    for (const auto& r : ds.records) cats.push_back(mapCategory(r.suite, mapping));

    auto labels = labelVector(ds);
    SplitIndices split = stratifiedSplitIndices(labels, config.trainRatio, seeds.split);

    Dataset trainDs = gather(ds, split.train, cats, strategy.trainScope);
    Dataset testDs = gather(ds, split.test, cats, strategy.testScope);
    std::string name = strategy.name();
    if (trainDs.records.empty())
        throw DataError("strategy " + name + ": training scope is empty");
    if (testDs.records.empty())
        throw DataError("strategy " + name + ": test scope is empty");

    auto trainLabels = labelVector(trainDs);
    auto testLabels = labelVector(testDs);
    bool has0 = false, has1 = false;
    for (int l : trainLabels) (l == 1 ? has1 : has0) = true;
    if (!has0 || !has1)
        throw DataError("strategy " + name + ": training scope has a single class");

    // Everything from here on sees only the training records and seeds.
    FittedFeaturizer featurizer = fitFeaturizer(trainDs, config.featurizer);
    FeatureMatrix trainMatrix = transformBatch(trainDs, featurizer);

    SearchResult search = randomSearch(trainMatrix, trainLabels, config.space, config.nIter,
                                       config.folds, seeds.search);

    ForestParams bestParams = search.best;
    bestParams.seed = seeds.refit;
    RandomForest forest = fitForest(trainMatrix, trainLabels, bestParams);
    forest.featurizerHash = featurizer.hash();

    // Threshold from out-of-fold training probabilities; the test half plays
    // no part in calibration.
    auto calibFolds = stratifiedKFoldIndices(trainLabels, config.folds, seeds.calibration);
    std::vector<double> oof(trainLabels.size(), 0.0);
    for (std::size_t j = 0; j < calibFolds.size(); ++j) {
        std::vector<std::size_t> trainIdx;
        trainIdx.reserve(trainLabels.size() - calibFolds[j].size());
        for (std::size_t other = 0; other < calibFolds.size(); ++other)
            if (other != j)
                trainIdx.insert(trainIdx.end(), calibFolds[other].begin(), calibFolds[other].end());
        std::sort(trainIdx.begin(), trainIdx.end());

        std::vector<int> foldLabels;
        foldLabels.reserve(trainIdx.size());
        for (std::size_t idx : trainIdx) foldLabels.push_back(trainLabels[idx]);

        ForestParams foldParams = bestParams;
        foldParams.seed = mix64(seeds.calibration ^ (j + 1));
        RandomForest foldForest = fitForest(trainMatrix.selectRows(trainIdx), foldLabels, foldParams);
        auto probs = predictBatch(foldForest, trainMatrix.selectRows(calibFolds[j]));
        for (std::size_t p = 0; p < calibFolds[j].size(); ++p)
            oof[calibFolds[j][p]] = probs[p];
    }
    CalibrationResult calibration = calibrateThreshold(oof, trainLabels);
    forest.threshold = calibration.threshold;

    FeatureMatrix testMatrix = transformBatch(testDs, featurizer);
    auto probs = predictBatch(forest, testMatrix);
    std::vector<int> predsCalibrated(probs.size()), predsDefault(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        predsCalibrated[i] = probs[i] >= forest.threshold ? 1 : 0;
        predsDefault[i] = probs[i] >= 0.5 ? 1 : 0;
    }

    StrategyResult result;
    StrategyReport& report = result.report;
    report.strategy = name;
    report.bestParams = bestParams;
    report.threshold = forest.threshold;
    report.calibrationF1 = calibration.bestF1;
    report.cmCalibrated = confusion(testLabels, predsCalibrated);
    report.scoresCalibrated = classificationScores(report.cmCalibrated);
    report.cmDefault = confusion(testLabels, predsDefault);
    report.scoresDefault = classificationScores(report.cmDefault);
    for (int l : trainLabels) (l == 1 ? report.trainLegitimate : report.trainFalseAlerts) += 1;
    for (int l : testLabels) (l == 1 ? report.testLegitimate : report.testFalseAlerts) += 1;
    report.seeds = seeds;
    report.cv = search.report;
    report.elapsedSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    result.featurizer = std::move(featurizer);
    result.forest = std::move(forest);
    return result;
}

namespace {

json scoresJson(const Scores& s) {
    json j;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    j["f1"] = s.f1;
    j["mcc"] = s.mcc;
    return j;
}

json cmJson(const ConfusionMatrix& cm) {
    json j;
    j["tp"] = cm.tp;
    j["fp"] = cm.fp;
    j["fn"] = cm.fn;
    j["tn"] = cm.tn;
    return j;
}

} // namespace

std::string reportJson(const StrategyReport& report) {
    json j;
    j["strategy"] = report.strategy;
    j["threshold"] = report.threshold;
    j["calibrationF1"] = report.calibrationF1;
    j["confusionCalibrated"] = cmJson(report.cmCalibrated);
    j["scoresCalibrated"] = scoresJson(report.scoresCalibrated);
    j["confusionDefault"] = cmJson(report.cmDefault);
    j["scoresDefault"] = scoresJson(report.scoresDefault);
    j["classCounts"] = {
        {"trainFalseAlerts", report.trainFalseAlerts},
        {"trainLegitimate", report.trainLegitimate},
        {"trainTotal", report.trainFalseAlerts + report.trainLegitimate},
        {"testFalseAlerts", report.testFalseAlerts},
        {"testLegitimate", report.testLegitimate},
        {"testTotal", report.testFalseAlerts + report.testLegitimate},
    };
    j["seeds"] = {
        {"master", report.seeds.master},
        {"split", report.seeds.split},
        {"search", report.seeds.search},
        {"refit", report.seeds.refit},
        {"calibration", report.seeds.calibration},
    };
    json params;
    params["nTrees"] = report.bestParams.nTrees;
    params["maxDepth"] = report.bestParams.maxDepth;
    params["minSamplesSplit"] = report.bestParams.minSamplesSplit;
    params["minSamplesLeaf"] = report.bestParams.minSamplesLeaf;
    params["maxFeatures"] = report.bestParams.maxFeatures.toString();
    params["classWeight"] = toString(report.bestParams.classWeight);
    params["bootstrap"] = report.bestParams.bootstrap;
    params["seed"] = report.bestParams.seed;
    j["bestParams"] = std::move(params);

    json cv;
    cv["folds"] = report.cv.folds;
    cv["seed"] = report.cv.seed;
    cv["bestIndex"] = report.cv.bestIndex;
    json candidates = json::array();
    for (const auto& c : report.cv.candidates) {
        json cj;
        cj["meanScore"] = c.meanScore;
        cj["foldScores"] = c.foldScores;
        cj["valid"] = c.valid;
        if (!c.note.empty()) cj["note"] = c.note;
        cj["nTrees"] = c.params.nTrees;
        cj["maxDepth"] = c.params.maxDepth;
        cj["minSamplesSplit"] = c.params.minSamplesSplit;
        cj["minSamplesLeaf"] = c.params.minSamplesLeaf;
        cj["maxFeatures"] = c.params.maxFeatures.toString();
        cj["classWeight"] = toString(c.params.classWeight);
        candidates.push_back(std::move(cj));
    }
    cv["candidates"] = std::move(candidates);
    j["crossValidation"] = std::move(cv);
    j["elapsedSeconds"] = report.elapsedSeconds;
    return j.dump(2);
}

std::string reportTable(const std::vector<StrategyReport>& reports) {
    std::ostringstream out;
    out << std::left << std::setw(26) << "Strategy" << std::right << std::setw(10) << "Precision"
        << std::setw(8) << "Recall" << std::setw(8) << "F1" << std::setw(8) << "MCC"
        << std::setw(8) << "Thr" << std::setw(12) << "FalseAlerts" << std::setw(12) << "Legitimate"
        << std::setw(10) << "Total" << '\n';
    out << std::string(102, '-') << '\n';
    out << std::fixed;
    for (const auto& r : reports) {
        out << std::left << std::setw(26) << r.strategy << std::right << std::setprecision(4)
            << std::setw(10) << r.scoresCalibrated.precision << std::setw(8)
            << r.scoresCalibrated.recall << std::setw(8) << r.scoresCalibrated.f1 << std::setw(8)
            << r.scoresCalibrated.mcc << std::setprecision(3) << std::setw(8) << r.threshold
            << std::setw(12) << r.testFalseAlerts << std::setw(12) << r.testLegitimate
            << std::setw(10) << (r.testFalseAlerts + r.testLegitimate) << '\n';
    }
    return out.str();
}

} // namespace triage
