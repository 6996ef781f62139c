#pragma once

#include "triage/corpus.hpp"
#include "triage/featurizer.hpp"
#include "triage/forest.hpp"
#include "triage/metrics.hpp"
#include "triage/split.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace triage {

enum class Category : int {
    Gui = 0,
    Integration = 1,
    Unit = 2,
    Unknown = 3,
};

const char* toString(Category c);
std::ostream& operator<<(std::ostream& out, Category c);
std::optional<Category> parseCategory(const std::string& s);

struct CategoryMapping {
    std::map<std::string, Category> bySuite;
    bool strict = false;
};

CategoryMapping loadMapping(std::istream& in, bool strict);
CategoryMapping loadMappingFile(const std::string& path, bool strict);

// Unmapped suites are Unknown when lenient, an error when strict. Unknown
// records take part in ALL scopes but never in category scopes.
Category mapCategory(const std::string& suite, const CategoryMapping& mapping);

struct Strategy {
    std::optional<Category> trainScope; // nullopt = ALL
    std::optional<Category> testScope;

    std::string name() const; // e.g. "All->All", "GUI->GUI"
    static Strategy parse(const std::string& text); // "all->gui", "unit:unit", ...
};

// All->All, All->category x3, and category->category x3.
std::vector<Strategy> sevenStrategies();

struct EvalConfig {
    double trainRatio = 0.8;
    int folds = 5;
    int nIter = 25;
    SearchSpace space;
    FeaturizerConfig featurizer;
    std::uint64_t seed = 0;
};

struct StrategySeeds {
    std::uint64_t master = 0;
    std::uint64_t split = 0;
    std::uint64_t search = 0;
    std::uint64_t refit = 0;
    std::uint64_t calibration = 0;
};

StrategySeeds deriveSeeds(std::uint64_t master);

struct StrategyReport {
    std::string strategy;
    ForestParams bestParams;
    double threshold = 0.5;
    double calibrationF1 = 0.0;
    ConfusionMatrix cmCalibrated;
    Scores scoresCalibrated;
    ConfusionMatrix cmDefault; // threshold 0.5
    Scores scoresDefault;
    std::size_t trainFalseAlerts = 0;
    std::size_t trainLegitimate = 0;
    std::size_t testFalseAlerts = 0;
    std::size_t testLegitimate = 0;
    StrategySeeds seeds;
    double elapsedSeconds = 0.0;
    CvReport cv;
};

struct StrategyResult {
    StrategyReport report;
    FittedFeaturizer featurizer;
    RandomForest forest;
};

// Stratified 80/20 split of the full dataset, scope both halves by category,
// fit the featurizer on the scoped training half only, search, refit, then
// calibrate the threshold on out-of-fold training probabilities before
// scoring the scoped test half. Everything downstream of the split depends
// only on the training records and the derived seeds.
StrategyResult runStrategy(const Dataset& ds, const Strategy& strategy,
                           const CategoryMapping& mapping, const EvalConfig& config);

std::string reportJson(const StrategyReport& report);
// Human-readable table over several strategies: metrics at the calibrated
// threshold plus scoped class counts.
std::string reportTable(const std::vector<StrategyReport>& reports);

} // namespace triage
