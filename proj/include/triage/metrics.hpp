#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace triage {

// Positive class is "legitimate" (label 1).
struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions);

struct Scores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double mcc = 0.0;
};

// Every score whose denominator vanishes is 0 by convention.
Scores classificationScores(const ConfusionMatrix& cm);

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
    double threshold = 0.0;
};

// One point per candidate threshold (midpoints of consecutive distinct
// probabilities, plus 0 and 1), ascending by threshold. A record is predicted
// positive when its probability >= threshold.
std::vector<PrPoint> prCurve(const std::vector<double>& probs, const std::vector<int>& labels);

struct ImportanceEntry {
    std::string name;
    double gain = 0.0;
};

struct RandomForest;
class FittedFeaturizer;

// Mean decrease in impurity: per feature, the sample-weighted Gini decrease
// summed over every node splitting on it, normalized to sum 1, descending.
// Features with zero gain are omitted.
std::vector<ImportanceEntry> featureImportance(const RandomForest& forest,
                                               const FittedFeaturizer& featurizer);

std::string scoresCsv(const ConfusionMatrix& cm, const Scores& s);
std::string importanceCsv(const std::vector<ImportanceEntry>& ranking);

} // namespace triage
