#include "triage/metrics.hpp"
#include "triage/common.hpp"
#include "triage/featurizer.hpp"
#include "triage/forest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace triage {

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions) {
    if (labels.size() != predictions.size())
        throw DataError("labels and predictions differ in length");
    if (labels.empty())
        throw DataError("cannot build a confusion matrix from zero records");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        bool actual = labels[i] == 1;
        bool predicted = predictions[i] == 1;
        if (actual && predicted) ++cm.tp;
        else if (actual) ++cm.fn;
        else if (predicted) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

Scores classificationScores(const ConfusionMatrix& cm) {
    Scores s;
    auto tp = static_cast<double>(cm.tp);
    auto fp = static_cast<double>(cm.fp);
    auto fn = static_cast<double>(cm.fn);
    auto tn = static_cast<double>(cm.tn);

    if (tp + fp > 0.0) s.precision = tp / (tp + fp);
    if (tp + fn > 0.0) s.recall = tp / (tp + fn);
    if (s.precision + s.recall > 0.0)
        s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);

    double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom > 0.0)
        s.mcc = (tp * tn - fp * fn) / std::sqrt(denom);
    return s;
}

namespace {

// Shared by prCurve and calibrateThreshold: midpoints between consecutive
// distinct sorted probabilities, plus 0 and 1, ascending.
std::vector<double> candidateThresholds(std::vector<double> probs) {
    std::sort(probs.begin(), probs.end());
    probs.erase(std::unique(probs.begin(), probs.end()), probs.end());
    std::vector<double> candidates{0.0};
    for (std::size_t i = 0; i + 1 < probs.size(); ++i)
        candidates.push_back((probs[i] + probs[i + 1]) / 2.0);
    candidates.push_back(1.0);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    return candidates;
}

} // namespace

std::vector<PrPoint> prCurve(const std::vector<double>& probs, const std::vector<int>& labels) {
    if (probs.size() != labels.size())
        throw DataError("probabilities and labels differ in length");
    std::int64_t totalPos = 0;
    for (int l : labels) totalPos += l == 1 ? 1 : 0;
    if (totalPos == 0 || totalPos == static_cast<std::int64_t>(labels.size()))
        throw DataError("precision-recall curve requires both classes");

    // Sorted probabilities with suffix positive counts let each threshold be
    // scored in O(log n).
    std::vector<std::pair<double, int>> sorted(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) sorted[i] = {probs[i], labels[i]};
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int64_t> posSuffix(sorted.size() + 1, 0);
    for (std::size_t i = sorted.size(); i > 0; --i)
        posSuffix[i - 1] = posSuffix[i] + (sorted[i - 1].second == 1 ? 1 : 0);

    std::vector<PrPoint> curve;
    for (double t : candidateThresholds(probs)) {
        auto first = std::lower_bound(sorted.begin(), sorted.end(), t,
                                      [](const auto& a, double b) { return a.first < b; });
        auto idx = static_cast<std::size_t>(first - sorted.begin());
        std::int64_t predicted = static_cast<std::int64_t>(sorted.size() - idx);
        std::int64_t tp = posSuffix[idx];
        PrPoint p;
        p.threshold = t;
        p.recall = static_cast<double>(tp) / static_cast<double>(totalPos);
        p.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        curve.push_back(p);
    }
    return curve;
}

std::vector<ImportanceEntry> featureImportance(const RandomForest& forest,
                                               const FittedFeaturizer& featurizer) {
    if (forest.nFeatures != featurizer.dimension())
        throw DataError("forest and featurizer disagree on feature count");

    std::vector<double> gain(featurizer.dimension(), 0.0);
    for (const auto& tree : forest.trees)
        for (const auto& node : tree.nodes)
            if (!node.isLeaf())
                gain[static_cast<std::size_t>(node.feature)] += node.gain;

    double total = 0.0;
    for (double g : gain) total += g;
    std::vector<ImportanceEntry> ranking;
    if (total <= 0.0) return ranking;

    for (std::size_t col = 0; col < gain.size(); ++col)
        if (gain[col] > 0.0)
            ranking.push_back({featurizer.columnName(col), gain[col] / total});
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) {
                         return a.gain > b.gain;
                     });
    return ranking;
}

std::string scoresCsv(const ConfusionMatrix& cm, const Scores& s) {
    std::ostringstream out;
    out << "metric,value\n";
    out << "tp," << cm.tp << "\nfp," << cm.fp << "\nfn," << cm.fn << "\ntn," << cm.tn << '\n';
    out << "precision," << s.precision << '\n';
    out << "recall," << s.recall << '\n';
    out << "f1," << s.f1 << '\n';
    out << "mcc," << s.mcc << '\n';
    return out.str();
}

std::string importanceCsv(const std::vector<ImportanceEntry>& ranking) {
    std::ostringstream out;
    out << "feature,gain\n";
    for (const auto& entry : ranking)
        out << entry.name << ',' << entry.gain << '\n';
    return out.str();
}

} // namespace triage
