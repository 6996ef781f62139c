#include "triage/forest.hpp"
#include "triage/common.hpp"
#include "triage/rng.hpp"
#include "triage/split.hpp"
#include "triage/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace triage {

using nlohmann::json;

const char* toString(ClassWeight w) {
    return w == ClassWeight::Uniform ? "uniform" : "balanced";
}

std::ostream& operator<<(std::ostream& out, ClassWeight w) { return out << toString(w); }

std::optional<ClassWeight> parseClassWeight(const std::string& s) {
    if (s == "uniform") return ClassWeight::Uniform;
    if (s == "balanced") return ClassWeight::Balanced;
    return std::nullopt;
}

int MaxFeatures::count(std::size_t nFeatures) const {
    if (nFeatures == 0) return 1;
    auto d = static_cast<double>(nFeatures);
    double raw;
    switch (kind) {
    case Kind::Sqrt: raw = std::sqrt(d); break;
    case Kind::Log2: raw = std::log2(d); break;
    case Kind::All: raw = d; break;
    case Kind::Fraction: raw = fraction * d; break;
    default: raw = d; break;
    }
    auto k = static_cast<int>(raw);
    k = std::max(k, 1);
    return std::min(k, static_cast<int>(nFeatures));
}

std::string MaxFeatures::toString() const {
    switch (kind) {
    case Kind::Sqrt: return "sqrt";
    case Kind::Log2: return "log2";
    case Kind::All: return "all";
    case Kind::Fraction: {
        std::ostringstream out;
        out << fraction;
        return out.str();
    }
    }
    return "sqrt";
}

MaxFeatures MaxFeatures::parse(const std::string& s) {
    if (s == "sqrt") return {Kind::Sqrt, 1.0};
    if (s == "log2") return {Kind::Log2, 1.0};
    if (s == "all") return {Kind::All, 1.0};
    char* end = nullptr;
    double f = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !(f > 0.0 && f <= 1.0))
        throw UsageError("maxFeatures must be sqrt, log2, all, or a fraction in (0,1]: " + s);
    return {Kind::Fraction, f};
}

void ForestParams::validate() const {
    if (nTrees < 1) throw UsageError("nTrees must be >= 1");
    if (maxDepth < kUnlimitedDepth) throw UsageError("maxDepth must be -1 (unlimited) or >= 0");
    if (minSamplesSplit < 2) throw UsageError("minSamplesSplit must be >= 2");
    if (minSamplesLeaf < 1) throw UsageError("minSamplesLeaf must be >= 1");
    if (maxFeatures.kind == MaxFeatures::Kind::Fraction &&
        !(maxFeatures.fraction > 0.0 && maxFeatures.fraction <= 1.0))
        throw UsageError("maxFeatures fraction must lie in (0,1]");
}

double giniImpurity(double weight0, double weight1) {
    if (weight0 < 0.0 || weight1 < 0.0)
        throw std::invalid_argument("class weights must be non-negative");
    double total = weight0 + weight1;
    if (total <= 0.0)
        throw std::invalid_argument("gini impurity of an empty node is undefined");
    double p0 = weight0 / total;
    double p1 = weight1 / total;
    return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

struct GatherItem {
    double value;
    double weight;
    int label;
};

} // namespace

std::optional<Split> bestSplit(const FeatureMatrix& m, const std::vector<int>& labels,
                               const std::vector<double>& rowWeight,
                               const std::vector<std::size_t>& instances,
                               std::size_t lo, std::size_t hi,
                               const std::vector<std::uint32_t>& candidateFeatures,
                               int minSamplesLeaf) {
    std::size_t count = hi - lo;
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        std::size_t row = instances[i];
        (labels[row] == 1 ? w1 : w0) += rowWeight[row];
    }
    if (w0 <= 0.0 || w1 <= 0.0) return std::nullopt; // pure node

    double total = w0 + w1;
    double parent = giniImpurity(w0, w1) * total;
    auto minLeaf = static_cast<std::size_t>(minSamplesLeaf);

    Split best;
    double bestDecrease = -1.0; // zero-decrease splits are still acceptable
    std::vector<GatherItem> items;
    items.reserve(count);

    for (std::uint32_t f : candidateFeatures) {
        items.clear();
        for (std::size_t i = lo; i < hi; ++i) {
            std::size_t row = instances[i];
            items.push_back({m.at(row, f), rowWeight[row], labels[row]});
        }
        std::sort(items.begin(), items.end(),
                  [](const GatherItem& a, const GatherItem& b) { return a.value < b.value; });
        if (items.front().value == items.back().value) continue;

        double left0 = 0.0, left1 = 0.0;
        for (std::size_t i = 1; i < count; ++i) {
            const GatherItem& prev = items[i - 1];
            (prev.label == 1 ? left1 : left0) += prev.weight;
            if (prev.value == items[i].value) continue;
            if (i < minLeaf || count - i < minLeaf) continue;

            double right0 = w0 - left0;
            double right1 = w1 - left1;
            double leftTotal = left0 + left1;
            double rightTotal = right0 + right1;
            double children = giniImpurity(left0, left1) * leftTotal +
                              giniImpurity(right0, right1) * rightTotal;
            double decrease = parent - children;
            if (decrease > bestDecrease) {
                bestDecrease = decrease;
                best.feature = static_cast<int>(f);
                best.threshold = (prev.value + items[i].value) / 2.0;
                best.decrease = std::max(decrease, 0.0);
            }
        }
    }

    if (best.feature < 0) return std::nullopt;
    return best;
}

namespace {

// Draws k distinct feature indices. The scratch identity permutation is
// restored by undoing the swaps, keeping per-node cost O(k).
void drawFeatureSubset(std::vector<std::uint32_t>& scratch, int k, std::mt19937_64& rng,
                       std::vector<std::uint32_t>& out, std::vector<std::size_t>& undo) {
    auto d = scratch.size();
    out.clear();
    undo.clear();
    for (int i = 0; i < k; ++i) {
        auto j = static_cast<std::size_t>(i) +
                 static_cast<std::size_t>(uniformIndex(rng, d - static_cast<std::size_t>(i)));
        std::swap(scratch[static_cast<std::size_t>(i)], scratch[j]);
        undo.push_back(j);
        out.push_back(scratch[static_cast<std::size_t>(i)]);
    }
    for (int i = k - 1; i >= 0; --i)
        std::swap(scratch[static_cast<std::size_t>(i)], scratch[undo[static_cast<std::size_t>(i)]]);
    std::sort(out.begin(), out.end());
}

struct PendingNode {
    std::int32_t node;
    std::size_t lo;
    std::size_t hi;
    int depth;
};

} // namespace

DecisionTree growTree(const FeatureMatrix& m, const std::vector<int>& labels,
                      const std::vector<double>& rowWeight,
                      std::vector<std::size_t> instances, const ForestParams& params,
                      std::mt19937_64& rng) {
    DecisionTree tree;
    if (instances.empty()) throw DataError("cannot grow a tree without samples");

    std::vector<std::uint32_t> scratch(m.cols);
    std::iota(scratch.begin(), scratch.end(), 0u);
    int k = params.maxFeatures.count(m.cols);
    std::vector<std::uint32_t> candidates;
    std::vector<std::size_t> undo;

    tree.nodes.emplace_back();
    std::vector<PendingNode> stack{{0, 0, instances.size(), 0}};

    while (!stack.empty()) {
        PendingNode item = stack.back();
        stack.pop_back();

        double w0 = 0.0, w1 = 0.0;
        for (std::size_t i = item.lo; i < item.hi; ++i) {
            std::size_t row = instances[i];
            (labels[row] == 1 ? w1 : w0) += rowWeight[row];
        }
        TreeNode& node = tree.nodes[static_cast<std::size_t>(item.node)];
        node.weight = w0 + w1;
        node.pFalseAlert = w0 / node.weight;
        node.pLegitimate = w1 / node.weight;

        std::size_t count = item.hi - item.lo;
        bool pure = w0 <= 0.0 || w1 <= 0.0;
        bool depthCapped = params.maxDepth != kUnlimitedDepth && item.depth >= params.maxDepth;
        if (pure || depthCapped || count < static_cast<std::size_t>(params.minSamplesSplit))
            continue; // leaf

        drawFeatureSubset(scratch, k, rng, candidates, undo);
        auto split = bestSplit(m, labels, rowWeight, instances, item.lo, item.hi, candidates,
                               params.minSamplesLeaf);
        if (!split) continue;

        auto pivot = std::partition(
            instances.begin() + static_cast<std::ptrdiff_t>(item.lo),
            instances.begin() + static_cast<std::ptrdiff_t>(item.hi),
            [&](std::size_t row) {
                return m.at(row, static_cast<std::size_t>(split->feature)) <= split->threshold;
            });
        auto mid = static_cast<std::size_t>(pivot - instances.begin());

        // Re-fetch: emplace_back below may reallocate the node vector.
        auto leftIndex = static_cast<std::int32_t>(tree.nodes.size());
        auto rightIndex = leftIndex + 1;
        {
            TreeNode& parent = tree.nodes[static_cast<std::size_t>(item.node)];
            parent.feature = split->feature;
            parent.threshold = split->threshold;
            parent.gain = split->decrease;
            parent.left = leftIndex;
            parent.right = rightIndex;
        }
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stack.push_back({rightIndex, mid, item.hi, item.depth + 1});
        stack.push_back({leftIndex, item.lo, mid, item.depth + 1});
    }
    return tree;
}

namespace {

// Dense scratch walk: scatter the row, descend every tree, then zero only
// the touched columns.
double forestMeanOnScratch(const RandomForest& forest, const std::vector<double>& scratch) {
    double sum = 0.0;
    for (const auto& tree : forest.trees) {
        const TreeNode* node = &tree.nodes[0];
        while (!node->isLeaf()) {
            double v = scratch[static_cast<std::size_t>(node->feature)];
            node = &tree.nodes[static_cast<std::size_t>(v <= node->threshold ? node->left
                                                                             : node->right)];
        }
        sum += node->pLegitimate;
    }
    return sum / static_cast<double>(forest.trees.size());
}

std::vector<double> rowWeights(const std::vector<int>& labels, ClassWeight cw) {
    std::vector<double> weights(labels.size(), 1.0);
    if (cw == ClassWeight::Balanced) {
        double counts[2] = {0.0, 0.0};
        for (int l : labels) counts[l == 1 ? 1 : 0] += 1.0;
        auto n = static_cast<double>(labels.size());
        double w[2];
        for (int c = 0; c < 2; ++c)
            w[c] = counts[c] > 0.0 ? n / (2.0 * counts[c]) : 1.0;
        for (std::size_t i = 0; i < labels.size(); ++i)
            weights[i] = w[labels[i] == 1 ? 1 : 0];
    }
    return weights;
}

DecisionTree fitOneTree(const FeatureMatrix& m, const std::vector<int>& labels,
                        const std::vector<double>& weights, const ForestParams& params,
                        std::size_t treeIndex) {
    auto rng = substream(params.seed, treeIndex);
    std::vector<std::size_t> instances;
    instances.reserve(m.rows);
    if (params.bootstrap) {
        for (std::size_t i = 0; i < m.rows; ++i)
            instances.push_back(static_cast<std::size_t>(uniformIndex(rng, m.rows)));
    } else {
        instances.resize(m.rows);
        std::iota(instances.begin(), instances.end(), std::size_t{0});
    }
    return growTree(m, labels, weights, std::move(instances), params, rng);
}

RandomForest fitForestImpl(const FeatureMatrix& m, const std::vector<int>& labels,
                           const ForestParams& params, bool parallel) {
    params.validate();
    if (m.rows == 0 || labels.empty()) throw DataError("cannot fit a forest on an empty training set");
    if (m.rows != labels.size()) throw DataError("matrix rows and labels differ in length");

    RandomForest forest;
    forest.params = params;
    forest.nFeatures = static_cast<std::uint32_t>(m.cols);
    forest.trees.resize(static_cast<std::size_t>(params.nTrees));
    auto weights = rowWeights(labels, params.classWeight);

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(params.nTrees); ++t)
            forest.trees[static_cast<std::size_t>(t)] =
                fitOneTree(m, labels, weights, params, static_cast<std::size_t>(t));
    } else {
        for (std::size_t t = 0; t < static_cast<std::size_t>(params.nTrees); ++t)
            forest.trees[t] = fitOneTree(m, labels, weights, params, t);
    }
    return forest;
}

} // namespace

RandomForest fitForest(const FeatureMatrix& m, const std::vector<int>& labels,
                       const ForestParams& params) {
    return fitForestImpl(m, labels, params, true);
}

RandomForest fitForestSerial(const FeatureMatrix& m, const std::vector<int>& labels,
                             const ForestParams& params) {
    return fitForestImpl(m, labels, params, false);
}

double DecisionTree::leafLegitimateFraction(const FeatureVector& fv) const {
    const TreeNode* node = &nodes[0];
    while (!node->isLeaf()) {
        double v = fv.at(static_cast<std::size_t>(node->feature));
        node = &nodes[static_cast<std::size_t>(v <= node->threshold ? node->left : node->right)];
    }
    return node->pLegitimate;
}

double DecisionTree::leafLegitimateFraction(const FeatureMatrix& m, std::size_t row) const {
    const TreeNode* node = &nodes[0];
    while (!node->isLeaf()) {
        double v = m.at(row, static_cast<std::size_t>(node->feature));
        node = &nodes[static_cast<std::size_t>(v <= node->threshold ? node->left : node->right)];
    }
    return node->pLegitimate;
}

int DecisionTree::depth() const {
    // Iterative: depth of node i derived from its parent's depth.
    std::vector<int> depths(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const TreeNode& node = nodes[i];
        deepest = std::max(deepest, depths[i]);
        if (!node.isLeaf()) {
            depths[static_cast<std::size_t>(node.left)] = depths[i] + 1;
            depths[static_cast<std::size_t>(node.right)] = depths[i] + 1;
        }
    }
    return deepest;
}

double predictProba(const RandomForest& forest, const FeatureVector& fv) {
    if (fv.dimension != forest.nFeatures)
        throw DataError("feature vector dimension does not match the trained model");
    if (forest.trees.empty()) throw DataError("model holds no trees");
    double sum = 0.0;
    for (const auto& tree : forest.trees)
        sum += tree.leafLegitimateFraction(fv);
    return sum / static_cast<double>(forest.trees.size());
}

namespace {

std::vector<double> predictBatchImpl(const RandomForest& forest, const FeatureMatrix& m,
                                     bool parallel) {
    if (m.cols != forest.nFeatures)
        throw DataError("feature matrix width does not match the trained model");
    if (forest.trees.empty()) throw DataError("model holds no trees");
    std::vector<double> probs(m.rows, 0.0);

    auto runRange = [&](std::size_t beginRow, std::size_t endRow, std::vector<double>& scratch) {
        for (std::size_t row = beginRow; row < endRow; ++row) {
            for (std::size_t i = m.rowPtr[row]; i < m.rowPtr[row + 1]; ++i)
                scratch[m.colIndex[i]] = m.value[i];
            probs[row] = forestMeanOnScratch(forest, scratch);
            for (std::size_t i = m.rowPtr[row]; i < m.rowPtr[row + 1]; ++i)
                scratch[m.colIndex[i]] = 0.0;
        }
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<double> scratch(m.cols, 0.0);
#pragma omp for schedule(static)
            for (std::ptrdiff_t row = 0; row < static_cast<std::ptrdiff_t>(m.rows); ++row)
                runRange(static_cast<std::size_t>(row), static_cast<std::size_t>(row) + 1, scratch);
        }
        return probs;
#endif
    }
    std::vector<double> scratch(m.cols, 0.0);
    runRange(0, m.rows, scratch);
    return probs;
}

} // namespace

std::vector<double> predictBatch(const RandomForest& forest, const FeatureMatrix& m) {
    return predictBatchImpl(forest, m, true);
}

std::vector<double> predictBatchSerial(const RandomForest& forest, const FeatureMatrix& m) {
    return predictBatchImpl(forest, m, false);
}

CalibrationResult calibrateThreshold(const std::vector<double>& probs,
                                     const std::vector<int>& labels) {
    CalibrationResult result;
    result.curve = prCurve(probs, labels); // validates inputs and class presence
    result.threshold = 0.0;
    result.bestF1 = -1.0;
    for (const PrPoint& p : result.curve) {
        double pr = p.precision + p.recall;
        double f1 = pr > 0.0 ? 2.0 * p.precision * p.recall / pr : 0.0;
        if (f1 >= result.bestF1) { // ties keep the highest threshold
            result.bestF1 = f1;
            result.threshold = p.threshold;
        }
    }
    return result;
}

SearchResult randomSearch(const FeatureMatrix& m, const std::vector<int>& labels,
                          const SearchSpace& space, int nIter, int k, std::uint64_t seed) {
    if (nIter < 1) throw UsageError("random search needs nIter >= 1");
    if (space.nTrees.empty() || space.maxDepth.empty() || space.minSamplesSplit.empty() ||
        space.minSamplesLeaf.empty() || space.maxFeatures.empty() || space.classWeight.empty())
        throw UsageError("search space has an empty dimension");

    auto folds = stratifiedKFoldIndices(labels, k, mix64(seed ^ 0xf01d5ULL));

    struct FoldData {
        FeatureMatrix train, val;
        std::vector<int> trainLabels, valLabels;
        bool valid = true;
    };
    std::vector<FoldData> foldData(folds.size());
    for (std::size_t j = 0; j < folds.size(); ++j) {
        std::vector<std::size_t> trainIdx;
        trainIdx.reserve(labels.size() - folds[j].size());
        for (std::size_t other = 0; other < folds.size(); ++other)
            if (other != j)
                trainIdx.insert(trainIdx.end(), folds[other].begin(), folds[other].end());
        std::sort(trainIdx.begin(), trainIdx.end());

        FoldData& fd = foldData[j];
        fd.train = m.selectRows(trainIdx);
        fd.val = m.selectRows(folds[j]);
        for (std::size_t idx : trainIdx) fd.trainLabels.push_back(labels[idx]);
        for (std::size_t idx : folds[j]) fd.valLabels.push_back(labels[idx]);

        auto bothClasses = [](const std::vector<int>& ls) {
            bool has0 = false, has1 = false;
            for (int l : ls) (l == 1 ? has1 : has0) = true;
            return has0 && has1;
        };
        fd.valid = bothClasses(fd.trainLabels) && bothClasses(fd.valLabels);
    }

    auto rng = substream(seed, 0);
    auto pick = [&rng](const auto& options) {
        return options[static_cast<std::size_t>(uniformIndex(rng, options.size()))];
    };

    SearchResult result;
    result.report.folds = k;
    result.report.seed = seed;
    double bestScore = -2.0; // below any reachable MCC

    for (int i = 0; i < nIter; ++i) {
        CvCandidate candidate;
        candidate.params.nTrees = pick(space.nTrees);
        candidate.params.maxDepth = pick(space.maxDepth);
        candidate.params.minSamplesSplit = pick(space.minSamplesSplit);
        candidate.params.minSamplesLeaf = pick(space.minSamplesLeaf);
        candidate.params.maxFeatures = pick(space.maxFeatures);
        candidate.params.classWeight = pick(space.classWeight);
        candidate.params.bootstrap = space.bootstrap;

        double sum = 0.0;
        std::size_t scored = 0;
        for (std::size_t j = 0; j < foldData.size(); ++j) {
            if (!foldData[j].valid) {
                candidate.valid = false;
                candidate.note = "fold " + std::to_string(j) + " is missing a class";
                break;
            }
            ForestParams foldParams = candidate.params;
            foldParams.seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(i) * 1000003ULL +
                                                 static_cast<std::uint64_t>(j) + 1));
            RandomForest forest = fitForest(foldData[j].train, foldData[j].trainLabels, foldParams);
            auto probs = predictBatch(forest, foldData[j].val);
            std::vector<int> preds(probs.size());
            for (std::size_t p = 0; p < probs.size(); ++p)
                preds[p] = probs[p] >= 0.5 ? 1 : 0;
            double mcc = classificationScores(confusion(foldData[j].valLabels, preds)).mcc;
            candidate.foldScores.push_back(mcc);
            sum += mcc;
            ++scored;
        }
        if (candidate.valid && scored > 0)
            candidate.meanScore = sum / static_cast<double>(scored);

        if (candidate.valid && candidate.meanScore > bestScore) {
            bestScore = candidate.meanScore;
            result.report.bestIndex = i;
            result.best = candidate.params;
        }
        result.report.candidates.push_back(std::move(candidate));
    }

    if (result.report.bestIndex < 0)
        throw DataError("random search found no valid candidate");
    return result;
}

namespace {

json paramsJson(const ForestParams& p) {
    json j;
    j["nTrees"] = p.nTrees;
    j["maxDepth"] = p.maxDepth;
    j["minSamplesSplit"] = p.minSamplesSplit;
    j["minSamplesLeaf"] = p.minSamplesLeaf;
    j["maxFeatures"] = p.maxFeatures.toString();
    j["classWeight"] = toString(p.classWeight);
    j["bootstrap"] = p.bootstrap;
    j["seed"] = p.seed;
    return j;
}

ForestParams paramsFromJson(const json& j) {
    ForestParams p;
    p.nTrees = j.at("nTrees").get<int>();
    p.maxDepth = j.at("maxDepth").get<int>();
    p.minSamplesSplit = j.at("minSamplesSplit").get<int>();
    p.minSamplesLeaf = j.at("minSamplesLeaf").get<int>();
    p.maxFeatures = MaxFeatures::parse(j.at("maxFeatures").get<std::string>());
    auto cw = parseClassWeight(j.at("classWeight").get<std::string>());
    if (!cw) throw DataError("model file has an unknown classWeight");
    p.classWeight = *cw;
    p.bootstrap = j.at("bootstrap").get<bool>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

} // namespace

std::string serializeModel(const RandomForest& forest) {
    json j;
    j["format"] = kModelFormat;
    j["params"] = paramsJson(forest.params);
    j["threshold"] = forest.threshold;
    j["featurizerHash"] = forest.featurizerHash;
    j["nFeatures"] = forest.nFeatures;
    json trees = json::array();
    for (const auto& tree : forest.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes)
            nodes.push_back(json::array({n.feature, n.threshold, n.gain, n.weight, n.pFalseAlert,
                                         n.pLegitimate, n.left, n.right}));
        trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
    return j.dump();
}

RandomForest deserializeModel(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw DataError("model file is not valid JSON");
    if (!j.contains("format") || j["format"] != kModelFormat)
        throw DataError("model file has an unsupported format tag");

    RandomForest forest;
    forest.params = paramsFromJson(j.at("params"));
    forest.threshold = j.at("threshold").get<double>();
    forest.featurizerHash = j.at("featurizerHash").get<std::uint64_t>();
    forest.nFeatures = j.at("nFeatures").get<std::uint32_t>();
    for (const json& nodes : j.at("trees")) {
        DecisionTree tree;
        for (const json& n : nodes) {
            if (!n.is_array() || n.size() != 8)
                throw DataError("model file has a malformed tree node");
            TreeNode node;
            node.feature = n[0].get<std::int32_t>();
            node.threshold = n[1].get<double>();
            node.gain = n[2].get<double>();
            node.weight = n[3].get<double>();
            node.pFalseAlert = n[4].get<double>();
            node.pLegitimate = n[5].get<double>();
            node.left = n[6].get<std::int32_t>();
            node.right = n[7].get<std::int32_t>();
            tree.nodes.push_back(node);
        }
        if (tree.nodes.empty()) throw DataError("model file holds an empty tree");
        forest.trees.push_back(std::move(tree));
    }
    if (forest.trees.empty()) throw DataError("model file holds no trees");
    return forest;
}

void saveModel(const std::string& path, const RandomForest& forest) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << serializeModel(forest) << '\n';
}

RandomForest loadModel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read model file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserializeModel(buffer.str());
}

} // namespace triage
