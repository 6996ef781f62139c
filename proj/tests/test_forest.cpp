#include "doctest.h"
#include "triage/common.hpp"
#include "triage/featurizer.hpp"
#include "triage/forest.hpp"
#include "triage/rng.hpp"

#include <cmath>
#include <numeric>

using namespace triage;

namespace {

// Dense row-major data to a CSR matrix (zeros kept implicit).
FeatureMatrix denseMatrix(const std::vector<std::vector<double>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    std::vector<FeatureVector> vs;
    for (const auto& row : rows) {
        FeatureVector fv;
        fv.dimension = cols;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c] != 0.0) {
                fv.index.push_back(static_cast<std::uint32_t>(c));
                fv.value.push_back(row[c]);
            }
        }
        vs.push_back(std::move(fv));
    }
    return FeatureMatrix::fromVectors(vs);
}

std::vector<std::uint32_t> allFeatures(std::size_t cols) {
    std::vector<std::uint32_t> fs(cols);
    std::iota(fs.begin(), fs.end(), 0);
    return fs;
}

// Exhaustive stump oracle: every feature, every midpoint between consecutive
// distinct values, weighted Gini decrease, ties to lowest feature then lowest
// threshold. Written against the declared rule, not the library internals.
struct OracleStump {
    int feature = -1;
    double threshold = 0.0;
    double decrease = -1.0;
};

double oracleGini(double w0, double w1) {
    double total = w0 + w1;
    if (total <= 0.0) return 0.0;
    double p0 = w0 / total, p1 = w1 / total;
    return 1.0 - p0 * p0 - p1 * p1;
}

OracleStump oracleBestStump(const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& labels,
                            const std::vector<double>& weight, int minLeaf) {
    OracleStump best;
    std::size_t cols = rows[0].size();
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        (labels[i] ? w1 : w0) += weight[i];
    if (w0 == 0.0 || w1 == 0.0) return best;
    double parent = (w0 + w1) * oracleGini(w0, w1);

    for (std::size_t f = 0; f < cols; ++f) {
        std::vector<double> values;
        for (const auto& r : rows) values.push_back(r[f]);
        auto sorted = values;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t v = 1; v < sorted.size(); ++v) {
            double thr = sorted[v - 1] + (sorted[v] - sorted[v - 1]) / 2.0;
            double l0 = 0.0, l1 = 0.0;
            int leftCount = 0, rightCount = 0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][f] <= thr) {
                    (labels[i] ? l1 : l0) += weight[i];
                    ++leftCount;
                } else {
                    ++rightCount;
                }
            }
            if (leftCount < minLeaf || rightCount < minLeaf) continue;
            double r0 = w0 - l0, r1 = w1 - l1;
            double decrease = parent - (l0 + l1) * oracleGini(l0, l1) -
                              (r0 + r1) * oracleGini(r0, r1);
            if (decrease > best.decrease + 1e-15) {
                best.feature = static_cast<int>(f);
                best.threshold = thr;
                best.decrease = decrease;
            }
        }
    }
    return best;
}

RandomForest leafForest(const std::vector<double>& legitFractions) {
    RandomForest forest;
    forest.nFeatures = 4;
    for (double p : legitFractions) {
        DecisionTree tree;
        TreeNode leaf;
        leaf.feature = -1;
        leaf.weight = 1.0;
        leaf.pLegitimate = p;
        leaf.pFalseAlert = 1.0 - p;
        tree.nodes.push_back(leaf);
        forest.trees.push_back(tree);
    }
    forest.params.nTrees = static_cast<int>(forest.trees.size());
    return forest;
}

} // namespace

TEST_SUITE("forest") {

TEST_CASE("gini impurity basics") {
    CHECK(giniImpurity(10, 0) == 0.0);
    CHECK(giniImpurity(5, 5) == 0.5);
    CHECK(giniImpurity(3, 1) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK_THROWS(giniImpurity(0, 0));
    CHECK_THROWS(giniImpurity(-1, 2));
}

TEST_CASE("maxFeatures rules compute candidate counts") {
    CHECK(MaxFeatures{MaxFeatures::Kind::Sqrt, 0.0}.count(16) == 4);
    CHECK(MaxFeatures{MaxFeatures::Kind::Log2, 0.0}.count(16) == 4);
    CHECK(MaxFeatures{MaxFeatures::Kind::All, 0.0}.count(16) == 16);
    CHECK(MaxFeatures{MaxFeatures::Kind::Fraction, 0.3}.count(10) == 3);
    CHECK(MaxFeatures{MaxFeatures::Kind::Fraction, 0.01}.count(10) == 1); // floor clamps up
    CHECK(MaxFeatures::parse("sqrt").kind == MaxFeatures::Kind::Sqrt);
    CHECK(MaxFeatures::parse("0.3").fraction == doctest::Approx(0.3));
    CHECK_THROWS_AS(MaxFeatures::parse("bogus"), UsageError);
    CHECK_THROWS_AS(MaxFeatures::parse("1.5"), UsageError);
}

TEST_CASE("param validation rejects out-of-range settings") {
    ForestParams p;
    p.nTrees = 0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = ForestParams{};
    p.minSamplesSplit = 1;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = ForestParams{};
    p.minSamplesLeaf = 0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = ForestParams{};
    p.maxDepth = -2;
    CHECK_THROWS_AS(p.validate(), UsageError);
    ForestParams ok;
    ok.maxDepth = 0;
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("best split finds the textbook midpoint") {
    auto m = denseMatrix({{1}, {2}, {3}, {4}});
    std::vector<int> labels{0, 0, 1, 1};
    std::vector<double> weight(4, 1.0);
    std::vector<std::size_t> instances{0, 1, 2, 3};
    auto split = bestSplit(m, labels, weight, instances, 0, 4, allFeatures(1), 1);
    REQUIRE(split.has_value());
    CHECK(split->feature == 0);
    CHECK(split->threshold == doctest::Approx(2.5));
    // decrease is weighted by node mass: 4 * 0.5 for pure children
    CHECK(split->decrease == doctest::Approx(2.0));
}

TEST_CASE("pure nodes and constant features yield no split") {
    auto m = denseMatrix({{1}, {2}, {3}});
    std::vector<double> weight(3, 1.0);
    std::vector<std::size_t> instances{0, 1, 2};
    CHECK_FALSE(bestSplit(m, {1, 1, 1}, weight, instances, 0, 3, allFeatures(1), 1).has_value());

    auto constant = denseMatrix({{7}, {7}, {7}, {7}});
    std::vector<double> w4(4, 1.0);
    std::vector<std::size_t> i4{0, 1, 2, 3};
    CHECK_FALSE(bestSplit(constant, {0, 1, 0, 1}, w4, i4, 0, 4, allFeatures(1), 1).has_value());
}

TEST_CASE("equal-gain features tie to the lower index") {
    // Both columns carry the same values, so gains are identical.
    auto m = denseMatrix({{1, 1}, {2, 2}, {3, 3}, {4, 4}});
    std::vector<int> labels{0, 0, 1, 1};
    std::vector<double> weight(4, 1.0);
    std::vector<std::size_t> instances{0, 1, 2, 3};
    auto split = bestSplit(m, labels, weight, instances, 0, 4, allFeatures(2), 1);
    REQUIRE(split.has_value());
    CHECK(split->feature == 0);
}

TEST_CASE("minSamplesLeaf rules out lopsided cuts") {
    auto m = denseMatrix({{1}, {2}, {3}, {4}});
    std::vector<int> labels{1, 0, 0, 0};
    std::vector<double> weight(4, 1.0);
    std::vector<std::size_t> instances{0, 1, 2, 3};
    // The only impurity-reducing cut is 1|234; minLeaf 2 forbids it, and the
    // remaining cuts have strictly worse children, but zero-decrease splits
    // are still legal on impure nodes.
    auto split = bestSplit(m, labels, weight, instances, 0, 4, allFeatures(1), 2);
    REQUIRE(split.has_value());
    CHECK(split->threshold == doctest::Approx(2.5));
    auto none = bestSplit(m, labels, weight, instances, 0, 4, allFeatures(1), 3);
    CHECK_FALSE(none.has_value());
}

TEST_CASE("grow tree handles pure, capped, and xor-shaped data") {
    std::vector<double> weight(4, 1.0);
    ForestParams params;
    params.maxFeatures = MaxFeatures{MaxFeatures::Kind::All, 0.0};
    params.bootstrap = false;
    auto rng = substream(1, 0);

    auto pure = denseMatrix({{1}, {2}, {3}, {4}});
    auto pureTree = growTree(pure, {1, 1, 1, 1}, weight, {0, 1, 2, 3}, params, rng);
    REQUIRE(pureTree.nodes.size() == 1);
    CHECK(pureTree.nodes[0].isLeaf());
    CHECK(pureTree.nodes[0].pLegitimate == 1.0);

    auto xorData = denseMatrix({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    std::vector<int> xorLabels{0, 1, 1, 0};
    auto xorTree = growTree(xorData, xorLabels, weight, {0, 1, 2, 3}, params, rng);
    for (std::size_t i = 0; i < 4; ++i) {
        double p = xorTree.leafLegitimateFraction(xorData, i);
        CHECK((xorLabels[i] ? p == 1.0 : p == 0.0));
    }
    CHECK(xorTree.depth() >= 2);

    ForestParams stumpless = params;
    stumpless.maxDepth = 0;
    auto leaf = growTree(xorData, xorLabels, weight, {0, 1, 2, 3}, stumpless, rng);
    REQUIRE(leaf.nodes.size() == 1);
    CHECK(leaf.nodes[0].pLegitimate == doctest::Approx(0.5));
}

TEST_CASE("a one-tree unbootstrapped forest is exactly one grown tree") {
    auto m = denseMatrix({{1, 5}, {2, 1}, {3, 8}, {4, 2}, {5, 9}, {6, 3}});
    std::vector<int> labels{0, 0, 0, 1, 1, 1};
    ForestParams params;
    params.nTrees = 1;
    params.bootstrap = false;
    params.maxFeatures = MaxFeatures{MaxFeatures::Kind::All, 0.0};
    params.seed = 123;
    auto forest = fitForest(m, labels, params);
    REQUIRE(forest.trees.size() == 1);

    std::vector<double> weight(labels.size(), 1.0);
    std::vector<std::size_t> instances{0, 1, 2, 3, 4, 5};
    auto rng = substream(params.seed, 0);
    auto tree = growTree(m, labels, weight, instances, params, rng);
    REQUIRE(forest.trees[0].nodes.size() == tree.nodes.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        CHECK(forest.trees[0].nodes[i].feature == tree.nodes[i].feature);
        CHECK(forest.trees[0].nodes[i].threshold == tree.nodes[i].threshold);
        CHECK(forest.trees[0].nodes[i].left == tree.nodes[i].left);
        CHECK(forest.trees[0].nodes[i].pLegitimate == tree.nodes[i].pLegitimate);
    }
}

TEST_CASE("training twice with one seed gives identical bytes") {
    auto rng = substream(555, 0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 80; ++i) {
        rows.push_back({uniformReal(rng), uniformReal(rng), uniformReal(rng)});
        labels.push_back(static_cast<int>(uniformIndex(rng, 2)));
    }
    auto m = denseMatrix(rows);
    ForestParams params;
    params.nTrees = 12;
    params.seed = 99;
    params.classWeight = ClassWeight::Balanced;
    CHECK(serializeModel(fitForest(m, labels, params)) ==
          serializeModel(fitForest(m, labels, params)));
}

TEST_CASE("balanced weights flip the majority at skewed nodes") {
    // 6 false alerts at low values, 2 legitimate at high values, one shared
    // mid value; balanced weighting makes each class worth the same total.
    auto m = denseMatrix({{1}, {1}, {1}, {1}, {1}, {1}, {9}, {9}});
    std::vector<int> labels{0, 0, 0, 0, 0, 0, 1, 1};
    ForestParams params;
    params.nTrees = 1;
    params.bootstrap = false;
    params.maxDepth = 0;
    params.classWeight = ClassWeight::Balanced;
    auto forest = fitForest(m, labels, params);
    REQUIRE(forest.trees[0].nodes.size() == 1);
    // Balanced: class weights n/(2 c). Weighted mass is equal, fraction 0.5.
    CHECK(forest.trees[0].nodes[0].pLegitimate == doctest::Approx(0.5));

    ForestParams uniform = params;
    uniform.classWeight = ClassWeight::Uniform;
    auto plain = fitForest(m, labels, uniform);
    CHECK(plain.trees[0].nodes[0].pLegitimate == doctest::Approx(0.25));
}

TEST_CASE("predict proba averages leaf fractions") {
    auto forest = leafForest({1.0, 0.5, 0.0});
    FeatureVector fv;
    fv.dimension = 4;
    CHECK(predictProba(forest, fv) == doctest::Approx(0.5));

    auto pure = leafForest({1.0, 1.0});
    CHECK(predictProba(pure, fv) == 1.0);

    auto single = leafForest({0.73});
    CHECK(predictProba(single, fv) == doctest::Approx(0.73));

    FeatureVector wrong;
    wrong.dimension = 9;
    CHECK_THROWS_AS(predictProba(forest, wrong), DataError);
}

TEST_CASE("probabilities stay in range and thresholding is monotone") {
    auto rng = substream(808, 0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 120; ++i) {
        rows.push_back({uniformReal(rng), uniformReal(rng)});
        labels.push_back(static_cast<int>(uniformIndex(rng, 2)));
    }
    auto m = denseMatrix(rows);
    ForestParams params;
    params.nTrees = 15;
    params.seed = 5;
    auto forest = fitForest(m, labels, params);
    auto probs = predictBatch(forest, m);
    for (auto p : probs) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    std::size_t previous = probs.size() + 1;
    for (double t : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        std::size_t positives = 0;
        for (auto p : probs) positives += p >= t ? 1 : 0;
        CHECK(positives <= previous);
        previous = positives;
    }
}

TEST_CASE("depth-1 trees match the exhaustive best stump on 100 random sets") {
    auto rng = substream(20250101, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 5 + uniformIndex(rng, 196);
        std::size_t d = 1 + uniformIndex(rng, 20);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row;
            for (std::size_t c = 0; c < d; ++c)
                row.push_back(static_cast<double>(uniformIndex(rng, 8)));
            rows.push_back(row);
            labels.push_back(static_cast<int>(uniformIndex(rng, 2)));
        }
        if (!std::count(labels.begin(), labels.end(), 1) ||
            !std::count(labels.begin(), labels.end(), 0))
            continue;

        auto m = denseMatrix(rows);
        std::vector<double> weight(n, 1.0);
        std::vector<std::size_t> instances(n);
        std::iota(instances.begin(), instances.end(), 0);
        auto split = bestSplit(m, labels, weight, instances, 0, n, allFeatures(d), 1);
        auto oracle = oracleBestStump(rows, labels, weight, 1);

        if (oracle.feature < 0) {
            if (split.has_value()) CHECK(split->decrease == doctest::Approx(0.0).epsilon(1e-12));
            continue;
        }
        REQUIRE(split.has_value());
        CHECK(split->decrease == doctest::Approx(oracle.decrease).epsilon(1e-9));
        // Equal decrease may hide distinct but tied optima; the tie rule picks
        // the oracle's pair because both scans go lowest feature, lowest cut.
        CHECK(split->feature == oracle.feature);
        CHECK(split->threshold == doctest::Approx(oracle.threshold).epsilon(1e-12));
    }
}

TEST_CASE("calibration maximizes F1 with ties to the highest threshold") {
    auto r = calibrateThreshold({0.9, 0.8, 0.2}, {1, 1, 0});
    CHECK(r.threshold == doctest::Approx(0.5));
    CHECK(r.bestF1 == doctest::Approx(1.0));
    REQUIRE_FALSE(r.curve.empty());

    auto inverted = calibrateThreshold({0.1, 0.2, 0.9}, {1, 1, 0});
    CHECK(inverted.bestF1 < 1.0);

    auto flat = calibrateThreshold({0.7, 0.7, 0.7}, {1, 0, 1});
    CHECK(flat.threshold == 0.0);
    CHECK(flat.bestF1 == doctest::Approx(2.0 * 2.0 / (2.0 + 1.0 + 2.0)));

    CHECK_THROWS_AS(calibrateThreshold({0.5, 0.6}, {1, 1}), DataError);
}

TEST_CASE("calibration equals an exhaustive scan on 500 random sets") {
    auto rng = substream(616, 0);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t n = 2 + uniformIndex(rng, 40);
        std::vector<double> probs;
        std::vector<int> labels;
        for (std::size_t i = 0; i < n; ++i) {
            probs.push_back(uniformIndex(rng, 10) / 10.0); // repeats force ties
            labels.push_back(static_cast<int>(uniformIndex(rng, 2)));
        }
        if (!std::count(labels.begin(), labels.end(), 1) ||
            !std::count(labels.begin(), labels.end(), 0))
            continue;

        // Candidates per the declared rule.
        auto sorted = probs;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<double> candidates{0.0, 1.0};
        for (std::size_t i = 1; i < sorted.size(); ++i)
            candidates.push_back(sorted[i - 1] + (sorted[i] - sorted[i - 1]) / 2.0);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        double bestF1 = -1.0, bestThr = 0.0;
        for (double t : candidates) {
            double tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                bool positive = probs[i] >= t;
                if (positive && labels[i]) ++tp;
                else if (positive) ++fp;
                else if (labels[i]) ++fn;
            }
            double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
            double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
            double f1 = precision + recall > 0
                            ? 2 * precision * recall / (precision + recall)
                            : 0.0;
            if (f1 >= bestF1) {
                bestF1 = f1;
                bestThr = t;
            }
        }

        auto got = calibrateThreshold(probs, labels);
        CHECK(got.bestF1 == doctest::Approx(bestF1).epsilon(1e-12));
        CHECK(got.threshold == doctest::Approx(bestThr).epsilon(1e-12));
    }
}

TEST_CASE("random search picks the stronger of two settings") {
    // Separable data; depth-0 stumps predict a constant and score MCC 0.
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 60; ++i) {
        rows.push_back({i < 30 ? 1.0 + 0.01 * i : 5.0 + 0.01 * i});
        labels.push_back(i < 30 ? 0 : 1);
    }
    auto m = denseMatrix(rows);
    SearchSpace space;
    space.nTrees = {5};
    space.maxDepth = {0, 8};
    space.minSamplesSplit = {2};
    space.minSamplesLeaf = {1};
    space.maxFeatures = {MaxFeatures{MaxFeatures::Kind::All, 0.0}};
    space.classWeight = {ClassWeight::Uniform};

    auto result = randomSearch(m, labels, space, 10, 5, 77);
    CHECK(result.best.maxDepth == 8);
    CHECK(result.report.candidates.size() == 10);
    CHECK(result.report.bestIndex >= 0);

    auto rerun = randomSearch(m, labels, space, 10, 5, 77);
    CHECK(rerun.best.maxDepth == result.best.maxDepth);
    REQUIRE(rerun.report.candidates.size() == result.report.candidates.size());
    for (std::size_t i = 0; i < rerun.report.candidates.size(); ++i)
        CHECK(rerun.report.candidates[i].meanScore ==
              result.report.candidates[i].meanScore);

    auto single = randomSearch(m, labels, space, 1, 5, 3);
    CHECK(single.report.candidates.size() == 1);
    CHECK(single.report.bestIndex == 0);
}

TEST_CASE("random search validates its inputs") {
    auto m = denseMatrix({{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}, {10}});
    std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    SearchSpace space;
    CHECK_THROWS_AS(randomSearch(m, labels, space, 0, 5, 1), UsageError);
    SearchSpace empty;
    empty.nTrees.clear();
    CHECK_THROWS_AS(randomSearch(m, labels, empty, 1, 5, 1), UsageError);
    std::vector<int> tiny{0, 0, 0, 0, 0, 0, 0, 0, 1, 1};
    CHECK_THROWS_AS(randomSearch(m, tiny, space, 1, 5, 1), DataError);
}

TEST_CASE("models serialize, reload, and refuse foreign formats") {
    auto rng = substream(8181, 0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 50; ++i) {
        rows.push_back({uniformReal(rng), uniformReal(rng)});
        labels.push_back(static_cast<int>(uniformIndex(rng, 2)));
    }
    auto m = denseMatrix(rows);
    ForestParams params;
    params.nTrees = 7;
    params.seed = 2;
    auto forest = fitForest(m, labels, params);
    forest.threshold = 0.42;
    forest.featurizerHash = 0xabcdef;

    auto text = serializeModel(forest);
    auto back = deserializeModel(text);
    CHECK(serializeModel(back) == text);
    CHECK(back.threshold == forest.threshold);
    CHECK(back.featurizerHash == forest.featurizerHash);
    CHECK(back.nFeatures == forest.nFeatures);
    REQUIRE(back.trees.size() == forest.trees.size());
    CHECK(predictBatch(back, m) == predictBatch(forest, m));

    CHECK_THROWS_AS(deserializeModel("{\"format\":\"other-v1\"}"), DataError);
    CHECK_THROWS_AS(deserializeModel("junk"), DataError);
}

TEST_CASE("empty training input is fatal") {
    FeatureMatrix m;
    m.cols = 3;
    m.rowPtr = {0};
    ForestParams params;
    CHECK_THROWS_AS(fitForest(m, {}, params), DataError);
}

} // TEST_SUITE
