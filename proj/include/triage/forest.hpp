#pragma once

#include "triage/featurizer.hpp"
#include "triage/metrics.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace triage {

enum class ClassWeight : int {
    Uniform = 0,
    Balanced = 1,
};

const char* toString(ClassWeight w);
std::ostream& operator<<(std::ostream& out, ClassWeight w);
std::optional<ClassWeight> parseClassWeight(const std::string& s);

struct MaxFeatures {
    enum class Kind : int { Sqrt = 0, Log2 = 1, All = 2, Fraction = 3 };
    Kind kind = Kind::Sqrt;
    double fraction = 1.0; // meaningful only for Kind::Fraction, in (0,1]

    // Candidate count for a space of nFeatures columns, at least 1.
    int count(std::size_t nFeatures) const;
    std::string toString() const;
    // Accepts "sqrt", "log2", "all", or a decimal fraction.
    static MaxFeatures parse(const std::string& s);
};

inline constexpr int kUnlimitedDepth = -1;

struct ForestParams {
    int nTrees = 100;
    int maxDepth = kUnlimitedDepth; // -1 = unlimited; 0 = root leaf only
    int minSamplesSplit = 2;        // >= 2
    int minSamplesLeaf = 1;         // >= 1
    MaxFeatures maxFeatures;
    ClassWeight classWeight = ClassWeight::Uniform;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    void validate() const; // throws UsageError
};

struct TreeNode {
    std::int32_t feature = -1; // -1 marks a leaf
    double threshold = 0.0;    // go left when value <= threshold
    double gain = 0.0;         // weighted impurity decrease of this split
    double weight = 0.0;       // total sample weight reaching the node
    double pFalseAlert = 0.0;  // class fractions; meaningful at leaves
    double pLegitimate = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool isLeaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // root at index 0, pre-order

    // Fraction of legitimate-class weight at the leaf this vector reaches.
    double leafLegitimateFraction(const FeatureVector& fv) const;
    double leafLegitimateFraction(const FeatureMatrix& m, std::size_t row) const;
    int depth() const;
};

struct RandomForest {
    std::vector<DecisionTree> trees;
    ForestParams params;
    double threshold = 0.5; // decision threshold for the legitimate class
    std::uint64_t featurizerHash = 0;
    std::uint32_t nFeatures = 0;
};

// 1 - sum of squared class fractions over the two weighted counts.
// Throws std::invalid_argument when both are zero.
double giniImpurity(double weight0, double weight1);

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double decrease = 0.0; // weighted impurity decrease, >= 0
};

// Thresholds are midpoints between consecutive distinct sorted values of each
// candidate feature. Ties go to the lowest feature index, then the lowest
// threshold. Returns nothing when the node is pure, no candidate threshold
// exists, or every split would leave a child below minSamplesLeaf instances.
std::optional<Split> bestSplit(const FeatureMatrix& m, const std::vector<int>& labels,
                               const std::vector<double>& rowWeight,
                               const std::vector<std::size_t>& instances,
                               std::size_t lo, std::size_t hi,
                               const std::vector<std::uint32_t>& candidateFeatures,
                               int minSamplesLeaf);

// instances lists matrix rows with bootstrap multiplicity; the vector is
// permuted in place while the tree is grown.
DecisionTree growTree(const FeatureMatrix& m, const std::vector<int>& labels,
                      const std::vector<double>& rowWeight,
                      std::vector<std::size_t> instances, const ForestParams& params,
                      std::mt19937_64& rng);

// Per-tree randomness comes from substream(seed, treeIndex), so the parallel
// and serial drivers produce identical forests.
RandomForest fitForest(const FeatureMatrix& m, const std::vector<int>& labels,
                       const ForestParams& params);
RandomForest fitForestSerial(const FeatureMatrix& m, const std::vector<int>& labels,
                             const ForestParams& params);

// Mean over trees of the leaf legitimate fraction. Throws DataError when the
// vector dimension disagrees with the trained feature count.
double predictProba(const RandomForest& forest, const FeatureVector& fv);
std::vector<double> predictBatch(const RandomForest& forest, const FeatureMatrix& m);
std::vector<double> predictBatchSerial(const RandomForest& forest, const FeatureMatrix& m);

struct CalibrationResult {
    double threshold = 0.5;
    double bestF1 = 0.0;
    std::vector<PrPoint> curve;
};

// Maximizes F1 of the legitimate class over candidate thresholds (midpoints
// plus 0 and 1); ties prefer the highest threshold. Throws DataError unless
// both classes are present.
CalibrationResult calibrateThreshold(const std::vector<double>& probs,
                                     const std::vector<int>& labels);

struct SearchSpace {
    std::vector<int> nTrees{50, 100, 200, 400};
    std::vector<int> maxDepth{8, 16, 32, kUnlimitedDepth};
    std::vector<int> minSamplesSplit{2, 5, 10};
    std::vector<int> minSamplesLeaf{1, 2, 5};
    std::vector<MaxFeatures> maxFeatures{
        MaxFeatures{MaxFeatures::Kind::Sqrt, 1.0},
        MaxFeatures{MaxFeatures::Kind::Log2, 1.0},
        MaxFeatures{MaxFeatures::Kind::Fraction, 0.3},
    };
    std::vector<ClassWeight> classWeight{ClassWeight::Uniform, ClassWeight::Balanced};
    bool bootstrap = true;
};

struct CvCandidate {
    ForestParams params;
    std::vector<double> foldScores;
    double meanScore = 0.0;
    bool valid = true;
    std::string note;
};

struct CvReport {
    std::vector<CvCandidate> candidates;
    int bestIndex = -1;
    int folds = 5;
    std::uint64_t seed = 0;
};

struct SearchResult {
    ForestParams best;
    CvReport report;
};

// Samples nIter settings, scores each by stratified k-fold CV with MCC at
// threshold 0.5, keeps the earliest best. Deterministic per seed.
SearchResult randomSearch(const FeatureMatrix& m, const std::vector<int>& labels,
                          const SearchSpace& space, int nIter, int k, std::uint64_t seed);

std::string serializeModel(const RandomForest& forest);
RandomForest deserializeModel(const std::string& text);
void saveModel(const std::string& path, const RandomForest& forest);
RandomForest loadModel(const std::string& path);

} // namespace triage
