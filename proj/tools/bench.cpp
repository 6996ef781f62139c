#include "triage/featurizer.hpp"
#include "triage/forest.hpp"
#include "triage/synth.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace triage;

namespace {

template <typename F>
double timeIt(F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel, bool equal) {
    std::printf("%-18s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   equal %s\n", name,
                serial, parallel, parallel > 0 ? serial / parallel : 0.0, equal ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n = argc > 1 ? static_cast<std::size_t>(std::atoll(argv[1])) : 8000;
    std::size_t predictRows = argc > 2 ? static_cast<std::size_t>(std::atoll(argv[2])) : 100000;

#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (no OpenMP)\n";
#endif

    SynthConfig cfg;
    cfg.nFailures = n;
    cfg.legitFraction = 0.2;
    cfg.separability = 0.7;
    cfg.seed = 42;
    SynthResult synth = generateSynthetic(cfg);
    std::cout << "dataset: " << synth.dataset.records.size() << " records\n";

    FittedFeaturizer featurizer =
        fitFeaturizer(synth.dataset, FeaturizerConfig::uniform(500));
    std::vector<int> labels = labelVector(synth.dataset);

    FeatureMatrix mSerial, mParallel;
    double tTransformSerial = timeIt([&] { mSerial = transformBatchSerial(synth.dataset, featurizer); });
    double tTransformParallel = timeIt([&] { mParallel = transformBatch(synth.dataset, featurizer); });
    bool transformEqual = mSerial.rowPtr == mParallel.rowPtr &&
                          mSerial.colIndex == mParallel.colIndex &&
                          mSerial.value == mParallel.value;
    report("transformBatch", tTransformSerial, tTransformParallel, transformEqual);

    ForestParams params;
    params.nTrees = 50;
    params.maxDepth = 12;
    params.maxFeatures = MaxFeatures{MaxFeatures::Kind::Sqrt, 0.0};
    params.classWeight = ClassWeight::Balanced;
    params.seed = 7;

    RandomForest fSerial, fParallel;
    double tFitSerial = timeIt([&] { fSerial = fitForestSerial(mSerial, labels, params); });
    double tFitParallel = timeIt([&] { fParallel = fitForest(mParallel, labels, params); });
    bool fitEqual = serializeModel(fSerial) == serializeModel(fParallel);
    report("fitForest", tFitSerial, tFitParallel, fitEqual);

    // Tile the matrix up to the requested prediction row count.
    std::vector<std::size_t> tiled;
    tiled.reserve(predictRows);
    for (std::size_t i = 0; i < predictRows; ++i) tiled.push_back(i % mSerial.rows);
    FeatureMatrix big = mSerial.selectRows(tiled);

    std::vector<double> pSerial, pParallel;
    double tPredictSerial = timeIt([&] { pSerial = predictBatchSerial(fSerial, big); });
    double tPredictParallel = timeIt([&] { pParallel = predictBatch(fParallel, big); });
    bool predictEqual = pSerial == pParallel;
    report("predictBatch", tPredictSerial, tPredictParallel, predictEqual);

    double best = std::min(tPredictSerial, tPredictParallel);
    if (best > 0)
        std::cout << "predict throughput: " << static_cast<double>(big.rows) / best
                  << " rows/s over " << big.rows << " rows\n";

    return (transformEqual && fitEqual && predictEqual) ? 0 : 1;
}
