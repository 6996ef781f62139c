#pragma once

#include "triage/corpus.hpp"
#include "triage/history.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace triage {

struct ClassLogNormal {
    double mu = 0.0;    // log-space mean; exp(mu) is the median
    double sigma = 1.0; // log-space deviation, > 0
};

struct SynthTokenPools {
    std::vector<std::string> falseAlertSignal;
    std::vector<std::string> legitimateSignal;
    std::vector<std::string> noise;

    static SynthTokenPools defaults();
};

struct SynthConfig {
    std::size_t nFailures = 20000; // >= 10
    double legitFraction = 0.05;   // in (0,1)
    double separability = 1.0;     // in [0,1]
    SynthTokenPools tokens = SynthTokenPools::defaults();
    ClassLogNormal durationFalseAlert{-0.89159811928, 1.4714}; // median 0.41 s
    ClassLogNormal durationLegitimate{0.08617769624, 0.7473};  // median 1.09 s
    double historyFlakeBias = 0.8;  // per-commit flake probability of flaky tests
    double legitFlakeNoise = 0.0;   // same for legitimate-failure tests
    int builds = 50;                // >= 1
    std::uint64_t seed = 0;

    void validate() const; // throws UsageError
};

struct GroundTruth {
    std::size_t falseAlerts = 0;
    std::size_t legitimate = 0;
    double medianFalseAlert = 0.0; // configured, not empirical
    double medianLegitimate = 0.0;
    double separability = 0.0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> suiteCategories;
    std::vector<std::string> falseAlertSignalTokens;
    std::vector<std::string> legitimateSignalTokens;
};

struct SynthResult {
    Dataset dataset;
    TestHistory history;
    GroundTruth truth;
};

// Deterministic per seed. Labels are allocated exactly (llround of the
// fraction); every per-record draw uses its own RNG substream. separability
// interpolates every class-conditional distribution between a pooled
// mixture (0: classes indistinguishable) and the configured per-class form
// (1: a signal token appears in essentially every artifact).
SynthResult generateSynthetic(const SynthConfig& cfg);

std::string truthJson(const GroundTruth& truth);
// suite -> category lines matching the evaluation mapping format.
std::string mappingJsonl(const GroundTruth& truth);

} // namespace triage
