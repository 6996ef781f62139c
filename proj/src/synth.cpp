#include "triage/synth.hpp"
#include "triage/common.hpp"
#include "triage/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace triage {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Substream offsets keep record, test, and label draws independent.
constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kRecordStream = 0x100000;
constexpr std::uint64_t kTestStream = 0x200000;

struct SuiteInfo {
    const char* name;
    const char* category;
};

constexpr SuiteInfo kSuites[] = {
    {"ui_smoke_suite", "GUI"},
    {"ui_render_suite", "GUI"},
    {"service_flow_suite", "INTEGRATION"},
    {"api_bridge_suite", "INTEGRATION"},
    {"core_math_suite", "UNIT"},
    {"string_util_suite", "UNIT"},
};
constexpr std::size_t kSuiteCount = sizeof(kSuites) / sizeof(kSuites[0]);

constexpr const char* kBuilders[] = {"synth_linux_tester", "synth_win_tester"};

double standardNormal(std::mt19937_64& rng) {
    double u1 = 1.0 - uniformReal(rng); // (0, 1], keeps log finite
    double u2 = uniformReal(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

const std::string& pickToken(const std::vector<std::string>& pool, std::mt19937_64& rng) {
    return pool[static_cast<std::size_t>(uniformIndex(rng, pool.size()))];
}

std::string composeArtifact(std::size_t tokenCount, double separability,
                            const std::vector<std::string>& signalPool,
                            const std::vector<std::string>& noisePool, std::mt19937_64& rng) {
    std::string text;
    for (std::size_t i = 0; i < tokenCount; ++i) {
        bool signal = uniformReal(rng) < separability;
        const std::string& token = pickToken(signal ? signalPool : noisePool, rng);
        if (!text.empty()) text += (i % 7 == 0) ? '\n' : ' ';
        text += token;
    }
    return text;
}

} // namespace

SynthTokenPools SynthTokenPools::defaults() {
    SynthTokenPools pools;
    pools.falseAlertSignal = {"timedwait", "retrypass", "raceflake", "asyncdelay",
                              "transient", "deadline",  "rerunok",   "jitter"};
    pools.legitimateSignal = {"assertfail", "nullderef", "segfault",    "regression",
                              "mismatch",   "exitcode",  "stackoverrun", "brokenref"};
    pools.noise = {"build",  "step",   "shard",  "log",    "exec",   "target", "chrome",
                   "render", "page",   "click",  "event",  "queue",  "thread", "mutex",
                   "alloc",  "buffer", "paint",  "layout", "script", "parse",  "fetch",
                   "cache",  "proto",  "socket", "frame",  "tile",   "widget", "handle",
                   "worker", "signal"};
    return pools;
}

void SynthConfig::validate() const {
    if (nFailures < 10) throw UsageError("synthetic dataset needs nFailures >= 10");
    if (!(legitFraction > 0.0 && legitFraction < 1.0))
        throw UsageError("legitFraction must lie strictly between 0 and 1");
    if (!(separability >= 0.0 && separability <= 1.0))
        throw UsageError("separability must lie in [0,1]");
    if (tokens.falseAlertSignal.empty() || tokens.legitimateSignal.empty() ||
        tokens.noise.empty())
        throw UsageError("token pools must not be empty");
    if (!(durationFalseAlert.sigma > 0.0) || !(durationLegitimate.sigma > 0.0))
        throw UsageError("duration sigma must be positive");
    if (!(historyFlakeBias >= 0.0 && historyFlakeBias <= 1.0))
        throw UsageError("historyFlakeBias must lie in [0,1]");
    if (!(legitFlakeNoise >= 0.0 && legitFlakeNoise <= 1.0))
        throw UsageError("legitFlakeNoise must lie in [0,1]");
    if (builds < 1) throw UsageError("builds must be >= 1");
}

SynthResult generateSynthetic(const SynthConfig& cfg) {
    cfg.validate();
    SynthResult result;

    auto n = cfg.nFailures;
    auto nLegit = static_cast<std::size_t>(
        std::llround(cfg.legitFraction * static_cast<double>(n)));
    nLegit = std::clamp<std::size_t>(nLegit, 1, n - 1);

    std::vector<int> labels(n, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(nLegit), 1);
    {
        auto rng = substream(cfg.seed, kLabelStream);
        deterministicShuffle(labels, rng);
    }

    // Tests are label-pure so planted histories stay consistent with labels.
    auto nFaTests = std::max<std::size_t>(1, (n - nLegit) / 20);
    auto nLegitTests = std::max<std::size_t>(1, nLegit / 20);
    auto totalTests = nFaTests + nLegitTests;

    struct TestInfo {
        std::string id;
        std::size_t builderIdx;
        std::size_t suiteIdx;
    };
    std::vector<TestInfo> tests(totalTests);
    for (std::size_t t = 0; t < totalTests; ++t) {
        auto rng = substream(cfg.seed, kTestStream + t);
        tests[t].id = "test_" + std::to_string(t);
        tests[t].builderIdx = static_cast<std::size_t>(uniformIndex(rng, 2));
        tests[t].suiteIdx = static_cast<std::size_t>(uniformIndex(rng, kSuiteCount));
    }

    // separability interpolates every class-conditional distribution from the
    // pooled midpoint (0: identical classes) to the configured form (1).
    double s = cfg.separability;
    double muMid = (cfg.durationFalseAlert.mu + cfg.durationLegitimate.mu) / 2.0;
    double sigmaMid = (cfg.durationFalseAlert.sigma + cfg.durationLegitimate.sigma) / 2.0;
    double muEff[2] = {muMid + s * (cfg.durationFalseAlert.mu - muMid),
                       muMid + s * (cfg.durationLegitimate.mu - muMid)};
    double sigmaEff[2] = {sigmaMid + s * (cfg.durationFalseAlert.sigma - sigmaMid),
                          sigmaMid + s * (cfg.durationLegitimate.sigma - sigmaMid)};

    constexpr std::int64_t kFirstCommit = 35; // room for a full window below
    result.dataset.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto rng = substream(cfg.seed, kRecordStream + i);
        bool legit = labels[i] == 1;

        std::size_t testIdx = legit
            ? nFaTests + static_cast<std::size_t>(uniformIndex(rng, nLegitTests))
            : static_cast<std::size_t>(uniformIndex(rng, nFaTests));
        const TestInfo& test = tests[testIdx];

        FailureRecord r;
        r.testId = test.id;
        r.suite = kSuites[test.suiteIdx].name;
        r.builder = kBuilders[test.builderIdx];
        auto build = static_cast<std::int64_t>(uniformIndex(rng, static_cast<std::uint64_t>(cfg.builds)));
        r.buildId = 1000 + build;
        r.commitIndex = kFirstCommit + build;
        r.label = legit ? Label::Legitimate : Label::FalseAlert;

        r.runDuration = std::exp(muEff[legit ? 1 : 0] +
                                 sigmaEff[legit ? 1 : 0] * standardNormal(rng));

        double u = uniformReal(rng);
        if (u < 0.85) r.runStatus = RunStatus::Fail;
        else if (u < 0.93) r.runStatus = RunStatus::Crash;
        else if (u < 0.98) r.runStatus = RunStatus::Abort;
        else r.runStatus = RunStatus::Skip;

        // Flaky failures skew toward timeouts as separability grows.
        double pTimeout = 0.04 + (legit ? 0.0 : s * 0.11);
        double v = uniformReal(rng);
        if (v < pTimeout) {
            r.runTagStatus = RunTagStatus::Timeout;
        } else {
            double w = (v - pTimeout) / (1.0 - pTimeout);
            if (w < 0.65) r.runTagStatus = RunTagStatus::Failure;
            else if (w < 0.85) r.runTagStatus = RunTagStatus::Fail;
            else if (w < 0.95) r.runTagStatus = RunTagStatus::Crash;
            else r.runTagStatus = RunTagStatus::FailureOnExit;
        }

        const auto& signal = legit ? cfg.tokens.legitimateSignal : cfg.tokens.falseAlertSignal;
        const auto& noise = cfg.tokens.noise;
        r.command = composeArtifact(3 + uniformIndex(rng, 6), s, signal, noise, rng);
        if (uniformReal(rng) < 0.3)
            r.crashLog = composeArtifact(8 + uniformIndex(rng, 25), s, signal, noise, rng);
        if (uniformReal(rng) < 0.9)
            r.stackTrace = composeArtifact(15 + uniformIndex(rng, 40), s, signal, noise, rng);
        if (uniformReal(rng) < 0.8)
            r.stderrText = composeArtifact(6 + uniformIndex(rng, 30), s, signal, noise, rng);
        if (uniformReal(rng) < 0.35)
            r.testSource = composeArtifact(10 + uniformIndex(rng, 30), s, signal, noise, rng);

        result.dataset.records.push_back(std::move(r));
    }
    sortByBuilderCommit(result.dataset);

    // Background timelines, then the records' own commits forced on top.
    std::int64_t commitSpan = kFirstCommit + cfg.builds;
    for (std::size_t t = 0; t < totalTests; ++t) {
        auto rng = substream(cfg.seed, kTestStream + 0x10000 + t);
        bool legitTest = t >= nFaTests;
        const TestInfo& test = tests[t];
        const std::string& builder = kBuilders[test.builderIdx];
        for (std::int64_t c = 0; c < commitSpan; ++c) {
            double u = uniformReal(rng);
            Outcome outcome;
            if (u < 0.1) {
                outcome = Outcome::Absent;
            } else {
                double flakeP = legitTest ? cfg.legitFlakeNoise : cfg.historyFlakeBias;
                double failP = legitTest ? 0.15 : 0.002;
                double v = uniformReal(rng);
                if (v < flakeP) outcome = Outcome::Flaked;
                else if (v < flakeP + failP) outcome = Outcome::Failed;
                else outcome = Outcome::Passed;
            }
            result.history.set(builder, test.id, c, outcome);
        }
    }
    for (const auto& r : result.dataset.records)
        result.history.set(r.builder, r.testId, r.commitIndex,
                           r.label == Label::Legitimate ? Outcome::Failed : Outcome::Flaked);

    std::ostringstream prov;
    prov << "synthetic: n=" << n << " legitFraction=" << cfg.legitFraction
         << " separability=" << s << " seed=" << cfg.seed;
    result.dataset.provenance = prov.str();

    result.truth.falseAlerts = n - nLegit;
    result.truth.legitimate = nLegit;
    result.truth.medianFalseAlert = std::exp(cfg.durationFalseAlert.mu);
    result.truth.medianLegitimate = std::exp(cfg.durationLegitimate.mu);
    result.truth.separability = s;
    result.truth.seed = cfg.seed;
    for (const auto& suite : kSuites)
        result.truth.suiteCategories[suite.name] = suite.category;
    result.truth.falseAlertSignalTokens = cfg.tokens.falseAlertSignal;
    result.truth.legitimateSignalTokens = cfg.tokens.legitimateSignal;
    return result;
}

std::string truthJson(const GroundTruth& truth) {
    json j;
    j["falseAlerts"] = truth.falseAlerts;
    j["legitimate"] = truth.legitimate;
    j["configuredMedianFalseAlert"] = truth.medianFalseAlert;
    j["configuredMedianLegitimate"] = truth.medianLegitimate;
    j["separability"] = truth.separability;
    j["seed"] = truth.seed;
    j["suiteCategories"] = truth.suiteCategories;
    j["falseAlertSignalTokens"] = truth.falseAlertSignalTokens;
    j["legitimateSignalTokens"] = truth.legitimateSignalTokens;
    return j.dump(2);
}

std::string mappingJsonl(const GroundTruth& truth) {
    std::ostringstream out;
    for (const auto& [suite, category] : truth.suiteCategories) {
        json j;
        j["suite"] = suite;
        j["category"] = category;
        out << j.dump() << '\n';
    }
    return out.str();
}

} // namespace triage
