#include "doctest.h"
#include "helpers.hpp"
#include "triage/common.hpp"
#include "triage/history.hpp"
#include "triage/rng.hpp"
#include "triage/synth.hpp"

#include <sstream>

using namespace triage;
using triage::testing::makeRecord;

namespace {

TestHistory singleTimeline(const std::vector<std::pair<std::int64_t, Outcome>>& events,
                           const std::string& builder = "linux_tester",
                           const std::string& testId = "t") {
    TestHistory hist;
    for (const auto& [commit, outcome] : events) hist.add(builder, testId, commit, outcome);
    return hist;
}

// Independent oracle: literal scan of [n-w, n-1].
double bruteRate(const TestHistory& hist, const std::string& builder, const std::string& testId,
                 std::int64_t n, int w, Outcome wanted) {
    const auto* timeline = hist.timeline(builder, testId);
    if (!timeline) return 0.0;
    int count = 0;
    for (std::int64_t c = n - w; c <= n - 1; ++c) {
        auto it = timeline->find(c);
        if (it != timeline->end() && it->second == wanted) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(w);
}

} // namespace

TEST_SUITE("history") {

TEST_CASE("flake rate counts flaked commits in the trailing window") {
    HistoryWindow w{35};

    auto clean = singleTimeline({{10, Outcome::Passed}, {20, Outcome::Failed}});
    CHECK(flakeRate(clean, "linux_tester", "t", 40, w).value == 0.0);

    std::vector<std::pair<std::int64_t, Outcome>> events;
    for (std::int64_t c = 0; c < 7; ++c) events.push_back({c + 10, Outcome::Flaked});
    auto seven = singleTimeline(events);
    CHECK(flakeRate(seven, "linux_tester", "t", 45, w).value == doctest::Approx(0.2));
}

TEST_CASE("the record's own commit is outside its window") {
    auto hist = singleTimeline({{50, Outcome::Flaked}});
    CHECK(flakeRate(hist, "linux_tester", "t", 50, HistoryWindow{35}).value == 0.0);
    CHECK(flakeRate(hist, "linux_tester", "t", 51, HistoryWindow{35}).value ==
          doctest::Approx(1.0 / 35.0));
}

TEST_CASE("fail rate mirrors flake rate over FAILED outcomes") {
    HistoryWindow w{35};
    std::vector<std::pair<std::int64_t, Outcome>> all;
    for (std::int64_t c = 0; c < 35; ++c) all.push_back({c, Outcome::Failed});
    CHECK(failRate(singleTimeline(all), "linux_tester", "t", 35, w).value == 1.0);

    auto one = singleTimeline({{30, Outcome::Failed}});
    CHECK(failRate(one, "linux_tester", "t", 35, w).value == doctest::Approx(1.0 / 35.0));
}

TEST_CASE("unknown tests report rate 0 with a warning flag") {
    TestHistory hist;
    auto r = flakeRate(hist, "linux_tester", "ghost", 50, HistoryWindow{35});
    CHECK(r.value == 0.0);
    CHECK_FALSE(r.knownTest);
    auto f = failRate(hist, "linux_tester", "ghost", 50, HistoryWindow{35});
    CHECK(f.value == 0.0);
    CHECK_FALSE(f.knownTest);

    auto known = singleTimeline({{10, Outcome::Passed}});
    CHECK(flakeRate(known, "linux_tester", "t", 50, HistoryWindow{35}).knownTest);
}

TEST_CASE("truncated early history keeps the divisor at w") {
    std::vector<std::pair<std::int64_t, Outcome>> events;
    for (std::int64_t c = 0; c < 5; ++c) events.push_back({c, Outcome::Flaked});
    auto hist = singleTimeline(events);
    CHECK(flakeRate(hist, "linux_tester", "t", 5, HistoryWindow{35}).value ==
          doctest::Approx(5.0 / 35.0));
}

TEST_CASE("window below 1 and duplicate commits are rejected") {
    auto hist = singleTimeline({{10, Outcome::Passed}});
    CHECK_THROWS_AS(flakeRate(hist, "linux_tester", "t", 50, HistoryWindow{0}), UsageError);
    TestHistory dup;
    dup.add("b", "t", 10, Outcome::Passed);
    CHECK_THROWS_AS(dup.add("b", "t", 10, Outcome::Flaked), DataError);
}

TEST_CASE("rates match a brute-force window scan on randomized histories") {
    auto rng = substream(20260819, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        TestHistory hist;
        std::int64_t length = 20 + static_cast<std::int64_t>(uniformIndex(rng, 80));
        for (std::int64_t c = 0; c < length; ++c) {
            switch (uniformIndex(rng, 4)) {
            case 0: hist.add("b", "t", c, Outcome::Passed); break;
            case 1: hist.add("b", "t", c, Outcome::Flaked); break;
            case 2: hist.add("b", "t", c, Outcome::Failed); break;
            default: break; // absent commit
            }
        }
        int w = 1 + static_cast<int>(uniformIndex(rng, 50));
        std::int64_t n = static_cast<std::int64_t>(uniformIndex(rng, 100));
        auto flake = flakeRate(hist, "b", "t", n, HistoryWindow{w});
        auto fail = failRate(hist, "b", "t", n, HistoryWindow{w});
        CHECK(flake.value == bruteRate(hist, "b", "t", n, w, Outcome::Flaked));
        CHECK(fail.value == bruteRate(hist, "b", "t", n, w, Outcome::Failed));
        CHECK(flake.value >= 0.0);
        CHECK(flake.value <= 1.0);
        CHECK(flake.value + fail.value <= 1.0 + 1e-12);
    }
}

TEST_CASE("unreliable filter removes flake-tainted legitimate records only") {
    Dataset ds;
    ds.records.push_back(makeRecord("tainted", Label::Legitimate, 1, 50));
    ds.records.push_back(makeRecord("clean", Label::Legitimate, 1, 50));
    ds.records.push_back(makeRecord("flaky", Label::FalseAlert, 1, 50));

    TestHistory hist;
    hist.add("linux_tester", "tainted", 47, Outcome::Flaked);
    hist.add("linux_tester", "clean", 47, Outcome::Passed);
    for (std::int64_t c = 30; c < 50; c += 2) hist.add("linux_tester", "flaky", c, Outcome::Flaked);

    auto result = filterUnreliable(ds, hist, HistoryWindow{35});
    REQUIRE(result.dataset.records.size() == 2);
    CHECK(result.dataset.records[0].testId == "clean");
    CHECK(result.dataset.records[1].testId == "flaky");
    REQUIRE(result.removed.size() == 1);
    CHECK(result.removed[0].testId == "tainted");
    CHECK(result.removed[0].flakeRateValue > 0.0);

    auto again = filterUnreliable(result.dataset, hist, HistoryWindow{35});
    CHECK(again.removed.empty());
    CHECK(again.dataset.records.size() == 2);
}

TEST_CASE("unreliable filter never drops false alerts") {
    SynthConfig cfg;
    cfg.nFailures = 300;
    cfg.seed = 5;
    cfg.legitFlakeNoise = 0.3; // make some legitimate records removable
    auto synth = generateSynthetic(cfg);
    auto before = datasetStats(synth.dataset);
    auto result = filterUnreliable(synth.dataset, synth.history, HistoryWindow{35});
    auto after = datasetStats(result.dataset);
    CHECK(after.falseAlertCount == before.falseAlertCount);
    CHECK(after.legitimateCount <= before.legitimateCount);
    for (const auto& r : result.removed) CHECK(r.flakeRateValue > 0.0);
}

TEST_CASE("history profile reports per-label rate statistics") {
    Dataset ds;
    ds.records.push_back(makeRecord("fa1", Label::FalseAlert, 1, 50));
    ds.records.push_back(makeRecord("fa2", Label::FalseAlert, 1, 50));
    ds.records.push_back(makeRecord("leg1", Label::Legitimate, 1, 50));
    ds.records.push_back(makeRecord("leg2", Label::Legitimate, 1, 50));

    TestHistory hist;
    hist.add("linux_tester", "fa1", 40, Outcome::Flaked); // flakeRate > 0
    hist.add("linux_tester", "fa2", 40, Outcome::Passed); // clean
    hist.add("linux_tester", "leg1", 40, Outcome::Failed); // failRate > 0
    hist.add("linux_tester", "leg2", 40, Outcome::Passed); // clean

    auto profile = historyProfile(ds, hist, HistoryWindow{35});
    CHECK(profile.falseAlert.records == 2);
    CHECK(profile.falseAlert.fracFlakeRateZero == doctest::Approx(0.5));
    CHECK(profile.falseAlert.fracFailRatePositive == doctest::Approx(0.0));
    CHECK(profile.falseAlert.fracCleanHistory == doctest::Approx(0.5));
    CHECK(profile.legitimate.records == 2);
    CHECK(profile.legitimate.fracFlakeRateZero == doctest::Approx(1.0));
    CHECK(profile.legitimate.fracFailRatePositive == doctest::Approx(0.5));
    CHECK(profile.legitimate.fracCleanHistory == doctest::Approx(0.5));

    auto csv = profileCsv(profile);
    CHECK(csv.find("false_alert") != std::string::npos);
    CHECK(csv.find("legitimate") != std::string::npos);
}

TEST_CASE("history serialization round-trips") {
    TestHistory hist;
    hist.add("b1", "t1", 10, Outcome::Passed);
    hist.add("b1", "t1", 11, Outcome::Flaked);
    hist.add("b2", "t2", 5, Outcome::Failed);

    std::ostringstream first;
    writeHistory(first, hist);
    std::istringstream in(first.str());
    TestHistory reloaded = loadHistory(in);
    std::ostringstream second;
    writeHistory(second, reloaded);
    CHECK(first.str() == second.str());
    CHECK(reloaded.testCount() == 2);

    std::istringstream bad("{\"builder\":\"b\",\"testId\":\"t\",\"commitIndex\":1}");
    CHECK_THROWS_AS(loadHistory(bad), DataError);
}

} // TEST_SUITE
