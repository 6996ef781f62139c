#pragma once

#include "triage/corpus.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace triage {

enum class Outcome : int {
    Passed = 0,
    Flaked = 1,
    Failed = 2,
    Absent = 3,
};

std::optional<Outcome> parseOutcome(const std::string& s);
const char* toString(Outcome o);
std::ostream& operator<<(std::ostream& out, Outcome o);

struct HistoryWindow {
    int w = 35; // >= 1
};

// Per (builder, testId) timeline of per-commit outcomes. At most one outcome
// per commit; commit keys are naturally strictly increasing in the map.
class TestHistory {
public:
    using Timeline = std::map<std::int64_t, Outcome>;

    // Throws DataError if (builder, testId, commitIndex) was already recorded.
    void add(const std::string& builder, const std::string& testId,
             std::int64_t commitIndex, Outcome outcome);

    // Overwrites silently; used by generators that refine a planted timeline.
    void set(const std::string& builder, const std::string& testId,
             std::int64_t commitIndex, Outcome outcome);

    bool knows(const std::string& builder, const std::string& testId) const;
    const Timeline* timeline(const std::string& builder, const std::string& testId) const;
    std::size_t testCount() const { return timelines_.size(); }

    const std::map<std::pair<std::string, std::string>, Timeline>& all() const {
        return timelines_;
    }

private:
    std::map<std::pair<std::string, std::string>, Timeline> timelines_;
};

struct Rate {
    double value = 0.0;
    bool knownTest = false; // false means the fallback 0.0 with a warning
};

// Count of matching outcomes over commits [n-w, n-1], divided by w even when
// fewer commits exist. Commit n itself never counts.
Rate flakeRate(const TestHistory& hist, const std::string& builder,
               const std::string& testId, std::int64_t n, HistoryWindow w);
Rate failRate(const TestHistory& hist, const std::string& builder,
              const std::string& testId, std::int64_t n, HistoryWindow w);

TestHistory loadHistory(std::istream& in);
TestHistory loadHistoryFile(const std::string& path);
void writeHistory(std::ostream& out, const TestHistory& hist);
void writeHistoryFile(const std::string& path, const TestHistory& hist);

struct UnreliableRecord {
    std::string builder;
    std::string testId;
    std::int64_t buildId = 0;
    std::int64_t commitIndex = 0;
    double flakeRateValue = 0.0;
};

struct UnreliableFilterResult {
    Dataset dataset;
    std::vector<UnreliableRecord> removed;
};

// Removes legitimate-labeled records whose test flaked within the window
// before their commit. False-alert records always stay.
UnreliableFilterResult filterUnreliable(const Dataset& ds, const TestHistory& hist,
                                        HistoryWindow w);

struct LabelProfile {
    std::size_t records = 0;
    double fracFlakeRateZero = 0.0;
    double fracFailRatePositive = 0.0;
    double fracCleanHistory = 0.0; // flakeRate = 0 and failRate = 0
    // Histograms keyed by in-window outcome count (rate = count / w).
    std::map<std::int64_t, std::size_t> flakeCounts;
    std::map<std::int64_t, std::size_t> failCounts;
};

struct HistoryProfile {
    LabelProfile falseAlert;
    LabelProfile legitimate;
    int window = 35;
};

HistoryProfile historyProfile(const Dataset& ds, const TestHistory& hist, HistoryWindow w);

// One row per (label, statistic), then histogram rows (label, metric, rate, count).
std::string profileCsv(const HistoryProfile& profile);

} // namespace triage
