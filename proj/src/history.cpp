#include "triage/history.hpp"
#include "triage/common.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace triage {

using nlohmann::json;

namespace {
constexpr const char* kOutcomeNames[] = {"PASSED", "FLAKED", "FAILED", "ABSENT"};
}

std::optional<Outcome> parseOutcome(const std::string& s) {
    for (int i = 0; i < 4; ++i)
        if (s == kOutcomeNames[i]) return static_cast<Outcome>(i);
    return std::nullopt;
}

const char* toString(Outcome o) { return kOutcomeNames[static_cast<int>(o)]; }
std::ostream& operator<<(std::ostream& out, Outcome o) { return out << toString(o); }

void TestHistory::add(const std::string& builder, const std::string& testId,
                      std::int64_t commitIndex, Outcome outcome) {
    auto& timeline = timelines_[{builder, testId}];
    if (!timeline.emplace(commitIndex, outcome).second) {
        std::ostringstream msg;
        msg << "duplicate outcome for test " << testId << " on builder " << builder
            << " at commit " << commitIndex;
        throw DataError(msg.str());
    }
}

void TestHistory::set(const std::string& builder, const std::string& testId,
                      std::int64_t commitIndex, Outcome outcome) {
    timelines_[{builder, testId}][commitIndex] = outcome;
}

bool TestHistory::knows(const std::string& builder, const std::string& testId) const {
    return timelines_.count({builder, testId}) > 0;
}

const TestHistory::Timeline* TestHistory::timeline(const std::string& builder,
                                                   const std::string& testId) const {
    auto it = timelines_.find({builder, testId});
    return it == timelines_.end() ? nullptr : &it->second;
}

namespace {

Rate windowRate(const TestHistory& hist, const std::string& builder, const std::string& testId,
                std::int64_t n, HistoryWindow w, Outcome wanted) {
    if (w.w < 1) throw UsageError("history window must be >= 1");
    const auto* timeline = hist.timeline(builder, testId);
    if (!timeline) return {0.0, false};
    std::int64_t count = 0;
    auto it = timeline->lower_bound(n - w.w);
    auto end = timeline->lower_bound(n); // commit n itself is excluded
    for (; it != end; ++it)
        if (it->second == wanted) ++count;
    return {static_cast<double>(count) / static_cast<double>(w.w), true};
}

} // namespace

Rate flakeRate(const TestHistory& hist, const std::string& builder, const std::string& testId,
               std::int64_t n, HistoryWindow w) {
    return windowRate(hist, builder, testId, n, w, Outcome::Flaked);
}

Rate failRate(const TestHistory& hist, const std::string& builder, const std::string& testId,
              std::int64_t n, HistoryWindow w) {
    return windowRate(hist, builder, testId, n, w, Outcome::Failed);
}

TestHistory loadHistory(std::istream& in) {
    TestHistory hist;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        std::ostringstream where;
        where << "history line " << lineNo;
        if (j.is_discarded() || !j.is_object())
            throw DataError(where.str() + ": invalid JSON");
        if (!j.contains("builder") || !j["builder"].is_string() ||
            !j.contains("testId") || !j["testId"].is_string() ||
            !j.contains("commitIndex") || !j["commitIndex"].is_number_integer() ||
            !j.contains("outcome") || !j["outcome"].is_string())
            throw DataError(where.str() + ": expected {builder, testId, commitIndex, outcome}");
        auto outcome = parseOutcome(j["outcome"].get<std::string>());
        if (!outcome)
            throw DataError(where.str() + ": unknown outcome " + j["outcome"].get<std::string>());
        hist.add(j["builder"].get<std::string>(), j["testId"].get<std::string>(),
                 j["commitIndex"].get<std::int64_t>(), *outcome);
    }
    return hist;
}

TestHistory loadHistoryFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read history file: " + path);
    return loadHistory(in);
}

void writeHistory(std::ostream& out, const TestHistory& hist) {
    for (const auto& [key, timeline] : hist.all()) {
        for (const auto& [commit, outcome] : timeline) {
            json j;
            j["builder"] = key.first;
            j["testId"] = key.second;
            j["commitIndex"] = commit;
            j["outcome"] = toString(outcome);
            out << j.dump() << '\n';
        }
    }
}

void writeHistoryFile(const std::string& path, const TestHistory& hist) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write history file: " + path);
    writeHistory(out, hist);
}

UnreliableFilterResult filterUnreliable(const Dataset& ds, const TestHistory& hist,
                                        HistoryWindow w) {
    UnreliableFilterResult result;
    result.dataset.provenance = ds.provenance;
    for (const auto& r : ds.records) {
        if (r.label == Label::Legitimate) {
            Rate rate = flakeRate(hist, r.builder, r.testId, r.commitIndex, w);
            if (rate.value > 0.0) {
                result.removed.push_back({r.builder, r.testId, r.buildId, r.commitIndex, rate.value});
                continue;
            }
        }
        result.dataset.records.push_back(r);
    }
    if (!result.removed.empty()) {
        std::ostringstream note;
        note << "; unreliable filter removed " << result.removed.size() << " records";
        result.dataset.provenance += note.str();
    }
    return result;
}

HistoryProfile historyProfile(const Dataset& ds, const TestHistory& hist, HistoryWindow w) {
    HistoryProfile profile;
    profile.window = w.w;
    std::size_t flakeZero[2] = {0, 0}, failPositive[2] = {0, 0}, clean[2] = {0, 0};
    LabelProfile* byLabel[2] = {&profile.falseAlert, &profile.legitimate};

    for (const auto& r : ds.records) {
        int li = r.label == Label::Legitimate ? 1 : 0;
        LabelProfile& p = *byLabel[li];
        double flake = flakeRate(hist, r.builder, r.testId, r.commitIndex, w).value;
        double fail = failRate(hist, r.builder, r.testId, r.commitIndex, w).value;
        ++p.records;
        auto flakeCount = static_cast<std::int64_t>(std::llround(flake * w.w));
        auto failCount = static_cast<std::int64_t>(std::llround(fail * w.w));
        ++p.flakeCounts[flakeCount];
        ++p.failCounts[failCount];
        if (flake == 0.0) ++flakeZero[li];
        if (fail > 0.0) ++failPositive[li];
        if (flake == 0.0 && fail == 0.0) ++clean[li];
    }

    for (int li = 0; li < 2; ++li) {
        LabelProfile& p = *byLabel[li];
        if (p.records == 0) continue;
        auto n = static_cast<double>(p.records);
        p.fracFlakeRateZero = static_cast<double>(flakeZero[li]) / n;
        p.fracFailRatePositive = static_cast<double>(failPositive[li]) / n;
        p.fracCleanHistory = static_cast<double>(clean[li]) / n;
    }
    return profile;
}

std::string profileCsv(const HistoryProfile& profile) {
    std::ostringstream out;
    out << "label,statistic,value\n";
    auto emit = [&](const char* label, const LabelProfile& p) {
        out << label << ",records," << p.records << '\n';
        out << label << ",fracFlakeRateZero," << p.fracFlakeRateZero << '\n';
        out << label << ",fracFailRatePositive," << p.fracFailRatePositive << '\n';
        out << label << ",fracCleanHistory," << p.fracCleanHistory << '\n';
    };
    emit("false_alert", profile.falseAlert);
    emit("legitimate", profile.legitimate);

    out << "label,metric,rate,count\n";
    auto emitHist = [&](const char* label, const char* metric,
                        const std::map<std::int64_t, std::size_t>& counts) {
        for (const auto& [numerator, count] : counts)
            out << label << ',' << metric << ','
                << static_cast<double>(numerator) / profile.window << ',' << count << '\n';
    };
    emitHist("false_alert", "flakeRate", profile.falseAlert.flakeCounts);
    emitHist("false_alert", "failRate", profile.falseAlert.failCounts);
    emitHist("legitimate", "flakeRate", profile.legitimate.flakeCounts);
    emitHist("legitimate", "failRate", profile.legitimate.failCounts);
    return out.str();
}

} // namespace triage
