#include "triage/corpus.hpp"
#include "triage/common.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace triage {

using nlohmann::json;

namespace {

constexpr const char* kRunStatusNames[] = {"ABORT", "FAIL", "PASS", "CRASH", "SKIP"};
constexpr const char* kRunTagStatusNames[] = {
    "CRASH", "PASS", "FAIL", "TIMEOUT", "SUCCESS",
    "FAILURE", "FAILURE_ON_EXIT", "NOTRUN", "SKIP", "UNKNOWN"};

} // namespace

std::optional<RunStatus> parseRunStatus(const std::string& s) {
    for (int i = 0; i < 5; ++i)
        if (s == kRunStatusNames[i]) return static_cast<RunStatus>(i);
    return std::nullopt;
}

std::optional<RunTagStatus> parseRunTagStatus(const std::string& s) {
    for (int i = 0; i < 10; ++i)
        if (s == kRunTagStatusNames[i]) return static_cast<RunTagStatus>(i);
    return std::nullopt;
}

std::optional<Label> parseLabel(const std::string& s) {
    if (s == "false_alert") return Label::FalseAlert;
    if (s == "legitimate") return Label::Legitimate;
    return std::nullopt;
}

const char* toString(RunStatus s) { return kRunStatusNames[static_cast<int>(s)]; }
const char* toString(RunTagStatus s) { return kRunTagStatusNames[static_cast<int>(s)]; }
const char* toString(Label l) { return l == Label::FalseAlert ? "false_alert" : "legitimate"; }
std::ostream& operator<<(std::ostream& out, RunStatus s) { return out << toString(s); }
std::ostream& operator<<(std::ostream& out, RunTagStatus s) { return out << toString(s); }
std::ostream& operator<<(std::ostream& out, Label l) { return out << toString(l); }

const char* artifactName(ArtifactKind k) {
    switch (k) {
    case ArtifactKind::Command: return "command";
    case ArtifactKind::CrashLog: return "crashLog";
    case ArtifactKind::StackTrace: return "stackTrace";
    case ArtifactKind::Stderr: return "stderr";
    case ArtifactKind::TestSource: return "testSource";
    }
    return "";
}

const std::string& artifactText(const FailureRecord& r, ArtifactKind k) {
    switch (k) {
    case ArtifactKind::Command: return r.command;
    case ArtifactKind::CrashLog: return r.crashLog;
    case ArtifactKind::StackTrace: return r.stackTrace;
    case ArtifactKind::Stderr: return r.stderrText;
    case ArtifactKind::TestSource: return r.testSource;
    }
    return r.command;
}

std::vector<int> labelVector(const Dataset& ds) {
    std::vector<int> out;
    out.reserve(ds.records.size());
    for (const auto& r : ds.records)
        out.push_back(r.label == Label::Legitimate ? 1 : 0);
    return out;
}

void sortByBuilderCommit(Dataset& ds) {
    std::stable_sort(ds.records.begin(), ds.records.end(),
                     [](const FailureRecord& a, const FailureRecord& b) {
                         if (a.builder != b.builder) return a.builder < b.builder;
                         return a.commitIndex < b.commitIndex;
                     });
}

namespace {

// Distinguishes substance errors per field so rejection reasons are precise.
std::string parseRecord(const json& j, FailureRecord& out) {
    if (!j.is_object()) return "not an object";

    auto text = [&](const char* field, std::string& dst) -> std::string {
        auto it = j.find(field);
        if (it == j.end()) return std::string("missing field: ") + field;
        if (!it->is_string()) return std::string("field not text: ") + field;
        dst = it->get<std::string>();
        return "";
    };
    auto integer = [&](const char* field, std::int64_t& dst) -> std::string {
        auto it = j.find(field);
        if (it == j.end()) return std::string("missing field: ") + field;
        if (!it->is_number_integer()) return std::string("field not an integer: ") + field;
        dst = it->get<std::int64_t>();
        return "";
    };

    std::string err;
    if (!(err = text("testId", out.testId)).empty()) return err;
    if (!(err = text("suite", out.suite)).empty()) return err;
    if (!(err = text("builder", out.builder)).empty()) return err;
    if (!(err = integer("buildId", out.buildId)).empty()) return err;
    if (!(err = integer("commitIndex", out.commitIndex)).empty()) return err;

    auto dur = j.find("runDuration");
    if (dur == j.end()) return "missing field: runDuration";
    if (!dur->is_number()) return "field not a number: runDuration";
    out.runDuration = dur->get<double>();
    if (!(out.runDuration >= 0.0)) return "runDuration negative";

    std::string value;
    if (!(err = text("runStatus", value)).empty()) return err;
    if (auto rs = parseRunStatus(value)) out.runStatus = *rs;
    else return "unknown runStatus: " + value;

    if (!(err = text("runTagStatus", value)).empty()) return err;
    if (auto ts = parseRunTagStatus(value)) out.runTagStatus = *ts;
    else return "unknown runTagStatus: " + value;

    if (!(err = text("command", out.command)).empty()) return err;
    if (!(err = text("crashLog", out.crashLog)).empty()) return err;
    if (!(err = text("stackTrace", out.stackTrace)).empty()) return err;
    if (!(err = text("stderr", out.stderrText)).empty()) return err;
    if (!(err = text("testSource", out.testSource)).empty()) return err;

    if (!(err = text("label", value)).empty()) return err;
    if (auto l = parseLabel(value)) out.label = *l;
    else return "unknown label: " + value;

    return "";
}

using DuplicateKey = std::tuple<std::string, std::int64_t, std::string, double, int>;

DuplicateKey keyOf(const FailureRecord& r) {
    return {r.testId, r.buildId, r.builder, r.runDuration, static_cast<int>(r.runStatus)};
}

json recordJson(const FailureRecord& r) {
    json j;
    j["testId"] = r.testId;
    j["suite"] = r.suite;
    j["builder"] = r.builder;
    j["buildId"] = r.buildId;
    j["commitIndex"] = r.commitIndex;
    j["runDuration"] = r.runDuration;
    j["runStatus"] = toString(r.runStatus);
    j["runTagStatus"] = toString(r.runTagStatus);
    j["command"] = r.command;
    j["crashLog"] = r.crashLog;
    j["stackTrace"] = r.stackTrace;
    j["stderr"] = r.stderrText;
    j["testSource"] = r.testSource;
    j["label"] = toString(r.label);
    return j;
}

} // namespace

LoadResult loadRecords(std::istream& in, const std::string& sourceName) {
    LoadResult result;
    result.dataset.provenance = "loaded from " + sourceName;
    std::set<DuplicateKey> seen;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            result.rejected.push_back({lineNo, "invalid JSON"});
            continue;
        }
        FailureRecord r;
        std::string err = parseRecord(j, r);
        if (!err.empty()) {
            result.rejected.push_back({lineNo, err});
            continue;
        }
        if (!seen.insert(keyOf(r)).second) {
            result.rejected.push_back({lineNo, "duplicate record"});
            continue;
        }
        result.dataset.records.push_back(std::move(r));
    }
    return result;
}

LoadResult loadRecordsFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read records file: " + path);
    return loadRecords(in, path);
}

void writeRecords(std::ostream& out, const Dataset& ds) {
    for (const auto& r : ds.records)
        out << recordJson(r).dump() << '\n';
}

void writeRecordsFile(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write records file: " + path);
    writeRecords(out, ds);
}

void writeRejections(std::ostream& out, const std::vector<RejectedLine>& rejected) {
    for (const auto& rej : rejected) {
        json j;
        j["line"] = rej.line;
        j["reason"] = rej.reason;
        out << j.dump() << '\n';
    }
}

namespace {

bool explicitlyExcluded(const FailureRecord& r, const MassFailurePolicy& policy) {
    for (const auto& range : policy.explicitBuildExclusions)
        if (r.builder == range.builder && r.buildId >= range.firstBuildId &&
            r.buildId <= range.lastBuildId)
            return true;
    return false;
}

double medianOf(std::vector<std::size_t> counts) {
    std::sort(counts.begin(), counts.end());
    std::size_t n = counts.size();
    if (n % 2 == 1) return static_cast<double>(counts[n / 2]);
    return (static_cast<double>(counts[n / 2 - 1]) + static_cast<double>(counts[n / 2])) / 2.0;
}

} // namespace

MassFilterResult filterMassFailureBuilds(const Dataset& ds, const MassFailurePolicy& policy) {
    for (const auto& range : policy.explicitBuildExclusions)
        if (range.lastBuildId < range.firstBuildId)
            throw UsageError("build exclusion range is reversed for builder " + range.builder);
    if (policy.autoRule) {
        if (!(policy.autoRule->thresholdFactor > 1.0))
            throw UsageError("auto exclusion thresholdFactor must be > 1");
        if (policy.autoRule->absoluteFloor < 1)
            throw UsageError("auto exclusion absoluteFloor must be >= 1");
    }

    MassFilterResult result;
    std::map<std::pair<std::string, std::int64_t>, std::size_t> dropped;

    for (const auto& r : ds.records) {
        if (explicitlyExcluded(r, policy))
            ++dropped[{r.builder, r.buildId}];
        else
            result.dataset.records.push_back(r);
    }
    for (const auto& [build, count] : dropped)
        result.excluded.push_back({build.first, build.second, count, "explicit"});

    if (policy.autoRule) {
        // Removing a heavy build lowers the median, so the rule re-applies
        // until stable; that makes the whole operation idempotent.
        for (;;) {
            std::map<std::pair<std::string, std::int64_t>, std::size_t> perBuild;
            for (const auto& r : result.dataset.records)
                ++perBuild[{r.builder, r.buildId}];
            if (perBuild.empty()) break;

            std::vector<std::size_t> counts;
            counts.reserve(perBuild.size());
            for (const auto& [build, count] : perBuild) counts.push_back(count);
            double threshold = std::max(static_cast<double>(policy.autoRule->absoluteFloor),
                                        policy.autoRule->thresholdFactor * medianOf(counts));

            std::set<std::pair<std::string, std::int64_t>> heavy;
            for (const auto& [build, count] : perBuild)
                if (static_cast<double>(count) > threshold) heavy.insert(build);
            if (heavy.empty()) break;

            std::vector<FailureRecord> kept;
            kept.reserve(result.dataset.records.size());
            for (auto& r : result.dataset.records) {
                if (heavy.count({r.builder, r.buildId}))
                    continue;
                kept.push_back(std::move(r));
            }
            result.dataset.records = std::move(kept);
            for (const auto& build : heavy)
                result.excluded.push_back({build.first, build.second, perBuild.at(build), "auto"});
        }
    }

    result.dataset.provenance = ds.provenance;
    if (!result.excluded.empty()) {
        std::ostringstream note;
        note << "; mass-failure filter removed " << result.excluded.size() << " builds";
        result.dataset.provenance += note.str();
    }
    return result;
}

DatasetStats datasetStats(const Dataset& ds) {
    DatasetStats stats;
    std::set<std::string> faTests, legitTests;
    std::set<std::pair<std::string, std::int64_t>> builds;
    for (const auto& r : ds.records) {
        if (r.label == Label::FalseAlert) {
            ++stats.falseAlertCount;
            faTests.insert(r.testId);
        } else {
            ++stats.legitimateCount;
            legitTests.insert(r.testId);
        }
        ++stats.perSuite[r.suite];
        ++stats.perBuilder[r.builder];
        builds.insert({r.builder, r.buildId});
    }
    stats.uniqueFalseAlertTests = faTests.size();
    stats.uniqueLegitimateTests = legitTests.size();
    stats.buildCount = builds.size();
    return stats;
}

std::string statsJson(const DatasetStats& stats) {
    json j;
    j["builds"] = stats.buildCount;
    j["falseAlerts"] = stats.falseAlertCount;
    j["legitimate"] = stats.legitimateCount;
    j["uniqueFalseAlertTests"] = stats.uniqueFalseAlertTests;
    j["uniqueLegitimateTests"] = stats.uniqueLegitimateTests;
    j["perSuite"] = stats.perSuite;
    j["perBuilder"] = stats.perBuilder;
    return j.dump(2);
}

} // namespace triage
