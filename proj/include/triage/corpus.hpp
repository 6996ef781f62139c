#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace triage {

// Encodings are part of the feature contract and must not be reordered.
enum class RunStatus : int {
    Abort = 0,
    Fail = 1,
    Pass = 2,
    Crash = 3,
    Skip = 4,
};

enum class RunTagStatus : int {
    Crash = 0,
    Pass = 1,
    Fail = 2,
    Timeout = 3,
    Success = 4,
    Failure = 5,
    FailureOnExit = 6,
    NotRun = 7,
    Skip = 8,
    Unknown = 9,
};

enum class Label : int {
    FalseAlert = 0,
    Legitimate = 1,
};

std::optional<RunStatus> parseRunStatus(const std::string& s);
std::optional<RunTagStatus> parseRunTagStatus(const std::string& s);
std::optional<Label> parseLabel(const std::string& s);
const char* toString(RunStatus s);
const char* toString(RunTagStatus s);
const char* toString(Label l);
std::ostream& operator<<(std::ostream& out, RunStatus s);
std::ostream& operator<<(std::ostream& out, RunTagStatus s);
std::ostream& operator<<(std::ostream& out, Label l);

// Textual artifacts attached to a failure, in fixed namespace order.
enum class ArtifactKind : int {
    Command = 0,
    CrashLog = 1,
    StackTrace = 2,
    Stderr = 3,
    TestSource = 4,
};
inline constexpr std::size_t kArtifactCount = 5;
const char* artifactName(ArtifactKind k);

struct FailureRecord {
    std::string testId;
    std::string suite;
    std::string builder;
    std::int64_t buildId = 0;
    std::int64_t commitIndex = 0;
    double runDuration = 0.0; // seconds, >= 0
    RunStatus runStatus = RunStatus::Fail;
    RunTagStatus runTagStatus = RunTagStatus::Failure;
    std::string command;
    std::string crashLog;
    std::string stackTrace;
    std::string stderrText; // field name "stderr" in files; renamed here (macro clash)
    std::string testSource;
    Label label = Label::FalseAlert;
};

const std::string& artifactText(const FailureRecord& r, ArtifactKind k);

struct Dataset {
    std::vector<FailureRecord> records;
    std::string provenance;
};

// Labels as 0 (false alert) / 1 (legitimate), aligned with records.
std::vector<int> labelVector(const Dataset& ds);

// Stable order by (builder, commitIndex); input order breaks remaining ties.
void sortByBuilderCommit(Dataset& ds);

struct RejectedLine {
    std::size_t line = 0; // 1-based
    std::string reason;
};

struct LoadResult {
    Dataset dataset;
    std::vector<RejectedLine> rejected;
};

// One JSON object per line. Malformed lines are rejected, not fatal; records
// duplicating (testId, buildId, builder, runDuration, runStatus) are rejected.
LoadResult loadRecords(std::istream& in, const std::string& sourceName);
LoadResult loadRecordsFile(const std::string& path);

void writeRecords(std::ostream& out, const Dataset& ds);
void writeRecordsFile(const std::string& path, const Dataset& ds);
void writeRejections(std::ostream& out, const std::vector<RejectedLine>& rejected);

struct BuildRange {
    std::string builder;
    std::int64_t firstBuildId = 0;
    std::int64_t lastBuildId = 0; // inclusive
};

struct AutoExclusionRule {
    double thresholdFactor = 10.0; // > 1
    std::int64_t absoluteFloor = 50; // >= 1
};

struct MassFailurePolicy {
    std::vector<BuildRange> explicitBuildExclusions;
    std::optional<AutoExclusionRule> autoRule;
};

struct ExcludedBuild {
    std::string builder;
    std::int64_t buildId = 0;
    std::size_t recordCount = 0;
    std::string reason; // "explicit" or "auto"
};

struct MassFilterResult {
    Dataset dataset;
    std::vector<ExcludedBuild> excluded;
};

// Drops explicitly excluded builds, then (if an auto rule is present)
// repeatedly drops builds whose failure count exceeds
// max(absoluteFloor, thresholdFactor * median per-build count) until stable,
// so a second application is a no-op.
MassFilterResult filterMassFailureBuilds(const Dataset& ds, const MassFailurePolicy& policy);

struct DatasetStats {
    std::size_t falseAlertCount = 0;
    std::size_t legitimateCount = 0;
    std::size_t uniqueFalseAlertTests = 0;
    std::size_t uniqueLegitimateTests = 0;
    std::size_t buildCount = 0; // distinct (builder, buildId)
    std::map<std::string, std::size_t> perSuite;
    std::map<std::string, std::size_t> perBuilder;
};

DatasetStats datasetStats(const Dataset& ds);
std::string statsJson(const DatasetStats& stats);

} // namespace triage
