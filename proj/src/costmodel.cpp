#include "triage/costmodel.hpp"
#include "triage/common.hpp"

#include "json.hpp"

#include <iomanip>
#include <sstream>

namespace triage {

using nlohmann::json;

void CostInputs::validate() const {
    if (falseAlertCount < 0 || legitCount < 0)
        throw UsageError("failure counts must be non-negative");
    if (rerunSecondsPerFalseAlert < 0.0 || rerunSecondsPerLegit < 0.0)
        throw UsageError("rerun seconds must be non-negative");
    if (predictMillisecondsPerFailure < 0.0)
        throw UsageError("prediction milliseconds must be non-negative");
    if (trainingMinutes < 0.0)
        throw UsageError("training minutes must be non-negative");
    if (buildCount < 1)
        throw UsageError("build count must be >= 1");
}

CostReport compareCosts(const CostInputs& ci) {
    ci.validate();
    CostReport report;
    double rerunSeconds = static_cast<double>(ci.falseAlertCount) * ci.rerunSecondsPerFalseAlert +
                          static_cast<double>(ci.legitCount) * ci.rerunSecondsPerLegit;
    double failures = static_cast<double>(ci.falseAlertCount + ci.legitCount);
    double classifierMs = failures * ci.predictMillisecondsPerFailure;
    auto builds = static_cast<double>(ci.buildCount);

    report.rerunTotalHours = rerunSeconds / 3600.0;
    report.rerunPerBuildMinutes = rerunSeconds / builds / 60.0;
    report.classifierTotalSeconds = classifierMs / 1000.0;
    report.classifierPerBuildMilliseconds = classifierMs / builds;
    report.trainingMinutes = ci.trainingMinutes;
    if (classifierMs > 0.0) {
        report.speedupFactor = rerunSeconds / report.classifierTotalSeconds;
    } else if (rerunSeconds > 0.0) {
        report.speedupUnbounded = true;
    }
    return report;
}

std::string costTable(const CostInputs& ci, const CostReport& report) {
    std::ostringstream out;
    out << std::fixed;
    out << "Rerun-based detection\n";
    out << "  false alerts: " << ci.falseAlertCount << " x " << std::setprecision(2)
        << ci.rerunSecondsPerFalseAlert << " s\n";
    out << "  legitimate:   " << ci.legitCount << " x " << ci.rerunSecondsPerLegit << " s\n";
    out << "  total:        " << std::setprecision(1) << report.rerunTotalHours << " h\n";
    out << "  per build:    " << report.rerunPerBuildMinutes << " min (" << ci.buildCount
        << " builds)\n";
    out << "Classifier-based detection\n";
    out << "  per failure:  " << std::setprecision(4) << ci.predictMillisecondsPerFailure
        << " ms\n";
    out << "  total:        " << std::setprecision(3) << report.classifierTotalSeconds << " s\n";
    out << "  per build:    " << report.classifierPerBuildMilliseconds << " ms\n";
    out << "  training:     " << std::setprecision(1) << report.trainingMinutes
        << " min (once per model, amortized across builds)\n";
    if (report.speedupUnbounded)
        out << "Speedup: unbounded (zero classifier time)\n";
    else
        out << "Speedup: " << std::scientific << std::setprecision(3) << report.speedupFactor
            << "x\n";
    return out.str();
}

std::string costJson(const CostInputs& ci, const CostReport& report) {
    json j;
    j["inputs"] = {
        {"falseAlertCount", ci.falseAlertCount},
        {"legitCount", ci.legitCount},
        {"rerunSecondsPerFalseAlert", ci.rerunSecondsPerFalseAlert},
        {"rerunSecondsPerLegit", ci.rerunSecondsPerLegit},
        {"predictMillisecondsPerFailure", ci.predictMillisecondsPerFailure},
        {"trainingMinutes", ci.trainingMinutes},
        {"buildCount", ci.buildCount},
    };
    j["rerunTotalHours"] = report.rerunTotalHours;
    j["rerunPerBuildMinutes"] = report.rerunPerBuildMinutes;
    j["classifierTotalSeconds"] = report.classifierTotalSeconds;
    j["classifierPerBuildMilliseconds"] = report.classifierPerBuildMilliseconds;
    j["trainingMinutes"] = report.trainingMinutes;
    j["speedupUnbounded"] = report.speedupUnbounded;
    if (!report.speedupUnbounded) j["speedupFactor"] = report.speedupFactor;
    return j.dump(2);
}

} // namespace triage
