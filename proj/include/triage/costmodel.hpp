#pragma once

#include <cstdint>
#include <string>

namespace triage {

struct CostInputs {
    std::int64_t falseAlertCount = 0;
    std::int64_t legitCount = 0;
    double rerunSecondsPerFalseAlert = 2.3;
    double rerunSecondsPerLegit = 1.0;
    double predictMillisecondsPerFailure = 0.001;
    double trainingMinutes = 0.0;
    std::int64_t buildCount = 1;

    void validate() const; // throws UsageError
};

struct CostReport {
    double rerunTotalHours = 0.0;
    double rerunPerBuildMinutes = 0.0;
    double classifierTotalSeconds = 0.0;
    double classifierPerBuildMilliseconds = 0.0;
    double speedupFactor = 0.0;
    bool speedupUnbounded = false; // zero classifier time with nonzero rerun time
    double trainingMinutes = 0.0;  // reported separately, amortized once per model
};

CostReport compareCosts(const CostInputs& ci);

std::string costTable(const CostInputs& ci, const CostReport& report);
std::string costJson(const CostInputs& ci, const CostReport& report);

} // namespace triage
