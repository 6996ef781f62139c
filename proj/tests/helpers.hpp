#pragma once

#include "triage/corpus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace triage::testing {

inline FailureRecord makeRecord(const std::string& testId, Label label,
                                std::int64_t buildId = 1000, std::int64_t commitIndex = 50,
                                const std::string& builder = "linux_tester",
                                const std::string& suite = "browser_tests") {
    FailureRecord r;
    r.testId = testId;
    r.suite = suite;
    r.builder = builder;
    r.buildId = buildId;
    r.commitIndex = commitIndex;
    r.runDuration = 1.0;
    r.runStatus = RunStatus::Fail;
    r.runTagStatus = RunTagStatus::Failure;
    r.command = "run " + testId;
    r.stackTrace = "trace for " + testId;
    r.label = label;
    return r;
}

inline Dataset makeDataset(std::size_t falseAlerts, std::size_t legitimate) {
    Dataset ds;
    for (std::size_t i = 0; i < falseAlerts; ++i)
        ds.records.push_back(makeRecord("fa_" + std::to_string(i), Label::FalseAlert,
                                        1000 + static_cast<std::int64_t>(i % 10)));
    for (std::size_t i = 0; i < legitimate; ++i)
        ds.records.push_back(makeRecord("legit_" + std::to_string(i), Label::Legitimate,
                                        1000 + static_cast<std::int64_t>(i % 10)));
    return ds;
}

} // namespace triage::testing
