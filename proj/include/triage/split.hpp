#pragma once

#include <cstdint>
#include <vector>

namespace triage {

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Per class: llround(ratio * classCount) indices to train (clamped so both
// sides keep at least one), rest to test. Output indices sorted ascending.
// Throws UsageError for ratio outside (0,1), DataError when a class has
// fewer than 2 members or only one class exists.
SplitIndices stratifiedSplitIndices(const std::vector<int>& labels, double ratio,
                                    std::uint64_t seed);

// k folds, each class dealt round-robin after a per-class shuffle, so
// per-fold class counts differ by at most 1 from proportional.
// Throws DataError naming the class with fewer than k members.
std::vector<std::vector<std::size_t>> stratifiedKFoldIndices(const std::vector<int>& labels,
                                                             int k, std::uint64_t seed);

} // namespace triage
