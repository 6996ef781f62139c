#include "triage/split.hpp"
#include "triage/common.hpp"
#include "triage/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace triage {

namespace {

// Class-member index lists in dataset order; labels are 0 or 1.
std::array<std::vector<std::size_t>, 2> byClass(const std::vector<int>& labels) {
    std::array<std::vector<std::size_t>, 2> classes;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            throw DataError("labels must be 0 or 1");
        classes[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    return classes;
}

} // namespace

SplitIndices stratifiedSplitIndices(const std::vector<int>& labels, double ratio,
                                    std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw UsageError("split ratio must lie strictly between 0 and 1");
    auto classes = byClass(labels);
    for (int c = 0; c < 2; ++c) {
        if (classes[c].empty())
            throw DataError("stratified split requires both classes present");
        if (classes[c].size() < 2) {
            std::ostringstream msg;
            msg << "class " << c << " has fewer than 2 records";
            throw DataError(msg.str());
        }
    }

    SplitIndices out;
    for (int c = 0; c < 2; ++c) {
        auto& members = classes[c];
        auto rng = substream(seed, static_cast<std::uint64_t>(c));
        deterministicShuffle(members, rng);
        auto wanted = static_cast<std::size_t>(
            std::llround(ratio * static_cast<double>(members.size())));
        // Both halves keep at least one member of each class.
        wanted = std::clamp<std::size_t>(wanted, 1, members.size() - 1);
        out.train.insert(out.train.end(), members.begin(),
                         members.begin() + static_cast<std::ptrdiff_t>(wanted));
        out.test.insert(out.test.end(), members.begin() + static_cast<std::ptrdiff_t>(wanted),
                        members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::vector<std::vector<std::size_t>> stratifiedKFoldIndices(const std::vector<int>& labels,
                                                             int k, std::uint64_t seed) {
    if (k < 2) throw UsageError("fold count must be >= 2");
    auto classes = byClass(labels);
    for (int c = 0; c < 2; ++c) {
        if (classes[c].size() < static_cast<std::size_t>(k)) {
            std::ostringstream msg;
            msg << "class " << c << " has " << classes[c].size() << " records, fewer than " << k
                << " folds";
            throw DataError(msg.str());
        }
    }

    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    // The dealing cursor continues across classes so per-class remainders do
    // not stack on the first folds; total fold sizes then differ by at most 1.
    std::size_t cursor = 0;
    for (int c = 0; c < 2; ++c) {
        auto& members = classes[c];
        auto rng = substream(seed, static_cast<std::uint64_t>(c) + 2);
        deterministicShuffle(members, rng);
        for (std::size_t i = 0; i < members.size(); ++i)
            folds[(cursor + i) % static_cast<std::size_t>(k)].push_back(members[i]);
        cursor = (cursor + members.size()) % static_cast<std::size_t>(k);
    }
    for (auto& fold : folds)
        std::sort(fold.begin(), fold.end());
    return folds;
}

} // namespace triage
