#include "doctest.h"
#include "triage/common.hpp"
#include "triage/rng.hpp"
#include "triage/split.hpp"

#include <algorithm>
#include <set>

using namespace triage;

namespace {

std::vector<int> labelsOf(std::size_t negatives, std::size_t positives) {
    std::vector<int> labels(negatives, 0);
    labels.insert(labels.end(), positives, 1);
    return labels;
}

std::size_t positivesAt(const std::vector<int>& labels, const std::vector<std::size_t>& idx) {
    std::size_t count = 0;
    for (auto i : idx) count += static_cast<std::size_t>(labels[i]);
    return count;
}

void checkPartition(const std::vector<int>& labels,
                    const std::vector<std::vector<std::size_t>>& parts) {
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& part : parts) {
        for (auto i : part) {
            CHECK(i < labels.size());
            CHECK(seen.insert(i).second); // disjoint
        }
        total += part.size();
    }
    CHECK(total == labels.size()); // covering
}

} // namespace

TEST_SUITE("split") {

TEST_CASE("80/20 split of 100 records with 10 positives is exact") {
    auto labels = labelsOf(90, 10);
    auto s = stratifiedSplitIndices(labels, 0.8, 17);
    CHECK(s.train.size() == 80);
    CHECK(s.test.size() == 20);
    CHECK(positivesAt(labels, s.train) == 8);
    CHECK(positivesAt(labels, s.test) == 2);
    checkPartition(labels, {s.train, s.test});
}

TEST_CASE("splits are deterministic per seed") {
    auto labels = labelsOf(50, 20);
    auto a = stratifiedSplitIndices(labels, 0.7, 99);
    auto b = stratifiedSplitIndices(labels, 0.7, 99);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    auto c = stratifiedSplitIndices(labels, 0.7, 100);
    CHECK(a.train != c.train); // different stream, different shuffle
}

TEST_CASE("odd class sizes round to within one of the ratio") {
    auto labels = labelsOf(40, 7);
    auto s = stratifiedSplitIndices(labels, 0.8, 3);
    auto trainPos = positivesAt(labels, s.train);
    CHECK(trainPos >= 5);
    CHECK(trainPos <= 6);
    CHECK(trainPos + positivesAt(labels, s.test) == 7);
    CHECK(positivesAt(labels, s.test) >= 1); // both sides keep each class
}

TEST_CASE("random splits always partition and stratify") {
    auto rng = substream(515, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t neg = 2 + uniformIndex(rng, 60);
        std::size_t pos = 2 + uniformIndex(rng, 60);
        double ratio = 0.1 + 0.8 * uniformReal(rng);
        auto labels = labelsOf(neg, pos);
        auto s = stratifiedSplitIndices(labels, ratio, rng());
        checkPartition(labels, {s.train, s.test});

        auto wanted = static_cast<std::size_t>(std::llround(
            ratio * static_cast<double>(pos)));
        wanted = std::clamp<std::size_t>(wanted, 1, pos - 1);
        CHECK(positivesAt(labels, s.train) == wanted);
    }
}

TEST_CASE("split preconditions are enforced") {
    CHECK_THROWS_AS(stratifiedSplitIndices(labelsOf(10, 10), 0.0, 1), UsageError);
    CHECK_THROWS_AS(stratifiedSplitIndices(labelsOf(10, 10), 1.0, 1), UsageError);
    CHECK_THROWS_AS(stratifiedSplitIndices(labelsOf(10, 0), 0.8, 1), DataError);
    CHECK_THROWS_AS(stratifiedSplitIndices(labelsOf(10, 1), 0.8, 1), DataError);
    CHECK_THROWS_AS(stratifiedSplitIndices({0, 1, 2}, 0.8, 1), DataError);
}

TEST_CASE("5 folds of 10 records with 5 positives hold 1+1 each") {
    auto labels = labelsOf(5, 5);
    auto folds = stratifiedKFoldIndices(labels, 5, 21);
    REQUIRE(folds.size() == 5);
    for (const auto& fold : folds) {
        CHECK(fold.size() == 2);
        CHECK(positivesAt(labels, fold) == 1);
    }
    checkPartition(labels, folds);
}

TEST_CASE("fold sizes stay within one on awkward counts") {
    for (auto [neg, pos] : {std::pair<std::size_t, std::size_t>{100, 37}, {131, 6}, {7, 119}}) {
        auto labels = labelsOf(neg, pos);
        auto folds = stratifiedKFoldIndices(labels, 5, 8);
        checkPartition(labels, folds);
        std::size_t minSize = labels.size(), maxSize = 0;
        std::size_t minPos = labels.size(), maxPos = 0;
        for (const auto& fold : folds) {
            minSize = std::min(minSize, fold.size());
            maxSize = std::max(maxSize, fold.size());
            auto p = positivesAt(labels, fold);
            minPos = std::min(minPos, p);
            maxPos = std::max(maxPos, p);
        }
        CHECK(maxSize - minSize <= 1);
        CHECK(maxPos - minPos <= 1);
    }
}

TEST_CASE("folds are deterministic per seed") {
    auto labels = labelsOf(30, 12);
    CHECK(stratifiedKFoldIndices(labels, 4, 6) == stratifiedKFoldIndices(labels, 4, 6));
}

TEST_CASE("a class smaller than k is rejected by name") {
    auto labels = labelsOf(20, 3);
    CHECK_THROWS_WITH_AS(stratifiedKFoldIndices(labels, 5, 1),
                         doctest::Contains("class 1"), DataError);
    CHECK_THROWS_AS(stratifiedKFoldIndices(labels, 1, 1), UsageError);
}

TEST_CASE("two folds on two-per-class data split each class evenly") {
    auto labels = labelsOf(2, 2);
    auto folds = stratifiedKFoldIndices(labels, 2, 5);
    REQUIRE(folds.size() == 2);
    for (const auto& fold : folds) {
        CHECK(fold.size() == 2);
        CHECK(positivesAt(labels, fold) == 1);
    }
    checkPartition(labels, folds);
}

} // TEST_SUITE
