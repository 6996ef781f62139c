#pragma once

#include "triage/corpus.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace triage {

// Lowercase, split on every non-alphanumeric character, drop tokens shorter
// than 2 characters. Order and multiplicity preserved.
std::vector<std::string> tokenize(std::string_view text);

struct FeaturizerConfig {
    // Vocabulary cap per artifact namespace, in ArtifactKind order.
    std::array<std::size_t, kArtifactCount> maxSize{2000, 2000, 2000, 2000, 2000};

    static FeaturizerConfig uniform(std::size_t cap) {
        FeaturizerConfig c;
        c.maxSize.fill(cap);
        return c;
    }
};

struct Vocabulary {
    std::vector<std::string> tokens; // lexicographic; position = column offset
    std::vector<double> idf;         // parallel to tokens
    std::size_t maxSize = 0;
    std::size_t fittedDocs = 0;

    std::size_t size() const { return tokens.size(); }
    // -1 if absent.
    std::ptrdiff_t indexOf(const std::string& token) const;

    std::unordered_map<std::string, std::size_t> lookup; // rebuilt on load
    void rebuildLookup();
};

// Sparse vector over the fitted layout. The 8 leading columns (runDuration,
// runStatus, runTagStatus, 5 artifact lengths) are always materialized.
struct FeatureVector {
    std::size_t dimension = 0;
    std::vector<std::uint32_t> index; // strictly increasing
    std::vector<double> value;

    double at(std::size_t col) const;
};

struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> rowPtr; // size rows + 1
    std::vector<std::uint32_t> colIndex;
    std::vector<double> value;

    static FeatureMatrix fromVectors(const std::vector<FeatureVector>& vs);
    double at(std::size_t row, std::size_t col) const;
    FeatureMatrix selectRows(const std::vector<std::size_t>& which) const;
    FeatureVector rowVector(std::size_t row) const;
};

inline constexpr std::size_t kLeadingFeatures = 8;

class FittedFeaturizer {
public:
    std::size_t dimension() const { return dimension_; }
    const Vocabulary& vocabulary(ArtifactKind k) const {
        return vocabularies_[static_cast<std::size_t>(k)];
    }
    // Column offset where an artifact's TF-IDF block begins.
    std::size_t blockStart(ArtifactKind k) const;
    std::string columnName(std::size_t col) const;

    // Canonical serialization: stable bytes for identical fits.
    std::string serialize() const;
    static FittedFeaturizer deserialize(const std::string& text);
    std::uint64_t hash() const; // FNV-1a 64 over serialize()

    void save(const std::string& path) const;
    static FittedFeaturizer load(const std::string& path);

private:
    std::array<Vocabulary, kArtifactCount> vocabularies_;
    std::size_t dimension_ = kLeadingFeatures;

    void recomputeDimension();
    friend FittedFeaturizer fitFeaturizer(const Dataset&, const FeaturizerConfig&);
};

// Vocabulary from training artifacts only: per namespace, the maxSize most
// document-frequent tokens (ties lexicographic), idf = ln((1+N)/(1+df)) + 1.
// Throws DataError on an empty training set.
FittedFeaturizer fitFeaturizer(const Dataset& train, const FeaturizerConfig& config);

// TF-IDF entries are raw term count * idf, then each namespace block is
// L2-normalized (zero block stays zero). Out-of-vocabulary tokens vanish.
FeatureVector transformRecord(const FailureRecord& r, const FittedFeaturizer& f);

FeatureMatrix transformBatch(const Dataset& ds, const FittedFeaturizer& f);
FeatureMatrix transformBatchSerial(const Dataset& ds, const FittedFeaturizer& f);

std::uint64_t fnv1a64(std::string_view bytes);

} // namespace triage
