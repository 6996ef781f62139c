#include "triage/featurizer.hpp"
#include "triage/common.hpp"
#include "triage/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace triage {

using nlohmann::json;

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            if (current.size() >= 2) tokens.push_back(current);
            current.clear();
        }
    }
    if (current.size() >= 2) tokens.push_back(current);
    return tokens;
}

std::ptrdiff_t Vocabulary::indexOf(const std::string& token) const {
    auto it = lookup.find(token);
    return it == lookup.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

void Vocabulary::rebuildLookup() {
    lookup.clear();
    lookup.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i)
        lookup.emplace(tokens[i], i);
}

double FeatureVector::at(std::size_t col) const {
    auto it = std::lower_bound(index.begin(), index.end(), static_cast<std::uint32_t>(col));
    if (it == index.end() || *it != col) return 0.0;
    return value[static_cast<std::size_t>(it - index.begin())];
}

FeatureMatrix FeatureMatrix::fromVectors(const std::vector<FeatureVector>& vs) {
    FeatureMatrix m;
    m.rows = vs.size();
    m.cols = vs.empty() ? 0 : vs.front().dimension;
    m.rowPtr.resize(m.rows + 1, 0);
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].dimension != m.cols)
            throw DataError("feature vectors disagree on dimension");
        nnz += vs[i].index.size();
        m.rowPtr[i + 1] = nnz;
    }
    m.colIndex.reserve(nnz);
    m.value.reserve(nnz);
    for (const auto& v : vs) {
        m.colIndex.insert(m.colIndex.end(), v.index.begin(), v.index.end());
        m.value.insert(m.value.end(), v.value.begin(), v.value.end());
    }
    return m;
}

double FeatureMatrix::at(std::size_t row, std::size_t col) const {
    auto begin = colIndex.begin() + static_cast<std::ptrdiff_t>(rowPtr[row]);
    auto end = colIndex.begin() + static_cast<std::ptrdiff_t>(rowPtr[row + 1]);
    auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(col));
    if (it == end || *it != col) return 0.0;
    return value[static_cast<std::size_t>(it - colIndex.begin())];
}

FeatureMatrix FeatureMatrix::selectRows(const std::vector<std::size_t>& which) const {
    FeatureMatrix m;
    m.rows = which.size();
    m.cols = cols;
    m.rowPtr.resize(m.rows + 1, 0);
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < which.size(); ++i) {
        nnz += rowPtr[which[i] + 1] - rowPtr[which[i]];
        m.rowPtr[i + 1] = nnz;
    }
    m.colIndex.reserve(nnz);
    m.value.reserve(nnz);
    for (std::size_t row : which) {
        m.colIndex.insert(m.colIndex.end(),
                          colIndex.begin() + static_cast<std::ptrdiff_t>(rowPtr[row]),
                          colIndex.begin() + static_cast<std::ptrdiff_t>(rowPtr[row + 1]));
        m.value.insert(m.value.end(),
                       value.begin() + static_cast<std::ptrdiff_t>(rowPtr[row]),
                       value.begin() + static_cast<std::ptrdiff_t>(rowPtr[row + 1]));
    }
    return m;
}

FeatureVector FeatureMatrix::rowVector(std::size_t row) const {
    FeatureVector v;
    v.dimension = cols;
    v.index.assign(colIndex.begin() + static_cast<std::ptrdiff_t>(rowPtr[row]),
                   colIndex.begin() + static_cast<std::ptrdiff_t>(rowPtr[row + 1]));
    v.value.assign(value.begin() + static_cast<std::ptrdiff_t>(rowPtr[row]),
                   value.begin() + static_cast<std::ptrdiff_t>(rowPtr[row + 1]));
    return v;
}

std::size_t FittedFeaturizer::blockStart(ArtifactKind k) const {
    std::size_t start = kLeadingFeatures;
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i)
        start += vocabularies_[i].size();
    return start;
}

std::string FittedFeaturizer::columnName(std::size_t col) const {
    static constexpr const char* kLeadingNames[] = {
        "runDuration", "runStatus", "runTagStatus",
        "commandLength", "crashLogLength", "stackTraceLength",
        "stderrLength", "testSourceLength"};
    if (col < kLeadingFeatures) return kLeadingNames[col];
    std::size_t offset = col - kLeadingFeatures;
    for (const auto& vocab : vocabularies_) {
        if (offset < vocab.size()) return vocab.tokens[offset];
        offset -= vocab.size();
    }
    throw DataError("feature column out of range");
}

void FittedFeaturizer::recomputeDimension() {
    dimension_ = kLeadingFeatures;
    for (const auto& vocab : vocabularies_)
        dimension_ += vocab.size();
}

std::string FittedFeaturizer::serialize() const {
    json j;
    j["format"] = kFeaturizerFormat;
    json namespaces = json::array();
    for (std::size_t i = 0; i < kArtifactCount; ++i) {
        const Vocabulary& vocab = vocabularies_[i];
        json ns;
        ns["name"] = artifactName(static_cast<ArtifactKind>(i));
        ns["maxSize"] = vocab.maxSize;
        ns["fittedDocs"] = vocab.fittedDocs;
        ns["tokens"] = vocab.tokens;
        ns["idf"] = vocab.idf;
        namespaces.push_back(std::move(ns));
    }
    j["namespaces"] = std::move(namespaces);
    return j.dump();
}

FittedFeaturizer FittedFeaturizer::deserialize(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw DataError("featurizer file is not valid JSON");
    if (!j.contains("format") || j["format"] != kFeaturizerFormat)
        throw DataError("featurizer file has an unsupported format tag");
    if (!j.contains("namespaces") || !j["namespaces"].is_array() ||
        j["namespaces"].size() != kArtifactCount)
        throw DataError("featurizer file is missing namespace tables");

    FittedFeaturizer f;
    for (std::size_t i = 0; i < kArtifactCount; ++i) {
        const json& ns = j["namespaces"][i];
        Vocabulary& vocab = f.vocabularies_[i];
        if (ns.value("name", "") != artifactName(static_cast<ArtifactKind>(i)))
            throw DataError("featurizer namespaces are out of order");
        vocab.maxSize = ns.at("maxSize").get<std::size_t>();
        vocab.fittedDocs = ns.at("fittedDocs").get<std::size_t>();
        vocab.tokens = ns.at("tokens").get<std::vector<std::string>>();
        vocab.idf = ns.at("idf").get<std::vector<double>>();
        if (vocab.tokens.size() != vocab.idf.size())
            throw DataError("featurizer token and idf tables disagree");
        vocab.rebuildLookup();
    }
    f.recomputeDimension();
    return f;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t FittedFeaturizer::hash() const {
    return fnv1a64(serialize());
}

void FittedFeaturizer::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write featurizer file: " + path);
    out << serialize() << '\n';
}

FittedFeaturizer FittedFeaturizer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read featurizer file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize(buffer.str());
}

FittedFeaturizer fitFeaturizer(const Dataset& train, const FeaturizerConfig& config) {
    if (train.records.empty())
        throw DataError("cannot fit a featurizer on an empty training set");

    FittedFeaturizer f;
    for (std::size_t ni = 0; ni < kArtifactCount; ++ni) {
        auto kind = static_cast<ArtifactKind>(ni);
        std::map<std::string, std::size_t> df;
        for (const auto& r : train.records) {
            auto tokens = tokenize(artifactText(r, kind));
            std::sort(tokens.begin(), tokens.end());
            tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
            for (auto& t : tokens) ++df[t];
        }

        // Keep the most document-frequent tokens; lexicographic order breaks
        // ties and also fixes the column order inside the block.
        std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        std::size_t cap = config.maxSize[ni];
        if (ranked.size() > cap) ranked.resize(cap);
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        Vocabulary& vocab = f.vocabularies_[ni];
        vocab.maxSize = cap;
        vocab.fittedDocs = train.records.size();
        auto n = static_cast<double>(train.records.size());
        vocab.tokens.reserve(ranked.size());
        vocab.idf.reserve(ranked.size());
        for (const auto& [token, docFreq] : ranked) {
            vocab.tokens.push_back(token);
            vocab.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(docFreq))) + 1.0);
        }
        vocab.rebuildLookup();
    }
    f.recomputeDimension();
    return f;
}

FeatureVector transformRecord(const FailureRecord& r, const FittedFeaturizer& f) {
    FeatureVector v;
    v.dimension = f.dimension();
    v.index = {0, 1, 2, 3, 4, 5, 6, 7};
    v.value = {
        r.runDuration,
        static_cast<double>(static_cast<int>(r.runStatus)),
        static_cast<double>(static_cast<int>(r.runTagStatus)),
        static_cast<double>(r.command.size()),
        static_cast<double>(r.crashLog.size()),
        static_cast<double>(r.stackTrace.size()),
        static_cast<double>(r.stderrText.size()),
        static_cast<double>(r.testSource.size()),
    };

    std::size_t blockStart = kLeadingFeatures;
    for (std::size_t ni = 0; ni < kArtifactCount; ++ni) {
        auto kind = static_cast<ArtifactKind>(ni);
        const Vocabulary& vocab = f.vocabulary(kind);
        if (vocab.size() > 0) {
            std::map<std::size_t, double> counts;
            for (const auto& token : tokenize(artifactText(r, kind))) {
                auto idx = vocab.indexOf(token);
                if (idx >= 0) counts[static_cast<std::size_t>(idx)] += 1.0;
            }
            double sq = 0.0;
            for (auto& [offset, count] : counts) {
                count *= vocab.idf[offset];
                sq += count * count;
            }
            if (sq > 0.0) {
                double norm = std::sqrt(sq);
                for (const auto& [offset, weight] : counts) {
                    v.index.push_back(static_cast<std::uint32_t>(blockStart + offset));
                    v.value.push_back(weight / norm);
                }
            }
        }
        blockStart += vocab.size();
    }
    return v;
}

FeatureMatrix transformBatchSerial(const Dataset& ds, const FittedFeaturizer& f) {
    std::vector<FeatureVector> vs(ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i)
        vs[i] = transformRecord(ds.records[i], f);
    if (vs.empty()) {
        FeatureMatrix m;
        m.cols = f.dimension();
        m.rowPtr = {0};
        return m;
    }
    return FeatureMatrix::fromVectors(vs);
}

FeatureMatrix transformBatch(const Dataset& ds, const FittedFeaturizer& f) {
    std::vector<FeatureVector> vs(ds.records.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ds.records.size()); ++i)
        vs[static_cast<std::size_t>(i)] = transformRecord(ds.records[static_cast<std::size_t>(i)], f);
    if (vs.empty()) {
        FeatureMatrix m;
        m.cols = f.dimension();
        m.rowPtr = {0};
        return m;
    }
    return FeatureMatrix::fromVectors(vs);
}

} // namespace triage
