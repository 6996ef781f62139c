#pragma once

namespace triage {

inline constexpr const char* kVersion = "1.0.0";

// Format tags embedded in serialized artifacts so future revisions can
// detect and reject incompatible files.
inline constexpr const char* kModelFormat = "triage-forest-v1";
inline constexpr const char* kFeaturizerFormat = "triage-featurizer-v1";

} // namespace triage
