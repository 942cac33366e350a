#pragma once

namespace hurstscale {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kManifestSchemaVersion = 1;

}  // namespace hurstscale
