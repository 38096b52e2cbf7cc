#pragma once

#include <string>
#include <string_view>

#include "smellprop/dataset.hpp"

namespace smellprop {

inline constexpr int kManifestSchemaVersion = 1;

// JSONL: a header line, one line per instance, then one line per method.
std::string serialize_manifest(const DatasetManifest &manifest);

// Parses and validates a serialized manifest. Throws ParseError/DataError.
DatasetManifest parse_manifest(std::string_view text);

}  // namespace smellprop
