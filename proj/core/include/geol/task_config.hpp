#pragma once

#include <optional>
#include <string>

#include "geol/link_engine.hpp"

namespace geol {

/// Validated task configuration as parsed from a JSON document.
struct TaskConfig {
  LinkTask task;
  std::optional<std::string> cache_dir;
};

/// Parses and validates a JSON task document. Defaults: offset 0, chunksize
/// 5000, limit "all", output "inline". Every violation is collected and
/// reported at once through ConfigError; no input crashes the parser.
///
/// Document shape:
///   {
///     "source":   {"endpoint", "query", "id_var", "geo_var",
///                  "offset"?, "limit"?, "chunksize"?},
///     "target":   {...},
///     "relation": "within" | "covered by" | ...,
///     "output"?:  "inline" | <path>,
///     "cache_dir"?: <path>
///   }
TaskConfig parse_config(const std::string& json_text);

/// Deterministic JSON serialization of a parsed config (sorted keys,
/// defaults materialized). Equal configs serialize identically; used for
/// duplicate-submission detection.
std::string canonical_config(const TaskConfig& config);

}  // namespace geol
