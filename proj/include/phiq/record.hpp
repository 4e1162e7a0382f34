#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "phiq/abelian.hpp"
#include "phiq/compgroup.hpp"
#include "phiq/levels.hpp"

namespace phiq {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

const char* tool_version();
/// The in-repo JSON schema for result records.
const Json& result_record_schema();

/// Number when it fits in int64, decimal string otherwise.
Json bigint_json(const Integer& v);
Json bigint_list_json(std::span<const Integer> v);
Json level_json(const LevelInvariants& inv);
Json checks_json(const std::vector<Check>& checks);
Json verification_json(const std::vector<Check>& checks, bool ran);

/// Validates against the subset of JSON Schema used by our schema document
/// (type, enum, required, properties, items, minimum, $ref). Returns error paths.
std::vector<std::string> validate_against_schema(const Json& instance, const Json& schema);
std::vector<std::string> validate_record(const Json& record);

/// Append-only JSON-lines cache keyed by (N, q, tool version, method).
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path path);

  static std::string key(std::uint64_t N, std::uint64_t q, const std::string& method);
  /// PHI_CACHE if set, otherwise `fallback`.
  static std::filesystem::path resolve_path(const std::string& fallback);

  bool lookup(const std::string& key, Json& out) const;
  void store(const std::string& key, const Json& record);
  std::size_t size() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, Json> entries_;
};

}  // namespace phiq
