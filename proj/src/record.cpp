#include "phiq/record.hpp"

#include <cstdlib>
#include <fstream>

#include "phiq/error.hpp"
#include "phiq/version.hpp"

namespace phiq {

const char* tool_version() { return kToolVersion; }

const Json& result_record_schema() {
  static const Json schema = Json::parse(kResultRecordSchema);
  return schema;
}

Json bigint_json(const Integer& v) {
  if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
  return v.get_str();
}

Json bigint_list_json(std::span<const Integer> v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(bigint_json(x));
  return a;
}

Json level_json(const LevelInvariants& inv) {
  Json f = Json::array();
  for (const auto& pp : inv.factorization.factors) f.push_back({pp.prime, pp.exponent});
  Json j;
  j["N"] = inv.N;
  j["q"] = inv.q;
  j["factorization"] = f;
  j["nu"] = inv.nu;
  j["u"] = inv.u;
  j["v"] = inv.v;
  j["Q"] = bigint_json(inv.Q);
  j["twelve_n"] = bigint_json(inv.twelve_n);
  j["s2"] = bigint_json(inv.s2);
  j["s4"] = bigint_json(inv.s4);
  j["s6"] = bigint_json(inv.s6);
  j["case"] = case_name(inv.case_tag);
  return j;
}

Json checks_json(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return a;
}

Json verification_json(const std::vector<Check>& checks, bool ran) {
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.ok;
  Json j;
  j["status"] = !ran ? "not_run" : (ok ? "verified" : "failed");
  j["checks"] = checks_json(checks);
  return j;
}

namespace {

bool matches_type(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

const Json& resolve_ref(const Json& node, const Json& root) {
  if (!node.contains("$ref")) return node;
  const std::string ref = node["$ref"].get<std::string>();
  const std::string prefix = "#/definitions/";
  if (ref.rfind(prefix, 0) != 0) throw Error(ErrorKind::OutOfRange, "unsupported $ref " + ref);
  return root.at("definitions").at(ref.substr(prefix.size()));
}

void validate_node(const Json& v, const Json& raw, const Json& root, const std::string& path,
                   std::vector<std::string>& errors) {
  const Json& s = resolve_ref(raw, root);
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || matches_type(v, t.get<std::string>());
    } else {
      ok = matches_type(v, s["type"].get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": expected type " + s["type"].dump());
      return;
    }
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(path + ": value " + v.dump() + " not in enum");
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
    errors.push_back(path + ": below minimum");
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& r : s["required"])
        if (!v.contains(r.get<std::string>())) errors.push_back(path + ": missing " + r.get<std::string>());
    if (s.contains("properties"))
      for (const auto& [k, sub] : s["properties"].items())
        if (v.contains(k)) validate_node(v[k], sub, root, path + "/" + k, errors);
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i)
      validate_node(v[i], s["items"], root, path + "/" + std::to_string(i), errors);
  }
}

}  // namespace

std::vector<std::string> validate_against_schema(const Json& instance, const Json& schema) {
  std::vector<std::string> errors;
  validate_node(instance, schema, schema, "", errors);
  return errors;
}

std::vector<std::string> validate_record(const Json& record) {
  return validate_against_schema(record, result_record_schema());
}

ResultCache::ResultCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json entry = Json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.contains("key") || !entry.contains("record")) continue;
    entries_[entry["key"].get<std::string>()] = entry["record"];
  }
}

std::string ResultCache::key(std::uint64_t N, std::uint64_t q, const std::string& method) {
  return std::to_string(N) + "|" + std::to_string(q) + "|" + tool_version() + "|" + method;
}

std::filesystem::path ResultCache::resolve_path(const std::string& fallback) {
  if (const char* env = std::getenv("PHI_CACHE"); env && *env) return env;
  return fallback;
}

bool ResultCache::lookup(const std::string& k, Json& out) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(k);
  if (it == entries_.end()) return false;
  out = it->second;
  return true;
}

void ResultCache::store(const std::string& k, const Json& record) {
  std::lock_guard lock(mu_);
  if (entries_.count(k)) return;
  entries_[k] = record;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app);
  Json entry;
  entry["key"] = k;
  entry["record"] = record;
  out << entry.dump() << '\n';
}

std::size_t ResultCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace phiq
