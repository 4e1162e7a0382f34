#include "phiq/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "phiq/compgroup.hpp"
#include "phiq/error.hpp"
#include "phiq/hecke.hpp"
#include "phiq/ssoracle.hpp"

namespace phiq {

namespace {

using Clock = std::chrono::steady_clock;

Json base_record(const std::string& command, const RunConfig& cfg, bool with_level) {
  Json r;
  r["schema_version"] = kSchemaVersion;
  r["tool_version"] = tool_version();
  r["command"] = command;
  Json in;
  if (with_level) in["N"] = cfg.N;
  in["q"] = cfg.q;
  r["input"] = in;
  r["timing_ms"] = 0.0;
  return r;
}

void stamp_timing(Json& r, Clock::time_point start) {
  r["timing_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_method(const std::string& m) {
  if (m != "closed" && m != "snf" && m != "both")
    throw Error(ErrorKind::OutOfRange, "method must be closed, snf or both");
}

bool uses_closed(const std::string& m) { return m != "snf"; }
bool uses_snf(const std::string& m) { return m != "closed"; }

Json matrix_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(bigint_list_json(m.row(i)));
  return a;
}

PresentationKind presentation_kind(const SigmaModel& model, bool want_full) {
  return want_full && model.point_count() <= kFullPresentationLimit ? PresentationKind::Full
                                                                     : PresentationKind::Collapsed;
}

Json group_json(const FinAbGroup& g, const char* presentation) {
  Json j;
  j["invariant_factors"] = bigint_list_json(g.invariant_factors());
  j["order"] = bigint_json(g.order());
  j["structure"] = g.structure_string();
  if (presentation) j["presentation"] = presentation;
  return j;
}

std::string combination_string(const std::vector<Integer>& coeffs,
                               const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    const Integer a = abs(coeffs[i]);
    if (first)
      os << (coeffs[i] < 0 ? "-" : "");
    else
      os << (coeffs[i] < 0 ? " - " : " + ");
    if (a != 1) os << a << "*";
    os << names[i];
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace

Json run_analyze(const RunConfig& cfg) {
  const auto start = Clock::now();
  LevelInvariants inv = level_invariants(cfg.N, cfg.q);
  Json r = base_record("analyze", cfg, true);
  r["level"] = level_json(inv);
  stamp_timing(r, start);
  return r;
}

Json run_group(const RunConfig& cfg) {
  const auto start = Clock::now();
  require_method(cfg.method);
  LevelInvariants inv = level_invariants(cfg.N, cfg.q);
  Json r = base_record("group", cfg, true);
  r["input"]["method"] = cfg.method;
  r["level"] = level_json(inv);

  std::vector<Check> checks;
  Json notes = Json::array();
  std::optional<Decomposition> dec;
  if (uses_closed(cfg.method)) dec = closed_form(inv);

  if (uses_snf(cfg.method)) {
    SigmaModel model = build_sigma_model(inv);
    PresentationKind kind = presentation_kind(model, cfg.full_presentation);
    PresentedGroup pg = presented_group(build_presentation(model, kind));
    r["group"] = group_json(pg.group, kind == PresentationKind::Full ? "full" : "collapsed");
    GroupEndo tq = tq_presentation_endo(model, pg);
    checks.push_back({"tq_involution:presented", check_involution(pg.group, tq), "T_q^2 = id"});
    if (dec) {
      VerificationReport rep = verify_decomposition(pg, *dec);
      checks.insert(checks.end(), rep.checks.begin(), rep.checks.end());
      std::vector<Check> tqc = cross_validate_tq(pg, tq, *dec);
      checks.insert(checks.end(), tqc.begin(), tqc.end());
    }
  } else {
    std::vector<Integer> orders = dec->orders();
    r["group"] = group_json(group_from_orders(orders), nullptr);
  }

  Json summands = Json::array();
  if (dec) {
    HeckeModule closed = hecke_module(*dec);
    checks.push_back({"tq_involution:closed", check_involution(closed.group, closed.tq), "T_q^2 = id"});
    for (std::size_t j = 0; j < dec->summands.size(); ++j) {
      const Summand& s = dec->summands[j];
      Json e;
      e["label"] = s.label;
      e["order"] = bigint_json(s.order);
      e["generator"] = s.generator.to_string();
      e["tq_row"] = bigint_list_json(dec->tq_matrix.column(j));
      e["note"] = s.note;
      summands.push_back(e);
    }
    for (const auto& n : dec->notes) notes.push_back(n);
    if (inv.case_tag == CaseTag::Case2)
      notes.push_back("B0 is generated by 3*Psi(t), which equals Psi(s) for every Sigma_2 point");
    if (inv.case_tag == CaseTag::Case3 || inv.case_tag == CaseTag::Case4)
      notes.push_back("A0 plays the role of Phi' (Phi'/Phi = Z/2); no separate generator of Phi is emitted");
  }
  r["summands"] = summands;
  r["verification"] = verification_json(checks, !checks.empty());
  r["notes"] = notes;
  stamp_timing(r, start);
  return r;
}

Json run_hecke(const RunConfig& cfg) {
  const auto start = Clock::now();
  require_method(cfg.method);
  LevelInvariants inv = level_invariants(cfg.N, cfg.q);
  HeckeOp op = parse_operator(cfg.op, inv);
  Json r = base_record("hecke", cfg, true);
  r["input"]["method"] = cfg.method;
  r["input"]["op"] = cfg.op;
  r["level"] = level_json(inv);

  Json o;
  o["name"] = op.to_string();
  std::vector<Check> checks;
  if (auto s = scalar_of(op, inv)) o["scalar"] = bigint_json(*s);

  if (op.kind() == HeckeKind::Tq) {
    bool invol = true;
    std::optional<Decomposition> dec;
    if (uses_closed(cfg.method)) {
      dec = closed_form(inv);
      HeckeModule closed = hecke_module(*dec);
      o["closed_matrix"] = matrix_json(dec->tq_matrix);
      invol = invol && check_involution(closed.group, closed.tq);
    }
    if (uses_snf(cfg.method)) {
      SigmaModel model = build_sigma_model(inv);
      PresentedGroup pg =
          presented_group(build_presentation(model, presentation_kind(model, cfg.full_presentation)));
      GroupEndo tq = tq_presentation_endo(model, pg);
      o["canonical_matrix"] = matrix_json(tq.matrix());
      invol = invol && check_involution(pg.group, tq);
      if (dec) checks = cross_validate_tq(pg, tq, *dec);
    }
    o["involution"] = invol;
    o["involution_checked"] = true;
    checks.push_back({"tq_involution", invol, "T_q^2 = id"});
  } else {
    o["involution_checked"] = false;
  }
  r["operator"] = o;
  r["verification"] = verification_json(checks, !checks.empty());
  stamp_timing(r, start);
  return r;
}

Json run_kernel(const RunConfig& cfg) {
  const auto start = Clock::now();
  require_method(cfg.method);
  LevelInvariants inv = level_invariants(cfg.N, cfg.q);
  IdealSpec ideal = parse_ideal(cfg.ideal, inv);
  Json r = base_record("kernel", cfg, true);
  r["input"]["method"] = cfg.method;
  r["input"]["ideal"] = cfg.ideal;
  r["level"] = level_json(inv);

  std::optional<KernelResult> closed_k, snf_k;
  Json gens = Json::array();
  if (uses_closed(cfg.method)) {
    Decomposition dec = closed_form(inv);
    HeckeModule mod = hecke_module(dec);
    closed_k = eisenstein_kernel(inv, mod, ideal);
    std::vector<std::string> names;
    for (const auto& s : dec.summands) names.push_back(s.label);
    for (const auto& g : closed_k->kernel.generators) {
      std::vector<Integer> c = mod.group.lift(g);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = reduce_mod(c[i], dec.summands[i].order);
      gens.push_back(combination_string(c, names));
    }
  }
  if (uses_snf(cfg.method)) {
    SigmaModel model = build_sigma_model(inv);
    PresentedGroup pg =
        presented_group(build_presentation(model, presentation_kind(model, cfg.full_presentation)));
    HeckeModule mod = hecke_module(model, pg);
    snf_k = eisenstein_kernel(inv, mod, ideal);
    if (!closed_k) {
      for (const auto& g : snf_k->kernel.generators) {
        std::vector<Integer> c = pg.group.lift(g);
        std::vector<std::string> names;
        for (const auto& l : pg.presentation.labels) names.push_back("Psi(" + l + ")");
        gens.push_back(combination_string(c, names));
      }
    }
  }
  const KernelResult& k = closed_k ? *closed_k : *snf_k;
  Json kj;
  kj["ideal"] = ideal.to_string();
  kj["invariant_factors"] = bigint_list_json(k.kernel.structure.invariant_factors());
  kj["order"] = bigint_json(k.kernel.structure.order());
  kj["dimension"] = k.dimension ? Json(*k.dimension) : Json(nullptr);
  kj["generators"] = gens;
  r["kernel"] = kj;

  std::vector<Check> checks;
  if (closed_k && snf_k) {
    const bool same = closed_k->kernel.structure.invariant_factors() ==
                      snf_k->kernel.structure.invariant_factors();
    checks.push_back({"kernel_routes_agree", same,
                      "closed " + closed_k->kernel.structure.structure_string() + ", presented " +
                          snf_k->kernel.structure.structure_string()});
  }
  r["verification"] = verification_json(checks, !checks.empty());
  stamp_timing(r, start);
  return r;
}

Json run_oracle(const RunConfig& cfg) {
  const auto start = Clock::now();
  LevelInvariants inv = level_invariants(1, cfg.q);
  SsCatalog cat = ss_catalog(cfg.q);
  QuadExtField fq2(cfg.q);
  Json r = base_record("oracle", cfg, false);
  r["level"] = level_json(inv);
  Json c;
  c["q"] = cat.q;
  c["nonresidue"] = cat.nonresidue;
  Json pts = Json::array();
  for (const auto& p : cat.points) pts.push_back({{"j", fq2.to_string(p.j)}, {"aut_order", p.aut_order}});
  c["points"] = pts;
  c["frobenius_orbits"] = cat.frobenius_orbits;
  r["catalog"] = c;
  VerificationReport rep = check_mass_formula_level1(cat, inv);
  r["verification"] = verification_json(rep.checks, true);
  stamp_timing(r, start);
  return r;
}

CommandOutput run_table(const RunConfig& cfg) {
  CommandOutput out;
  struct Pair {
    std::uint64_t N, q;
  };
  std::vector<Pair> pairs;
  for (std::uint64_t q = std::max<std::uint64_t>(cfg.q_min, 5); q <= cfg.q_max; ++q) {
    if (!is_prime(q)) continue;
    for (std::uint64_t N = std::max<std::uint64_t>(cfg.n_min, 1); N <= cfg.n_max; ++N) {
      if (N % q == 0) {
        out.log.push_back("skip N=" + std::to_string(N) + " q=" + std::to_string(q) + ": q | N");
        continue;
      }
      pairs.push_back({N, q});
    }
  }

  ResultCache cache(cfg.cache.empty() ? ResultCache::resolve_path("phiq_cache.jsonl")
                                      : std::filesystem::path(cfg.cache));
  std::vector<Json> results(pairs.size());
  std::vector<std::string> errors(pairs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> hits{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      const std::string key = ResultCache::key(pairs[i].N, pairs[i].q, "both");
      if (cache.lookup(key, results[i])) {
        ++hits;
        continue;
      }
      try {
        RunConfig c = cfg;
        c.N = pairs[i].N;
        c.q = pairs[i].q;
        c.method = "both";
        results[i] = run_group(c);
        cache.store(key, results[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(pairs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!errors[i].empty()) {
      out.exit_code = kExitInternal;
      out.error += "N=" + std::to_string(pairs[i].N) + " q=" + std::to_string(pairs[i].q) + ": " +
                   errors[i] + "\n";
      continue;
    }
    if (results[i]["verification"]["status"] == "failed" && out.exit_code == kExitOk)
      out.exit_code = kExitCrossCheck;
    out.records.push_back(std::move(results[i]));
  }
  out.log.push_back("records=" + std::to_string(out.records.size()) +
                    " cache_hits=" + std::to_string(hits.load()) + " cache=" + cache.path().string());
  return out;
}

CommandOutput run_command(const RunConfig& cfg) {
  CommandOutput out;
  try {
    if (cfg.subcommand == "table") {
      out = run_table(cfg);
    } else {
      Json r;
      if (cfg.subcommand == "analyze") r = run_analyze(cfg);
      else if (cfg.subcommand == "group") r = run_group(cfg);
      else if (cfg.subcommand == "hecke") r = run_hecke(cfg);
      else if (cfg.subcommand == "kernel") r = run_kernel(cfg);
      else if (cfg.subcommand == "oracle") r = run_oracle(cfg);
      else throw Error(ErrorKind::OutOfRange, "unknown subcommand '" + cfg.subcommand + "'");
      if (r.contains("verification") && r["verification"]["status"] == "failed")
        out.exit_code = kExitCrossCheck;
      out.records.push_back(std::move(r));
    }
    for (const auto& rec : out.records) {
      std::vector<std::string> errs = validate_record(rec);
      if (!errs.empty()) {
        out.exit_code = kExitInternal;
        out.error += "record fails schema: " + errs.front() + "\n";
      }
    }
  } catch (const Error& e) {
    out.exit_code = e.is_input_error() || e.kind() == ErrorKind::OutOfRange ? kExitInvalidInput
                                                                             : kExitInternal;
    out.error = e.what();
    out.records.clear();
  } catch (const std::exception& e) {
    out.exit_code = kExitInternal;
    out.error = e.what();
    out.records.clear();
  }
  return out;
}

namespace {

std::string csv_field(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, Json>>& out) {
  if (v.is_object()) {
    for (const auto& [k, sub] : v.items()) flatten(sub, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out.emplace_back(prefix, v);
  }
}

}  // namespace

std::string render(const Json& r, const std::string& format) {
  if (format == "json") return r.dump();
  std::ostringstream os;
  if (format == "csv") {
    if (r["command"] == "group") {
      // One row per summand.
      for (const auto& s : r["summands"]) {
        os << r["input"]["N"] << ',' << r["input"]["q"] << ',' << csv_field(r["level"]["case"]) << ','
           << csv_field(s["label"]) << ',' << csv_field(s["order"]) << ',' << csv_field(s["generator"])
           << ',' << csv_field(s["tq_row"]) << ',' << csv_field(r["verification"]["status"]) << '\n';
      }
      return os.str();
    }
    std::vector<std::pair<std::string, Json>> flat;
    flatten(r, "", flat);
    for (const auto& [k, v] : flat) os << csv_field(k) << ',' << csv_field(v) << '\n';
    return os.str();
  }
  if (format == "text") {
    std::vector<std::pair<std::string, Json>> flat;
    flatten(r, "", flat);
    for (const auto& [k, v] : flat) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    return os.str();
  }
  throw Error(ErrorKind::OutOfRange, "format must be json, csv or text");
}

}  // namespace phiq
