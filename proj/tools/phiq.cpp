// phiq: component groups of J_0(Nq) at q and their Hecke action.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "phiq/commands.hpp"

int main(int argc, char** argv) {
  phiq::RunConfig cfg;
  CLI::App app{"Component group Phi_q(Nq) of J_0(Nq) with its Hecke action"};
  app.require_subcommand(1);
  app.set_version_flag("--version", phiq::tool_version());

  auto level_opts = [&](CLI::App* sub) {
    sub->add_option("--N", cfg.N, "tame level N >= 1")->required();
    sub->add_option("--q", cfg.q, "prime q >= 5 not dividing N")->required();
  };
  auto common_opts = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.output, "write output to this file instead of stdout");
  };
  auto method_opts = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "closed | snf | both")
        ->check(CLI::IsMember({"closed", "snf", "both"}));
    sub->add_flag("--full", cfg.full_presentation,
                  "use one generator per supersingular point when the level is small enough");
  };

  auto* analyze = app.add_subcommand("analyze", "level invariants and case tag");
  level_opts(analyze);
  common_opts(analyze);

  auto* group = app.add_subcommand("group", "invariant factors and summand table");
  level_opts(group);
  method_opts(group);
  common_opts(group);

  auto* hecke = app.add_subcommand("hecke", "matrix of a Hecke operator");
  level_opts(hecke);
  method_opts(hecke);
  common_opts(hecke);
  hecke->add_option("--op", cfg.op, "Tq, Tp(p) or Tl(l)");

  auto* kernel = app.add_subcommand("kernel", "kernel of an Eisenstein-type ideal");
  level_opts(kernel);
  method_opts(kernel);
  common_opts(kernel);
  kernel->add_option("--ideal", cfg.ideal, "e.g. \"3; Tq+1, Tp(7)-1\"")->required();

  auto* oracle = app.add_subcommand("oracle", "supersingular j-invariants in characteristic q");
  oracle->add_option("--q", cfg.q, "prime 5 <= q <= 200000")->required();
  common_opts(oracle);

  auto* table = app.add_subcommand("table", "sweep group --method both over ranges, JSON lines");
  table->add_option("--q-min", cfg.q_min);
  table->add_option("--q-max", cfg.q_max);
  table->add_option("--n-min", cfg.n_min);
  table->add_option("--n-max", cfg.n_max);
  table->add_option("--jobs", cfg.jobs, "worker threads (0: all cores)");
  table->add_option("--cache", cfg.cache, "cache file (default: $PHI_CACHE or phiq_cache.jsonl)");
  common_opts(table);

  auto* schema = app.add_subcommand("schema", "print the result record JSON schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : phiq::kExitInvalidInput;
  }

  if (schema->parsed()) {
    std::cout << phiq::result_record_schema().dump(2) << '\n';
    return 0;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  phiq::CommandOutput out = phiq::run_command(cfg);
  for (const auto& line : out.log) std::cerr << line << '\n';
  if (!out.error.empty()) std::cerr << "error: " << out.error << (out.error.back() == '\n' ? "" : "\n");

  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) {
      std::cerr << "error: cannot open " << cfg.output << '\n';
      return phiq::kExitInvalidInput;
    }
  }
  std::ostream& os = cfg.output.empty() ? std::cout : file;
  for (const auto& r : out.records) {
    std::string s = phiq::render(r, cfg.format);
    os << s;
    if (s.empty() || s.back() != '\n') os << '\n';
  }
  return out.exit_code;
}
