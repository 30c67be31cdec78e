#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_map_options(CLI::App* cmd, llmap::cli::MapSource& src) {
  cmd->add_option("--map", src.map, "POI fixture JSON file");
  cmd->add_option("--synth-seed", src.synth_seed, "Generate a synthetic city from this seed");
  cmd->add_option("--per-type", src.per_type, "POIs per type in the synthetic city")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--live", src.live, "Fetch POIs from LLMAP_PLACES_BASE_URL");
  cmd->add_option("--page-limit", src.page_limit, "Result pages per type for --live")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace llmap::cli;

  CLI::App app{"Constraint-aware POI route planning from natural-language requests"};
  app.require_subcommand(1);

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "Parse a request and plan one route");
  add_map_options(plan_cmd, plan.source);
  plan_cmd->add_option("--query", plan.query, "Natural-language request")->required();
  plan_cmd->add_option("--parser", plan.parser)->check(CLI::IsMember({"rule", "llm"}));
  plan_cmd->add_flag("--cot", plan.cot, "Use the step-by-step parser prompt");
  plan_cmd->add_option("--depart", plan.depart, "Departure, e.g. \"Mon 10:00\"");
  plan_cmd->add_option("--speed", plan.speed_kmh, "Travel speed in km/h")
      ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--out", plan.out)->check(CLI::IsMember({"json", "text"}));

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a labeled instruction dataset (JSONL)");
  add_map_options(gen_cmd, gen.source);
  gen_cmd->add_option("-n,--n", gen.n, "Number of samples")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Base seed; sample i uses seed + i");
  gen_cmd->add_option("--out", gen.out, "Output file, stdout when omitted");
  gen_cmd->add_option("--writer", gen.writer)->check(CLI::IsMember({"template", "llm"}));

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Plan every sample of a dataset and score it");
  add_map_options(eval_cmd, eval.source);
  eval_cmd->add_option("--dataset", eval.dataset, "JSONL dataset")->required();
  eval_cmd->add_option("--planner", eval.planner)->check(CLI::IsMember({"msgs", "oracle-true"}));
  eval_cmd->add_option("--parser", eval.parser)->check(CLI::IsMember({"rule", "llm", "label"}));
  eval_cmd->add_flag("--cot", eval.cot);
  eval_cmd->add_option("--out-dir", eval.out_dir, "Directory for CSV and JSON results");
  eval_cmd->add_option("--depart", eval.depart);
  eval_cmd->add_option("--speed", eval.speed_kmh)->check(CLI::PositiveNumber);

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the session HTTP API");
  add_map_options(serve_cmd, serve.source);
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port, "Defaults to LLMAP_PORT or 8080");
  serve_cmd->add_option("--parser", serve.parser)->check(CLI::IsMember({"rule", "llm"}));
  serve_cmd->add_flag("--cot", serve.cot);
  serve_cmd->add_option("--snapshot", serve.snapshot, "Persist sessions to this JSON file");
  serve_cmd->add_option("--depart", serve.depart);
  serve_cmd->add_option("--speed", serve.speed_kmh)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (plan_cmd->parsed()) {
    return run_plan(plan, std::cout, std::cerr);
  }
  if (gen_cmd->parsed()) {
    return run_gen(gen, std::cout, std::cerr);
  }
  if (eval_cmd->parsed()) {
    return run_eval(eval, std::cout, std::cerr);
  }
  return run_serve(serve, std::cout, std::cerr);
}
