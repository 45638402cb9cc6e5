#include "tal/bench.hh"
#include "tal/equivalence.hh"
#include "tal/errors.hh"
#include "tal/json_io.hh"
#include "tal/learner.hh"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <new>
#include <iostream>
#include <sstream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_input = 2;
constexpr int exit_budget = 3;

tal::ClockCeiling parse_ceilings(const std::string& text) {
  std::vector<int> bounds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad ceiling entry '" + item + "'");
    bounds.push_back(v);
  }
  return tal::ClockCeiling(bounds);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw tal::ParseError(path + ": cannot write file");
  out << j.dump(2) << "\n";
}

struct LearnArgs {
  std::string mode = "powerful";
  std::string target;
  std::size_t clocks = 0;
  std::string ceilings;
  bool evidence_closed = false;
  std::string dump_dir;
  std::uint64_t max_instances = 1'000'000;
  std::uint64_t max_rounds = 0;
  double time_budget_s = 0;
  std::string queue_order = "guessed";
  std::string stats;
  std::string output;
  bool render_guards = false;
  bool progress = false;
};

int cmd_learn(const LearnArgs& args) {
  auto mode = tal::parse_mode(args.mode);
  if (!mode) throw std::invalid_argument("unknown mode '" + args.mode + "'");
  tal::TimedAutomaton target = tal::complete(tal::load_automaton(args.target));
  if (args.clocks && args.clocks != target.clocks())
    throw std::invalid_argument("--clocks " + std::to_string(args.clocks) + " but the target has " +
                                std::to_string(target.clocks()));
  if (!args.ceilings.empty()) {
    tal::ClockCeiling k = parse_ceilings(args.ceilings);
    if (k.size() != target.clocks()) throw std::invalid_argument("--ceilings has the wrong number of entries");
    target.set_ceiling(k);
  }
  tal::LearnOptions options;
  options.evidence_closed = args.evidence_closed;
  options.max_instances = args.max_instances;
  options.max_rounds = args.max_rounds;
  options.time_budget_ms = args.time_budget_s * 1000;
  if (args.queue_order == "size")
    options.queue_order = tal::QueueOrder::table_size;
  else if (args.queue_order != "guessed")
    throw std::invalid_argument("unknown queue order '" + args.queue_order + "'");
  if (!args.dump_dir.empty()) options.dump_dir = args.dump_dir;
  if (args.progress)
    options.progress = [](std::uint64_t tables, std::uint64_t key, std::uint64_t rounds) {
      std::cerr << "explored " << tables << " instances, key " << key << ", " << rounds << " hypotheses\n";
    };

  auto start = std::chrono::steady_clock::now();
  tal::BenchRow row;
  row.case_id = args.target;
  row.mode = *mode;
  try {
    tal::LearnOutcome out = tal::learn_target(target, *mode, options);
    row.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    row.stats = out.stats;
    row.tables_explored = out.tables_explored;
    row.learned_locations = out.hypothesis.locations().size();
    write_json(tal::to_json(out.hypothesis, args.render_guards), args.output);
    std::cerr << "locations " << row.learned_locations << ", membership " << out.stats.membership
              << ", equivalence " << out.stats.equivalence << ", reset " << out.stats.reset << ", tables "
              << out.tables_explored << ", " << static_cast<long long>(row.time_ms) << " ms\n";
  } catch (const tal::InstanceBudgetExhausted& e) {
    row.timeout = true;
    std::cerr << "budget exhausted: " << e.what() << "\n";
  } catch (const tal::TimeBudgetExhausted& e) {
    row.timeout = true;
    std::cerr << "budget exhausted: " << e.what() << "\n";
  } catch (const tal::RoundBudgetExhausted& e) {
    row.timeout = true;
    std::cerr << "budget exhausted: " << e.what() << "\n";
  } catch (const std::bad_alloc&) {
    row.timeout = true;
    std::cerr << "budget exhausted: out of memory\n";
  }
  if (row.timeout)
    row.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (!args.stats.empty()) {
    std::ofstream csv(args.stats);
    if (!csv) throw tal::ParseError(args.stats + ": cannot write file");
    tal::write_csv_header(csv);
    tal::write_csv_row(csv, row);
  }
  return row.timeout ? exit_budget : exit_ok;
}

int cmd_equiv(const std::string& left, const std::string& right) {
  auto a = tal::complete(tal::load_automaton(left));
  auto b = tal::complete(tal::load_automaton(right));
  auto verdict = tal::equivalent(a, b);
  if (!verdict) {
    std::cout << "equivalent\n";
    return exit_ok;
  }
  std::cout << tal::to_json(*verdict).dump() << "\n";
  return exit_negative;
}

int cmd_run(const std::string& path, const std::string& word_text) {
  auto a = tal::complete(tal::load_automaton(path));
  auto word = tal::parse_delay_word(word_text);
  for (const auto& l : word)
    if (!a.action_index(l.action)) throw std::invalid_argument("action '" + l.action + "' is not in the alphabet");
  auto result = tal::run(a, word);
  std::string resets;
  for (std::size_t i = 0; i < result.reset_word.size(); ++i) {
    if (i) resets += ';';
    resets += tal::format_resets(result.reset_word[i].resets);
  }
  std::cout << (result.accepted ? "accepted" : "rejected") << "\n" << resets << "\n";
  return result.accepted ? exit_ok : exit_negative;
}

int cmd_complete(const std::string& path, const std::string& output) {
  write_json(tal::to_json(tal::complete(tal::load_automaton(path))), output);
  return exit_ok;
}

void add_case_options(CLI::App* cmd, tal::CaseSpec& spec) {
  cmd->add_option("--locations", spec.locations, "Number of locations")->check(CLI::PositiveNumber);
  cmd->add_option("--actions", spec.actions, "Alphabet size")->check(CLI::PositiveNumber);
  cmd->add_option("--clocks", spec.clocks, "Number of clocks")->check(CLI::Range(0, 10));
  cmd->add_option("--max-constant", spec.max_constant, "Largest guard constant")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", spec.seed, "Random seed");
  cmd->add_option("--accept-prob", spec.accept_prob, "Probability that a location accepts")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-intervals", spec.max_intervals, "Guard boxes per location and action")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--always-reset", spec.always_reset, "Reset every clock on every transition");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active learning of deterministic timed automata"};
  app.require_subcommand(1);

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "Learn a target automaton from a simulated teacher");
  learn_cmd->add_option("--mode", learn.mode, "powerful, normal or rta")->check(CLI::IsMember({"powerful", "normal", "rta"}));
  learn_cmd->add_option("--target", learn.target, "Target automaton (JSON)")->required();
  learn_cmd->add_option("--clocks", learn.clocks, "Clock count; must match the target");
  learn_cmd->add_option("--ceilings", learn.ceilings, "Per-clock ceilings, e.g. 3,3");
  learn_cmd->add_flag("--evidence-closed", learn.evidence_closed, "Also require evidence closure");
  learn_cmd->add_option("--dump-tables", learn.dump_dir, "Write every table to this directory");
  learn_cmd->add_option("--max-instances", learn.max_instances, "Normal mode: table instance budget");
  learn_cmd->add_option("--max-rounds", learn.max_rounds, "Equivalence query budget (0 = none)");
  learn_cmd->add_option("--time-budget", learn.time_budget_s, "Wall-clock budget in seconds (0 = none)");
  learn_cmd->add_option("--queue-order", learn.queue_order, "guessed or size")->check(CLI::IsMember({"guessed", "size"}));
  learn_cmd->add_option("--stats", learn.stats, "Write a one-row stats CSV");
  learn_cmd->add_option("-o,--output", learn.output, "Learned automaton (default: stdout)");
  learn_cmd->add_flag("--render-guards", learn.render_guards, "Add readable guard strings");
  learn_cmd->add_flag("--progress", learn.progress, "Normal mode: report search progress on stderr");

  std::string equiv_left, equiv_right;
  auto* equiv_cmd = app.add_subcommand("equiv", "Decide language equivalence of two automata");
  equiv_cmd->add_option("left", equiv_left)->required();
  equiv_cmd->add_option("right", equiv_right)->required();

  std::string run_path, run_word;
  auto* run_cmd = app.add_subcommand("run", "Run a delay-timed word");
  run_cmd->add_option("automaton", run_path)->required();
  run_cmd->add_option("--word", run_word, "e.g. a:11/10;b:0")->required();

  std::string complete_path, complete_out;
  auto* complete_cmd = app.add_subcommand("complete", "Complete a deterministic automaton with a sink");
  complete_cmd->add_option("automaton", complete_path)->required();
  complete_cmd->add_option("-o,--output", complete_out, "Output file (default: stdout)");

  tal::CaseSpec gen_spec;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a random complete deterministic target");
  add_case_options(gen_cmd, gen_spec);
  gen_cmd->add_option("-o,--output", gen_out, "Output file (default: stdout)");

  tal::CaseSpec bench_spec;
  std::vector<std::string> bench_targets;
  std::size_t bench_random = 0;
  std::string bench_modes = "powerful";
  std::string bench_out;
  double bench_budget_s = 300;
  std::uint64_t bench_instances = 1'000'000;
  auto* bench_cmd = app.add_subcommand("bench", "Learn a set of targets and write a stats CSV");
  bench_cmd->add_option("--target", bench_targets, "Target files");
  bench_cmd->add_option("--random", bench_random, "Also generate this many random targets (seeds seed..seed+N-1)");
  add_case_options(bench_cmd, bench_spec);
  bench_cmd->add_option("--modes", bench_modes, "Comma-separated modes");
  bench_cmd->add_option("--time-budget", bench_budget_s, "Seconds per case and mode");
  bench_cmd->add_option("--max-instances", bench_instances, "Normal mode: table instance budget");
  bench_cmd->add_option("-o,--output", bench_out, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*learn_cmd) return cmd_learn(learn);
    if (*equiv_cmd) return cmd_equiv(equiv_left, equiv_right);
    if (*run_cmd) return cmd_run(run_path, run_word);
    if (*complete_cmd) return cmd_complete(complete_path, complete_out);
    if (*gen_cmd) {
      write_json(tal::to_json(tal::generate(gen_spec)), gen_out);
      return exit_ok;
    }
    if (*bench_cmd) {
      std::vector<tal::BenchCase> cases;
      for (const auto& path : bench_targets) cases.push_back({path, tal::complete(tal::load_automaton(path))});
      for (std::size_t i = 0; i < bench_random; ++i) {
        tal::CaseSpec spec = bench_spec;
        spec.seed = bench_spec.seed + i;
        cases.push_back({spec.id(), tal::generate(spec)});
      }
      std::vector<tal::LearnMode> modes;
      std::stringstream in(bench_modes);
      std::string item;
      while (std::getline(in, item, ',')) {
        auto mode = tal::parse_mode(item);
        if (!mode) throw std::invalid_argument("unknown mode '" + item + "'");
        modes.push_back(*mode);
      }
      tal::LearnOptions options;
      options.time_budget_ms = bench_budget_s * 1000;
      options.max_instances = bench_instances;
      auto rows = tal::bench(cases, modes, options);
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!bench_out.empty()) {
        file.open(bench_out);
        if (!file) throw tal::ParseError(bench_out + ": cannot write file");
        out = &file;
      }
      tal::write_csv_header(*out);
      for (const auto& row : rows) tal::write_csv_row(*out, row);
      return exit_ok;
    }
  } catch (const tal::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const tal::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
