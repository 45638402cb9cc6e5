#include "tal/bench.hh"

#include "tal/equivalence.hh"
#include "tal/errors.hh"

#include <chrono>
#include <ostream>
#include <random>
#include <sstream>

namespace tal {

std::string CaseSpec::id() const {
  std::ostringstream out;
  out << locations << '_' << actions << '_' << clocks << '_' << max_constant << "_s" << seed;
  return out.str();
}

namespace {

// Cuts `box` on clock c at b; `low_closed` puts b itself into the lower half.
std::pair<Guard, Guard> split(const Guard& box, std::size_t c, int b, bool low_closed) {
  Guard low = box, high = box;
  low[c].upper = b;
  low[c].upper_strict = !low_closed;
  high[c].lower = b;
  high[c].lower_strict = low_closed;
  return {low, high};
}

std::vector<int> cut_points(const Interval& iv, int max_constant) {
  std::vector<int> out;
  for (int b = std::max(1, iv.lower); b <= max_constant; ++b) {
    bool above_lower = b > iv.lower;
    bool below_upper = !iv.upper || b < *iv.upper;
    if (above_lower && below_upper) out.push_back(b);
  }
  return out;
}

std::vector<Guard> random_partition(std::size_t clocks, int max_constant, std::size_t max_boxes, std::mt19937_64& rng) {
  std::vector<Guard> boxes{Guard::full(clocks)};
  if (clocks == 0) return boxes;
  std::size_t wanted = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, max_boxes))(rng);
  for (std::size_t attempt = 0; boxes.size() < wanted && attempt < 8 * max_boxes; ++attempt) {
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, boxes.size() - 1)(rng);
    std::size_t c = std::uniform_int_distribution<std::size_t>(0, clocks - 1)(rng);
    auto points = cut_points(boxes[i][c], max_constant);
    if (points.empty()) continue;
    int b = points[std::uniform_int_distribution<std::size_t>(0, points.size() - 1)(rng)];
    bool low_closed = std::bernoulli_distribution(0.5)(rng);
    auto [low, high] = split(boxes[i], c, b, low_closed);
    boxes[i] = low;
    boxes.push_back(high);
  }
  return boxes;
}

}  // namespace

TimedAutomaton generate(const CaseSpec& spec) {
  if (spec.locations == 0 || spec.actions == 0) throw Error("a case needs at least one location and one action");
  if (spec.max_constant < 1) throw Error("the maximal constant must be at least 1");
  std::mt19937_64 rng(spec.seed);
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < spec.actions; ++i) alphabet.push_back(std::string(1, static_cast<char>('a' + i % 26)) +
                                                                    (i >= 26 ? std::to_string(i / 26) : ""));
  TimedAutomaton a(alphabet, spec.clocks);
  std::bernoulli_distribution accept(spec.accept_prob);
  for (std::size_t l = 0; l < spec.locations; ++l) a.add_location(static_cast<int>(l), accept(rng));
  a.set_initial(0);
  std::uniform_int_distribution<std::size_t> target(0, spec.locations - 1);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t l = 0; l < spec.locations; ++l) {
    for (std::size_t s = 0; s < spec.actions; ++s) {
      for (auto& box : random_partition(spec.clocks, spec.max_constant, spec.max_intervals, rng)) {
        ResetTuple resets(spec.clocks, true);
        if (!spec.always_reset)
          for (std::size_t c = 0; c < spec.clocks; ++c) resets[c] = coin(rng);
        a.add_transition(Transition{l, s, std::move(box), resets, target(rng)});
      }
    }
  }
  a.set_ceiling(ClockCeiling::uniform(spec.clocks, spec.max_constant));
  return a;
}

std::optional<LearnMode> parse_mode(const std::string& text) {
  if (text == "powerful") return LearnMode::powerful;
  if (text == "normal") return LearnMode::normal;
  if (text == "rta") return LearnMode::rta;
  return std::nullopt;
}

std::string to_string(LearnMode mode) {
  switch (mode) {
    case LearnMode::powerful: return "powerful";
    case LearnMode::normal: return "normal";
    case LearnMode::rta: return "rta";
  }
  return "?";
}

LearnOutcome learn_target(const TimedAutomaton& target, LearnMode mode, const LearnOptions& options) {
  switch (mode) {
    case LearnMode::powerful: {
      PowerfulTeacher teacher(target);
      return learn_powerful(teacher, target.clocks(), target.ceiling(), options);
    }
    case LearnMode::normal: {
      NormalTeacher teacher(target);
      return learn_normal(teacher, target.clocks(), target.ceiling(), options);
    }
    case LearnMode::rta: {
      if (target.clocks() != 1) throw Error("rta mode needs a one-clock target");
      PowerfulTeacher teacher(target);
      return learn_rta(teacher, target.ceiling(), options);
    }
  }
  throw Error("unknown mode");
}

std::vector<BenchRow> bench(const std::vector<BenchCase>& cases, const std::vector<LearnMode>& modes,
                            const LearnOptions& options) {
  std::vector<BenchRow> rows;
  for (const auto& c : cases) {
    for (LearnMode mode : modes) {
      BenchRow row;
      row.case_id = c.id;
      row.mode = mode;
      auto start = std::chrono::steady_clock::now();
      try {
        LearnOutcome out = learn_target(c.target, mode, options);
        if (equivalent(c.target, out.hypothesis))
          throw Error("case " + c.id + ": learned model is not equivalent to the target");
        row.stats = out.stats;
        row.tables_explored = out.tables_explored;
        row.learned_locations = out.hypothesis.locations().size();
      } catch (const InstanceBudgetExhausted&) {
        row.timeout = true;
      } catch (const TimeBudgetExhausted&) {
        row.timeout = true;
      } catch (const RoundBudgetExhausted&) {
        row.timeout = true;
      }
      row.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(row);
    }
  }
  return rows;
}

void write_csv_header(std::ostream& out) { out << "case_id,mode,mq,eq,rq,tables_explored,n,time_ms\n"; }

void write_csv_row(std::ostream& out, const BenchRow& row) {
  out << row.case_id << ',' << to_string(row.mode) << ',';
  if (row.timeout) {
    out << "TIMEOUT,TIMEOUT,TIMEOUT,TIMEOUT,TIMEOUT," << static_cast<long long>(row.time_ms) << '\n';
    return;
  }
  out << row.stats.membership << ',' << row.stats.equivalence << ',' << row.stats.reset << ',' << row.tables_explored
      << ',' << row.learned_locations << ',' << static_cast<long long>(row.time_ms) << '\n';
}

}  // namespace tal
