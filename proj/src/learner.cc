#include "tal/learner.hh"

#include "tal/errors.hh"
#include "tal/hypothesis.hh"
#include "tal/json_io.hh"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <list>
#include <memory>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace tal {

namespace {

class Deadline {
 public:
  explicit Deadline(double budget_ms) : budget_ms_(budget_ms) {}
  void check() const {
    if (budget_ms_ <= 0) return;
    double used = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    if (used > budget_ms_) throw TimeBudgetExhausted("time budget of " + std::to_string(budget_ms_) + " ms exhausted");
  }

 private:
  double budget_ms_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void dump_table(const LearnOptions& options, std::uint64_t n, const ObservationTable& t) {
  if (!options.dump_dir) return;
  std::filesystem::create_directories(*options.dump_dir);
  std::ostringstream name;
  name << "table_" << std::setw(6) << std::setfill('0') << n << ".txt";
  std::ofstream out(std::filesystem::path(*options.dump_dir) / name.str());
  out << dump(t);
}

void record_sizes(LearnOutcome& out, const ObservationTable& t) {
  out.prefixes = t.prefix_count();
  out.boundary = t.boundary_count();
  out.suffixes = t.suffixes().size();
  for (const auto& e : t.suffixes()) out.longest_suffix = std::max(out.longest_suffix, e.size());
  out.final_table = t;
}

}  // namespace

LearnOutcome learn_powerful(PowerfulOracle& oracle, std::size_t clocks, const ClockCeiling& kappa,
                            const LearnOptions& options) {
  Deadline deadline(options.time_budget_ms);
  LearnOutcome out;
  ObservationTable t = initial_table(oracle, clocks, kappa);
  std::uint64_t dumps = 0;
  dump_table(options, dumps++, t);
  while (true) {
    while (true) {
      deadline.check();
      auto st = prepared_status(t, options.evidence_closed);
      if (!st.closed)
        make_closed(t, oracle);
      else if (!st.consistent)
        make_consistent(t, oracle);
      else if (options.evidence_closed && !st.evidence_closed)
        make_evidence_closed(t, oracle);
      else
        break;
      dump_table(options, dumps++, t);
    }
    TimedAutomaton h = build_hypothesis(build_dfa(t, options.evidence_closed));
    if (options.max_rounds && out.rounds >= options.max_rounds)
      throw RoundBudgetExhausted("equivalence query budget of " + std::to_string(options.max_rounds) + " exhausted");
    ++out.rounds;
    out.progress.emplace_back(t.prefix_count(), h.transitions().size());
    auto ctx = oracle.equivalence(h);
    if (!ctx) {
      out.hypothesis = std::move(h);
      break;
    }
    out.longest_counterexample = std::max(out.longest_counterexample, ctx->word.size());
    if (add_counterexample(t, ctx->word, oracle) == 0)
      throw Error("counterexample " + format_word(strip_resets(ctx->word)) + " is already in the table");
    dump_table(options, dumps++, t);
  }
  out.tables_explored = 1;
  record_sizes(out, t);
  out.stats = oracle.stats();
  return out;
}

LearnOutcome learn_rta(PowerfulOracle& oracle, const ClockCeiling& kappa, const LearnOptions& options,
                       bool count_resets) {
  AlwaysResetOracle rta(oracle, 1, count_resets);
  return learn_powerful(rta, 1, kappa, options);
}

// ---------------------------------------------------------------------------
// Normal teacher: reset guesses

namespace {

struct DelayWordHash {
  std::size_t operator()(const DelayTimedWord& w) const noexcept {
    std::size_t h = w.size();
    for (const auto& l : w) {
      h = h * 1000003u ^ std::hash<std::string>{}(l.action);
      h = h * 1000003u ^ RationalHash{}(l.delay);
    }
    return h;
  }
};

// Structural fingerprint of a hypothesis; two independent 64-bit hashes.
std::pair<std::size_t, std::size_t> fingerprint(const TimedAutomaton& h) {
  std::string s;
  auto put = [&s](std::uint64_t x) { s.append(reinterpret_cast<const char*>(&x), sizeof x); };
  put(h.initial());
  for (const auto& l : h.locations()) put(l.accepting);
  for (const auto& tr : h.transitions()) {
    put(tr.source);
    put(tr.action);
    put(tr.target);
    for (bool b : tr.resets) put(b);
    if (const auto* rs = std::get_if<RegionSet>(&tr.guard)) {
      for (int x : rs->ceiling().values()) put(static_cast<std::uint64_t>(x));
      for (const auto& r : rs->regions()) put(r.hash());
    }
  }
  std::size_t a = std::hash<std::string>{}(s);
  s.push_back('#');
  return {a, std::hash<std::string>{}(s)};
}

std::pair<std::size_t, std::size_t> fingerprint(const AbstractDFA& m) {
  std::string s;
  auto put = [&s](std::uint64_t x) { s.append(reinterpret_cast<const char*>(&x), sizeof x); };
  put(m.initial);
  for (bool b : m.accepting) put(b);
  for (const auto& tr : m.transitions) {
    put(tr.source);
    put(tr.target);
    put(std::hash<std::string>{}(tr.letter.action));
    for (const auto& v : tr.letter.values) put(RationalHash{}(v));
    for (bool b : tr.letter.resets) put(b);
  }
  std::size_t a = std::hash<std::string>{}(s);
  s.push_back('#');
  return {a, std::hash<std::string>{}(s)};
}

struct PairHash {
  std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const noexcept {
    return p.first * 0x9e3779b97f4a7c15ULL ^ p.second;
  }
};

// Learner-side memo: repeated questions are answered without asking the teacher again.
class CachingOracle final : public NormalOracle {
 public:
  explicit CachingOracle(NormalOracle& inner) : inner_(inner) {}
  const std::vector<std::string>& alphabet() const override { return inner_.alphabet(); }
  bool membership(const DelayTimedWord& word) override {
    auto it = members_.find(word);
    if (it != members_.end()) return it->second;
    bool answer = inner_.membership(word);
    members_.emplace(word, answer);
    return answer;
  }
  std::optional<DelayTimedWord> equivalence(const TimedAutomaton& h) override {
    auto shared = shared_equivalence(h);
    if (!shared) return std::nullopt;
    return *shared;
  }
  // Null when equivalent. Equal counterexamples share one copy.
  std::shared_ptr<const DelayTimedWord> shared_equivalence(const TimedAutomaton& h) {
    auto key = fingerprint(h);
    auto it = hypotheses_.find(key);
    if (it != hypotheses_.end()) return it->second;
    std::shared_ptr<const DelayTimedWord> shared;
    if (auto answer = inner_.equivalence(h)) {
      auto& slot = words_[*answer];
      if (!slot) slot = std::make_shared<const DelayTimedWord>(*answer);
      shared = slot;
    }
    hypotheses_.emplace(key, shared);
    return shared;
  }
  QueryStats stats() const override { return inner_.stats(); }

 private:
  NormalOracle& inner_;
  std::unordered_map<DelayTimedWord, bool, DelayWordHash> members_;
  std::unordered_map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const DelayTimedWord>, PairHash> hypotheses_;
  std::unordered_map<DelayTimedWord, std::shared_ptr<const DelayTimedWord>, DelayWordHash> words_;
};

ResetTuple decode_guess(std::uint64_t bits, std::size_t clocks) {
  ResetTuple r(clocks);
  for (std::size_t c = 0; c < clocks; ++c) r[c] = ((bits >> c) & 1u) == 0;
  return r;
}

constexpr std::size_t max_guess_bits = 20;

struct PlannedRow {
  enum class Kind { zero, delay, fixed };
  bool parent_planned = false;
  std::size_t parent = 0;
  Kind kind = Kind::zero;
  std::string action;
  Rational delay;
  std::shared_ptr<const ResetClockedLetter> fixed;
  bool guessed = false;
};

struct Family;
using FamilyPtr = std::shared_ptr<Family>;

// All children of one repair step. The base table is not stored: it is the parent's child at
// `parent_digits`, plus a promotion or a new suffix. Children are addressed by the digits chosen at
// each guessing decision.
struct Family {
  FamilyPtr parent;
  std::vector<std::uint32_t> parent_digits;
  std::shared_ptr<const ObservationTable> root;  // only for families without a parent
  std::optional<std::size_t> promote;
  std::optional<RegionWord> suffix;
  std::vector<PlannedRow> rows;

  std::uint64_t id = 0;
  std::uint64_t size = 0;  // cells once all planned rows are in
};

struct OutcomeKey {
  ResetClockedWord word;
  RegionWord suffix;
  bool operator==(const OutcomeKey&) const = default;
};

struct OutcomeKeyHash {
  std::size_t operator()(const OutcomeKey& k) const noexcept {
    std::size_t h = ResetClockedWordHash{}(k.word);
    for (const auto& l : k.suffix) h = (h * 1000003u ^ std::hash<std::string>{}(l.action)) * 1000003u ^ l.region.hash();
    return h;
  }
};

// Resets already fixed for delay-timed prefixes in one instance. The target is deterministic, so a
// delay-timed prefix has exactly one run; guesses that contradict an earlier one are never generated.
// Stored as a trie over (action, delay) letters.
class KnownResets {
 public:
  KnownResets() : nodes_(1) {}
  explicit KnownResets(const ObservationTable& t) : nodes_(1) {
    for (std::size_t r = 0; r < t.rows().size(); ++r) {
      const auto& word = t.rows()[r].word;
      learn(word);
      for (std::size_t e = 0; e < t.suffixes().size(); ++e)
        if (const Cell* c = t.cell(r, e); c && c->successor) learn(word, *c->successor);
    }
  }

  std::optional<ResetTuple> lookup(const ResetClockedWord& word) const {
    if (!delays(word, {})) return std::nullopt;
    std::uint32_t n = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
      n = child(n, word[i].action, delays_[i]);
      if (n == none) return std::nullopt;
    }
    if (!nodes_[n].known) return std::nullopt;
    return unpack(nodes_[n].resets, word.back().resets.size());
  }

  void learn(const ResetClockedWord& word, const ResetClockedWord& tail = {}) {
    if (!delays(word, tail)) return;
    std::uint32_t n = 0;
    std::size_t total = word.size() + tail.size();
    for (std::size_t i = 0; i < total; ++i) {
      const auto& l = i < word.size() ? word[i] : tail[i - word.size()];
      n = child_or_add(n, l.action, delays_[i]);
      if ((tail.empty() || i >= word.size()) && !nodes_[n].known) {
        nodes_[n].known = true;
        nodes_[n].resets = pack(l.resets);
      }
    }
  }

  bool agrees(const ResetClockedWord& word, const std::optional<ResetClockedWord>& tail) const {
    if (!tail || !delays(word, *tail)) return true;
    std::uint32_t n = 0;
    std::size_t total = word.size() + tail->size();
    for (std::size_t i = 0; i < total; ++i) {
      const auto& l = i < word.size() ? word[i] : (*tail)[i - word.size()];
      n = child(n, l.action, delays_[i]);
      if (n == none) return true;
      if (i >= word.size() && nodes_[n].known && nodes_[n].resets != pack(l.resets)) return false;
    }
    return true;
  }

 private:
  static constexpr std::uint32_t none = 0xffffffffu;
  struct Node {
    std::string action;
    Rational delay;
    std::uint32_t first_child = none, next = none;
    std::uint32_t resets = 0;
    bool known = false;
  };

  static std::uint32_t pack(const ResetTuple& r) {
    std::uint32_t m = 0;
    for (std::size_t c = 0; c < r.size(); ++c)
      if (r[c]) m |= 1u << c;
    return m;
  }
  static ResetTuple unpack(std::uint32_t m, std::size_t clocks) {
    ResetTuple r(clocks);
    for (std::size_t c = 0; c < clocks; ++c) r[c] = (m >> c) & 1u;
    return r;
  }

  // Delays of word.tail into delays_; false when the word is doomed.
  bool delays(const ResetClockedWord& word, const ResetClockedWord& tail) const {
    std::size_t total = word.size() + tail.size();
    delays_.resize(total);
    const ResetClockedLetter* prev = nullptr;
    for (std::size_t i = 0; i < total; ++i) {
      const auto& l = i < word.size() ? word[i] : tail[i - word.size()];
      std::optional<Rational> d;
      for (std::size_t c = 0; c < l.values.size(); ++c) {
        Rational x = (!prev || prev->resets[c]) ? l.values[c] : l.values[c] - prev->values[c];
        if (d && *d != x) return false;
        d = x;
      }
      if (!d) d = Rational(0);
      if (*d < 0) return false;
      delays_[i] = *d;
      prev = &l;
    }
    return true;
  }

  std::uint32_t child(std::uint32_t n, const std::string& action, const Rational& delay) const {
    for (std::uint32_t c = nodes_[n].first_child; c != none; c = nodes_[c].next)
      if (nodes_[c].delay == delay && nodes_[c].action == action) return c;
    return none;
  }
  std::uint32_t child_or_add(std::uint32_t n, const std::string& action, const Rational& delay) {
    if (auto c = child(n, action, delay); c != none) return c;
    auto id = static_cast<std::uint32_t>(nodes_.size());
    Node node;
    node.action = action;
    node.delay = delay;
    node.next = nodes_[n].first_child;
    nodes_.push_back(std::move(node));
    nodes_[n].first_child = id;
    return id;
  }

  std::vector<Node> nodes_;
  mutable std::vector<Rational> delays_;
};

class Search {
 public:
  explicit Search(NormalOracle& oracle) : oracle_(oracle) {}

  FamilyPtr root_family(ObservationTable base) {
    auto f = std::make_shared<Family>();
    f->root = std::make_shared<const ObservationTable>(std::move(base));
    return f;
  }
  FamilyPtr child_family(const FamilyPtr& parent, const std::vector<std::uint32_t>& digits) {
    auto f = std::make_shared<Family>();
    f->parent = parent;
    f->parent_digits = digits;
    return f;
  }

  // `base` must be the family's base table.
  void finish(const FamilyPtr& f, const ObservationTable& base) {
    f->id = ++ids_;
    f->rows.shrink_to_fit();
    f->size = (base.rows().size() + f->rows.size()) * base.suffixes().size();
    remember(f->id, base);
  }

  struct Base {
    ObservationTable table;
    KnownResets known;
  };

  Base base_of(const Family& f) {
    if (auto it = bases_.find(f.id); it != bases_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
    ObservationTable t;
    if (f.parent) {
      auto digits = f.parent_digits;
      t = *build(*f.parent, digits, [](std::uint32_t, std::uint64_t) { return true; });
    } else {
      t = *f.root;
    }
    if (f.promote) t.promote(*f.promote);
    if (f.suffix) t.add_suffix(*f.suffix);
    remember(f.id, t);
    return bases_.at(f.id).first;
  }

  // Replays `digits`, then asks `branch(radix, guessed bits so far)` at every further decision with more
  // than one admissible choice. When it returns true, choice zero is taken and appended; otherwise the
  // build stops and nullopt is returned. Decisions with a single admissible choice take no digit.
  template <class Branch>
  std::optional<ObservationTable> build(const Family& f, std::vector<std::uint32_t>& digits, Branch branch,
                                        std::vector<std::uint32_t>* radices = nullptr) {
    auto [t, known] = base_of(f);
    std::size_t clocks = t.clocks();
    std::size_t d = 0;
    std::uint64_t bits = t.guessed_resets;
    bool stopped = false;
    auto digit = [&](std::uint32_t radix, std::uint64_t cost) -> std::uint32_t {
      if (radix == 1) return 0;
      bits += cost;
      if (radices) radices->push_back(radix);
      if (d < digits.size()) return digits[d++];
      if (!branch(radix, bits)) {
        stopped = true;
        return 0;
      }
      digits.push_back(0);
      ++d;
      return 0;
    };
    auto guess_last = [&](ResetClockedWord& w) {
      w.back().resets = all_reset(clocks);
      if (auto forced = known.lookup(w)) {
        w.back().resets = *forced;
        return;
      }
      w.back().resets = decode_guess(digit(1u << clocks, clocks), clocks);
    };
    std::vector<std::size_t> planned;
    for (const auto& p : f.rows) {
      std::size_t parent = p.parent_planned ? planned.at(p.parent) : p.parent;
      ResetClockedWord w = t.rows()[parent].word;
      ResetClockedLetter l;
      l.action = p.action;
      switch (p.kind) {
        case PlannedRow::Kind::zero:
          l.values = zero_valuation(clocks);
          l.resets = all_reset(clocks);
          w.push_back(l);
          if (p.guessed) guess_last(w);
          break;
        case PlannedRow::Kind::delay: {
          ClockValuation v = zero_valuation(clocks);
          if (!w.empty())
            for (std::size_t c = 0; c < clocks; ++c) v[c] = w.back().resets[c] ? Rational(0) : w.back().values[c];
          for (auto& x : v) x += p.delay;
          l.values = v;
          w.push_back(l);
          guess_last(w);
          break;
        }
        case PlannedRow::Kind::fixed:
          w.push_back(*p.fixed);
          break;
      }
      if (stopped) return std::nullopt;
      known.learn(w);
      planned.push_back(t.add_row(w, false));
    }
    std::vector<std::size_t> allowed;
    for (auto [r, e] : t.empty_cells()) {
      const auto& prefix = t.rows()[r].word;
      const auto& suffix = t.suffixes()[e];
      const auto& outs = outcomes(prefix, suffix, t.ceiling());
      allowed.clear();
      for (std::size_t i = 0; i < outs.size(); ++i)
        if (known.agrees(prefix, outs[i].successor)) allowed.push_back(i);
      // The outcome without a successor always agrees, so `allowed` is never empty.
      auto pick = digit(static_cast<std::uint32_t>(allowed.size()), clocks * suffix.size());
      if (stopped) return std::nullopt;
      const Cell& chosen = outs[allowed.at(pick)];
      if (chosen.successor) known.learn(prefix, *chosen.successor);
      t.set_cell(r, e, chosen);
    }
    t.guessed_resets = bits;
    return t;
  }

  // Every child of `f`, in digit order.
  std::vector<ObservationTable> all_children(const Family& f) {
    std::vector<ObservationTable> out;
    std::vector<std::uint32_t> digits;
    while (true) {
      std::vector<std::uint32_t> radix;
      out.push_back(*build(f, digits, [](std::uint32_t, std::uint64_t) { return true; }, &radix));
      std::size_t k = digits.size();
      while (k > 0 && digits[k - 1] + 1 >= radix[k - 1]) --k;
      if (k == 0) return out;
      ++digits[k - 1];
      digits.resize(k);
    }
  }

  const std::vector<Cell>& outcomes(const ResetClockedWord& word, const RegionWord& suffix, const ClockCeiling& k) {
    OutcomeKey key{word, suffix};
    auto it = outcomes_.find(key);
    if (it != outcomes_.end()) return it->second;
    if (outcomes_.size() > max_outcomes) outcomes_.clear();
    return outcomes_.emplace(std::move(key), guessed_outcomes(word, suffix, k, oracle_)).first->second;
  }

 private:
  static constexpr std::size_t max_bases = 256;
  static constexpr std::size_t max_outcomes = 200'000;

  void remember(std::uint64_t id, const ObservationTable& t) {
    if (bases_.count(id)) return;
    lru_.push_front(id);
    bases_.emplace(id, std::make_pair(Base{t, KnownResets(t)}, lru_.begin()));
    if (bases_.size() > max_bases) {
      bases_.erase(lru_.back());
      lru_.pop_back();
    }
  }

  NormalOracle& oracle_;
  std::uint64_t ids_ = 0;
  std::list<std::uint64_t> lru_;
  std::unordered_map<std::uint64_t, std::pair<Base, std::list<std::uint64_t>::iterator>> bases_;
  std::unordered_map<OutcomeKey, std::vector<Cell>, OutcomeKeyHash> outcomes_;
};

// Partially guessed children waiting to be continued, cheapest first, first-come among equals. Siblings of
// one decision share an entry: the last digit is the next choice, and popping it re-queues the choice after
// it under the following reserved sequence number.
struct Pending {
  FamilyPtr family;
  std::vector<std::uint32_t> digits;
  std::uint64_t key = 0;
  std::uint64_t seq = 0;
  std::uint32_t radix = 0;
};

class Frontier {
 public:
  void push(FamilyPtr f, std::vector<std::uint32_t> digits, std::uint64_t key) {
    queue_.push(Pending{std::move(f), std::move(digits), key, seq_++, 0});
  }
  // Queues choices first..radix-1 appended to `digits`.
  void push_siblings(FamilyPtr f, std::vector<std::uint32_t> digits, std::uint32_t first, std::uint32_t radix,
                     std::uint64_t key) {
    if (first >= radix) return;
    digits.push_back(first);
    queue_.push(Pending{std::move(f), std::move(digits), key, seq_, radix});
    seq_ += radix - first;
  }
  bool empty() const { return queue_.empty(); }
  // True when `key` is strictly below everything waiting.
  bool ahead(std::uint64_t key) const { return queue_.empty() || key < queue_.top().key; }
  Pending pop() {
    Pending p = std::move(const_cast<Pending&>(queue_.top()));
    queue_.pop();
    if (p.radix && p.digits.back() + 1 < p.radix) {
      Pending next{p.family, p.digits, p.key, p.seq + 1, p.radix};
      ++next.digits.back();
      queue_.push(std::move(next));
    }
    return p;
  }

 private:
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      return a.key != b.key ? a.key > b.key : a.seq > b.seq;
    }
  };
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::uint64_t seq_ = 0;
};

void plan_zero_extensions(Family& f, const ObservationTable& t, std::size_t row) {
  bool doomed = zero_extension_doomed(t, row);
  for (const auto& action : t.alphabet()) {
    ClockedWord clocked = zero_extension(t, row, action);
    bool present = false;
    for (std::size_t child : t.rows()[row].children)
      if (vw(t.rows()[child].word).back() == clocked.back()) present = true;
    if (present) continue;
    PlannedRow p;
    p.parent = row;
    p.kind = PlannedRow::Kind::zero;
    p.action = action;
    p.guessed = !doomed;
    f.rows.push_back(p);
  }
}

void plan_evidence(Family& f, const ObservationTable& t, const EvidenceWitness& w) {
  ResetClockedWord whole = t.rows()[w.row].word;
  std::size_t parent = w.row;
  bool in_table = true;
  for (const auto& l : *t.cell(w.row, w.suffix)->successor) {
    whole.push_back(l);
    if (in_table) {
      if (auto idx = t.find_row(whole)) {
        parent = *idx;
        continue;
      }
    }
    PlannedRow p;
    p.parent_planned = !in_table;
    p.parent = in_table ? parent : f.rows.size() - 1;
    p.kind = PlannedRow::Kind::fixed;
    p.action = l.action;
    p.fixed = std::make_shared<const ResetClockedLetter>(l);
    f.rows.push_back(p);
    in_table = false;
  }
}

// False when the counterexample is already fully present in the table.
bool plan_counterexample(Family& f, const ObservationTable& t, const DelayTimedWord& ctx) {
  std::size_t best_len = 0, best_row = 0;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    const auto& word = t.rows()[r].word;
    if (word.size() <= best_len || word.size() > ctx.size()) continue;
    auto delays = delay_from_reset_clocked(word);
    if (!delays || !std::equal(delays->begin(), delays->end(), ctx.begin())) continue;
    best_len = word.size();
    best_row = r;
  }
  if (best_len == ctx.size()) return false;
  for (std::size_t i = best_len; i < ctx.size(); ++i) {
    PlannedRow p;
    p.parent_planned = i > best_len;
    p.parent = i > best_len ? f.rows.size() - 1 : best_row;
    p.kind = PlannedRow::Kind::delay;
    p.action = ctx[i].action;
    p.delay = ctx[i].delay;
    f.rows.push_back(p);
  }
  return true;
}

// Repair families built from a table `t`, which is the child of `parent` at `digits`
// (or a standalone table when `parent` is null).
struct Planner {
  Search& search;
  FamilyPtr parent;
  std::vector<std::uint32_t> digits;
  const ObservationTable& t;

  FamilyPtr make() const {
    return parent ? search.child_family(parent, digits) : search.root_family(t);
  }
  FamilyPtr closed(std::size_t row) const {
    auto f = make();
    f->promote = row;
    ObservationTable base = t;
    base.promote(row);
    plan_zero_extensions(*f, base, row);
    search.finish(f, base);
    return f;
  }
  FamilyPtr consistent(const RegionWord& e) const {
    auto f = make();
    f->suffix = e;
    ObservationTable base = t;
    base.add_suffix(e);
    search.finish(f, base);
    return f;
  }
  FamilyPtr evidence(const EvidenceWitness& w) const {
    auto f = make();
    plan_evidence(*f, t, w);
    search.finish(f, t);
    return f;
  }
  FamilyPtr counterexample(const DelayTimedWord& ctx) const {
    auto f = make();
    if (!plan_counterexample(*f, t, ctx)) return nullptr;
    search.finish(f, t);
    return f;
  }
};

FamilyPtr initial_family(Search& search, const std::vector<std::string>& alphabet, std::size_t clocks,
                         const ClockCeiling& kappa) {
  ObservationTable base(alphabet, clocks, kappa);
  auto f = search.root_family(base);
  plan_zero_extensions(*f, base, 0);
  search.finish(f, base);
  return f;
}

std::vector<ObservationTable> expand(Search& search, const FamilyPtr& f) {
  if (!f) return {};
  return search.all_children(*f);
}

}  // namespace

std::vector<Cell> guessed_outcomes(const ResetClockedWord& prefix, const RegionWord& suffix, const ClockCeiling& k,
                                   NormalOracle& oracle) {
  std::size_t clocks = k.size();
  auto mq = [&](const ResetClockedWord& w) {
    auto delays = delay_from_reset_clocked(w);
    return delays ? oracle.membership(*delays) : false;
  };
  if (suffix.empty()) {
    Cell c;
    if (!is_doomed(prefix)) {
      c.successor = ResetClockedWord{};
      c.accepted = mq(prefix);
    }
    return {c};
  }
  Cell dead;
  dead.resets.assign(suffix.size(), all_reset(clocks));
  if (is_doomed(prefix)) return {dead};

  std::size_t bits = clocks * suffix.size();
  if (bits > max_guess_bits) throw Error("suffix too long to enumerate reset guesses");
  std::vector<Cell> out;
  for (std::uint64_t g = 0; g < (std::uint64_t{1} << bits); ++g) {
    FixedGuess guess;
    for (std::size_t i = 0; i < suffix.size(); ++i)
      guess.resets.push_back(decode_guess(g >> (i * clocks), clocks));
    Cell c = dead;
    c.successor = find_valid_successor(prefix, suffix, k, guess);
    if (c.successor) {
      c.resets = guess.resets;
      ResetClockedWord whole = prefix;
      whole.insert(whole.end(), c.successor->begin(), c.successor->end());
      c.accepted = mq(whole);
    }
    bool seen = false;
    for (const auto& o : out) seen = seen || o.same_observation(c);
    if (!seen) out.push_back(std::move(c));
  }
  return out;
}

std::vector<ObservationTable> branch_initial(NormalOracle& oracle, std::size_t clocks, const ClockCeiling& kappa) {
  Search search(oracle);
  return expand(search, initial_family(search, oracle.alphabet(), clocks, kappa));
}

std::vector<ObservationTable> branch_make_closed(const ObservationTable& t, NormalOracle& oracle) {
  auto st = prepared_status(t, false);
  if (st.closed) throw ConditionNotViolated("table is already closed");
  Search search(oracle);
  return expand(search, Planner{search, nullptr, {}, t}.closed(*st.unclosed_row));
}

std::vector<ObservationTable> branch_make_consistent(const ObservationTable& t, NormalOracle& oracle) {
  auto st = prepared_status(t, false);
  if (st.consistent) throw ConditionNotViolated("table is already consistent");
  if (!st.inconsistency) return {};
  Search search(oracle);
  return expand(search, Planner{search, nullptr, {}, t}.consistent(st.inconsistency->new_suffix));
}

std::vector<ObservationTable> branch_counterexample(const ObservationTable& t, const DelayTimedWord& ctx,
                                                    NormalOracle& oracle) {
  Search search(oracle);
  return expand(search, Planner{search, nullptr, {}, t}.counterexample(ctx));
}

LearnOutcome learn_normal(NormalOracle& oracle, std::size_t clocks, const ClockCeiling& kappa,
                          const LearnOptions& options) {
  if (kappa.size() != clocks) throw CeilingMismatch("ceiling length differs from the clock count");
  Deadline deadline(options.time_budget_ms);
  CachingOracle cached(oracle);
  Search search(cached);
  Frontier frontier;
  bool by_size = options.queue_order == QueueOrder::table_size;
  auto push = [&](const FamilyPtr& f, std::uint64_t guessed) {
    if (f) frontier.push(f, {}, by_size ? f->size : guessed);
  };
  push(initial_family(search, oracle.alphabet(), clocks, kappa), 0);
  LearnOutcome out;
  // Null marks an abstract automaton with no hypothesis.
  std::unordered_map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const DelayTimedWord>, PairHash> verdicts;

  while (!frontier.empty()) {
    deadline.check();
    if (out.tables_explored >= options.max_instances)
      throw InstanceBudgetExhausted("explored " + std::to_string(out.tables_explored) + " table instances");
    Pending node = frontier.pop();
    std::uint64_t key = node.key;
    // Continue down the cheapest branch while it stays strictly ahead of the frontier; park the rest.
    auto branch = [&](std::uint32_t radix, std::uint64_t guessed) {
      std::uint64_t next = by_size ? node.family->size : guessed;
      bool go_on = frontier.ahead(next);
      frontier.push_siblings(node.family, node.digits, go_on ? 1 : 0, radix, next);
      if (go_on) key = next;
      return go_on;
    };
    auto built = search.build(*node.family, node.digits, branch);
    if (!built) continue;
    ObservationTable& t = *built;
    out.popped_keys.push_back(key);
    dump_table(options, out.tables_explored, t);
    ++out.tables_explored;
    if (options.progress && options.progress_every && out.tables_explored % options.progress_every == 0)
      options.progress(out.tables_explored, key, out.rounds);

    Planner plan{search, node.family, node.digits, t};
    auto st = prepared_status(t, options.evidence_closed);
    if (!st.closed) {
      push(plan.closed(*st.unclosed_row), t.guessed_resets);
      continue;
    }
    if (!st.consistent) {
      if (st.inconsistency) push(plan.consistent(st.inconsistency->new_suffix), t.guessed_resets);
      continue;
    }
    if (options.evidence_closed && !st.evidence_closed) {
      push(plan.evidence(*st.missing_evidence), t.guessed_resets);
      continue;
    }

    // Equal abstract automata give equal hypotheses, so their verdicts are reused.
    AbstractDFA dfa;
    try {
      dfa = build_dfa(t, options.evidence_closed);
    } catch (const ConflictingAbstractTransitions&) {
      continue;
    }
    auto fp = fingerprint(dfa);
    auto seen = verdicts.find(fp);
    if (seen != verdicts.end() && !seen->second) continue;
    std::shared_ptr<const DelayTimedWord> ctx;
    if (seen != verdicts.end()) {
      ctx = seen->second;
    } else {
      TimedAutomaton h;
      try {
        h = build_hypothesis(dfa);
      } catch (const ConflictingAbstractTransitions&) {
        verdicts.emplace(fp, nullptr);
        continue;
      }
      if (options.max_rounds && oracle.stats().equivalence >= options.max_rounds)
        throw RoundBudgetExhausted("equivalence query budget of " + std::to_string(options.max_rounds) +
                                   " exhausted");
      ctx = cached.shared_equivalence(h);
      if (!ctx) {
        ++out.rounds;
        out.hypothesis = std::move(h);
        record_sizes(out, t);
        out.stats = oracle.stats();
        return out;
      }
      verdicts.emplace(fp, ctx);
    }
    ++out.rounds;
    out.longest_counterexample = std::max(out.longest_counterexample, ctx->size());
    push(plan.counterexample(*ctx), t.guessed_resets);
  }
  throw Error("every table instance was discarded without an accepted hypothesis");
}

// ---------------------------------------------------------------------------

double region_bound(const ClockCeiling& k) {
  double lambda = 1;
  for (std::size_t c = 1; c <= k.size(); ++c) lambda *= static_cast<double>(c) * 2.0;
  for (int x : k.values()) lambda *= 2.0 * x + 2.0;
  return lambda;
}

QueryBoundReport query_bound_report(const LearnOutcome& outcome, std::size_t n, std::size_t m, const ClockCeiling& k) {
  QueryBoundReport r;
  r.lambda = region_bound(k);
  double nl = static_cast<double>(n) * r.lambda;
  double md = static_cast<double>(m);
  double h = static_cast<double>(outcome.longest_counterexample);
  r.eq_bound = md * nl * r.lambda;
  r.mq_bound = (nl + h * md * nl * r.lambda + md * nl + nl * nl) * nl;
  double s = static_cast<double>(outcome.prefixes);
  double sr = s + static_cast<double>(outcome.boundary);
  double e = static_cast<double>(outcome.suffixes);
  r.rq_bound = (e - 1) * sr * e + md * s;
  r.eq = outcome.stats.equivalence;
  r.mq = outcome.stats.membership;
  r.rq = outcome.stats.reset;
  return r;
}

std::string to_string(const QueryBoundReport& r) {
  std::ostringstream out;
  out << "lambda=" << r.lambda << " eq=" << r.eq << "/" << r.eq_bound << " mq=" << r.mq << "/" << r.mq_bound
      << " rq=" << r.rq << "/" << r.rq_bound << (r.within() ? " within" : " EXCEEDED");
  return out.str();
}

}  // namespace tal
