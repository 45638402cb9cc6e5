#include "tal/observation_table.hh"

#include "tal/errors.hh"

#include <sstream>

namespace tal {

std::size_t ResetClockedWordHash::operator()(const ResetClockedWord& w) const noexcept {
  std::size_t h = w.size();
  auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& l : w) {
    mix(std::hash<std::string>{}(l.action));
    for (const auto& v : l.values) mix(RationalHash{}(v));
    std::size_t bits = 0;
    for (bool b : l.resets) bits = bits * 2 + (b ? 1 : 0);
    mix(bits);
  }
  return h;
}

std::optional<ResetClockedWord> find_valid_successor(const ResetClockedWord& prefix, const RegionWord& suffix,
                                                     const ClockCeiling& k, const ResetSource& source) {
  if (const auto* guess = std::get_if<FixedGuess>(&source); guess && guess->resets.size() != suffix.size())
    throw GuessLengthMismatch("guess has " + std::to_string(guess->resets.size()) + " reset tuples for a suffix of length " +
                              std::to_string(suffix.size()));
  if (is_doomed(prefix)) return std::nullopt;

  std::size_t clocks = k.size();
  ClockValuation v = prefix.empty() ? zero_valuation(clocks) : prefix.back().values;
  ResetTuple b = prefix.empty() ? all_reset(clocks) : prefix.back().resets;
  ClockedWord history = vw(prefix);
  ResetClockedWord out;
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    for (std::size_t c = 0; c < clocks; ++c)
      if (b[c]) v[c] = 0;
    auto d = solve_delay(v, suffix[i].region, k);
    if (!d) return std::nullopt;
    for (auto& x : v) x += *d;
    history.push_back({suffix[i].action, v});
    if (const auto* oracle = std::get_if<std::reference_wrapper<PowerfulOracle>>(&source))
      b = oracle->get().reset_information(history);
    else
      b = std::get<FixedGuess>(source).resets[i];
    out.push_back({suffix[i].action, v, b});
  }
  return out;
}

ObservationTable::ObservationTable(std::vector<std::string> alphabet, std::size_t clocks, ClockCeiling kappa)
    : alphabet_(std::move(alphabet)), clocks_(clocks), kappa_(std::move(kappa)) {
  add_row({}, true);
  add_suffix({});
}

std::size_t ObservationTable::prefix_count() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.in_prefixes ? 1 : 0;
  return n;
}

std::size_t ObservationTable::boundary_count() const { return rows_.size() - prefix_count(); }

std::optional<std::size_t> ObservationTable::find_row(const ResetClockedWord& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ObservationTable::find_suffix(const RegionWord& e) const {
  for (std::size_t i = 0; i < suffixes_.size(); ++i)
    if (suffixes_[i] == e) return i;
  return std::nullopt;
}

std::size_t ObservationTable::add_row(const ResetClockedWord& word, bool in_prefixes) {
  if (auto existing = find_row(word)) return *existing;
  std::optional<std::size_t> parent;
  if (!word.empty()) {
    ResetClockedWord head(word.begin(), word.end() - 1);
    parent = find_row(head);
    if (!parent) throw Error("prefix of " + format_word(word) + " is missing from the table");
  }
  std::size_t idx = rows_.size();
  rows_.push_back({word, in_prefixes, parent, {}});
  if (parent) rows_[*parent].children.push_back(idx);
  cells_.emplace_back(suffixes_.size());
  index_.emplace(word, idx);
  return idx;
}

std::size_t ObservationTable::add_suffix(const RegionWord& e) {
  if (auto existing = find_suffix(e)) return *existing;
  suffixes_.push_back(e);
  for (auto& row : cells_) row.emplace_back();
  return suffixes_.size() - 1;
}

void ObservationTable::promote(std::size_t row) { rows_.at(row).in_prefixes = true; }

void ObservationTable::set_cell(std::size_t row, std::size_t suffix, Cell c) {
  cells_.at(row).at(suffix) = std::make_shared<const Cell>(std::move(c));
}

std::vector<std::pair<std::size_t, std::size_t>> ObservationTable::empty_cells() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t r = 0; r < cells_.size(); ++r)
    for (std::size_t e = 0; e < cells_[r].size(); ++e)
      if (!cells_[r][e]) out.emplace_back(r, e);
  return out;
}

bool ObservationTable::same_row(std::size_t a, std::size_t b) const { return !first_difference(a, b); }

std::optional<std::size_t> ObservationTable::first_difference(std::size_t a, std::size_t b) const {
  for (std::size_t e = 0; e < suffixes_.size(); ++e) {
    const Cell* x = cell(a, e);
    const Cell* y = cell(b, e);
    if (!x || !y) throw UnfilledTable("row comparison on an unfilled table");
    if (!x->same_observation(*y)) return e;
  }
  return std::nullopt;
}

bool ObservationTable::accepting(std::size_t row) const {
  const Cell* c = cell(row, 0);
  if (!c) throw UnfilledTable("empty-suffix cell is not filled");
  return c->accepted;
}

namespace {

std::string signature(const ObservationTable& t, std::size_t row) {
  std::string s;
  for (std::size_t e = 0; e < t.suffixes().size(); ++e) {
    const Cell* c = t.cell(row, e);
    s += c->accepted ? '+' : '-';
    for (const auto& tuple : c->resets)
      for (bool b : tuple) s += b ? '1' : '0';
    s += '|';
  }
  return s;
}

RegionWord letter_region(const ResetClockedLetter& l, const ClockCeiling& k) {
  return {RegionLetter{l.action, region_of(l.values, k)}};
}

RegionWord concat(RegionWord a, const RegionWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

PreparedStatus prepared_status(const ObservationTable& t, bool check_evidence) {
  if (!t.is_filled()) throw UnfilledTable("prepared_status needs a filled table");
  PreparedStatus st;
  const auto& rows = t.rows();
  std::vector<std::size_t> cls(rows.size());
  {
    std::unordered_map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) cls[i] = ids.emplace(signature(t, i), ids.size()).first->second;
  }

  std::unordered_map<std::size_t, std::size_t> prefix_of_class;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].in_prefixes) continue;
    auto [it, fresh] = prefix_of_class.emplace(cls[i], i);
    if (!fresh && st.reduced) {
      st.reduced = false;
      st.duplicate_prefixes = std::make_pair(it->second, i);
    }
  }
  for (std::size_t i = 0; i < rows.size() && st.closed; ++i) {
    if (!rows[i].in_prefixes && !prefix_of_class.count(cls[i])) {
      st.closed = false;
      st.unclosed_row = i;
    }
  }

  const ClockCeiling& k = t.ceiling();
  std::vector<Region> last_region(rows.size());
  for (std::size_t i = 1; i < rows.size(); ++i) last_region[i] = region_of(rows[i].word.back().values, k);

  for (std::size_t i = 0; i < rows.size() && !st.inconsistency; ++i) {
    for (std::size_t j = i; j < rows.size() && !st.inconsistency; ++j) {
      if (cls[i] != cls[j]) continue;
      for (std::size_t x : rows[i].children) {
        for (std::size_t y : rows[j].children) {
          if (x == y || (i == j && y < x)) continue;
          const auto& lx = rows[x].word.back();
          const auto& ly = rows[y].word.back();
          if (lx.action != ly.action || !(last_region[x] == last_region[y])) continue;
          bool resets_differ = lx.resets != ly.resets;
          auto diff = t.first_difference(x, y);
          if (!resets_differ && !diff) continue;
          st.consistent = false;
          RegionWord head = letter_region(lx, k);
          std::vector<std::pair<std::optional<std::size_t>, RegionWord>> candidates;
          if (diff) {
            candidates.emplace_back(diff, concat(head, t.suffixes()[*diff]));
            for (std::size_t e = *diff + 1; e < t.suffixes().size(); ++e)
              if (!t.cell(x, e)->same_observation(*t.cell(y, e)))
                candidates.emplace_back(e, concat(head, t.suffixes()[e]));
          }
          if (resets_differ) candidates.emplace_back(std::nullopt, head);
          for (auto& [e, suffix] : candidates) {
            if (t.find_suffix(suffix)) continue;
            st.inconsistency = ConsistencyWitness{i, j, x, y, e, std::move(suffix)};
            break;
          }
          if (st.inconsistency) break;
        }
        if (st.inconsistency) break;
      }
    }
  }
  if (!st.consistent && !st.inconsistency) st.inconsistency_unrepairable = true;

  if (check_evidence) {
    for (std::size_t i = 0; i < rows.size() && st.evidence_closed; ++i) {
      if (!rows[i].in_prefixes) continue;
      for (std::size_t e = 1; e < t.suffixes().size(); ++e) {
        const Cell* c = t.cell(i, e);
        if (!c->successor) continue;
        ResetClockedWord whole = rows[i].word;
        whole.insert(whole.end(), c->successor->begin(), c->successor->end());
        if (!t.find_row(whole)) {
          st.evidence_closed = false;
          st.missing_evidence = EvidenceWitness{i, e};
          break;
        }
      }
    }
  }
  return st;
}

ClockedWord zero_extension(const ObservationTable& t, std::size_t row, const std::string& action) {
  ClockedWord w = vw(t.rows().at(row).word);
  w.push_back({action, zero_valuation(t.clocks())});
  return w;
}

bool zero_extension_doomed(const ObservationTable& t, std::size_t row) {
  ResetClockedWord w = t.rows().at(row).word;
  w.push_back({"", zero_valuation(t.clocks()), all_reset(t.clocks())});
  return is_doomed(w);
}

Cell compute_cell(const ResetClockedWord& prefix, const RegionWord& suffix, const ClockCeiling& k,
                  PowerfulOracle& oracle) {
  Cell c;
  c.successor = find_valid_successor(prefix, suffix, k, std::ref(oracle));
  if (!c.successor) {
    c.resets.assign(suffix.size(), all_reset(k.size()));
    return c;
  }
  c.resets = resets_of(*c.successor);
  ResetClockedWord whole = prefix;
  whole.insert(whole.end(), c.successor->begin(), c.successor->end());
  c.accepted = oracle.membership(whole);
  return c;
}

void fill(ObservationTable& t, PowerfulOracle& oracle) {
  for (auto [r, e] : t.empty_cells()) t.set_cell(r, e, compute_cell(t.rows()[r].word, t.suffixes()[e], t.ceiling(), oracle));
}

namespace {

// Adds r.(action, 0) for every action unless an extension with that clocked word exists.
void add_zero_extensions(ObservationTable& t, std::size_t row, PowerfulOracle& oracle) {
  bool doomed = zero_extension_doomed(t, row);
  for (const auto& action : t.alphabet()) {
    ClockedWord clocked = zero_extension(t, row, action);
    bool present = false;
    for (std::size_t child : t.rows()[row].children)
      if (vw(t.rows()[child].word).back() == clocked.back()) present = true;
    if (present) continue;
    ResetTuple b = doomed ? all_reset(t.clocks()) : oracle.reset_information(clocked);
    ResetClockedWord word = t.rows()[row].word;
    word.push_back({action, clocked.back().values, b});
    t.add_row(word, false);
  }
}

}  // namespace

ObservationTable initial_table(PowerfulOracle& oracle, std::size_t clocks, const ClockCeiling& k) {
  if (k.size() != clocks) throw CeilingMismatch("ceiling length differs from the clock count");
  ObservationTable t(oracle.alphabet(), clocks, k);
  add_zero_extensions(t, 0, oracle);
  fill(t, oracle);
  return t;
}

void make_closed(ObservationTable& t, PowerfulOracle& oracle) {
  auto st = prepared_status(t, false);
  if (st.closed) throw ConditionNotViolated("table is already closed");
  t.promote(*st.unclosed_row);
  add_zero_extensions(t, *st.unclosed_row, oracle);
  fill(t, oracle);
}

void make_consistent(ObservationTable& t, PowerfulOracle& oracle) {
  auto st = prepared_status(t, false);
  if (st.consistent) throw ConditionNotViolated("table is already consistent");
  if (!st.inconsistency) throw Error("inconsistent table but every repair suffix is already present");
  t.add_suffix(st.inconsistency->new_suffix);
  fill(t, oracle);
}

void make_evidence_closed(ObservationTable& t, PowerfulOracle& oracle) {
  auto st = prepared_status(t, true);
  if (st.evidence_closed) throw ConditionNotViolated("table is already evidence-closed");
  const auto& w = *st.missing_evidence;
  ResetClockedWord whole = t.rows()[w.row].word;
  for (const auto& l : *t.cell(w.row, w.suffix)->successor) {
    whole.push_back(l);
    t.add_row(whole, false);
  }
  fill(t, oracle);
}

std::size_t add_counterexample(ObservationTable& t, const ResetDelayTimedWord& ctx, PowerfulOracle& oracle) {
  ResetClockedWord word = reset_clocked_from(ctx);
  std::size_t added = 0;
  ResetClockedWord prefix;
  for (const auto& l : word) {
    prefix.push_back(l);
    if (!t.find_row(prefix)) {
      t.add_row(prefix, false);
      ++added;
    }
  }
  fill(t, oracle);
  return added;
}

namespace {

std::string cell_text(const Cell* c) {
  if (!c) return "?";
  std::string s = c->accepted ? "+" : "-";
  for (const auto& tuple : c->resets) s += "," + format_resets(tuple);
  return s;
}

}  // namespace

std::string dump(const ObservationTable& t) {
  std::ostringstream out;
  out << "E:";
  for (std::size_t e = 0; e < t.suffixes().size(); ++e)
    out << " [" << e << "] " << (t.suffixes()[e].empty() ? "eps" : to_string(t.suffixes()[e], t.ceiling()));
  out << "\n";
  for (int pass = 0; pass < 2; ++pass) {
    out << (pass == 0 ? "S:\n" : "R:\n");
    for (std::size_t r = 0; r < t.rows().size(); ++r) {
      if (t.rows()[r].in_prefixes != (pass == 0)) continue;
      const auto& word = t.rows()[r].word;
      out << "  " << (word.empty() ? "eps" : format_word(word)) << " |";
      for (std::size_t e = 0; e < t.suffixes().size(); ++e) out << " " << cell_text(t.cell(r, e));
      out << "\n";
    }
  }
  out << "guessed resets: " << t.guessed_resets << "\n";
  return out.str();
}

}  // namespace tal
