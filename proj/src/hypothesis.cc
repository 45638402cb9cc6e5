#include "tal/hypothesis.hh"

#include "tal/errors.hh"
#include "tal/guard_cover.hh"

#include <algorithm>
#include <cassert>
#include <map>

namespace tal {

std::optional<std::size_t> AbstractDFA::step(std::size_t location, const ResetClockedLetter& letter) const {
  for (const auto& t : transitions)
    if (t.source == location && t.letter == letter) return t.target;
  return std::nullopt;
}

std::optional<bool> AbstractDFA::accepts(const ResetClockedWord& word) const {
  std::size_t loc = initial;
  for (const auto& l : word) {
    auto next = step(loc, l);
    if (!next) return std::nullopt;
    loc = *next;
  }
  return accepting[loc];
}

AbstractDFA build_dfa(const ObservationTable& t, bool check_evidence) {
  auto st = prepared_status(t, check_evidence);
  if (!st.prepared(check_evidence)) throw TableNotPrepared("hypothesis construction needs a prepared table");

  AbstractDFA m;
  m.alphabet = t.alphabet();
  m.clocks = t.clocks();
  m.kappa = t.ceiling();
  const auto& rows = t.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].in_prefixes) continue;
    m.representative.push_back(i);
    m.accepting.push_back(t.accepting(i));
  }
  m.location_of_row.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = std::find_if(m.representative.begin(), m.representative.end(),
                           [&](std::size_t s) { return t.same_row(s, i); });
    m.location_of_row[i] = static_cast<std::size_t>(it - m.representative.begin());
  }
  m.initial = m.location_of_row[0];

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].parent) continue;
    std::size_t src = m.location_of_row[*rows[i].parent];
    std::size_t dst = m.location_of_row[i];
    const auto& letter = rows[i].word.back();
    if (auto known = m.step(src, letter)) {
      if (*known != dst) throw ConflictingAbstractTransitions("one abstract letter leads to two locations");
      continue;
    }
    m.transitions.push_back({src, letter, dst});
  }
  return m;
}

PartitionResult partition(std::vector<ClockValuation> psi, const ClockCeiling& kappa) {
  std::size_t clocks = kappa.size();
  std::sort(psi.begin(), psi.end(), [](const auto& x, const auto& y) { return lex_leq(x, y) && x != y; });
  for (std::size_t i = 1; i < psi.size(); ++i)
    if (psi[i] == psi[i - 1]) throw DuplicateValuation("valuation " + format_valuation(psi[i]) + " given twice");
  if (psi.empty() || psi.front() != zero_valuation(clocks))
    throw MissingZeroValuation("the zero valuation must be among the partitioned valuations");

  std::vector<Region> own(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    own[i] = region_of(psi[i], kappa);
    for (std::size_t j = 0; j < i; ++j)
      if (own[j] == own[i])
        throw DuplicateValuation(format_valuation(psi[j]) + " and " + format_valuation(psi[i]) + " share a region");
  }

  std::vector<int> refined = kappa.values();
  for (const auto& v : psi)
    for (std::size_t c = 0; c < clocks; ++c) refined[c] = std::max<int>(refined[c], static_cast<int>(ceil_of(v[c])));
  ClockCeiling k(refined);

  PartitionResult res;
  PartitionTrace& tr = res.trace;
  tr.valuations = psi;
  tr.refined = k;
  std::size_t n = psi.size();

  auto exceeds = [&](const ClockValuation& v) {
    for (std::size_t c = 0; c < clocks; ++c)
      if (v[c] > kappa[c]) return true;
    return false;
  };
  auto own_set = [&](std::size_t i) { return RegionSet::single(own[i], kappa).refine(k); };

  tr.u0 = RegionSet::empty(k);
  for (std::size_t i = 0; i < n; ++i) {
    tr.a.push_back(exceeds(psi[i]) ? own_set(i) : RegionSet::empty(k));
    tr.u0 = tr.u0.unite(tr.a.back());
  }

  for (const auto& v : psi) {
    std::vector<LowerBound> atoms;
    for (std::size_t c = 0; c < clocks; ++c) {
      if (is_integral(v[c]))
        atoms.push_back({c, static_cast<int>(v[c].numerator()), false});
      else
        atoms.push_back({c, static_cast<int>(floor_of(v[c])), true});
    }
    tr.u.push_back(RegionSet::from_lower_bounds(atoms, k));
  }

  tr.w.assign(n, RegionSet::empty(k));
  RegionSet taken = tr.u0;
  for (std::size_t i = n; i-- > 0;) {
    tr.w[i] = tr.u[i].difference(taken);
    taken = taken.unite(tr.w[i]);
  }

  std::vector<RegionSet> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = tr.w[i].unite(tr.a[i]);

  auto carve = [&](std::size_t i) {
    RegionSet mine = own_set(i);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) blocks[j] = blocks[j].difference(mine);
    blocks[i] = blocks[i].unite(mine);
  };

  // Members with no A-part and identical U: all but the largest get their own region.
  std::vector<bool> grouped(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (grouped[i] || !tr.a[i].is_empty()) continue;
    std::vector<std::size_t> group{i};
    for (std::size_t j = i + 1; j < n; ++j)
      if (!grouped[j] && tr.a[j].is_empty() && tr.u[j] == tr.u[i]) group.push_back(j);
    for (std::size_t j : group) grouped[j] = true;
    if (group.size() < 2) continue;
    tr.regrouped.push_back(group);
    for (std::size_t g = 0; g + 1 < group.size(); ++g) carve(group[g]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (blocks[i].contains(psi[i])) continue;
    tr.repaired.push_back(i);
    carve(i);
  }
  res.blocks = std::move(blocks);
  return res;
}

TimedAutomaton build_hypothesis(const AbstractDFA& m) {
  TimedAutomaton h(m.alphabet, m.clocks);
  for (std::size_t l = 0; l < m.size(); ++l) h.add_location(static_cast<int>(l), m.accepting[l]);
  h.set_initial(m.initial);

  struct Group {
    ClockValuation representative;
    ResetTuple resets;
    std::size_t target;
  };
  for (std::size_t l = 0; l < m.size(); ++l) {
    for (std::size_t a = 0; a < m.alphabet.size(); ++a) {
      std::map<Region, Group> groups;
      for (const auto& t : m.transitions) {
        if (t.source != l || t.letter.action != m.alphabet[a]) continue;
        Region r = region_of(t.letter.values, m.kappa);
        auto [it, fresh] = groups.emplace(r, Group{t.letter.values, t.letter.resets, t.target});
        if (fresh) continue;
        if (it->second.resets != t.letter.resets || it->second.target != t.target)
          throw ConflictingAbstractTransitions("letters in one region of location " + std::to_string(l) +
                                               " disagree on resets or target");
        if (lex_leq(t.letter.values, it->second.representative)) it->second.representative = t.letter.values;
      }
      std::vector<ClockValuation> psi;
      for (const auto& [r, g] : groups) psi.push_back(g.representative);
      auto parts = partition(psi, m.kappa);
      for (std::size_t i = 0; i < parts.blocks.size(); ++i) {
        const auto& g = groups.at(region_of(parts.trace.valuations[i], m.kappa));
        if (parts.blocks[i].is_empty()) continue;
        h.add_transition({l, a, parts.blocks[i], g.resets, g.target});
      }
    }
  }
  return h;
}

std::vector<std::string> render_guard(const RegionSet& guard) {
  std::vector<std::string> out;
  for (const auto& c : cover(guard)) out.push_back(to_string(c));
  return out;
}

}  // namespace tal
