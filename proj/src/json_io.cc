#include "tal/json_io.hh"

#include "tal/errors.hh"
#include "tal/guard_cover.hh"

#include <fstream>
#include <map>

namespace tal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

int as_int(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_number_unsigned()) return static_cast<int>(j.get<unsigned>());
  fail(path, "expected an integer");
}

bool as_bool(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
  return it->get<bool>();
}

std::size_t clock_index(const json& atom, const char* key, std::size_t clocks, const std::string& path) {
  int c = as_int(field(atom, key, path), path + "." + key);
  if (c < 1 || static_cast<std::size_t>(c) > clocks)
    fail(path + "." + key, "clock index " + std::to_string(c) + " outside 1.." + std::to_string(clocks));
  return static_cast<std::size_t>(c - 1);
}

Interval interval_of_atom(const json& atom, const std::string& path) {
  Interval iv;
  if (atom.contains("min")) {
    iv.lower = as_int(atom["min"], path + ".min");
    if (iv.lower < 0) fail(path + ".min", "bound must be non-negative");
  }
  iv.lower_strict = as_bool(atom, "minStrict", path);
  if (atom.contains("max")) {
    iv.upper = as_int(atom["max"], path + ".max");
    if (*iv.upper < iv.lower) fail(path + ".max", "upper bound below lower bound");
  }
  iv.upper_strict = as_bool(atom, "maxStrict", path);
  return iv;
}

Guard guard_of(const json& atoms, std::size_t clocks, const std::string& path) {
  Guard g(clocks);
  if (!atoms.is_array()) fail(path, "expected an array of atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    if (atoms[i].contains("minusClock")) fail(p, "difference atoms are only allowed in guardRegions");
    std::size_t c = clock_index(atoms[i], "clock", clocks, p);
    g[c] = intersect(g[c], interval_of_atom(atoms[i], p));
  }
  return g;
}

Conjunct conjunct_of_json(const json& atoms, std::size_t clocks, const std::string& path) {
  Conjunct conj{Guard(clocks), {}};
  if (!atoms.is_array()) fail(path, "expected an array of atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    std::size_t c = clock_index(atoms[i], "clock", clocks, p);
    if (atoms[i].contains("minusClock")) {
      DifferenceAtom d;
      d.clock = c;
      d.minus_clock = clock_index(atoms[i], "minusClock", clocks, p);
      d.lo = as_int(field(atoms[i], "min", p), p + ".min");
      d.hi = as_int(field(atoms[i], "max", p), p + ".max");
      d.lo_strict = as_bool(atoms[i], "minStrict", p);
      d.hi_strict = as_bool(atoms[i], "maxStrict", p);
      conj.differences.push_back(d);
    } else {
      conj.box[c] = intersect(conj.box[c], interval_of_atom(atoms[i], p));
    }
  }
  return conj;
}

json atom_json(std::size_t c, const Interval& iv) {
  json atom = {{"clock", c + 1}};
  if (iv.lower != 0 || iv.lower_strict) atom["min"] = iv.lower;
  if (iv.lower_strict) atom["minStrict"] = true;
  if (iv.upper) {
    atom["max"] = *iv.upper;
    if (iv.upper_strict) atom["maxStrict"] = true;
  }
  return atom;
}

json guard_json(const Guard& g) {
  json atoms = json::array();
  for (std::size_t c = 0; c < g.clocks(); ++c)
    if (!g[c].is_full()) atoms.push_back(atom_json(c, g[c]));
  return atoms;
}

json conjunct_json(const Conjunct& conj) {
  json atoms = guard_json(conj.box);
  for (const auto& d : conj.differences) {
    json atom = {{"clock", d.clock + 1}, {"minusClock", d.minus_clock + 1}, {"min", d.lo}, {"max", d.hi}};
    if (d.lo_strict) atom["minStrict"] = true;
    if (d.hi_strict) atom["maxStrict"] = true;
    atoms.push_back(atom);
  }
  return atoms;
}

}  // namespace

TimedAutomaton automaton_from_json(const json& j) {
  const std::string root = "$";
  const json& alphabet_j = field(j, "alphabet", root);
  if (!alphabet_j.is_array() || alphabet_j.empty()) fail("$.alphabet", "expected a non-empty array of strings");
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < alphabet_j.size(); ++i) {
    if (!alphabet_j[i].is_string()) fail("$.alphabet[" + std::to_string(i) + "]", "expected a string");
    alphabet.push_back(alphabet_j[i].get<std::string>());
  }
  int clocks_i = as_int(field(j, "clocks", root), "$.clocks");
  if (clocks_i < 0 || clocks_i > static_cast<int>(Region::max_clocks))
    fail("$.clocks", "clock count must be in 0.." + std::to_string(Region::max_clocks));
  auto clocks = static_cast<std::size_t>(clocks_i);

  TimedAutomaton a(alphabet, clocks);
  const json& locs = field(j, "locations", root);
  if (!locs.is_array() || locs.empty()) fail("$.locations", "expected a non-empty array");
  std::optional<std::size_t> initial;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    std::string p = "$.locations[" + std::to_string(i) + "]";
    int id = as_int(field(locs[i], "id", p), p + ".id");
    if (a.location_index(id)) fail(p + ".id", "duplicate location id " + std::to_string(id));
    std::size_t idx = a.add_location(id, as_bool(locs[i], "accepting", p));
    if (as_bool(locs[i], "initial", p)) {
      if (initial) fail(p + ".initial", "more than one initial location");
      initial = idx;
    }
  }
  if (!initial) fail("$.locations", "no initial location");
  a.set_initial(*initial);

  const json& trans = j.contains("transitions") ? j["transitions"] : json::array();
  if (!trans.is_array()) fail("$.transitions", "expected an array");

  // The ceiling must be known before region guards can be read.
  std::vector<int> ceiling(clocks, 1);
  std::optional<std::vector<int>> declared;
  if (j.contains("ceilings")) {
    const json& cj = j["ceilings"];
    if (!cj.is_array() || cj.size() != clocks) fail("$.ceilings", "expected one ceiling per clock");
    declared.emplace();
    for (std::size_t c = 0; c < clocks; ++c) {
      int v = as_int(cj[c], "$.ceilings[" + std::to_string(c) + "]");
      if (v < 0) fail("$.ceilings[" + std::to_string(c) + "]", "ceiling must be non-negative");
      declared->push_back(v);
      ceiling[c] = std::max(ceiling[c], v);
    }
  }
  for (std::size_t i = 0; i < trans.size(); ++i) {
    std::string p = "$.transitions[" + std::to_string(i) + "]";
    auto bump = [&](const json& atoms, const std::string& path) {
      if (!atoms.is_array()) fail(path, "expected an array");
      for (std::size_t x = 0; x < atoms.size(); ++x) {
        std::string ap = path + "[" + std::to_string(x) + "]";
        if (atoms[x].contains("minusClock")) continue;
        std::size_t c = clock_index(atoms[x], "clock", clocks, ap);
        Interval iv = interval_of_atom(atoms[x], ap);
        if (declared && iv.max_constant() > (*declared)[c])
          fail(ap, "constant " + std::to_string(iv.max_constant()) + " exceeds declared ceiling " +
                       std::to_string((*declared)[c]));
        ceiling[c] = std::max(ceiling[c], iv.max_constant());
      }
    };
    if (trans[i].contains("guard")) bump(trans[i]["guard"], p + ".guard");
    if (trans[i].contains("guardRegions")) {
      const json& gr = trans[i]["guardRegions"];
      if (!gr.is_array()) fail(p + ".guardRegions", "expected an array of conjuncts");
      for (std::size_t x = 0; x < gr.size(); ++x) bump(gr[x], p + ".guardRegions[" + std::to_string(x) + "]");
    }
  }
  ClockCeiling k(ceiling);
  a.set_ceiling(k);

  for (std::size_t i = 0; i < trans.size(); ++i) {
    std::string p = "$.transitions[" + std::to_string(i) + "]";
    const json& t = trans[i];
    int from = as_int(field(t, "from", p), p + ".from");
    int to = as_int(field(t, "to", p), p + ".to");
    auto src = a.location_index(from);
    auto dst = a.location_index(to);
    if (!src) fail(p + ".from", "unknown location " + std::to_string(from));
    if (!dst) fail(p + ".to", "unknown location " + std::to_string(to));
    const json& action_j = field(t, "action", p);
    if (!action_j.is_string()) fail(p + ".action", "expected a string");
    auto action = a.action_index(action_j.get<std::string>());
    if (!action) fail(p + ".action", "action '" + action_j.get<std::string>() + "' is not in the alphabet");
    ResetTuple resets = no_reset(clocks);
    if (t.contains("resets")) {
      const json& rj = t["resets"];
      if (!rj.is_array()) fail(p + ".resets", "expected an array of clock indices");
      for (std::size_t x = 0; x < rj.size(); ++x) {
        std::string rp = p + ".resets[" + std::to_string(x) + "]";
        int c = as_int(rj[x], rp);
        if (c < 1 || static_cast<std::size_t>(c) > clocks) fail(rp, "clock index outside 1.." + std::to_string(clocks));
        resets[static_cast<std::size_t>(c - 1)] = true;
      }
    }
    GuardForm guard;
    if (t.contains("guardRegions")) {
      if (t.contains("guard")) fail(p, "both 'guard' and 'guardRegions' given");
      std::vector<Conjunct> conjuncts;
      const json& gr = t["guardRegions"];
      for (std::size_t x = 0; x < gr.size(); ++x)
        conjuncts.push_back(conjunct_of_json(gr[x], clocks, p + ".guardRegions[" + std::to_string(x) + "]"));
      guard = regions_of(conjuncts, k);
    } else {
      guard = t.contains("guard") ? guard_of(t["guard"], clocks, p + ".guard") : Guard::full(clocks);
      if (std::get<Guard>(guard).is_empty()) fail(p + ".guard", "empty guard");
    }
    a.add_transition({*src, *action, std::move(guard), std::move(resets), *dst});
  }
  return a;
}

TimedAutomaton load_automaton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return automaton_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json to_json(const TimedAutomaton& a, bool render_guards) {
  json j;
  j["alphabet"] = a.alphabet();
  j["clocks"] = a.clocks();
  json locs = json::array();
  for (std::size_t l = 0; l < a.locations().size(); ++l)
    locs.push_back({{"id", a.locations()[l].id}, {"initial", l == a.initial()}, {"accepting", a.locations()[l].accepting}});
  j["locations"] = locs;
  json trans = json::array();
  for (const auto& t : a.transitions()) {
    json tj = {{"from", a.locations()[t.source].id}, {"to", a.locations()[t.target].id}, {"action", a.alphabet()[t.action]}};
    json text = json::array();
    if (const auto* box = std::get_if<Guard>(&t.guard)) {
      tj["guard"] = guard_json(*box);
      text.push_back(to_string(*box));
    } else {
      json regions = json::array();
      for (const Conjunct& conj : cover(std::get<RegionSet>(t.guard))) {
        regions.push_back(conjunct_json(conj));
        text.push_back(to_string(conj));
      }
      tj["guardRegions"] = regions;
    }
    json resets = json::array();
    for (std::size_t c = 0; c < a.clocks(); ++c)
      if (t.resets[c]) resets.push_back(c + 1);
    tj["resets"] = resets;
    if (render_guards) tj["guardText"] = text;
    trans.push_back(tj);
  }
  j["transitions"] = trans;
  j["ceilings"] = a.ceiling().values();
  return j;
}

void save_automaton(const TimedAutomaton& a, const std::string& path, bool render_guards) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot write file");
  out << to_json(a, render_guards).dump(2) << "\n";
}

json rational_to_json(const Rational& x) {
  if (x.denominator() == 1) return x.numerator();
  return to_string(x);
}

Rational rational_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a rational (integer or \"p/q\" string)");
}

json to_json(const Counterexample& ce) {
  json word = json::array();
  for (const auto& l : ce.word) word.push_back({l.action, to_string(l.delay)});
  return {{"word", word}, {"sign", ce.positive ? "+" : "-"}};
}

}  // namespace tal
