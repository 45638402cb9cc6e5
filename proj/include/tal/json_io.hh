#pragma once

#include "tal/automaton.hh"
#include "tal/equivalence.hh"

#include <json.hpp>

#include <string>

namespace tal {

// Throws ParseError with a JSON-path-qualified message.
TimedAutomaton automaton_from_json(const nlohmann::json& j);
TimedAutomaton load_automaton(const std::string& path);

// Region guards are written as "guardRegions"; render_guards adds "guardText".
nlohmann::json to_json(const TimedAutomaton& a, bool render_guards = false);
void save_automaton(const TimedAutomaton& a, const std::string& path, bool render_guards = false);

nlohmann::json rational_to_json(const Rational& x);
Rational rational_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json to_json(const Counterexample& ce);

}  // namespace tal
