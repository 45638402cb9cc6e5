#include "tal/equivalence.hh"

#include "tal/errors.hh"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

namespace tal {

TimedAutomaton complement(const TimedAutomaton& a) {
  if (!is_complete(a)) throw IncompleteAutomaton("complement requires a complete deterministic automaton");
  TimedAutomaton out = a;
  for (std::size_t l = 0; l < a.locations().size(); ++l) out.set_accepting(l, !a.locations()[l].accepting);
  return out;
}

ProductAutomaton::ProductAutomaton(TimedAutomaton left, TimedAutomaton right)
    : left_(std::make_shared<const TimedAutomaton>(std::move(left))),
      right_(std::make_shared<const TimedAutomaton>(std::move(right))) {}

ProductAutomaton intersect(const TimedAutomaton& a, const TimedAutomaton& b) {
  if (a.alphabet() != b.alphabet()) throw AlphabetMismatch("product operands have different alphabets");
  return ProductAutomaton(a, b);
}

namespace {

struct Node {
  std::size_t left = 0, right = 0;
  Region region;
  std::size_t parent = 0;
  Region delayed;  // region just before the discrete step into this node
  std::size_t action = 0;
};

struct NodeKey {
  std::size_t left, right;
  Region region;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    return k.region.hash() ^ (k.left * 0x9e3779b97f4a7c15ull) ^ (k.right * 0xc2b2ae3d27d4eb4full);
  }
};

std::optional<std::size_t> enabled_on_region(const TimedAutomaton& a, std::size_t loc, std::size_t action,
                                             const Region& r, const ClockCeiling& k, std::size_t offset) {
  std::optional<std::size_t> found;
  for (std::size_t t : a.outgoing(loc, action)) {
    if (!guard_holds(a.transitions()[t].guard, r, k, offset)) continue;
    if (found)
      throw NondeterministicAutomaton("two transitions enabled at location " + std::to_string(a.locations()[loc].id) +
                                      " on '" + a.alphabet()[action] + "'");
    found = t;
  }
  if (!found)
    throw IncompleteAutomaton("no transition enabled at location " + std::to_string(a.locations()[loc].id) + " on '" +
                              a.alphabet()[action] + "'");
  return found;
}

// Classifies a pair of locations: 0 = uninteresting, otherwise a caller-defined rank.
// Search stops at the first node of rank `stop_rank`; for other nonzero ranks the
// first (shortest) hit is remembered.
template <class Classify>
std::optional<std::pair<std::vector<Node>, std::size_t>> search(const TimedAutomaton& a, const TimedAutomaton& b,
                                                                 Classify classify, int stop_rank,
                                                                 int* found_rank) {
  if (a.alphabet() != b.alphabet()) throw AlphabetMismatch("product operands have different alphabets");
  ClockCeiling k = concat(a.ceiling(), b.ceiling());
  std::size_t na = a.clocks();
  std::size_t n = na + b.clocks();

  std::vector<Node> nodes;
  std::unordered_map<NodeKey, std::size_t, NodeKeyHash> seen;
  Region zero(n);
  nodes.push_back({a.initial(), b.initial(), zero, 0, zero, 0});
  seen.emplace(NodeKey{a.initial(), b.initial(), zero}, 0);

  std::optional<std::size_t> remembered;
  int remembered_rank = 0;
  auto consider = [&](std::size_t idx) {
    int rank = classify(nodes[idx].left, nodes[idx].right);
    if (rank == 0) return false;
    if (rank == stop_rank) {
      remembered = idx;
      remembered_rank = rank;
      return true;
    }
    if (!remembered) {
      remembered = idx;
      remembered_rank = rank;
    }
    return false;
  };

  [[maybe_unused]] std::uint64_t budget =
      a.locations().size() * b.locations().size() * region_count_bound(k);
  bool stop = consider(0);
  for (std::size_t head = 0; head < nodes.size() && !stop; ++head) {
    std::vector<Region> chain = delay_successors(nodes[head].region, k);
    for (std::size_t s = 0; s < a.alphabet().size() && !stop; ++s) {
      for (const Region& r : chain) {
        std::size_t ta = *enabled_on_region(a, nodes[head].left, s, r, k, 0);
        std::size_t tb = *enabled_on_region(b, nodes[head].right, s, r, k, na);
        ResetTuple resets = a.transitions()[ta].resets;
        const auto& rb = b.transitions()[tb].resets;
        resets.insert(resets.end(), rb.begin(), rb.end());
        Region next = reset_region(r, resets);
        NodeKey key{a.transitions()[ta].target, b.transitions()[tb].target, next};
        if (seen.count(key)) continue;
        seen.emplace(key, nodes.size());
        nodes.push_back({key.left, key.right, next, head, r, s});
        assert(nodes.size() <= budget);
        if (consider(nodes.size() - 1)) {
          stop = true;
          break;
        }
      }
    }
  }
  if (!remembered) return std::nullopt;
  *found_rank = remembered_rank;
  return std::make_pair(std::move(nodes), *remembered);
}

DelayTimedWord concretize(const std::vector<Node>& nodes, std::size_t idx, const TimedAutomaton& a,
                          const TimedAutomaton& b) {
  std::vector<std::size_t> path;
  for (std::size_t i = idx; i != 0; i = nodes[i].parent) path.push_back(i);
  std::reverse(path.begin(), path.end());
  ClockCeiling k = concat(a.ceiling(), b.ceiling());
  std::size_t na = a.clocks();
  ClockValuation v = zero_valuation(k.size());
  DelayTimedWord out;
  for (std::size_t i : path) {
    const Node& node = nodes[i];
    auto d = solve_delay(v, node.delayed, k);
    if (!d) throw std::logic_error("symbolic path cannot be concretized");
    for (auto& x : v) x += *d;
    std::size_t ta = *enabled_on_region(a, nodes[node.parent].left, node.action, node.delayed, k, 0);
    std::size_t tb = *enabled_on_region(b, nodes[node.parent].right, node.action, node.delayed, k, na);
    for (std::size_t c = 0; c < na; ++c)
      if (a.transitions()[ta].resets[c]) v[c] = 0;
    for (std::size_t c = 0; c < b.clocks(); ++c)
      if (b.transitions()[tb].resets[c]) v[na + c] = 0;
    out.push_back({a.alphabet()[node.action], *d});
  }
  return out;
}

}  // namespace

std::optional<DelayTimedWord> find_accepted_word(const ProductAutomaton& p) {
  const auto& a = p.left();
  const auto& b = p.right();
  int rank = 0;
  auto hit = search(
      a, b, [&](std::size_t l, std::size_t r) { return p.accepting(l, r) ? 1 : 0; }, 1, &rank);
  if (!hit) return std::nullopt;
  return concretize(hit->first, hit->second, a, b);
}

EquivalenceVerdict equivalent(const TimedAutomaton& target, const TimedAutomaton& hypothesis) {
  // rank 1: hypothesis accepts, target rejects (checked first); rank 2: the converse.
  auto classify = [&](std::size_t l, std::size_t r) {
    bool in_target = target.locations()[l].accepting;
    bool in_hyp = hypothesis.locations()[r].accepting;
    if (in_hyp && !in_target) return 1;
    if (in_target && !in_hyp) return 2;
    return 0;
  };
  int rank = 0;
  auto hit = search(target, hypothesis, classify, 1, &rank);
  if (!hit) return std::nullopt;
  Counterexample ce;
  ce.word = concretize(hit->first, hit->second, target, hypothesis);
  ce.positive = rank == 2;
  RunResult in_target = run(target, ce.word);
  ce.target_resets = in_target.reset_word;
#ifndef NDEBUG
  if (in_target.accepted == run(hypothesis, ce.word).accepted)
    throw std::logic_error("equivalence witness does not separate the automata");
#endif
  return ce;
}

}  // namespace tal
