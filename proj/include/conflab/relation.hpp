#pragma once

// The abstract-rewriting vocabulary: a relation is a finite one-step reduct
// function over some carrier type T (untyped Term, typed TTerm, ...). The
// property checkers and closure searches are templated over T so the same
// machinery serves every calculus in the library.

#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

namespace conflab {

// A finitely-branching reduction relation: reducts(t) lists the one-step
// successors of t as an ordered, duplicate-free vector (canonical order:
// outermost-leftmost redex first for the syntactic relations).
template <class T>
struct BasicRelation {
  std::string name;
  std::function<std::vector<T>(const T&)> reducts;
};

// A reduction sequence, endpoints included: steps.front() is the source,
// steps.back() the target; size() == 1 means the empty sequence.
template <class T>
using BasicTrace = std::vector<T>;

// Evidence that two terms join: witness plus the two traces leading to it.
template <class T>
struct BasicJoin {
  T witness;
  BasicTrace<T> left_trace;
  BasicTrace<T> right_trace;
};

// Evidence that a property instance failed: the peak, the two diverging
// branches, the traces that reach them, and a human-readable reason.
template <class T>
struct BasicCounterexample {
  T peak;
  T left;
  T right;
  BasicTrace<T> left_trace;
  BasicTrace<T> right_trace;
  std::string reason;
};

// Remove duplicates, keeping the first occurrence of each element.
template <class T>
void dedup_keep_first(std::vector<T>& v) {
  std::unordered_set<T> seen;
  std::vector<T> out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  v = std::move(out);
}

// Pointwise union of two relations over the same carrier: R's reducts, then
// S's, deduplicated keeping first occurrences. Set-equal to running both.
template <class T>
BasicRelation<T> union_rel(const BasicRelation<T>& r,
                           const BasicRelation<T>& s) {
  auto rf = r.reducts;
  auto sf = s.reducts;
  return BasicRelation<T>{
      r.name + "+" + s.name, [rf, sf](const T& t) {
        std::vector<T> out = rf(t);
        std::vector<T> more = sf(t);
        out.insert(out.end(), more.begin(), more.end());
        dedup_keep_first(out);
        return out;
      }};
}

}  // namespace conflab
