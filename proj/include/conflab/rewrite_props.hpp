#pragma once

// Budgeted rewriting-property checks over generated corpora: diamond,
// strong commutation, commutation, confluence, and the strip property.
//
// Outcome semantics: Fail is reported only on a definitive refutation — the
// closures involved were fully computed (saturated) and no closing term
// exists. Budget exhaustion never refutes: an instance whose search was cut
// short without finding a definite failure is counted inconclusive. Every
// check scans its whole corpus; the counterexample reported for a failing
// run is the one for the lowest-index failing instance, so results do not
// depend on the worker count (CONFLUENCE_LAB_THREADS; unset or <= 1 means
// sequential).

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "conflab/generator.hpp"
#include "conflab/reduction.hpp"
#include "conflab/relation.hpp"
#include "conflab/term.hpp"

namespace conflab {

enum class PropertyKind {
  Diamond,
  StrongCommutation,
  Commutation,
  Confluence,
  Strip,
};

inline std::string property_name(PropertyKind p) {
  switch (p) {
    case PropertyKind::Diamond: return "diamond";
    case PropertyKind::StrongCommutation: return "strong-commutation";
    case PropertyKind::Commutation: return "commutation";
    case PropertyKind::Confluence: return "confluence";
    case PropertyKind::Strip: return "strip";
  }
  return "?";
}

enum class Outcome { Pass, Fail, Inconclusive };

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

// Limits for the multi-step searches: depth is the maximum number of steps
// in any closure, nodes the maximum number of distinct terms per closure.
struct SearchBudget {
  int depth = 8;
  int nodes = 10000;
};

template <class T>
struct BasicPropertyReport {
  PropertyKind property = PropertyKind::Diamond;
  std::vector<std::string> relations;
  Outcome outcome = Outcome::Pass;
  std::optional<BasicCounterexample<T>> counterexample;
  std::size_t instances_checked = 0;
  std::size_t inconclusive_instances = 0;
  double elapsed_ms = 0.0;
};

// Report for a corpus-driven untyped check, carrying the corpus spec so the
// run is reproducible from the report alone.
struct PropertyReport : BasicPropertyReport<Term> {
  CorpusSpec corpus;
};

namespace detail {

inline int env_thread_count() {
  const char* v = std::getenv("CONFLUENCE_LAB_THREADS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n > 1 ? n : 1;
}

template <class T>
struct InstanceOutcome {
  bool fail = false;
  bool inconclusive = false;
  std::optional<BasicCounterexample<T>> cex;
};

// Run `check` on every corpus index (striped across workers when
// CONFLUENCE_LAB_THREADS asks for them) and fold the per-instance outcomes:
// the lowest failing index supplies the counterexample.
template <class T, class Check>
BasicPropertyReport<T> run_corpus_check(PropertyKind prop,
                                        std::vector<std::string> relations,
                                        std::size_t count, Check&& check) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<InstanceOutcome<T>> results(count);
  int workers = env_thread_count();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = check(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count;
             i = next.fetch_add(1))
          results[i] = check(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  BasicPropertyReport<T> rep;
  rep.property = prop;
  rep.relations = std::move(relations);
  rep.instances_checked = count;
  std::optional<std::size_t> first_fail;
  for (std::size_t i = 0; i < count; ++i) {
    if (results[i].fail && !first_fail) first_fail = i;
    if (results[i].inconclusive) ++rep.inconclusive_instances;
  }
  if (first_fail) {
    rep.outcome = Outcome::Fail;
    rep.counterexample = std::move(results[*first_fail].cex);
  } else {
    rep.outcome =
        rep.inconclusive_instances > 0 ? Outcome::Inconclusive : Outcome::Pass;
  }
  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return rep;
}

template <class T>
InstanceOutcome<T> diamond_instance(const T& m, const BasicRelation<T>& rel) {
  InstanceOutcome<T> out;
  std::vector<T> rs = rel.reducts(m);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (not_one_step_joinable(rs[i], rs[j], rel)) {
        out.fail = true;
        out.cex = BasicCounterexample<T>{
            m,
            rs[i],
            rs[j],
            {m, rs[i]},
            {m, rs[j]},
            "the two reducts are distinct, are not related by a single step, "
            "and share no one-step reduct"};
        return out;
      }
    }
  }
  return out;
}

// Strong commutation, oriented: for every m ->r m1 and m ->s m2 there must
// be an n with m1 ->s* n and m2 ->r= n (at most one r step).
template <class T>
InstanceOutcome<T> strong_commutation_instance(const T& m,
                                               const BasicRelation<T>& r,
                                               const BasicRelation<T>& s,
                                               const SearchBudget& b) {
  InstanceOutcome<T> out;
  std::vector<T> lefts = r.reducts(m);
  std::vector<T> rights = s.reducts(m);
  for (const T& m1 : lefts) {
    for (const T& m2 : rights) {
      if (m1 == m2) continue;
      ReachResult<T> sclo = reachable(m1, s, b.depth, b.nodes);
      std::unordered_set<T> sset(sclo.terms.begin(), sclo.terms.end());
      bool found = sset.count(m2) > 0;
      if (!found) {
        for (const T& n : r.reducts(m2)) {
          if (sset.count(n)) {
            found = true;
            break;
          }
        }
      }
      if (found) continue;
      if (sclo.saturated) {
        out.fail = true;
        out.inconclusive = false;
        out.cex = BasicCounterexample<T>{
            m,
            m1,
            m2,
            {m, m1},
            {m, m2},
            "no term closes the square: nothing reachable from the left leg "
            "equals the right leg or any of its one-step successors"};
        return out;
      }
      out.inconclusive = true;
    }
  }
  return out;
}

// Per-instance cache of budgeted closures, with membership sets.
template <class T>
class ClosureCache {
 public:
  ClosureCache(const BasicRelation<T>& rel, const SearchBudget& b)
      : rel_(rel), budget_(b) {}

  struct Entry {
    ReachResult<T> clo;
    std::unordered_set<T> members;
  };

  const Entry& of(const T& t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    Entry e;
    e.clo = reachable(t, rel_, budget_.depth, budget_.nodes);
    e.members.insert(e.clo.terms.begin(), e.clo.terms.end());
    return cache_.emplace(t, std::move(e)).first->second;
  }

 private:
  const BasicRelation<T>& rel_;
  SearchBudget budget_;
  std::unordered_map<T, Entry> cache_;
};

// Commutation: every r-star leg and s-star leg from m must be closable by
// s-star / r-star respectively.
template <class T>
InstanceOutcome<T> commutation_instance(const T& m, const BasicRelation<T>& r,
                                        const BasicRelation<T>& s,
                                        const SearchBudget& b) {
  InstanceOutcome<T> out;
  ParentClosure<T> cr = parent_closure(m, r, b.depth, b.nodes);
  ParentClosure<T> cs = parent_closure(m, s, b.depth, b.nodes);
  if (cr.truncated || cs.truncated) out.inconclusive = true;
  ClosureCache<T> sclo(s, b), rclo(r, b);
  for (const T& m1 : cr.order) {
    for (const T& m2 : cs.order) {
      if (m1 == m2) continue;
      const auto& left = sclo.of(m1);
      const auto& right = rclo.of(m2);
      bool found = false;
      for (const T& t : left.clo.terms) {
        if (right.members.count(t)) {
          found = true;
          break;
        }
      }
      if (found) continue;
      if (left.clo.saturated && right.clo.saturated) {
        out.fail = true;
        out.inconclusive = false;
        out.cex = BasicCounterexample<T>{
            m,
            m1,
            m2,
            cr.trace_to(m1),
            cs.trace_to(m2),
            "the squares cannot be closed: the two legs have no common "
            "successor"};
        return out;
      }
      out.inconclusive = true;
    }
  }
  return out;
}

// Confluence is commutation of a relation with itself; one closure serves
// both sides.
template <class T>
InstanceOutcome<T> confluence_instance(const T& m, const BasicRelation<T>& rel,
                                       const SearchBudget& b) {
  InstanceOutcome<T> out;
  ParentClosure<T> c = parent_closure(m, rel, b.depth, b.nodes);
  if (c.truncated) out.inconclusive = true;
  ClosureCache<T> clo(rel, b);
  for (std::size_t i = 0; i < c.order.size(); ++i) {
    for (std::size_t j = i + 1; j < c.order.size(); ++j) {
      const T& m1 = c.order[i];
      const T& m2 = c.order[j];
      const auto& left = clo.of(m1);
      const auto& right = clo.of(m2);
      bool found = false;
      for (const T& t : left.clo.terms) {
        if (right.members.count(t)) {
          found = true;
          break;
        }
      }
      if (found) continue;
      if (left.clo.saturated && right.clo.saturated) {
        out.fail = true;
        out.inconclusive = false;
        out.cex = BasicCounterexample<T>{
            m,
            m1,
            m2,
            c.trace_to(m1),
            c.trace_to(m2),
            "two reducts of the peak have no common successor"};
        return out;
      }
      out.inconclusive = true;
    }
  }
  return out;
}

// Strip: a single step on one side against a multi-step reduction on the
// other, both closed by multi-step reduction.
template <class T>
InstanceOutcome<T> strip_instance(const T& m, const BasicRelation<T>& rel,
                                  const SearchBudget& b) {
  InstanceOutcome<T> out;
  std::vector<T> ones = rel.reducts(m);
  ParentClosure<T> many = parent_closure(m, rel, b.depth, b.nodes);
  if (many.truncated) out.inconclusive = true;
  ClosureCache<T> clo(rel, b);
  for (const T& m1 : ones) {
    for (const T& m2 : many.order) {
      if (m1 == m2) continue;
      const auto& left = clo.of(m1);
      const auto& right = clo.of(m2);
      bool found = false;
      for (const T& t : left.clo.terms) {
        if (right.members.count(t)) {
          found = true;
          break;
        }
      }
      if (found) continue;
      if (left.clo.saturated && right.clo.saturated) {
        out.fail = true;
        out.inconclusive = false;
        out.cex = BasicCounterexample<T>{
            m,
            m1,
            m2,
            {m, m1},
            many.trace_to(m2),
            "the single-step leg and the multi-step leg have no common "
            "successor"};
        return out;
      }
      out.inconclusive = true;
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Corpus-level checks over an explicit term vector (any term type)

template <class T>
BasicPropertyReport<T> check_diamond_on(const std::vector<T>& corpus,
                                        const BasicRelation<T>& rel) {
  return detail::run_corpus_check<T>(
      PropertyKind::Diamond, {rel.name}, corpus.size(),
      [&](std::size_t i) { return detail::diamond_instance(corpus[i], rel); });
}

template <class T>
BasicPropertyReport<T> check_strong_commutation_on(const std::vector<T>& corpus,
                                                   const BasicRelation<T>& r,
                                                   const BasicRelation<T>& s,
                                                   SearchBudget budget = {}) {
  return detail::run_corpus_check<T>(
      PropertyKind::StrongCommutation, {r.name, s.name}, corpus.size(),
      [&](std::size_t i) {
        return detail::strong_commutation_instance(corpus[i], r, s, budget);
      });
}

template <class T>
BasicPropertyReport<T> check_commutation_on(const std::vector<T>& corpus,
                                            const BasicRelation<T>& r,
                                            const BasicRelation<T>& s,
                                            SearchBudget budget = {}) {
  return detail::run_corpus_check<T>(
      PropertyKind::Commutation, {r.name, s.name}, corpus.size(),
      [&](std::size_t i) {
        return detail::commutation_instance(corpus[i], r, s, budget);
      });
}

template <class T>
BasicPropertyReport<T> check_confluence_on(const std::vector<T>& corpus,
                                           const BasicRelation<T>& rel,
                                           SearchBudget budget = {}) {
  return detail::run_corpus_check<T>(
      PropertyKind::Confluence, {rel.name}, corpus.size(), [&](std::size_t i) {
        return detail::confluence_instance(corpus[i], rel, budget);
      });
}

template <class T>
BasicPropertyReport<T> check_strip_on(const std::vector<T>& corpus,
                                      const BasicRelation<T>& rel,
                                      SearchBudget budget = {}) {
  return detail::run_corpus_check<T>(
      PropertyKind::Strip, {rel.name}, corpus.size(), [&](std::size_t i) {
        return detail::strip_instance(corpus[i], rel, budget);
      });
}

// ---------------------------------------------------------------------------
// Corpus-spec entry points (untyped)

namespace detail {
inline PropertyReport with_corpus(BasicPropertyReport<Term> base,
                                  const CorpusSpec& spec) {
  PropertyReport rep;
  static_cast<BasicPropertyReport<Term>&>(rep) = std::move(base);
  rep.corpus = spec;
  return rep;
}
}  // namespace detail

inline PropertyReport check_diamond(const CorpusSpec& spec,
                                    const Relation& rel) {
  return detail::with_corpus(check_diamond_on(gen_terms(spec), rel), spec);
}

inline PropertyReport check_strong_commutation(const CorpusSpec& spec,
                                               const Relation& r,
                                               const Relation& s,
                                               SearchBudget budget = {}) {
  return detail::with_corpus(
      check_strong_commutation_on(gen_terms(spec), r, s, budget), spec);
}

inline PropertyReport check_commutation(const CorpusSpec& spec,
                                        const Relation& r, const Relation& s,
                                        SearchBudget budget = {}) {
  return detail::with_corpus(
      check_commutation_on(gen_terms(spec), r, s, budget), spec);
}

inline PropertyReport check_confluence(const CorpusSpec& spec,
                                       const Relation& rel,
                                       SearchBudget budget = {}) {
  return detail::with_corpus(check_confluence_on(gen_terms(spec), rel, budget),
                             spec);
}

inline PropertyReport check_strip(const CorpusSpec& spec, const Relation& rel,
                                  SearchBudget budget = {}) {
  return detail::with_corpus(check_strip_on(gen_terms(spec), rel, budget),
                             spec);
}

}  // namespace conflab
