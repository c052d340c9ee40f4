#pragma once

// Deduplicated gate catalog keyed by (momentum, gate class, length class),
// commensurate-identity pairing, and the per-(n, k) summary statistics.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gscat/canon.hpp"
#include "gscat/gate.hpp"
#include "gscat/graph6.hpp"
#include "gscat/momentum.hpp"
#include "gscat/ports.hpp"
#include "gscat/recognize.hpp"

namespace gscat {

/// A configuration that produced a gate: canonical graph6 plus the vertex of
/// each role (in0, in1, out0, out1).
struct Witness {
  int n = 0;
  std::string graph6;
  std::array<int, kTails> vertices{};

  PortAssignment ports() const { return PortAssignment(vertices); }

  friend bool operator==(const Witness&, const Witness&) = default;
  friend auto operator<=>(const Witness& a, const Witness& b) {
    // graph6 strings of equal order have equal length, so this is the
    // enumeration order: n, then canonical code, then vertex tuple.
    if (auto c = a.n <=> b.n; c != 0) return c;
    if (auto c = a.graph6 <=> b.graph6; c != 0) return c;
    return a.vertices <=> b.vertices;
  }
};

struct CatalogEntry {
  Momentum momentum;
  GateClass gate;  // from the smallest witness
  double length = 0;
  std::optional<QuadraticSurd> length_form;
  std::uint64_t multiplicity = 0;         // role assignments producing it
  std::uint64_t config_multiplicity = 0;  // (graph, multiset) configurations producing it
  Witness witness;                        // smallest witness
  std::vector<Witness> min_n_witnesses;   // all witnesses on witness.n vertices, sorted

  int n() const { return witness.n; }
  bool identity() const { return gate.kind == GateKind::identity; }
};

struct CatalogTolerances {
  double eps_len = 1e-6;     // length classes
  double eps_class = 1e-12;  // 1 - |tr(U^dagger V)|/2 for equal classes
};

inline bool same_class(const GateClass& a, const GateClass& b, double eps_class) {
  if (a.kind != b.kind) return false;
  if (a.kind == GateKind::identity) return true;
  return equal_up_to_phase(a.representative, b.representative, eps_class);
}

inline bool same_length(const CatalogEntry& a, const CatalogEntry& b, double eps_len) {
  if (a.length_form && b.length_form) {
    const auto& x = *a.length_form;
    const auto& y = *b.length_form;
    return x.a == y.a && x.b == y.b && x.c == y.c && x.rational == y.rational && x.coefficient == y.coefficient;
  }
  return std::abs(a.length - b.length) <= eps_len;
}

class Catalog {
 public:
  explicit Catalog(CatalogTolerances tol = {}) : tol_(tol) {}

  const CatalogTolerances& tolerances() const { return tol_; }
  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::vector<CatalogEntry>& entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Adds one accepted gate; returns the index of the entry it landed in.
  std::size_t insert(const Momentum& k, const GateClass& g, double length, const Witness& w,
                     std::uint64_t multiplicity = 1) {
    if (auto hit = find(k, g, length)) {
      CatalogEntry& e = entries_[*hit];
      e.multiplicity += multiplicity;
      absorb_witness(e, w, &g, length);
      return *hit;
    }
    CatalogEntry e;
    e.momentum = k;
    e.gate = g;
    e.length = length;
    e.multiplicity = multiplicity;
    e.witness = w;
    e.min_n_witnesses = {w};
    return add(std::move(e));
  }

  void count_config(std::size_t index, std::uint64_t times = 1) { entries_[index].config_multiplicity += times; }

  /// Folds another catalog in. Entry contents only depend on the union of
  /// the inputs, not on the order of merging.
  void merge(const Catalog& other) {
    for (const CatalogEntry& e : other.entries_) {
      if (auto hit = find(e.momentum, e.gate, e.length)) {
        CatalogEntry& mine = entries_[*hit];
        mine.multiplicity += e.multiplicity;
        mine.config_multiplicity += e.config_multiplicity;
        if (e.witness < mine.witness) {
          mine.gate = e.gate;
          mine.length = e.length;
          mine.length_form = e.length_form;
        }
        for (const Witness& w : e.min_n_witnesses) absorb_witness(mine, w, nullptr, 0);
        continue;
      }
      add(e);
    }
  }

  /// Entries ordered by momentum value, then smallest witness.
  void sort() {
    std::sort(entries_.begin(), entries_.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
      if (a.momentum != b.momentum) return a.momentum < b.momentum;
      return a.witness < b.witness;
    });
    rebuild_index();
  }

  void rebuild_index() {
    buckets_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) buckets_[bucket_key(entries_[i].momentum, entries_[i].length)].push_back(i);
  }

 private:
  using BucketKey = std::tuple<int, int, long>;

  BucketKey bucket_key(const Momentum& k, double length) const {
    return {k.p(), k.q(), long(std::floor(length / kBucketWidth))};
  }

  std::optional<std::size_t> find(const Momentum& k, const GateClass& g, double length) const {
    const auto [p, q, b] = bucket_key(k, length);
    for (long d = -1; d <= 1; ++d) {
      auto it = buckets_.find({p, q, b + d});
      if (it == buckets_.end()) continue;
      for (std::size_t i : it->second) {
        const CatalogEntry& e = entries_[i];
        if (std::abs(e.length - length) <= tol_.eps_len && same_class(e.gate, g, tol_.eps_class)) return i;
      }
    }
    return std::nullopt;
  }

  std::size_t add(CatalogEntry e) {
    const std::size_t i = entries_.size();
    buckets_[bucket_key(e.momentum, e.length)].push_back(i);
    entries_.push_back(std::move(e));
    return i;
  }

  static void absorb_witness(CatalogEntry& e, const Witness& w, const GateClass* g, double length) {
    if (w.n < e.witness.n) {
      e.min_n_witnesses.clear();
    } else if (w.n > e.witness.n) {
      return;
    }
    auto pos = std::lower_bound(e.min_n_witnesses.begin(), e.min_n_witnesses.end(), w);
    if (pos == e.min_n_witnesses.end() || !(*pos == w)) e.min_n_witnesses.insert(pos, w);
    if (w < e.witness) {
      e.witness = w;
      if (g) {
        e.gate = *g;
        e.length = length;
      }
    }
  }

  static constexpr double kBucketWidth = 1e-3;

  CatalogTolerances tol_;
  std::vector<CatalogEntry> entries_;
  std::map<BucketKey, std::vector<std::size_t>> buckets_;
};

/// Two disjoint L-edge wires act as an identity of length L at every
/// momentum, so integral lengths never need a catalogued partner.
inline bool integral_length(double length, double eps_len) {
  return length > -eps_len && std::abs(length - std::nearbyint(length)) <= eps_len;
}

/// usable[i]: entry i has witness n <= n_max and either an integral length or
/// an identity entry with witness n <= n_max at the same momentum and length
/// class.
inline std::vector<bool> commensurate_pairing(const Catalog& cat, int n_max) {
  const auto& es = cat.entries();
  std::vector<bool> usable(es.size(), false);
  std::vector<std::size_t> identities;
  for (std::size_t i = 0; i < es.size(); ++i)
    if (es[i].identity() && es[i].n() <= n_max) identities.push_back(i);
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i].n() > n_max) continue;
    if (es[i].identity() || integral_length(es[i].length, cat.tolerances().eps_len)) {
      usable[i] = true;
      continue;
    }
    for (std::size_t j : identities)
      if (es[j].momentum == es[i].momentum && same_length(es[j], es[i], cat.tolerances().eps_len)) {
        usable[i] = true;
        break;
      }
  }
  return usable;
}

/// A usable gate class at one momentum, ignoring length.
struct Operation {
  Momentum momentum;
  GateClass gate;
  std::vector<std::size_t> entries;  // catalog indices, witness order
};

inline std::vector<Operation> distinct_operations(const Catalog& cat, const std::vector<bool>& usable,
                                                  const Momentum& k) {
  const auto& es = cat.entries();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < es.size(); ++i)
    if (usable[i] && es[i].momentum == k) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return es[a].witness < es[b].witness; });
  std::vector<Operation> ops;
  for (std::size_t i : order) {
    auto it = std::find_if(ops.begin(), ops.end(),
                           [&](const Operation& op) { return same_class(op.gate, es[i].gate, cat.tolerances().eps_class); });
    if (it == ops.end())
      ops.push_back({k, es[i].gate, {i}});
    else
      it->entries.push_back(i);
  }
  return ops;
}

/// Number of pairwise non-parallel rotation axes among the operations.
inline std::size_t distinct_axes(const std::vector<Operation>& ops, double eps = 1e-9) {
  std::vector<const GateClass*> axes;
  for (const Operation& op : ops) {
    if (op.gate.kind == GateKind::identity) continue;
    if (std::none_of(axes.begin(), axes.end(), [&](const GateClass* a) { return parallel_axes(*a, op.gate, eps); }))
      axes.push_back(&op.gate);
  }
  return axes.size();
}

/// Counters accumulated while scanning, for one (n, momentum) cell.
struct ScanCounts {
  std::uint64_t scanned = 0;         // (graph, multiset) configurations
  std::uint64_t hits = 0;            // role assignments accepted as gates
  std::uint64_t hit_configs = 0;     // configurations with at least one accepted gate
  std::uint64_t length_rejects = 0;  // passed the zero conditions, paths disagree
  std::uint64_t flux_failures = 0;
  std::uint64_t bound_states = 0;

  ScanCounts& operator+=(const ScanCounts& o) {
    scanned += o.scanned;
    hits += o.hits;
    hit_configs += o.hit_configs;
    length_rejects += o.length_rejects;
    flux_failures += o.flux_failures;
    bound_states += o.bound_states;
    return *this;
  }
  friend bool operator==(const ScanCounts&, const ScanCounts&) = default;
};

/// Cumulative (witness n <= n) catalog statistics for one momentum.
struct CatalogCounts {
  std::size_t distinct = 0;
  std::size_t non_identity = 0;
  std::size_t usable = 0;
  std::size_t distinct_ops = 0;
  std::size_t ops_non_identity = 0;
  std::size_t axes = 0;
};

inline CatalogCounts catalog_counts(const Catalog& cat, const Momentum& k, int n_max) {
  CatalogCounts c;
  const auto usable = commensurate_pairing(cat, n_max);
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto& e = cat.entries()[i];
    if (e.momentum != k || e.n() > n_max) continue;
    ++c.distinct;
    c.non_identity += !e.identity();
    c.usable += usable[i];
  }
  const auto ops = distinct_operations(cat, usable, k);
  c.distinct_ops = ops.size();
  for (const auto& op : ops) c.ops_non_identity += op.gate.kind != GateKind::identity;
  c.axes = distinct_axes(ops);
  return c;
}

/// Catalog entries first found on exactly `n` vertices whose (momentum,
/// class) pair, ignoring length, does not occur among smaller witnesses, and
/// the graphs / tailed configurations producing them. With `usable`, only
/// entries flagged usable are counted, on both sides of the comparison.
struct NewUnitaries {
  int n = 0;
  std::size_t count = 0;
  std::size_t entries_at_n = 0;          // all entries with witness n == n
  std::set<std::string> graphs;          // every n-vertex witness graph
  std::set<std::string> configurations;  // same, as coloured canonical keys (tail counts)
  std::set<std::string> first_graphs;    // smallest witness of each new entry only
  std::set<std::string> first_configurations;
};

inline std::string configuration_key(const Witness& w) {
  const Graph g = parse_graph6(w.graph6);
  const TailMultiset m = TailMultiset::from_vertices(g.order(), w.vertices);
  return canonical_key(g, m.counts()).bytes();
}

inline NewUnitaries new_unitaries(const Catalog& cat, int n, const std::vector<bool>* usable = nullptr) {
  NewUnitaries out;
  out.n = n;
  const auto& es = cat.entries();
  auto counted = [&](std::size_t i) { return !usable || (*usable)[i]; };
  for (std::size_t i = 0; i < es.size(); ++i) {
    const CatalogEntry& e = es[i];
    if (e.n() != n) continue;
    ++out.entries_at_n;
    if (!counted(i)) continue;
    bool seen = false;
    for (std::size_t j = 0; j < es.size() && !seen; ++j)
      seen = counted(j) && es[j].n() < n && es[j].momentum == e.momentum &&
             same_class(es[j].gate, e.gate, cat.tolerances().eps_class);
    if (seen) continue;
    ++out.count;
    for (const Witness& w : e.min_n_witnesses) {
      out.graphs.insert(w.graph6);
      out.configurations.insert(configuration_key(w));
    }
    out.first_graphs.insert(e.witness.graph6);
    out.first_configurations.insert(configuration_key(e.witness));
  }
  return out;
}

}  // namespace gscat
