#pragma once

// Exhaustive scan: every graph on n_min..n_max vertices, every tail multiset,
// every momentum and role assignment. One graph is one work unit; results are
// merged in graph order, so outputs do not depend on the worker count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "gscat/catalog.hpp"
#include "gscat/catalog_io.hpp"
#include "gscat/efflen.hpp"
#include "gscat/enumerate.hpp"
#include "gscat/gate.hpp"
#include "gscat/graph6.hpp"
#include "gscat/momentum.hpp"
#include "gscat/ports.hpp"
#include "gscat/scatter.hpp"
#include "gscat/verify.hpp"

namespace gscat {

struct ScanTolerances {
  double eps_flux = 1e-9;
  double eps_gate = 1e-9;
  double eps_len = 1e-6;
  double eps_class = 1e-12;
  double eps_rat = 1e-8;
  long q_max = 64;
  double eps_surd = 1e-20;  // relative residual, applied to 113-bit lengths
  long coeff_bound = 2000;
  double stencil_h = 1e-2;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanConfig {
  int n_min = 1;
  int n_max = 7;
  std::vector<Momentum> momenta = default_momenta();
  ScanTolerances tol;
  unsigned workers = 1;
  std::size_t checkpoint_every = 0;  // graphs per checkpoint; 0 disables
  std::filesystem::path out;
  std::optional<std::filesystem::path> graph6_file;
  bool stencil = true;

  void validate() const {
    if (n_min < 1 || n_max > kMaxVertices || n_min > n_max) throw ConfigError("need 1 <= n_min <= n_max <= 12");
    if (momenta.empty()) throw ConfigError("no momenta");
    const double t[] = {tol.eps_flux, tol.eps_gate, tol.eps_len, tol.eps_class, tol.eps_rat, tol.eps_surd, tol.stencil_h};
    for (double x : t)
      if (!(x > 0)) throw ConfigError("tolerances must be positive");
    if (tol.q_max < 1 || tol.coeff_bound < 1) throw ConfigError("bounds must be positive");
    if (workers < 1) throw ConfigError("workers must be positive");
  }

  /// Everything that affects the output, for checkpoint matching.
  std::string fingerprint() const {
    nlohmann::json j;
    j["n"] = {n_min, n_max};
    std::vector<std::string> ks;
    for (const auto& k : momenta) ks.push_back(k.str());
    j["momenta"] = ks;
    j["tol"] = {tol.eps_flux, tol.eps_gate, tol.eps_len, tol.eps_class, tol.eps_rat,
                tol.q_max,    tol.eps_surd, tol.coeff_bound, tol.stencil_h};
    j["graph6"] = graph6_file ? graph6_file->string() : std::string();
    j["stencil"] = stencil;
    return j.dump();
  }

  std::string hash() const {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : fingerprint()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
  }
};

/// Result of one work unit.
struct GraphScan {
  Catalog shard;
  std::vector<ScanCounts> counts;          // per momentum
  std::vector<std::string> diagnostics;    // JSON lines
  double max_stencil_gap = 0;
};

inline GraphScan scan_graph(const Graph& g, const std::vector<Momentum>& momenta, const ScanTolerances& tol,
                            bool stencil = true) {
  GraphScan out{Catalog({tol.eps_len, tol.eps_class}), std::vector<ScanCounts>(momenta.size()), {}, 0};
  const int n = g.order();
  const std::string g6 = write_graph6(g);
  const LengthTolerances ltol{tol.eps_gate, tol.eps_len, tol.stencil_h};
  const ClassifyTolerances ctol{tol.eps_gate, tol.q_max, tol.eps_rat};
  auto diag = [&](const char* kind, const Momentum& k, const std::array<int, kTails>& v, nlohmann::json extra) {
    extra["event"] = kind;
    extra["graph6"] = g6;
    extra["k"] = k.str();
    extra["vertices"] = v;
    out.diagnostics.push_back(extra.dump());
  };
  for (const TailMultiset& m : enumerate_multisets(n)) {
    const auto assignments = enumerate_role_assignments(m);
    const auto tails = m.tail_vertices();
    for (std::size_t ki = 0; ki < momenta.size(); ++ki) {
      const Momentum& k = momenta[ki];
      ScanCounts& cnt = out.counts[ki];
      ++cnt.scanned;
      const double kv = k.value();
      const ScatteringSystem<double> sys(g, m, kv);
      cnt.bound_states += sys.bound_state();
      TailMatrix<double> s;
      try {
        s = sys.tail_matrix();
      } catch (const SingularSystem&) {
        ++cnt.flux_failures;
        diag("inconsistent_system", k, tails, {});
        continue;
      }
      double worst_flux = 0;
      int diagonal_zeros = 0;
      for (int a = 0; a < kTails; ++a) {
        double total = 0;
        for (int b = 0; b < kTails; ++b) total += std::norm(s[std::size_t(b)][std::size_t(a)]);
        worst_flux = std::max(worst_flux, std::abs(total - 1.0));
        diagonal_zeros += std::abs(s[std::size_t(a)][std::size_t(a)]) <= tol.eps_gate;
      }
      if (worst_flux > tol.eps_flux) {
        ++cnt.flux_failures;
        diag("flux_failure", k, tails, {{"residual", worst_flux}});
        continue;
      }
      if (diagonal_zeros < 2) continue;
      PathLengths paths(sys, m, kv, ltol, stencil);
      std::vector<std::size_t> landed;
      for (const PortAssignment& pa : assignments) {
        const auto gate = detect_gate(s, pa, tol.eps_gate);
        if (!gate) continue;
        std::optional<LengthReport> rep;
        try {
          rep = paths.consensus(*gate);
        } catch (const SingularSystem&) {
          diag("derivative_failure", k, pa.vertices(), {});
        }
        if (!rep) {
          ++cnt.length_rejects;
          continue;
        }
        if (rep->length < -tol.eps_len) diag("negative_length", k, pa.vertices(), {{"length", rep->length}});
        if (stencil) {
          out.max_stencil_gap = std::max(out.max_stencil_gap, rep->stencil_gap);
          if (rep->stencil_gap > tol.eps_len)
            diag("stencil_mismatch", k, pa.vertices(), {{"length", rep->length}, {"gap", rep->stencil_gap}});
        }
        const GateClass cls = classify(gate->op, ctol);
        ++cnt.hits;
        landed.push_back(out.shard.insert(k, cls, rep->length, Witness{n, g6, pa.vertices()}));
      }
      if (landed.empty()) continue;
      ++cnt.hit_configs;
      std::sort(landed.begin(), landed.end());
      landed.erase(std::unique(landed.begin(), landed.end()), landed.end());
      for (std::size_t i : landed) out.shard.count_config(i);
    }
  }
  return out;
}

/// Runs `scan_graph` over a batch with a shared index counter; slot i of the
/// result belongs to graph i whatever thread computed it.
inline std::vector<GraphScan> scan_batch(const std::vector<Graph>& graphs, std::size_t begin, std::size_t end,
                                         const ScanConfig& cfg) {
  std::vector<GraphScan> results(end - begin);
  std::atomic<std::size_t> next{begin};
  auto work = [&] {
    for (std::size_t i = next++; i < end; i = next++)
      results[i - begin] = scan_graph(graphs[i], cfg.momenta, cfg.tol, cfg.stencil);
  };
  const unsigned w = std::max(1U, std::min<unsigned>(cfg.workers, unsigned(end - begin)));
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return results;
}

/// Accumulated state of a scan; also the checkpoint payload.
struct ScanState {
  Catalog catalog;
  std::map<int, std::vector<ScanCounts>> counts;  // n -> per momentum
  int n = 0;                  // level in progress
  std::size_t done = 0;       // graphs of level n already merged
  std::uintmax_t log_bytes = 0;
  double max_stencil_gap = 0;
};

inline nlohmann::json state_json(const ScanState& st, const std::string& hash) {
  nlohmann::json j;
  j["config_hash"] = hash;
  j["n"] = st.n;
  j["done"] = st.done;
  j["log_bytes"] = st.log_bytes;
  j["max_stencil_gap"] = st.max_stencil_gap;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [n, per_k] : st.counts) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : per_k) row.push_back(counts_json(c));
    counts[std::to_string(n)] = row;
  }
  j["counts"] = counts;
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < st.catalog.size(); ++i) entries.push_back(entry_json(st.catalog.entries()[i], i, true));
  j["entries"] = entries;
  return j;
}

inline ScanState state_from_json(const nlohmann::json& j, const CatalogTolerances& tol) {
  ScanState st{Catalog(tol), {}, 0, 0, 0, 0};
  st.n = j.at("n").get<int>();
  st.done = j.at("done").get<std::size_t>();
  st.log_bytes = j.at("log_bytes").get<std::uintmax_t>();
  st.max_stencil_gap = j.at("max_stencil_gap").get<double>();
  for (const auto& [n, row] : j.at("counts").items()) {
    auto& per_k = st.counts[std::stoi(n)];
    for (const auto& c : row) per_k.push_back(counts_from_json(c));
  }
  for (const auto& e : j.at("entries")) st.catalog.entries().push_back(entry_from_json(e));
  st.catalog.rebuild_index();
  return st;
}

/// Graphs of each order from a graph6 file, in file order.
inline std::map<int, std::vector<Graph>> read_graph6_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::map<int, std::vector<Graph>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    Graph g = parse_graph6(line);
    out[g.order()].push_back(g);
  }
  return out;
}

struct ScanSummary {
  ScanState state;
  bool resumed = false;
};

namespace detail {

inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << text;
    if (!f.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline void write_outputs(const ScanConfig& cfg, ScanState& st);

/// Full scan with checkpoint/resume in cfg.out. `stop_after` (graphs merged
/// in this call) interrupts the run after a checkpoint, for testing resume.
inline ScanSummary run_scan(const ScanConfig& cfg, std::ostream* progress = nullptr,
                            std::optional<std::size_t> stop_after = std::nullopt) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out);
  const fs::path ckpt = cfg.out / "checkpoint.json";
  const fs::path log_path = cfg.out / "diagnostics.log";
  const std::string hash = cfg.hash();
  const CatalogTolerances ctol{cfg.tol.eps_len, cfg.tol.eps_class};

  ScanSummary sum{ScanState{Catalog(ctol), {}, cfg.n_min, 0, 0, 0}, false};
  ScanState& st = sum.state;
  if (fs::exists(ckpt)) {
    std::ifstream f(ckpt);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(std::string("unreadable checkpoint: ") + ex.what());
    }
    if (j.value("config_hash", std::string()) != hash) throw ConfigError("checkpoint was written by a different configuration");
    st = state_from_json(j, ctol);
    sum.resumed = true;
    if (fs::exists(log_path)) fs::resize_file(log_path, st.log_bytes);
  } else {
    std::ofstream(log_path, std::ios::trunc);
  }
  std::ofstream log(log_path, std::ios::app | std::ios::binary);
  if (!log) throw ConfigError("cannot write " + log_path.string());

  std::optional<std::map<int, std::vector<Graph>>> from_file;
  if (cfg.graph6_file) from_file = read_graph6_file(*cfg.graph6_file);

  auto save = [&] {
    log.flush();
    st.log_bytes = fs::file_size(log_path);
    detail::write_atomically(ckpt, state_json(st, hash).dump());
  };

  std::size_t merged_now = 0;
  std::vector<CanonicalGraph> level;
  int level_n = 0;
  for (int n = st.n; n <= cfg.n_max; ++n) {
    std::vector<Graph> graphs;
    if (from_file) {
      if (auto it = from_file->find(n); it != from_file->end()) graphs = it->second;
    } else {
      if (level_n == 0) {
        level = {{0, Graph(1)}};
        level_n = 1;
      }
      while (level_n < n) {
        level = detail::next_level(level, cfg.workers);
        ++level_n;
      }
      for (const auto& c : level) graphs.push_back(c.graph);
    }
    if (st.n != n) {
      st.n = n;
      st.done = 0;
    }
    auto& per_k = st.counts[n];
    per_k.resize(cfg.momenta.size());
    const std::size_t step = cfg.checkpoint_every ? cfg.checkpoint_every : graphs.size();
    while (st.done < graphs.size()) {
      const std::size_t end = std::min(graphs.size(), st.done + std::max<std::size_t>(step, 1));
      auto results = scan_batch(graphs, st.done, end, cfg);
      for (auto& r : results) {
        st.catalog.merge(r.shard);
        for (std::size_t ki = 0; ki < per_k.size(); ++ki) per_k[ki] += r.counts[ki];
        for (const auto& line : r.diagnostics) log << line << '\n';
        st.max_stencil_gap = std::max(st.max_stencil_gap, r.max_stencil_gap);
      }
      merged_now += end - st.done;
      st.done = end;
      if (progress)
        *progress << "n=" << n << " graphs " << st.done << "/" << graphs.size() << " entries " << st.catalog.size()
                  << std::endl;
      if (cfg.checkpoint_every) {
        if (st.done == graphs.size() && n < cfg.n_max) {
          st.n = n + 1;
          st.done = 0;
          save();
          st.n = n;
          st.done = graphs.size();
        } else {
          save();
        }
      }
      if (stop_after && merged_now >= *stop_after && !(n == cfg.n_max && st.done == graphs.size())) return sum;
    }
  }
  log.flush();
  log.close();
  write_outputs(cfg, st);
  if (fs::exists(ckpt)) fs::remove(ckpt);
  return sum;
}

/// Cumulative catalog counts for every (n, k) cell plus per-n totals.
inline nlohmann::json report_json(const ScanConfig& cfg, const ScanState& st) {
  const Catalog& cat = st.catalog;
  nlohmann::json rep;
  rep["config"] = nlohmann::json::parse(cfg.fingerprint());
  rep["entries"] = cat.size();
  nlohmann::json rows = nlohmann::json::array();
  const auto final_usable = commensurate_pairing(cat, cfg.n_max);
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const auto usable = commensurate_pairing(cat, n);
    nlohmann::json total = {{"n", n}};
    ScanCounts exact;
    std::size_t distinct = 0, non_identity = 0, usable_count = 0, ops = 0, ops_ni = 0;
    nlohmann::json per_k = nlohmann::json::array();
    for (std::size_t ki = 0; ki < cfg.momenta.size(); ++ki) {
      const Momentum& k = cfg.momenta[ki];
      const CatalogCounts c = catalog_counts(cat, k, n);
      const auto it = st.counts.find(n);
      const ScanCounts sc = it != st.counts.end() && ki < it->second.size() ? it->second[ki] : ScanCounts{};
      exact += sc;
      distinct += c.distinct;
      non_identity += c.non_identity;
      usable_count += c.usable;
      ops += c.distinct_ops;
      ops_ni += c.ops_non_identity;
      nlohmann::json row = counts_json(sc);
      row["k"] = k.str();
      row["distinct"] = c.distinct;
      row["non_identity"] = c.non_identity;
      row["usable"] = c.usable;
      row["distinct_ops"] = c.distinct_ops;
      row["ops_non_identity"] = c.ops_non_identity;
      row["axes"] = c.axes;
      per_k.push_back(row);
    }
    total["per_momentum"] = per_k;
    total["scanned"] = exact.scanned;
    total["hits"] = exact.hits;
    total["hit_configs"] = exact.hit_configs;
    total["length_rejects"] = exact.length_rejects;
    total["flux_failures"] = exact.flux_failures;
    total["bound_states"] = exact.bound_states;
    total["distinct"] = distinct;
    total["non_identity"] = non_identity;
    total["usable"] = usable_count;
    total["unusable"] = distinct - usable_count;
    total["distinct_ops"] = ops;
    total["ops_non_identity"] = ops_ni;
    // usability judged against the whole scan, not the level
    const NewUnitaries fresh = new_unitaries(cat, n, &final_usable);
    const NewUnitaries every = new_unitaries(cat, n);
    total["entries_at_n"] = fresh.entries_at_n;
    total["new_unitaries"] = fresh.count;
    total["new_unitary_graphs"] = fresh.graphs.size();
    total["new_unitary_configurations"] = fresh.configurations.size();
    total["new_unitary_first_graphs"] = fresh.first_graphs.size();
    total["new_unitary_first_configurations"] = fresh.first_configurations.size();
    total["new_unitaries_unfiltered"] = every.count;
    total["new_unitary_graphs_unfiltered"] = every.graphs.size();
    rows.push_back(total);
  }
  rep["levels"] = rows;

  std::uint64_t hits = 0, hit_configs = 0;
  for (const auto& [n, per_k] : st.counts)
    for (const auto& c : per_k) {
      hits += c.hits;
      hit_configs += c.hit_configs;
    }
  rep["hits"] = hits;
  rep["hit_configs"] = hit_configs;

  const auto usable = commensurate_pairing(cat, cfg.n_max);
  double max_len = 0;
  std::optional<std::size_t> longest;
  std::size_t n_usable = 0, ge10 = 0, ge100 = 0, negative = 0, non_integral = 0, irrational = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto& e = cat.entries()[i];
    if (e.length < -cfg.tol.eps_len) ++negative;
    if (!usable[i]) continue;
    ++n_usable;
    ge10 += e.length >= 10;
    ge100 += e.length >= 100;
    if (std::abs(e.length - std::nearbyint(e.length)) > cfg.tol.eps_len) ++non_integral;
    if (e.length_form && !e.length_form->is_rational()) ++irrational;
    if (!e.length_form && std::abs(e.length - std::nearbyint(e.length)) > cfg.tol.eps_len) ++irrational;
    if (!longest || e.length > max_len) {
      max_len = e.length;
      longest = i;
    }
  }
  rep["usable"] = n_usable;
  rep["usable_length_ge_10"] = ge10;
  rep["usable_length_ge_100"] = ge100;
  rep["usable_non_integral"] = non_integral;
  rep["usable_irrational"] = irrational;
  rep["negative_lengths"] = negative;
  rep["max_stencil_gap"] = st.max_stencil_gap;
  if (longest) {
    const auto& e = cat.entries()[*longest];
    rep["longest"] = {{"id", *longest},
                      {"length", e.length},
                      {"length_form", e.length_form ? nlohmann::json(e.length_form->str()) : nlohmann::json(nullptr)},
                      {"k", e.momentum.str()}};
  }
  return rep;
}

inline void write_outputs(const ScanConfig& cfg, ScanState& st) {
  namespace fs = std::filesystem;
  Catalog& cat = st.catalog;
  cat.sort();
  attach_length_forms(cat, cfg.tol.coeff_bound, cfg.tol.eps_surd);

  std::ostringstream jsonl;
  write_catalog_jsonl(jsonl, cat);
  detail::write_atomically(cfg.out / "catalog.jsonl", jsonl.str());
  std::ostringstream full;
  write_catalog_jsonl(full, cat, true);
  detail::write_atomically(cfg.out / "catalog.full.jsonl", full.str());

  std::ostringstream csv;
  csv << "n,k_p,k_q,scanned,hits,distinct,non_identity,usable,distinct_ops\n";
  for (int n = cfg.n_min; n <= cfg.n_max; ++n)
    for (std::size_t ki = 0; ki < cfg.momenta.size(); ++ki) {
      const Momentum& k = cfg.momenta[ki];
      const CatalogCounts c = catalog_counts(cat, k, n);
      const auto it = st.counts.find(n);
      const ScanCounts sc = it != st.counts.end() && ki < it->second.size() ? it->second[ki] : ScanCounts{};
      csv << n << ',' << k.p() << ',' << k.q() << ',' << sc.scanned << ',' << sc.hits << ',' << c.distinct << ','
          << c.non_identity << ',' << c.usable << ',' << c.distinct_ops << '\n';
    }
  detail::write_atomically(cfg.out / "summary.csv", csv.str());

  std::ostringstream axes;
  axes << "k_p,k_q,theta,phi\n";
  axes << std::setprecision(17);
  const auto usable = commensurate_pairing(cat, cfg.n_max);
  for (const Momentum& k : cfg.momenta)
    for (const Operation& op : distinct_operations(cat, usable, k))
      if (op.gate.kind != GateKind::identity) axes << k.p() << ',' << k.q() << ',' << op.gate.theta << ',' << op.gate.phi << '\n';
  detail::write_atomically(cfg.out / "axes.csv", axes.str());

  detail::write_atomically(cfg.out / "report.json", report_json(cfg, st).dump(2) + "\n");
}

}  // namespace gscat
