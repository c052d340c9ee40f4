// gscat: scan / verify / g6 / report front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gscat/catalog_io.hpp"
#include "gscat/enumerate.hpp"
#include "gscat/graph6.hpp"
#include "gscat/scan.hpp"
#include "gscat/verify.hpp"

namespace {

using namespace gscat;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitVerify = 2;

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_catalog_jsonl(in);
}

std::vector<Momentum> parse_momenta(const std::string& list) {
  std::vector<Momentum> ks;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) ks.push_back(Momentum::parse(item));
  return ks;
}

int run_verify(const std::string& path, bool extended, bool quiet) {
  const Catalog cat = load_catalog(path);
  const auto checks = verify_catalog(cat, extended);
  std::size_t bad = 0;
  double worst = 0;
  for (const auto& c : checks) {
    worst = std::max(worst, c.max_zero);
    if (c.ok) continue;
    ++bad;
    if (!quiet) std::cerr << "entry " << c.id << ": " << c.reason << " (max zero " << c.max_zero << ")\n";
  }
  std::printf("%zu entries, %zu failed, max scaled zero %.3g (%s)\n", checks.size(), bad, worst,
              extended ? "113-bit" : "double");
  return bad ? kExitVerify : kExitOk;
}

int run_g6(const std::string& action, const std::string& file, int n) {
  std::ifstream f;
  std::istream* in = &std::cin;
  if (!file.empty() && file != "-") {
    f.open(file);
    if (!f) throw std::runtime_error("cannot open " + file);
    in = &f;
  }
  if (action == "count") {
    if (n > 0) {
      const auto counts = graph_counts(n);
      std::uint64_t total = 0;
      for (int m = 1; m <= n; ++m) {
        std::printf("%d %llu\n", m, static_cast<unsigned long long>(counts[std::size_t(m)]));
        total += counts[std::size_t(m)];
      }
      std::printf("total %llu\n", static_cast<unsigned long long>(total));
      return kExitOk;
    }
    std::map<int, std::set<std::string>> classes;
    std::string line;
    while (std::getline(*in, line))
      if (!line.empty()) {
        const Graph g = parse_graph6(line);
        classes[g.order()].insert(canonical_key(g).bytes());
      }
    std::size_t total = 0;
    for (const auto& [order, keys] : classes) {
      std::printf("%d %zu\n", order, keys.size());
      total += keys.size();
    }
    std::printf("total %zu\n", total);
    return kExitOk;
  }
  if (action == "decode") {
    std::string line;
    while (std::getline(*in, line)) {
      if (line.empty()) continue;
      const Graph g = parse_graph6(line);
      std::printf("%d", g.order());
      for (int u = 0; u < g.order(); ++u)
        for (int v = u + 1; v < g.order(); ++v)
          if (g.has_edge(u, v)) std::printf(" %d-%d", u, v);
      std::printf("\n");
    }
    return kExitOk;
  }
  // encode: "n u-v u-v ..." per line
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int order = 0;
    if (!(ls >> order) || order < 0 || order > kMaxVertices) throw Graph6Error("bad vertex count: " + line);
    Graph g(order);
    std::string edge;
    while (ls >> edge) {
      int u = -1, v = -1;
      char extra = 0;
      if (std::sscanf(edge.c_str(), "%d-%d%c", &u, &v, &extra) != 2 || u < 0 || v < 0 || u >= order || v >= order || u == v)
        throw Graph6Error("bad edge " + edge);
      g.add_edge(u, v);
    }
    std::printf("%s\n", write_graph6(g).c_str());
  }
  return kExitOk;
}

int run_report(const std::string& path, const std::string& format) {
  const Catalog cat = load_catalog(path);
  int n_max = 0;
  std::set<Momentum> ks;
  for (const auto& e : cat.entries()) {
    n_max = std::max(n_max, e.n());
    ks.insert(e.momentum);
  }
  const auto usable = commensurate_pairing(cat, n_max);
  if (format == "csv") std::printf("n,k_p,k_q,distinct,non_identity,usable,distinct_ops,ops_non_identity,axes\n");
  for (int n = 1; n <= n_max; ++n) {
    for (const Momentum& k : ks) {
      const CatalogCounts c = catalog_counts(cat, k, n);
      if (format == "csv") {
        std::printf("%d,%d,%d,%zu,%zu,%zu,%zu,%zu,%zu\n", n, k.p(), k.q(), c.distinct, c.non_identity, c.usable,
                    c.distinct_ops, c.ops_non_identity, c.axes);
      } else {
        const nlohmann::json j = {{"n", n},         {"k", k.str()},        {"distinct", c.distinct},
                                  {"non_identity", c.non_identity},        {"usable", c.usable},
                                  {"distinct_ops", c.distinct_ops},        {"ops_non_identity", c.ops_non_identity},
                                  {"axes", c.axes}};
        std::printf("%s\n", j.dump().c_str());
      }
    }
    if (format == "jsonl") {
      const NewUnitaries fresh = new_unitaries(cat, n, &usable);
      const nlohmann::json j = {{"n", n},
                                {"entries_at_n", fresh.entries_at_n},
                                {"new_unitaries", fresh.count},
                                {"new_unitary_first_graphs", fresh.first_graphs.size()},
                                {"new_unitary_first_configurations", fresh.first_configurations.size()}};
      std::printf("%s\n", j.dump().c_str());
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph scattering gate search"};
  app.require_subcommand(1);

  ScanConfig cfg;
  std::string momenta, out, graph6;
  bool no_stencil = false;
  auto* scan = app.add_subcommand("scan", "exhaustive scan");
  scan->add_option("--n-min", cfg.n_min);
  scan->add_option("--n-max", cfg.n_max);
  scan->add_option("--momenta", momenta, "comma list, e.g. pi/4,pi/3,2pi/3");
  scan->add_option("--out", out)->required();
  scan->add_option("--graph6", graph6, "scan these graphs instead of enumerating");
  scan->add_option("--workers", cfg.workers);
  scan->add_option("--checkpoint-every", cfg.checkpoint_every, "graphs per checkpoint, 0 = off");
  scan->add_option("--tol-flux", cfg.tol.eps_flux);
  scan->add_option("--tol-gate", cfg.tol.eps_gate);
  scan->add_option("--tol-len", cfg.tol.eps_len);
  scan->add_option("--tol-class", cfg.tol.eps_class);
  scan->add_option("--tol-rat", cfg.tol.eps_rat);
  scan->add_option("--q-max", cfg.tol.q_max);
  scan->add_option("--tol-surd", cfg.tol.eps_surd);
  scan->add_option("--coeff-bound", cfg.tol.coeff_bound);
  scan->add_option("--stencil-h", cfg.tol.stencil_h);
  scan->add_flag("--no-stencil", no_stencil);
  bool quiet = false;
  scan->add_flag("-q,--quiet", quiet);

  std::string catalog;
  bool extended = false;
  auto* verify = app.add_subcommand("verify", "re-solve every catalogued witness");
  verify->add_option("catalog", catalog)->required();
  verify->add_flag("--extended", extended, "113-bit re-solve");
  verify->add_flag("-q,--quiet", quiet);

  std::string action, file;
  int count_n = 0;
  auto* g6 = app.add_subcommand("g6", "graph6 utilities");
  g6->add_option("action", action)->required()->check(CLI::IsMember({"encode", "decode", "count"}));
  g6->add_option("file", file);
  g6->add_option("--n", count_n, "count: enumerate classes up to n instead of reading");

  std::string format = "csv";
  auto* report = app.add_subcommand("report", "catalog statistics");
  report->add_option("catalog", catalog)->required();
  report->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*scan) {
      if (!momenta.empty()) cfg.momenta = parse_momenta(momenta);
      cfg.out = out;
      if (!graph6.empty()) cfg.graph6_file = graph6;
      cfg.stencil = !no_stencil;
      const auto res = run_scan(cfg, quiet ? nullptr : &std::cerr);
      std::printf("%zu catalog entries in %s%s\n", res.state.catalog.size(), out.c_str(),
                  res.resumed ? " (resumed)" : "");
      return kExitOk;
    }
    if (*verify) return run_verify(catalog, extended, quiet);
    if (*g6) return run_g6(action, file, count_n);
    if (*report) return run_report(catalog, format);
  } catch (const std::exception& e) {
    std::cerr << "gscat: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
