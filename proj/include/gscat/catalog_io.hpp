#pragma once

// JSON / CSV forms of catalog entries. The full form keeps every minimal-n
// witness and round-trips exactly (checkpoints); the public catalog.jsonl
// lists at most kListedWitnesses of them.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gscat/catalog.hpp"

namespace gscat {

inline constexpr std::size_t kListedWitnesses = 8;

class CatalogFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json witness_json(const Witness& w) {
  return {{"graph6", w.graph6}, {"vertices", w.vertices}, {"n", w.n}};
}

inline Witness witness_from_json(const nlohmann::json& j) {
  Witness w;
  w.graph6 = j.at("graph6").get<std::string>();
  w.vertices = j.at("vertices").get<std::array<int, kTails>>();
  w.n = j.contains("n") ? j.at("n").get<int>() : parse_graph6(w.graph6).order();
  return w;
}

inline std::optional<Rational> parse_rational(const std::string& s) {
  long p = 0, q = 1;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%ld/%ld%c", &p, &q, &tail) == 2 && q > 0) return Rational{p, q};
  if (std::sscanf(s.c_str(), "%ld%c", &p, &tail) == 1) return Rational{p, 1};
  return std::nullopt;
}

inline nlohmann::json surd_json(const QuadraticSurd& s) {
  return {{"form", s.str()},
          {"relation", {s.a, s.b, s.c}},
          {"rational", {s.rational.p, s.rational.q}},
          {"coefficient", {s.coefficient.p, s.coefficient.q}},
          {"radicand", s.radicand}};
}

inline QuadraticSurd surd_from_json(const nlohmann::json& j) {
  QuadraticSurd s;
  const auto rel = j.at("relation").get<std::array<long, 3>>();
  s.a = rel[0];
  s.b = rel[1];
  s.c = rel[2];
  const auto r = j.at("rational").get<std::array<long, 2>>();
  const auto c = j.at("coefficient").get<std::array<long, 2>>();
  s.rational = {r[0], r[1]};
  s.coefficient = {c[0], c[1]};
  s.radicand = j.at("radicand").get<long>();
  return s;
}

inline nlohmann::json entry_json(const CatalogEntry& e, std::size_t id, bool full) {
  nlohmann::json j;
  j["id"] = id;
  j["k"] = e.momentum.str();
  std::vector<double> m;
  for (const cplx& z : e.gate.representative.a) {
    m.push_back(z.real());
    m.push_back(z.imag());
  }
  j["matrix"] = m;
  j["kind"] = e.identity() ? "identity" : "rotation";
  j["theta"] = e.gate.theta;
  j["phi"] = e.gate.phi;
  j["angle"] = e.gate.angle;
  j["angle_form"] = e.gate.angle_form();
  j["length"] = e.length;
  j["length_form"] = e.length_form ? nlohmann::json(e.length_form->str()) : nlohmann::json(nullptr);
  if (full && e.length_form) j["length_surd"] = surd_json(*e.length_form);
  j["multiplicity"] = e.multiplicity;
  j["config_multiplicity"] = e.config_multiplicity;
  j["n"] = e.n();
  j["witness"] = witness_json(e.witness);
  nlohmann::json ws = nlohmann::json::array();
  for (std::size_t i = 0; i < e.min_n_witnesses.size() && (full || i < kListedWitnesses); ++i)
    ws.push_back(witness_json(e.min_n_witnesses[i]));
  j["witnesses"] = ws;
  j["witness_count"] = e.min_n_witnesses.size();
  return j;
}

inline CatalogEntry entry_from_json(const nlohmann::json& j) {
  try {
    CatalogEntry e;
    e.momentum = Momentum::parse(j.at("k").get<std::string>());
    const auto m = j.at("matrix").get<std::vector<double>>();
    if (m.size() != 8) throw CatalogFormatError("matrix must have 8 reals");
    for (std::size_t i = 0; i < 4; ++i) e.gate.representative.a[i] = cplx(m[2 * i], m[2 * i + 1]);
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "identity" && kind != "rotation") throw CatalogFormatError("unknown kind " + kind);
    e.gate.kind = kind == "identity" ? GateKind::identity : GateKind::rotation;
    e.gate.theta = j.at("theta").get<double>();
    e.gate.phi = j.at("phi").get<double>();
    e.gate.angle = j.at("angle").get<double>();
    const auto form = j.at("angle_form").get<std::string>();
    if (form == "0")
      e.gate.angle_over_pi = Rational{0, 1};
    else if (form.size() > 3 && form.ends_with("*pi"))
      e.gate.angle_over_pi = parse_rational(form.substr(0, form.size() - 3));
    e.length = j.at("length").get<double>();
    if (j.contains("length_surd"))
      e.length_form = surd_from_json(j.at("length_surd"));
    e.multiplicity = j.at("multiplicity").get<std::uint64_t>();
    e.config_multiplicity = j.value("config_multiplicity", std::uint64_t{0});
    e.witness = witness_from_json(j.at("witness"));
    for (const auto& w : j.at("witnesses")) e.min_n_witnesses.push_back(witness_from_json(w));
    if (e.min_n_witnesses.empty()) e.min_n_witnesses.push_back(e.witness);
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw CatalogFormatError(std::string("catalog entry: ") + ex.what());
  }
}

inline void write_catalog_jsonl(std::ostream& out, const Catalog& cat, bool full = false) {
  for (std::size_t i = 0; i < cat.size(); ++i) out << entry_json(cat.entries()[i], i, full).dump() << '\n';
}

inline Catalog read_catalog_jsonl(std::istream& in, CatalogTolerances tol = {}) {
  Catalog cat(tol);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw CatalogFormatError("line " + std::to_string(lineno) + ": " + ex.what());
    }
    cat.entries().push_back(entry_from_json(j));
  }
  cat.rebuild_index();
  return cat;
}

inline nlohmann::json counts_json(const ScanCounts& c) {
  return {{"scanned", c.scanned},           {"hits", c.hits},
          {"hit_configs", c.hit_configs},   {"length_rejects", c.length_rejects},
          {"flux_failures", c.flux_failures}, {"bound_states", c.bound_states}};
}

inline ScanCounts counts_from_json(const nlohmann::json& j) {
  ScanCounts c;
  c.scanned = j.at("scanned").get<std::uint64_t>();
  c.hits = j.at("hits").get<std::uint64_t>();
  c.hit_configs = j.at("hit_configs").get<std::uint64_t>();
  c.length_rejects = j.at("length_rejects").get<std::uint64_t>();
  c.flux_failures = j.at("flux_failures").get<std::uint64_t>();
  c.bound_states = j.at("bound_states").get<std::uint64_t>();
  return c;
}

}  // namespace gscat
