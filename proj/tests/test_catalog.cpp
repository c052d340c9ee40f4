#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "gscat/catalog_io.hpp"
#include "gscat/enumerate.hpp"
#include "gscat/scan.hpp"
#include "gscat/verify.hpp"

using namespace gscat;

namespace {

constexpr double kPi = std::numbers::pi;

std::string dump(Catalog cat, bool full = true) {
  cat.sort();
  std::ostringstream out;
  write_catalog_jsonl(out, cat, full);
  return out.str();
}

std::vector<Catalog> shards_up_to(int n_max) {
  std::vector<Catalog> out;
  for (int n = 2; n <= n_max; ++n)
    for (const Graph& g : enumerate_graphs(n)) out.push_back(scan_graph(g, default_momenta(), {}).shard);
  return out;
}

Witness witness_of(int n, const std::string& g6, std::array<int, 4> v) { return Witness{n, g6, v}; }

}  // namespace

TEST(Catalog, MergeIsOrderIndependent) {
  const auto shards = shards_up_to(5);
  Catalog forward, backward, shuffled;
  for (const auto& s : shards) forward.merge(s);
  for (auto it = shards.rbegin(); it != shards.rend(); ++it) backward.merge(*it);
  std::vector<std::size_t> order(shards.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(3));
  for (std::size_t i : order) shuffled.merge(shards[i]);
  const std::string a = dump(forward);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, dump(backward));
  EXPECT_EQ(a, dump(shuffled));
}

TEST(Catalog, InsertDeduplicatesByClassAndLength) {
  Catalog cat;
  const Momentum k(1, 4);
  const GateClass x = classify(Mat2::pauli_x());
  const GateClass z = classify(Mat2::pauli_z());
  EXPECT_EQ(cat.insert(k, x, 2.0, witness_of(3, "B?", {0, 1, 1, 0})), 0u);
  EXPECT_EQ(cat.insert(k, classify(std::polar(1.0, 0.3) * Mat2::pauli_x()), 2.0 + 5e-7,
                       witness_of(2, "A?", {0, 1, 1, 0})), 0u);
  EXPECT_EQ(cat.insert(k, x, 2.1, witness_of(2, "A?", {0, 1, 1, 0})), 1u);
  EXPECT_EQ(cat.insert(k, z, 2.0, witness_of(2, "A?", {0, 1, 0, 1})), 2u);
  EXPECT_EQ(cat.insert(Momentum(1, 3), x, 2.0, witness_of(2, "A?", {0, 1, 1, 0})), 3u);
  const CatalogEntry& e = cat.entries()[0];
  EXPECT_EQ(e.multiplicity, 2u);
  EXPECT_EQ(e.n(), 2);  // the smaller witness took over
  EXPECT_EQ(e.min_n_witnesses.size(), 1u);
  EXPECT_NEAR(e.length, 2.0 + 5e-7, 1e-15);
}

TEST(Catalog, CommensuratePairing) {
  Catalog cat;
  const Momentum k(1, 3);
  const GateClass id = classify(Mat2::identity());
  const GateClass x = classify(Mat2::pauli_x());
  cat.insert(k, id, 2.5, witness_of(5, "D??", {0, 1, 0, 1}));
  cat.insert(k, x, 2.5, witness_of(4, "C?", {0, 1, 1, 0}));  // paired at n >= 5
  cat.insert(k, x, 3.5, witness_of(4, "C?", {0, 1, 1, 0}));  // never paired
  cat.insert(Momentum(2, 3), x, 2.5, witness_of(4, "C?", {0, 1, 1, 0}));  // other momentum
  cat.insert(k, x, 14.0 + 3e-7, witness_of(4, "C?", {0, 1, 1, 0}));  // integral: wires pair it
  EXPECT_EQ(commensurate_pairing(cat, 5), (std::vector<bool>{true, true, false, false, true}));
  EXPECT_EQ(commensurate_pairing(cat, 4), (std::vector<bool>{false, false, false, false, true}));
}

TEST(Catalog, NewUnitariesIgnoreLengthAndFilterUnusable) {
  Catalog cat;
  const Momentum k(1, 2);
  const GateClass id = classify(Mat2::identity());
  const GateClass x = classify(Mat2::pauli_x());
  const GateClass z = classify(Mat2::pauli_z());
  cat.insert(k, id, 1.5, witness_of(2, "A?", {0, 1, 0, 1}));
  cat.insert(k, id, 2.5, witness_of(2, "A?", {0, 1, 0, 1}));
  cat.insert(k, x, 1.5, witness_of(3, "B?", {0, 1, 1, 0}));
  cat.insert(k, x, 2.5, witness_of(4, "C?", {0, 1, 1, 0}));  // same (k, U): not new
  cat.insert(k, z, 2.5, witness_of(4, "C?", {0, 1, 0, 1}));  // new
  cat.insert(k, z, 7.5, witness_of(4, "C@", {0, 1, 0, 1}));  // same class
  cat.insert(k, classify(Mat2::rotation(0, 0, 1.0)), 9.5,
             witness_of(4, "C@", {0, 1, 0, 1}));  // unusable length
  const auto usable = commensurate_pairing(cat, 4);
  const NewUnitaries all = new_unitaries(cat, 4);
  const NewUnitaries fresh = new_unitaries(cat, 4, &usable);
  EXPECT_EQ(all.entries_at_n, 4u);
  EXPECT_EQ(all.count, 3u);
  EXPECT_EQ(fresh.count, 1u);
  EXPECT_EQ(fresh.first_graphs, (std::set<std::string>{"C?"}));
}

TEST(CatalogIo, FullRoundTripIsExact) {
  Catalog cat;
  for (const auto& s : shards_up_to(5)) cat.merge(s);
  cat.sort();
  attach_length_forms(cat, 2000, 1e-20);
  const std::string text = dump(cat);
  std::istringstream in(text);
  EXPECT_EQ(dump(read_catalog_jsonl(in)), text);
}

TEST(CatalogIo, RejectsMalformedLines) {
  std::istringstream bad_json("{\"k\": \n");
  EXPECT_THROW(read_catalog_jsonl(bad_json), CatalogFormatError);
  std::istringstream missing("{\"k\": \"1/4\"}\n");
  EXPECT_THROW(read_catalog_jsonl(missing), CatalogFormatError);
}

TEST(Verify, AcceptsScannedEntriesAndRejectsTampering) {
  Catalog cat;
  for (const auto& s : shards_up_to(5)) cat.merge(s);
  cat.sort();
  for (const auto& c : verify_catalog(cat, false)) EXPECT_TRUE(c.ok) << c.id << ": " << c.reason;

  Catalog bad = cat;
  auto& es = bad.entries();
  const auto rot = std::find_if(es.begin(), es.end(), [](const CatalogEntry& e) { return !e.identity(); });
  ASSERT_NE(rot, es.end());
  rot->gate.representative = rot->gate.representative * Mat2::pauli_z();
  es[0].length += 0.25;
  es[1].witness.vertices = {0, 0, 0, 0};
  const auto checks = verify_catalog(bad, false);
  EXPECT_FALSE(checks[std::size_t(rot - es.begin())].ok);
  EXPECT_FALSE(checks[0].ok);
  EXPECT_FALSE(checks[1].ok);
}

TEST(Verify, ExtendedPrecisionConfirmsFixtures) {
  Catalog cat;
  const auto f = fixtures::irrational_rotation();
  cat.merge(scan_graph(f.graph, {Momentum(1, 3)}, {}).shard);
  ASSERT_GT(cat.size(), 0u);
  // the witness must be in canonical labelling, which the scan provides
  for (const auto& c : verify_catalog(cat, true)) {
    EXPECT_TRUE(c.ok) << c.reason;
    EXPECT_LE(c.max_zero, 1e-20);
  }
}
