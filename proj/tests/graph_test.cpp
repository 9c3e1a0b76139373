#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fairkg/error.hpp"
#include "fairkg/graph.hpp"
#include "test_util.hpp"

namespace fairkg {
namespace {

using testing::TempDir;
using testing::read_text;
using testing::write_text;

KnowledgeGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_triples(in);
}

EntityId entity(const KnowledgeGraph& g, const std::string& label) { return *g.find_entity(label); }

TEST(LoadTriples, ThreeLineFile) {
  TempDir dir;
  write_text(dir / "g.tsv", "a\tr\tb\nb\tr\tc\na\tq\tc\n");
  const KnowledgeGraph g = load_triples(dir / "g.tsv");
  EXPECT_EQ(g.num_entities(), 3u);
  EXPECT_EQ(g.num_relations(), 2u);
  EXPECT_EQ(g.triples().size(), 3u);
  EXPECT_EQ(g.entities().labels(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(g.relations().labels(), (std::vector<std::string>{"r", "q"}));
}

TEST(LoadTriples, DuplicateLineCollapsed) {
  const KnowledgeGraph g = parse("a\tr\tb\na\tr\tb\n");
  EXPECT_EQ(g.triples().size(), 1u);
  EXPECT_EQ(g.duplicates_dropped(), 1u);
}

TEST(LoadTriples, MalformedLineReportsLineNumber) {
  try {
    parse("a\tr\tb\n\nb\tr\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse("a\tr\tb\tc\n"), ParseError);
}

TEST(LoadTriples, EmptyInputRejected) {
  EXPECT_THROW(parse(""), Error);
  EXPECT_THROW(parse("\n\n"), Error);
}

TEST(LoadTriples, MissingFileRejected) {
  TempDir dir;
  EXPECT_THROW(load_triples(dir / "absent.tsv"), Error);
}

TEST(LoadTriples, FB15k237TrainStatistics) {
  const char* dir = std::getenv("FAIRKG_FB15K237_DIR");
  if (dir == nullptr) GTEST_SKIP() << "FAIRKG_FB15K237_DIR not set";
  const KnowledgeGraph g = load_triples(std::filesystem::path(dir) / "train.txt");
  EXPECT_EQ(g.num_relations(), 237u);
  EXPECT_EQ(g.triples().size(), 272115u);
  EXPECT_LE(g.num_entities(), 14541u);
}

TEST(KnowledgeGraph, AdjacencyMirrorsTriples) {
  const KnowledgeGraph g = testing::random_graph(30, 4, 120, 5);
  std::size_t out_total = 0, in_total = 0;
  for (std::uint32_t e = 0; e < g.num_entities(); ++e) {
    for (const Neighbor& n : g.out_edges(EntityId{e})) {
      EXPECT_TRUE(g.contains({EntityId{e}, n.relation, n.entity}));
      ++out_total;
    }
    for (const Neighbor& n : g.in_edges(EntityId{e})) {
      EXPECT_TRUE(g.contains({n.entity, n.relation, EntityId{e}}));
      ++in_total;
    }
  }
  EXPECT_EQ(out_total, g.triples().size());
  EXPECT_EQ(in_total, g.triples().size());
}

TEST(KnowledgeGraph, LinkedIgnoresDirection) {
  const KnowledgeGraph g = parse("a\tr\tb\n");
  const RelationId r = *g.find_relation("r");
  EXPECT_TRUE(g.linked(entity(g, "a"), r, entity(g, "b")));
  EXPECT_TRUE(g.linked(entity(g, "b"), r, entity(g, "a")));
}

TEST(KnowledgeGraph, RejectsOutOfRangeIndex) {
  Vocabulary e, r;
  e.intern("a");
  r.intern("r");
  EXPECT_THROW(KnowledgeGraph(e, r, {Triple{EntityId{0}, RelationId{0}, EntityId{3}}}), Error);
  EXPECT_THROW(KnowledgeGraph(Vocabulary{}, r, {}), Error);
}

TEST(KnowledgeGraph, VocabularyHashTracksLabels) {
  EXPECT_EQ(parse("a\tr\tb\n").vocabulary_hash(), parse("a\tr\tb\n").vocabulary_hash());
  EXPECT_NE(parse("a\tr\tb\n").vocabulary_hash(), parse("a\tr\tc\n").vocabulary_hash());
}

TEST(RoundTrip, SaveThenLoadIsIdentical) {
  TempDir dir;
  const KnowledgeGraph g = testing::random_graph(40, 5, 200, 9);
  save_triples(dir / "g.tsv", g);
  const KnowledgeGraph back = load_triples(dir / "g.tsv");
  // random_graph may register entities that no triple mentions.
  const KnowledgeGraph original = [&] {
    std::ostringstream out;
    write_triples(out, g, g.triples());
    return parse(out.str());
  }();
  EXPECT_EQ(back.entities(), original.entities());
  EXPECT_EQ(back.relations(), original.relations());
  EXPECT_TRUE(std::equal(back.triples().begin(), back.triples().end(), original.triples().begin(),
                         original.triples().end()));
}

TEST(RoundTrip, LoadedFileIsStable) {
  TempDir dir;
  write_text(dir / "a.tsv", "x\tr\ty\ny\tq\tz\nz\tr\tx\n");
  const KnowledgeGraph g = load_triples(dir / "a.tsv");
  save_triples(dir / "b.tsv", g);
  EXPECT_EQ(read_text(dir / "a.tsv"), read_text(dir / "b.tsv"));
}

// ---------------------------------------------------------------------------

SensitiveConfig gender_config(const KnowledgeGraph& g, std::vector<std::string> c_labels) {
  SensitiveLabels l;
  l.sensitive = {"male", "female"};
  l.sensitive_relation = "is_gender";
  l.nonsensitive = std::move(c_labels);
  l.nonsensitive_relation = "has_occupation";
  return resolve_sensitive(g, l);
}

TEST(ResolveSensitive, ChecksInvariants) {
  const KnowledgeGraph g = parse(
      "p1\tis_gender\tmale\np2\tis_gender\tfemale\np1\thas_occupation\tengineer\n");
  EXPECT_NO_THROW(gender_config(g, {"engineer"}));
  EXPECT_THROW(gender_config(g, {"pilot"}), ConfigError);
  EXPECT_THROW(gender_config(g, {"male"}), ConfigError);
  EXPECT_THROW(gender_config(g, {}), ConfigError);
  SensitiveLabels one{{"male"}, "is_gender", {"engineer"}, "has_occupation"};
  EXPECT_THROW(resolve_sensitive(g, one), ConfigError);
  SensitiveLabels bad_rel{{"male", "female"}, "nope", {"engineer"}, "has_occupation"};
  EXPECT_THROW(resolve_sensitive(g, bad_rel), ConfigError);
}

TEST(ResolveSensitive, WildcardSelectsReachedEntities) {
  const KnowledgeGraph g = parse(
      "p1\tis_gender\tmale\np2\tis_gender\tfemale\np1\thas_occupation\tengineer\np2\thas_occupation\tnurse\n");
  const SensitiveConfig c = gender_config(g, {"*"});
  EXPECT_EQ(c.nonsensitive.size(), 2u);
  EXPECT_TRUE(c.is_nonsensitive(entity(g, "nurse")));
  EXPECT_EQ(c.pair_count(), 1u);
  const SensitiveLabels back = sensitive_labels(g, c);
  EXPECT_EQ(back.sensitive, (std::vector<std::string>{"male", "female"}));
}

TEST(SensitiveValue, FirstLinkedSensitiveEntity) {
  const KnowledgeGraph g = parse("p1\tis_gender\tfemale\np2\tis_gender\tmale\np1\thas_occupation\tengineer\n");
  const SensitiveConfig c = gender_config(g, {"engineer"});
  EXPECT_EQ(sensitive_value_of(g, c, entity(g, "p1")), entity(g, "female"));
  EXPECT_FALSE(sensitive_value_of(g, c, entity(g, "engineer")).has_value());
}

// ---------------------------------------------------------------------------

TEST(Split, SeventyTenTwenty) {
  const KnowledgeGraph g = testing::random_graph(60, 3, 100, 1);
  ASSERT_EQ(g.triples().size(), 100u);
  const SplitSet s = split(g, {0.7, 0.1, 0.2}, nullptr, 4);
  EXPECT_EQ(s.train.size(), 70u);
  EXPECT_EQ(s.valid.size(), 10u);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_EQ(s.seed, 4u);
}

TEST(Split, DegenerateRatioKeepsEverythingInTrain) {
  const KnowledgeGraph g = testing::random_graph(20, 2, 30, 2);
  const SplitSet s = split(g, {1.0, 0.0, 0.0}, nullptr, 0);
  EXPECT_EQ(s.train.size(), g.triples().size());
  EXPECT_TRUE(s.valid.empty());
  EXPECT_TRUE(s.test.empty());
}

TEST(Split, IsAPartition) {
  const KnowledgeGraph g = testing::random_graph(50, 4, 237, 3);
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const SplitSet s = split(g, {0.6, 0.15, 0.25}, nullptr, seed);
    std::multiset<Triple> all(s.train.begin(), s.train.end());
    all.insert(s.valid.begin(), s.valid.end());
    all.insert(s.test.begin(), s.test.end());
    EXPECT_EQ(all, std::multiset<Triple>(g.triples().begin(), g.triples().end()));
  }
}

TEST(Split, DeterministicPerSeed) {
  const KnowledgeGraph g = testing::random_graph(50, 4, 200, 3);
  const SplitSet a = split(g, {0.7, 0.1, 0.2}, nullptr, 11);
  const SplitSet b = split(g, {0.7, 0.1, 0.2}, nullptr, 11);
  const SplitSet c = split(g, {0.7, 0.1, 0.2}, nullptr, 12);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.train, c.train);
}

TEST(Split, StratifiesSensitiveTails) {
  // 20 sensitive triples, 10 per value.
  const SynthGraph sg = synth_biased_kg(20, 0.5, 3, 6);
  const SplitSet s = split(sg.graph, {0.5, 0.25, 0.25}, &sg.config, 8);
  const std::vector<const std::vector<Triple>*> parts{&s.train, &s.valid, &s.test};
  const std::vector<double> ratios{0.5, 0.25, 0.25};
  for (std::size_t p = 0; p < parts.size(); ++p) {
    std::map<std::uint32_t, int> count;
    for (const Triple& t : *parts[p]) {
      if (sg.config.is_sensitive(t.tail)) ++count[t.tail.value];
    }
    for (EntityId v : sg.config.sensitive) {
      EXPECT_LE(std::abs(count[v.value] - 10.0 * ratios[p]), 1.0) << "split " << p;
    }
    EXPECT_LE(std::abs(count[sg.config.sensitive[0].value] - count[sg.config.sensitive[1].value]), 1);
  }
}

TEST(Split, RejectsBadRatiosAndTinyGraphs) {
  const KnowledgeGraph g = parse("a\tr\tb\nb\tr\tc\n");
  EXPECT_THROW(split(g, {0.5, 0.5, 0.5}, nullptr, 0), Error);
  EXPECT_THROW(split(g, {-0.1, 0.6, 0.5}, nullptr, 0), Error);
  EXPECT_THROW(split(g, {0.7, 0.1, 0.2}, nullptr, 0), Error);
}

TEST(LoadPresplit, SharesVocabularyAcrossFiles) {
  TempDir dir;
  write_text(dir / "train.tsv", "a\tr\tb\n");
  write_text(dir / "valid.tsv", "b\tr\tc\n");
  write_text(dir / "test.tsv", "c\tq\ta\n");
  const PresplitGraph p = load_presplit(dir / "train.tsv", dir / "valid.tsv", dir / "test.tsv");
  EXPECT_EQ(p.graph.num_entities(), 3u);
  EXPECT_EQ(p.graph.num_relations(), 2u);
  EXPECT_EQ(p.splits.train.size(), 1u);
  EXPECT_EQ(p.splits.valid.size(), 1u);
  EXPECT_EQ(p.splits.test.size(), 1u);
}

// ---------------------------------------------------------------------------

TEST(BiasedPaths, SingleBridge) {
  const KnowledgeGraph g = parse("person1\tis_gender\tmale\nperson1\thas_occupation\tengineer\nx\tis_gender\tfemale\n");
  const SensitiveConfig c = gender_config(g, {"engineer"});
  const auto paths = extract_biased_paths(g, c, 2);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].sensitive, entity(g, "male"));
  EXPECT_EQ(paths[0].bridge, std::vector<EntityId>{entity(g, "person1")});
  EXPECT_EQ(paths[0].nonsensitive, entity(g, "engineer"));
  EXPECT_EQ(g.relation_label(paths[0].sensitive_relation), "is_gender");
  EXPECT_EQ(g.relation_label(paths[0].nonsensitive_relation), "has_occupation");
}

TEST(BiasedPaths, NoSensitiveEdgeMeansNoPaths) {
  const KnowledgeGraph g = parse("person1\tlikes\tmale\nperson1\thas_occupation\tengineer\nx\tis_gender\tfemale\n");
  const SensitiveConfig c = gender_config(g, {"engineer"});
  EXPECT_TRUE(extract_biased_paths(g, c, 2).empty());
}

TEST(BiasedPaths, RejectsShortHopLimit) {
  const SynthGraph sg = synth_biased_kg(4, 0.5, 1, 0);
  EXPECT_THROW(extract_biased_paths(sg.graph, sg.config, 1), Error);
}

// Independent enumeration: DFS over an undirected entity adjacency built
// straight from the triple list.
std::set<std::vector<std::uint32_t>> dfs_oracle(const KnowledgeGraph& g, const SensitiveConfig& c, int max_hops) {
  std::map<std::uint32_t, std::set<std::uint32_t>> any, rs, rc;
  for (const Triple& t : g.triples()) {
    any[t.head.value].insert(t.tail.value);
    any[t.tail.value].insert(t.head.value);
    if (t.relation == c.sensitive_relation) {
      rs[t.head.value].insert(t.tail.value);
      rs[t.tail.value].insert(t.head.value);
    }
    if (t.relation == c.nonsensitive_relation) {
      rc[t.head.value].insert(t.tail.value);
      rc[t.tail.value].insert(t.head.value);
    }
  }
  auto endpoint = [&](std::uint32_t e) { return c.is_sensitive(EntityId{e}) || c.is_nonsensitive(EntityId{e}); };
  std::set<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> seq;
  std::function<void()> grow = [&] {
    const std::uint32_t last = seq.back();
    const int hops = static_cast<int>(seq.size()) - 1;
    for (std::uint32_t cj : rc[last]) {
      if (c.is_nonsensitive(EntityId{cj})) {
        auto full = seq;
        full.push_back(cj);
        out.insert(full);
      }
    }
    if (hops + 1 >= max_hops) return;
    for (std::uint32_t nb : any[last]) {
      if (endpoint(nb) || std::find(seq.begin(), seq.end(), nb) != seq.end()) continue;
      seq.push_back(nb);
      grow();
      seq.pop_back();
    }
  };
  for (EntityId s : c.sensitive) {
    for (std::uint32_t b : rs[s.value]) {
      if (endpoint(b)) continue;
      seq = {s.value, b};
      grow();
    }
  }
  return out;
}

std::set<std::vector<std::uint32_t>> as_sequences(const std::vector<BiasedPath>& paths) {
  std::set<std::vector<std::uint32_t>> out;
  for (const BiasedPath& p : paths) {
    std::vector<std::uint32_t> seq{p.sensitive.value};
    for (EntityId b : p.bridge) seq.push_back(b.value);
    seq.push_back(p.nonsensitive.value);
    out.insert(seq);
  }
  return out;
}

TEST(BiasedPaths, SyntheticEightBridgesMatchesDfs) {
  const SynthGraph sg = synth_biased_kg(8, 0.625, 1, 3);
  const auto paths = extract_biased_paths(sg.graph, sg.config, 2);
  // One sensitive and one non-sensitive edge per bridge: one path each.
  EXPECT_EQ(paths.size(), 8u * 1u);
  EXPECT_EQ(as_sequences(paths), dfs_oracle(sg.graph, sg.config, 2));
}

TEST(BiasedPaths, LongerPathsMatchDfs) {
  // Synthetic core plus random links among the people.
  const SynthGraph sg = synth_biased_kg(12, 0.5, 3, 4);
  GraphBuilder b;
  for (const std::string& l : sg.graph.entities().labels()) b.add_entity(l);
  for (const std::string& l : sg.graph.relations().labels()) b.add_relation(l);
  const RelationId knows = b.add_relation("knows");
  for (const Triple& t : sg.graph.triples()) b.add(t.head, t.relation, t.tail);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint32_t> person(2 + 3, 2 + 3 + 11);
  for (int i = 0; i < 10; ++i) {
    const std::uint32_t a = person(rng), c = person(rng);
    if (a != c) b.add(EntityId{a}, knows, EntityId{c});
  }
  const KnowledgeGraph g = std::move(b).build();
  for (int hops : {2, 3, 4}) {
    const auto paths = extract_biased_paths(g, sg.config, hops);
    EXPECT_EQ(as_sequences(paths), dfs_oracle(g, sg.config, hops)) << hops;
    EXPECT_TRUE(std::is_sorted(paths.begin(), paths.end(), [](const BiasedPath& x, const BiasedPath& y) {
      return as_sequences({x}) < as_sequences({y});
    }));
    for (const BiasedPath& p : paths) EXPECT_TRUE(path_exists(g, p));
  }
  EXPECT_EQ(extract_biased_paths(g, sg.config, 9).size(), extract_biased_paths(g, sg.config, kMaxPathHops).size());
}

TEST(BiasedPaths, EveryPathReplays) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SynthGraph sg = synth_biased_kg(30, 0.4, 4, seed);
    for (const BiasedPath& p : extract_biased_paths(sg.graph, sg.config, 2)) {
      EXPECT_TRUE(path_exists(sg.graph, p));
    }
  }
}

// ---------------------------------------------------------------------------

KnowledgeGraph engineers(int male, int female) {
  GraphBuilder b;
  for (int i = 0; i < male + female; ++i) {
    const std::string p = "p" + std::to_string(i);
    b.add(p, "is_gender", i < male ? "male" : "female");
    b.add(p, "has_occupation", "engineer");
  }
  return std::move(b).build();
}

TEST(TwoHopConnectivity, FigureTwoEngineers) {
  const KnowledgeGraph g = engineers(5, 3);
  const SensitiveConfig c = gender_config(g, {"engineer"});
  EXPECT_DOUBLE_EQ(two_hop_connectivity(g, entity(g, "engineer"), entity(g, "male"), c), 0.625);
  EXPECT_DOUBLE_EQ(two_hop_connectivity(g, entity(g, "engineer"), entity(g, "female"), c), 0.375);
}

TEST(TwoHopConnectivity, Balanced) {
  const KnowledgeGraph g = engineers(4, 4);
  const SensitiveConfig c = gender_config(g, {"engineer"});
  EXPECT_DOUBLE_EQ(two_hop_connectivity(g, entity(g, "engineer"), entity(g, "male"), c), 0.5);
  EXPECT_DOUBLE_EQ(two_hop_connectivity(g, entity(g, "engineer"), entity(g, "female"), c), 0.5);
}

TEST(TwoHopConnectivity, RejectsEntitiesOutsideSets) {
  const KnowledgeGraph g = engineers(1, 1);
  const SensitiveConfig c = gender_config(g, {"engineer"});
  EXPECT_THROW(two_hop_connectivity(g, entity(g, "male"), entity(g, "male"), c), Error);
  EXPECT_THROW(two_hop_connectivity(g, entity(g, "engineer"), entity(g, "p0"), c), Error);
}

TEST(TwoHopConnectivity, MatchesBruteForceAndSumsToOne) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const SynthGraph sg = synth_biased_kg(40, 0.3 + 0.1 * seed, 5, seed, {0.5});
    const KnowledgeGraph& g = sg.graph;
    for (EntityId cj : sg.config.nonsensitive) {
      double total = 0.0;
      for (EntityId si : sg.config.sensitive) {
        int both = 0, denom = 0;
        for (const Triple& t : g.triples()) {
          if (t.relation != sg.config.nonsensitive_relation || t.tail != cj) continue;
          ++denom;
          both += g.contains({t.head, sg.config.sensitive_relation, si}) ? 1 : 0;
        }
        const double expected = denom == 0 ? 0.0 : static_cast<double>(both) / denom;
        const double got = two_hop_connectivity(g, cj, si, sg.config);
        EXPECT_DOUBLE_EQ(got, expected);
        total += got;
      }
      const bool has_bridges = !g.in_edges(cj).empty();
      if (has_bridges) {
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

// ---------------------------------------------------------------------------

TEST(Synth, FigureTwoRatio) {
  const SynthGraph sg = synth_biased_kg(8, 0.625, 1, 17);
  const EntityId c = sg.config.nonsensitive.front();
  EXPECT_DOUBLE_EQ(two_hop_connectivity(sg.graph, c, sg.config.sensitive[0], sg.config), 0.625);
  EXPECT_DOUBLE_EQ(two_hop_connectivity(sg.graph, c, sg.config.sensitive[1], sg.config), 0.375);
}

TEST(Synth, BalancedRatio) {
  const SynthGraph sg = synth_biased_kg(10, 0.5, 1, 2);
  const EntityId c = sg.config.nonsensitive.front();
  EXPECT_DOUBLE_EQ(two_hop_connectivity(sg.graph, c, sg.config.sensitive[0], sg.config), 0.5);
  EXPECT_DOUBLE_EQ(two_hop_connectivity(sg.graph, c, sg.config.sensitive[1], sg.config), 0.5);
}

TEST(Synth, ConstructionInvariants) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 2 + seed * 7;
    const SynthGraph sg = synth_biased_kg(n, 0.7, 3, seed, {seed % 2 == 0 ? 0.0 : 0.8});
    EXPECT_EQ(sg.graph.triples().size(), 2 * n);
    EXPECT_EQ(sg.graph.num_entities(), 2 + 3 + n);
    EXPECT_EQ(sg.config.sensitive.size(), 2u);
    EXPECT_EQ(sg.config.nonsensitive.size(), 3u);
    std::size_t first = 0;
    for (std::uint32_t e = 5; e < sg.graph.num_entities(); ++e) {
      int gender = 0, job = 0;
      for (const Neighbor& nb : sg.graph.out_edges(EntityId{e})) {
        if (nb.relation == sg.config.sensitive_relation) {
          ++gender;
          first += nb.entity == sg.config.sensitive[0] ? 1 : 0;
        }
        if (nb.relation == sg.config.nonsensitive_relation) ++job;
      }
      EXPECT_EQ(gender, 1);
      EXPECT_EQ(job, 1);
    }
    EXPECT_EQ(first, static_cast<std::size_t>(std::llround(0.7 * static_cast<double>(n))));
  }
}

TEST(Synth, DeterministicPerSeed) {
  const SynthGraph a = synth_biased_kg(25, 0.6, 4, 3);
  const SynthGraph b = synth_biased_kg(25, 0.6, 4, 3);
  const SynthGraph c = synth_biased_kg(25, 0.6, 4, 4);
  EXPECT_TRUE(std::equal(a.graph.triples().begin(), a.graph.triples().end(), b.graph.triples().begin(),
                         b.graph.triples().end()));
  EXPECT_FALSE(std::equal(a.graph.triples().begin(), a.graph.triples().end(), c.graph.triples().begin(),
                          c.graph.triples().end()));
}

TEST(Synth, RejectsBadArguments) {
  EXPECT_THROW(synth_biased_kg(1, 0.5, 1, 0), Error);
  EXPECT_THROW(synth_biased_kg(4, 1.5, 1, 0), Error);
  EXPECT_THROW(synth_biased_kg(4, 0.5, 0, 0), Error);
}

}  // namespace
}  // namespace fairkg
