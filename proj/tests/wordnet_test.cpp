#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/brute_force.hpp"
#include "support/fixtures.hpp"
#include "tca/errors.hpp"
#include "tca/wordnet.hpp"

namespace tca {
namespace {

using testing::BruteForceOntology;
using testing::ontology_dir;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kIndex = "move v 1 1 ~ 1 0 00000100\ntravel v 1 1 @ 1 0 00000200\n";
const char* kData =
    "00000100 38 v 01 move 0 000 | change location\n"
    "00000200 38 v 01 travel 0 001 @ 00000100 v 0000 | go\n";

TEST(VerbTaxonomy, ChainFixtureHasDepthThree) {
  const auto tax = VerbTaxonomy::load(ontology_dir("chain"));
  EXPECT_EQ(tax.size(), 3u);
  EXPECT_EQ(tax.max_depth(), 3);
  EXPECT_EQ(tax.depth(SynsetId{100}), 1);
  EXPECT_EQ(tax.depth(SynsetId{300}), 3);
  ASSERT_EQ(tax.synsets_of("run").size(), 1u);
  EXPECT_EQ(tax.synset(SynsetId{300}).hypernyms, std::vector<SynsetId>{SynsetId{200}});
  EXPECT_EQ(tax.synset(SynsetId{300}).gloss, "travel on foot at speed");
}

TEST(VerbTaxonomy, OnlyHypernymPointersBecomeEdges) {
  // motion/travel also carries a '$' verb-group pointer and '~' hyponym pointers.
  const auto tax = VerbTaxonomy::load(ontology_dir("motion"));
  EXPECT_EQ(tax.synset(SynsetId{11}).hypernyms, std::vector<SynsetId>{SynsetId{10}});
  EXPECT_TRUE(tax.synset(SynsetId{10}).hypernyms.empty());
}

TEST(VerbTaxonomy, LemmaOrderFollowsIndexFile) {
  const auto tax = VerbTaxonomy::load(ontology_dir("motion"));
  ASSERT_GE(tax.lemmas().size(), 3u);
  EXPECT_EQ(tax.lemmas()[0], "adjust");
  EXPECT_EQ(tax.lemmas()[1], "alter");
  EXPECT_EQ(tax.lemmas().back(), "walk");
  const auto run = tax.synsets_of("run");
  ASSERT_EQ(run.size(), 2u);
  EXPECT_EQ(run[0].offset, 13u);
  EXPECT_EQ(run[1].offset, 26u);
}

TEST(VerbTaxonomy, MultipleHypernymsTakeTheShallowestDepth) {
  const auto tax = VerbTaxonomy::load(ontology_dir("lattice"));
  // summarize sits under describe (depth 3), draft (depth 4) and explain (depth 3).
  EXPECT_EQ(tax.depth(SynsetId{109}), 4);
  EXPECT_EQ(tax.depth(SynsetId{111}), 2);  // plan is also directly under act
}

TEST(VerbTaxonomy, ReparseOfSerializedFormIsIdentical) {
  for (const char* name : {"chain", "motion", "lattice"}) {
    const auto tax = VerbTaxonomy::load(ontology_dir(name));
    const auto again = VerbTaxonomy::parse(tax.to_index_text(), tax.to_data_text());
    EXPECT_EQ(again.canonical_dump(), tax.canonical_dump()) << name;
    EXPECT_EQ(again.to_data_text(), tax.to_data_text()) << name;
  }
}

TEST(VerbTaxonomy, MaxDepthIsTheDeepestSynset) {
  for (const char* name : {"chain", "motion", "lattice"}) {
    const auto tax = VerbTaxonomy::load(ontology_dir(name));
    int deepest = 0;
    for (auto id : tax.all_synsets()) deepest = std::max(deepest, tax.depth(id));
    EXPECT_EQ(tax.max_depth(), deepest) << name;
  }
}

TEST(VerbTaxonomy, ShortestPathsMatchFloydWarshall) {
  for (const char* name : {"chain", "motion", "lattice"}) {
    const auto tax = VerbTaxonomy::load(ontology_dir(name));
    const BruteForceOntology oracle(ontology_dir(name));
    EXPECT_EQ(tax.max_depth(), oracle.max_depth());
    const auto ids = tax.all_synsets();
    for (auto a : ids) {
      EXPECT_EQ(tax.depth(a), oracle.depth(a.offset));
      const auto batch = tax.shortest_path_lens(a, ids);
      for (std::size_t j = 0; j < ids.size(); ++j) {
        EXPECT_EQ(tax.shortest_path_len(a, ids[j]), oracle.path_len(a.offset, ids[j].offset))
            << name << " " << to_string(a) << " " << to_string(ids[j]);
        EXPECT_EQ(batch[j], tax.shortest_path_len(a, ids[j]));
      }
    }
  }
}

TEST(VerbTaxonomy, PathLengthIsAMetric) {
  const auto tax = VerbTaxonomy::load(ontology_dir("lattice"));
  const auto ids = tax.all_synsets();
  for (auto a : ids) {
    EXPECT_EQ(tax.shortest_path_len(a, a), 0);
    for (auto b : ids) {
      EXPECT_EQ(tax.shortest_path_len(a, b), tax.shortest_path_len(b, a));
      for (auto c : ids) {
        EXPECT_LE(tax.shortest_path_len(a, c), tax.shortest_path_len(a, b) + tax.shortest_path_len(b, c));
      }
    }
  }
}

TEST(VerbTaxonomy, LcsIsNoDeeperThanEitherSide) {
  for (const char* name : {"motion", "lattice"}) {
    const auto tax = VerbTaxonomy::load(ontology_dir(name));
    for (auto a : tax.all_synsets()) {
      for (auto b : tax.all_synsets()) {
        const auto r = tax.lcs_and_depths(a, b);
        EXPECT_LE(r.depth_lcs, r.depth_a);
        EXPECT_LE(r.depth_lcs, r.depth_b);
        EXPECT_GE(r.depth_a, tax.depth(a));
      }
    }
  }
}

TEST(VerbTaxonomy, UnrelatedTreesMeetAtTheVirtualRoot) {
  const auto tax = VerbTaxonomy::load(ontology_dir("motion"));
  const auto r = tax.lcs_and_depths(SynsetId{14}, SynsetId{32});  // sprint vs analyze
  EXPECT_EQ(r.lcs, tax.virtual_root());
  EXPECT_EQ(r.depth_lcs, 0);
  EXPECT_EQ(tax.shortest_path_len(SynsetId{10}, SynsetId{20}), 2);
}

TEST(VerbTaxonomy, RealWordNetRunHasFortyOneSenses) {
  const auto& tax = testing::real_wordnet();
  const auto run = tax.synsets_of("run");
  ASSERT_EQ(run.size(), 41u);
  EXPECT_EQ(to_string(run[0]), "01926311-v");
  EXPECT_EQ(tax.size(), 13767u);
  EXPECT_EQ(tax.max_depth(), 13);
}

TEST(VerbTaxonomy, MissingDirectoryIsAConfigErrorNamingThePath) {
  try {
    VerbTaxonomy::load("/no/such/wordnet");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/no/such/wordnet"), std::string::npos);
  }
}

TEST(VerbTaxonomyErrors, EmptyInputIsAParseError) { EXPECT_THROW(VerbTaxonomy::parse("", ""), ParseError); }

TEST(VerbTaxonomyErrors, HeaderOnlyInputHasNoSynsets) {
  EXPECT_THROW(VerbTaxonomy::parse("  1 header\n", "  1 header\n"), IntegrityError);
}

TEST(VerbTaxonomyErrors, MalformedOffsetReportsTheLine) {
  try {
    VerbTaxonomy::parse(kIndex, "00000100 38 v 01 move 0 000 | x\n0000200 38 v 01 travel 0 000 | y\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(VerbTaxonomyErrors, DanglingHypernym) {
  EXPECT_THROW(VerbTaxonomy::parse(kIndex,
                                   "00000100 38 v 01 move 0 000 | x\n"
                                   "00000200 38 v 01 travel 0 001 @ 00000999 v 0000 | y\n"),
               IntegrityError);
}

TEST(VerbTaxonomyErrors, HypernymCycle) {
  EXPECT_THROW(VerbTaxonomy::parse(kIndex,
                                   "00000100 38 v 01 move 0 001 @ 00000200 v 0000 | x\n"
                                   "00000200 38 v 01 travel 0 001 @ 00000100 v 0000 | y\n"),
               IntegrityError);
}

TEST(VerbTaxonomyErrors, SelfHypernym) {
  EXPECT_THROW(VerbTaxonomy::parse(kIndex,
                                   "00000100 38 v 01 move 0 001 @ 00000100 v 0000 | x\n"
                                   "00000200 38 v 01 travel 0 000 | y\n"),
               IntegrityError);
}

TEST(VerbTaxonomyErrors, DuplicateSynset) {
  EXPECT_THROW(VerbTaxonomy::parse(kIndex, std::string(kData) + "00000200 38 v 01 go 0 000 | z\n"), IntegrityError);
}

TEST(VerbTaxonomyErrors, IndexNamesUnknownSynset) {
  EXPECT_THROW(VerbTaxonomy::parse("move v 1 1 ~ 1 0 00000777\n", kData), IntegrityError);
}

TEST(VerbTaxonomyErrors, TruncatedPointerList) {
  EXPECT_THROW(VerbTaxonomy::parse(kIndex,
                                   "00000100 38 v 01 move 0 000 | x\n"
                                   "00000200 38 v 01 travel 0 002 @ 00000100 v 0000 | y\n"),
               ParseError);
}

TEST(VerbTaxonomyErrors, NonVerbSynsetType) {
  EXPECT_THROW(VerbTaxonomy::parse(kIndex,
                                   "00000100 38 n 01 move 0 000 | x\n"
                                   "00000200 38 v 01 travel 0 000 | y\n"),
               ParseError);
}

TEST(LemmaResolution, InflectionsMapToIndexLemmas) {
  const auto& tax = testing::real_wordnet();
  EXPECT_EQ(resolve_verb_lemma(tax, "Analyzes"), "analyze");
  EXPECT_EQ(resolve_verb_lemma(tax, "applies"), "apply");
  EXPECT_EQ(resolve_verb_lemma(tax, "identified"), "identify");
  EXPECT_EQ(resolve_verb_lemma(tax, "planned"), "plan");
  EXPECT_EQ(resolve_verb_lemma(tax, "debugging"), "debug");
  EXPECT_EQ(resolve_verb_lemma(tax, "creating"), "create");
  EXPECT_EQ(resolve_verb_lemma(tax, "(explain)"), "explain");
  EXPECT_EQ(resolve_verb_lemma(tax, "xyzzy"), std::nullopt);
  EXPECT_EQ(resolve_verb_lemma(tax, "..."), std::nullopt);
}

}  // namespace
}  // namespace tca
