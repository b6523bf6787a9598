#pragma once

// In-memory verb hypernym graph parsed from the Princeton WordNet
// `index.verb` / `data.verb` files.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tca {

struct SynsetId {
  std::uint32_t offset = 0;
  char pos = 'v';

  friend auto operator<=>(const SynsetId&, const SynsetId&) = default;
};

std::string to_string(SynsetId id);  // "01926311-v"

struct SynsetIdHash {
  std::size_t operator()(SynsetId id) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{id.offset} << 8) | std::uint8_t(id.pos));
  }
};

struct Synset {
  SynsetId id;
  std::vector<std::string> lemmas;
  std::vector<SynsetId> hypernyms;
  std::string gloss;
};

struct LcsResult {
  SynsetId lcs;
  int depth_lcs = 0;
  // Depths of the two inputs measured along their hypernym chains through lcs.
  int depth_a = 0;
  int depth_b = 0;
};

// Immutable after construction. All queries are const and reentrant.
//
// Every parentless synset hangs off a synthetic root (offset 0), so the graph
// is connected and every pair has a common subsumer. Depths count edges from
// that root: a WordNet top-level verb has depth 1.
class VerbTaxonomy {
 public:
  // Parses the text of index.verb and data.verb. Throws ParseError (with a
  // 1-based line number) on malformed lines and IntegrityError on dangling
  // offsets, cycles, or an input with no synsets at all.
  static VerbTaxonomy parse(std::string_view index_text, std::string_view data_text);

  // Reads `index.verb` and `data.verb` from dir. Throws ConfigError naming
  // the path when a file is missing.
  static VerbTaxonomy load(const std::filesystem::path& dir);

  std::size_t size() const { return nodes_.size() - 1; }
  SynsetId virtual_root() const { return nodes_.front().synset.id; }
  int max_depth() const { return max_depth_; }

  bool contains(SynsetId id) const { return index_of_.count(id) != 0; }
  const Synset& synset(SynsetId id) const;
  int depth(SynsetId id) const;

  // Senses of an exact (already normalized) lemma in database order; empty
  // when unknown.
  std::span<const SynsetId> synsets_of(std::string_view lemma) const;
  bool has_lemma(std::string_view lemma) const { return !synsets_of(lemma).empty(); }

  // Minimum number of hypernym/hyponym edges between a and b, treating the
  // virtual root edges like any other edge.
  int shortest_path_len(SynsetId a, SynsetId b) const;

  // Path lengths from source to each target, in target order. One graph
  // traversal, so cheaper than repeated shortest_path_len for many targets.
  std::vector<int> shortest_path_lens(SynsetId source, std::span<const SynsetId> targets) const;

  // Deepest common subsumer of a and b. Among equally deep subsumers the one
  // with the shortest combined hypernym distance wins, then the lowest offset.
  LcsResult lcs_and_depths(SynsetId a, SynsetId b) const;

  // All synsets in ascending offset order (virtual root excluded).
  std::vector<SynsetId> all_synsets() const;
  // All lemmas in index-file order.
  const std::vector<std::string>& lemmas() const { return lemma_order_; }

  // Deterministic textual form: synsets by offset, then the lemma index.
  std::string canonical_dump() const;
  // WordNet-format text reproducing this taxonomy (pointers other than
  // hypernyms and verb frames are not retained).
  std::string to_index_text() const;
  std::string to_data_text() const;

 private:
  struct Node {
    Synset synset;
    std::vector<std::uint32_t> parents;   // dense indices; root for top-level synsets
    std::vector<std::uint32_t> children;  // dense indices
    int depth = 0;
  };

  std::uint32_t index_of(SynsetId id) const;
  // Hypernym distance from the node to each of its ancestors (itself at 0).
  std::unordered_map<std::uint32_t, int> ancestor_distances(std::uint32_t node) const;

  std::vector<Node> nodes_;  // nodes_[0] is the virtual root
  std::unordered_map<SynsetId, std::uint32_t, SynsetIdHash> index_of_;
  std::unordered_map<std::string, std::vector<SynsetId>> lemma_index_;
  std::vector<std::string> lemma_order_;
  int max_depth_ = 0;
};

// Lowercases and trims surrounding punctuation.
std::string lowercase_word(std::string_view word);

// Maps a surface word onto a lemma present in the taxonomy: exact lowercase
// match first, then suffix stripping (-s, -es, -ed, -ing) with e-restoration
// and consonant undoubling. nullopt when nothing matches.
std::optional<std::string> resolve_verb_lemma(const VerbTaxonomy& tax, std::string_view word);

}  // namespace tca
