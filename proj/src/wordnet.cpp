#include "tca/wordnet.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "tca/errors.hpp"

namespace tca {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// Splits text into lines, keeping 1-based numbering.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_header(std::string_view line) { return line.size() >= 2 && line[0] == ' ' && line[1] == ' '; }

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class FieldCursor {
 public:
  FieldCursor(std::vector<std::string_view> fields, std::size_t line) : fields_(std::move(fields)), line_(line) {}

  bool done() const { return pos_ >= fields_.size(); }
  std::string_view peek() const { return done() ? std::string_view{} : fields_[pos_]; }

  std::string_view next(const char* what) {
    if (done()) throw ParseError(std::string("missing ") + what, line_);
    return fields_[pos_++];
  }

  std::uint32_t number(const char* what, int base = 10) {
    auto field = next(what);
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value, base);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw ParseError("bad " + std::string(what) + " '" + std::string(field) + "'", line_);
    }
    return value;
  }

  std::uint32_t offset(const char* what) {
    auto field = peek();
    if (field.size() != 8) throw ParseError(std::string(what) + " must be 8 digits", line_);
    return number(what);
  }

 private:
  std::vector<std::string_view> fields_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct RawSynset {
  Synset synset;
  std::size_t line = 0;
};

RawSynset parse_data_line(std::string_view line, std::size_t line_no) {
  RawSynset raw;
  raw.line = line_no;
  std::string_view head = line;
  std::string gloss;
  if (auto bar = line.find(" | "); bar != std::string_view::npos) {
    head = line.substr(0, bar);
    gloss = std::string(line.substr(bar + 3));
    while (!gloss.empty() && std::isspace(static_cast<unsigned char>(gloss.back()))) gloss.pop_back();
  } else if (auto bare = line.find(" |"); bare != std::string_view::npos) {
    head = line.substr(0, bare);
  }

  FieldCursor cur(split_fields(head), line_no);
  auto& syn = raw.synset;
  syn.id.offset = cur.offset("synset offset");
  cur.number("lex_filenum");
  auto ss_type = cur.next("ss_type");
  if (ss_type != "v") throw ParseError("expected verb ss_type 'v', got '" + std::string(ss_type) + "'", line_no);
  syn.id.pos = 'v';
  syn.gloss = std::move(gloss);

  const auto word_count = cur.number("w_cnt", 16);
  if (word_count == 0) throw ParseError("synset with no words", line_no);
  for (std::uint32_t i = 0; i < word_count; ++i) {
    syn.lemmas.push_back(lower(cur.next("word")));
    cur.number("lex_id", 16);
  }

  const auto pointer_count = cur.number("p_cnt");
  for (std::uint32_t i = 0; i < pointer_count; ++i) {
    auto symbol = cur.next("pointer symbol");
    auto target = cur.offset("pointer offset");
    auto pos = cur.next("pointer pos");
    auto source_target = cur.next("pointer source/target");
    if (source_target.size() != 4) throw ParseError("pointer source/target must be 4 hex digits", line_no);
    if (symbol == "@" && pos == "v") {
      SynsetId parent{target, 'v'};
      if (parent == syn.id) throw IntegrityError("synset " + to_string(syn.id) + " lists itself as hypernym");
      if (std::find(syn.hypernyms.begin(), syn.hypernyms.end(), parent) == syn.hypernyms.end()) {
        syn.hypernyms.push_back(parent);
      }
    }
  }

  // Verb frames: f_cnt then "+ f_num w_num" triples.
  if (!cur.done()) {
    const auto frame_count = cur.number("f_cnt");
    for (std::uint32_t i = 0; i < frame_count; ++i) {
      if (cur.next("frame marker") != "+") throw ParseError("frame entry must start with '+'", line_no);
      cur.number("f_num");
      cur.number("w_num", 16);
    }
  }
  if (!cur.done()) throw ParseError("trailing fields before gloss", line_no);
  return raw;
}

}  // namespace

std::string to_string(SynsetId id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08u-%c", id.offset, id.pos);
  return buf;
}

VerbTaxonomy VerbTaxonomy::parse(std::string_view index_text, std::string_view data_text) {
  if (index_text.empty()) throw ParseError("empty index input");
  if (data_text.empty()) throw ParseError("empty data input");

  VerbTaxonomy tax;
  Node root;
  root.synset.id = SynsetId{0, 'v'};
  root.synset.lemmas = {"<root>"};
  tax.nodes_.push_back(std::move(root));

  std::vector<std::size_t> line_of;  // data line per dense index, for diagnostics
  line_of.push_back(0);
  const auto data_lines = split_lines(data_text);
  for (std::size_t i = 0; i < data_lines.size(); ++i) {
    const auto line = data_lines[i];
    if (is_header(line) || is_blank(line)) continue;
    auto raw = parse_data_line(line, i + 1);
    if (raw.synset.id.offset == 0) throw ParseError("synset offset 0 is reserved", i + 1);
    const auto dense = static_cast<std::uint32_t>(tax.nodes_.size());
    if (!tax.index_of_.emplace(raw.synset.id, dense).second) {
      throw IntegrityError("duplicate synset " + to_string(raw.synset.id) + " at data line " +
                           std::to_string(i + 1));
    }
    Node node;
    node.synset = std::move(raw.synset);
    tax.nodes_.push_back(std::move(node));
    line_of.push_back(i + 1);
  }
  if (tax.nodes_.size() == 1) throw IntegrityError("no synsets");
  tax.index_of_.emplace(tax.nodes_.front().synset.id, 0);

  // Hypernym edges; parentless synsets attach to the virtual root.
  for (std::uint32_t n = 1; n < tax.nodes_.size(); ++n) {
    auto& node = tax.nodes_[n];
    for (auto parent : node.synset.hypernyms) {
      auto it = tax.index_of_.find(parent);
      if (it == tax.index_of_.end() || it->second == 0) {
        throw IntegrityError("dangling hypernym " + to_string(parent) + " from " + to_string(node.synset.id) +
                             " at data line " + std::to_string(line_of[n]));
      }
      node.parents.push_back(it->second);
    }
    if (node.parents.empty()) node.parents.push_back(0);
    for (auto p : node.parents) tax.nodes_[p].children.push_back(n);
  }

  // Kahn's algorithm from the root doubles as the cycle check.
  {
    std::vector<std::size_t> pending(tax.nodes_.size());
    for (std::size_t n = 0; n < tax.nodes_.size(); ++n) pending[n] = tax.nodes_[n].parents.size();
    std::deque<std::uint32_t> queue{0};
    std::size_t visited = 0;
    while (!queue.empty()) {
      auto n = queue.front();
      queue.pop_front();
      ++visited;
      for (auto c : tax.nodes_[n].children) {
        if (--pending[c] == 0) queue.push_back(c);
      }
    }
    if (visited != tax.nodes_.size()) throw IntegrityError("hypernym cycle detected");
  }

  // Depth = fewest edges from the root.
  {
    std::vector<std::uint32_t> depth(tax.nodes_.size(), kUnreached);
    depth[0] = 0;
    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
      auto n = queue.front();
      queue.pop_front();
      for (auto c : tax.nodes_[n].children) {
        if (depth[c] == kUnreached) {
          depth[c] = depth[n] + 1;
          queue.push_back(c);
        }
      }
    }
    for (std::size_t n = 0; n < tax.nodes_.size(); ++n) {
      tax.nodes_[n].depth = static_cast<int>(depth[n]);
      tax.max_depth_ = std::max(tax.max_depth_, tax.nodes_[n].depth);
    }
  }

  const auto index_lines = split_lines(index_text);
  for (std::size_t i = 0; i < index_lines.size(); ++i) {
    const auto line = index_lines[i];
    if (is_header(line) || is_blank(line)) continue;
    FieldCursor cur(split_fields(line), i + 1);
    auto lemma = lower(cur.next("lemma"));
    if (cur.next("pos") != "v") throw ParseError("expected pos 'v'", i + 1);
    const auto synset_count = cur.number("synset_cnt");
    const auto pointer_count = cur.number("p_cnt");
    for (std::uint32_t p = 0; p < pointer_count; ++p) cur.next("pointer symbol");
    cur.number("sense_cnt");
    cur.number("tagsense_cnt");
    std::vector<SynsetId> senses;
    for (std::uint32_t s = 0; s < synset_count; ++s) {
      SynsetId id{cur.offset("synset offset"), 'v'};
      if (tax.index_of_.find(id) == tax.index_of_.end() || id.offset == 0) {
        throw IntegrityError("index line " + std::to_string(i + 1) + ": lemma '" + lemma +
                             "' refers to missing synset " + to_string(id));
      }
      senses.push_back(id);
    }
    if (!cur.done()) throw ParseError("synset_cnt does not match listed offsets", i + 1);
    if (!tax.lemma_index_.emplace(lemma, std::move(senses)).second) {
      throw IntegrityError("index line " + std::to_string(i + 1) + ": duplicate lemma '" + lemma + "'");
    }
    tax.lemma_order_.push_back(std::move(lemma));
  }
  return tax;
}

VerbTaxonomy VerbTaxonomy::load(const std::filesystem::path& dir) {
  auto slurp = [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open WordNet file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (!std::filesystem::is_directory(dir)) throw ConfigError("WordNet directory not found: " + dir.string());
  const auto index = slurp(dir / "index.verb");
  const auto data = slurp(dir / "data.verb");
  return parse(index, data);
}

std::uint32_t VerbTaxonomy::index_of(SynsetId id) const {
  auto it = index_of_.find(id);
  if (it == index_of_.end()) throw LookupError("unknown synset " + to_string(id));
  return it->second;
}

const Synset& VerbTaxonomy::synset(SynsetId id) const { return nodes_[index_of(id)].synset; }

int VerbTaxonomy::depth(SynsetId id) const { return nodes_[index_of(id)].depth; }

std::span<const SynsetId> VerbTaxonomy::synsets_of(std::string_view lemma) const {
  auto it = lemma_index_.find(std::string(lemma));
  if (it == lemma_index_.end()) return {};
  return it->second;
}

int VerbTaxonomy::shortest_path_len(SynsetId a, SynsetId b) const {
  const SynsetId targets[] = {b};
  return shortest_path_lens(a, targets).front();
}

std::vector<int> VerbTaxonomy::shortest_path_lens(SynsetId source, std::span<const SynsetId> targets) const {
  const auto start = index_of(source);
  std::vector<std::uint32_t> wanted;
  wanted.reserve(targets.size());
  for (auto t : targets) wanted.push_back(index_of(t));

  // Dense per-thread scratch, invalidated by bumping a generation stamp
  // rather than clearing.
  struct Scratch {
    std::vector<std::uint32_t> stamp;
    std::vector<int> dist;
    std::uint32_t generation = 0;
  };
  thread_local Scratch scratch;
  if (scratch.stamp.size() < nodes_.size()) {
    scratch.stamp.assign(nodes_.size(), 0);
    scratch.dist.assign(nodes_.size(), 0);
    scratch.generation = 0;
  }
  if (++scratch.generation == 0) {
    std::fill(scratch.stamp.begin(), scratch.stamp.end(), 0);
    scratch.generation = 1;
  }
  const auto gen = scratch.generation;
  auto seen = [&](std::uint32_t n) { return scratch.stamp[n] == gen; };

  scratch.stamp[start] = gen;
  scratch.dist[start] = 0;
  std::size_t remaining = 0;
  for (auto w : wanted) remaining += (w != start);
  std::vector<std::uint32_t> frontier{start};
  std::vector<std::uint32_t> next;
  int level = 0;
  while (remaining > 0 && !frontier.empty()) {
    ++level;
    next.clear();
    auto visit = [&](std::uint32_t m) {
      if (seen(m)) return;
      scratch.stamp[m] = gen;
      scratch.dist[m] = level;
      next.push_back(m);
      remaining -= static_cast<std::size_t>(std::count(wanted.begin(), wanted.end(), m));
    };
    for (auto n : frontier) {
      for (auto p : nodes_[n].parents) visit(p);
      for (auto c : nodes_[n].children) visit(c);
    }
    frontier.swap(next);
  }

  std::vector<int> out;
  out.reserve(wanted.size());
  for (auto w : wanted) out.push_back(scratch.dist[w]);
  return out;
}

std::unordered_map<std::uint32_t, int> VerbTaxonomy::ancestor_distances(std::uint32_t node) const {
  std::unordered_map<std::uint32_t, int> dist{{node, 0}};
  std::deque<std::uint32_t> queue{node};
  while (!queue.empty()) {
    auto n = queue.front();
    queue.pop_front();
    for (auto p : nodes_[n].parents) {
      if (dist.emplace(p, dist[n] + 1).second) queue.push_back(p);
    }
  }
  return dist;
}

LcsResult VerbTaxonomy::lcs_and_depths(SynsetId a, SynsetId b) const {
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  const auto up_a = ancestor_distances(ia);
  const auto up_b = ancestor_distances(ib);

  std::uint32_t best = 0;
  int best_depth = -1;
  int best_span = std::numeric_limits<int>::max();
  for (const auto& [n, da] : up_a) {
    auto it = up_b.find(n);
    if (it == up_b.end()) continue;
    const int d = nodes_[n].depth;
    const int span = da + it->second;
    const bool better = d > best_depth || (d == best_depth && span < best_span) ||
                        (d == best_depth && span == best_span && nodes_[n].synset.id < nodes_[best].synset.id);
    if (better) {
      best = n;
      best_depth = d;
      best_span = span;
    }
  }
  LcsResult r;
  r.lcs = nodes_[best].synset.id;
  r.depth_lcs = best_depth;
  r.depth_a = best_depth + up_a.at(best);
  r.depth_b = best_depth + up_b.at(best);
  return r;
}

std::vector<SynsetId> VerbTaxonomy::all_synsets() const {
  std::vector<SynsetId> ids;
  ids.reserve(size());
  for (std::size_t n = 1; n < nodes_.size(); ++n) ids.push_back(nodes_[n].synset.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string VerbTaxonomy::canonical_dump() const {
  std::ostringstream out;
  out << "max_depth " << max_depth_ << "\n";
  for (auto id : all_synsets()) {
    const auto& node = nodes_[index_of_.at(id)];
    out << to_string(id) << " depth=" << node.depth << " lemmas=";
    for (std::size_t i = 0; i < node.synset.lemmas.size(); ++i) out << (i ? "," : "") << node.synset.lemmas[i];
    out << " hypernyms=";
    for (std::size_t i = 0; i < node.synset.hypernyms.size(); ++i) {
      out << (i ? "," : "") << to_string(node.synset.hypernyms[i]);
    }
    out << "\n";
  }
  for (const auto& lemma : lemma_order_) {
    out << "lemma " << lemma << ":";
    for (auto id : lemma_index_.at(lemma)) out << " " << to_string(id);
    out << "\n";
  }
  return out.str();
}

std::string VerbTaxonomy::to_index_text() const {
  std::ostringstream out;
  out << "  canonical verb index\n";
  for (const auto& lemma : lemma_order_) {
    const auto& senses = lemma_index_.at(lemma);
    out << lemma << " v " << senses.size() << " 1 @ " << senses.size() << " 0";
    for (auto id : senses) {
      char buf[12];
      std::snprintf(buf, sizeof buf, " %08u", id.offset);
      out << buf;
    }
    out << "  \n";
  }
  return out.str();
}

std::string VerbTaxonomy::to_data_text() const {
  std::ostringstream out;
  out << "  canonical verb data\n";
  for (auto id : all_synsets()) {
    const auto& syn = nodes_[index_of_.at(id)].synset;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%08u 29 v %02zx", id.offset, syn.lemmas.size());
    out << buf;
    for (const auto& lemma : syn.lemmas) out << " " << lemma << " 0";
    std::snprintf(buf, sizeof buf, " %03zu", syn.hypernyms.size());
    out << buf;
    for (auto h : syn.hypernyms) {
      std::snprintf(buf, sizeof buf, " @ %08u v 0000", h.offset);
      out << buf;
    }
    out << " 00 | " << syn.gloss << "  \n";
  }
  return out.str();
}

std::string lowercase_word(std::string_view word) {
  auto is_edge = [](unsigned char c) { return !std::isalnum(c) && c != '_' && c != '-'; };
  while (!word.empty() && is_edge(static_cast<unsigned char>(word.front()))) word.remove_prefix(1);
  while (!word.empty() && is_edge(static_cast<unsigned char>(word.back()))) word.remove_suffix(1);
  return lower(word);
}

std::optional<std::string> resolve_verb_lemma(const VerbTaxonomy& tax, std::string_view word) {
  auto base = lowercase_word(word);
  if (base.empty()) return std::nullopt;
  if (tax.has_lemma(base)) return base;

  auto ends_with = [&](std::string_view suffix) {
    return base.size() > suffix.size() + 1 && std::string_view(base).substr(base.size() - suffix.size()) == suffix;
  };
  auto try_stem = [&](std::string stem) -> std::optional<std::string> {
    if (tax.has_lemma(stem)) return stem;
    if (tax.has_lemma(stem + "e")) return stem + "e";
    // planned -> plan, debugging -> debug
    if (stem.size() >= 3 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
      auto undoubled = stem.substr(0, stem.size() - 1);
      if (tax.has_lemma(undoubled)) return undoubled;
    }
    return std::nullopt;
  };

  if (ends_with("ies")) {
    if (auto hit = try_stem(base.substr(0, base.size() - 3) + "y")) return hit;
  }
  if (ends_with("es")) {
    if (auto hit = try_stem(base.substr(0, base.size() - 2))) return hit;
  }
  if (ends_with("s")) {
    if (auto hit = try_stem(base.substr(0, base.size() - 1))) return hit;
  }
  if (ends_with("ied")) {
    if (auto hit = try_stem(base.substr(0, base.size() - 3) + "y")) return hit;
  }
  if (ends_with("ed")) {
    if (auto hit = try_stem(base.substr(0, base.size() - 2))) return hit;
  }
  if (ends_with("ing")) {
    if (auto hit = try_stem(base.substr(0, base.size() - 3))) return hit;
  }
  return std::nullopt;
}

}  // namespace tca
