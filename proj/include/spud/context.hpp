#pragma once

// Syntactic contexts and the lemma inventory indexed by them.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "spud/conllu.hpp"
#include "spud/utf8.hpp"

namespace spud {

inline const std::set<std::string>& default_content_upos() {
  static const std::set<std::string> tags = {"ADJ", "ADV", "NOUN", "PROPN", "VERB"};
  return tags;
}

/// UPOS, relation to the head, and the multiset of relations to dependents.
/// `dep_deprels` is kept sorted so that comparison ignores dependent order.
struct SyntacticContext {
  std::string upos;
  std::string head_deprel;
  std::vector<std::string> dep_deprels;

  SyntacticContext() = default;
  SyntacticContext(std::string upos_, std::string head_deprel_, std::vector<std::string> deps)
      : upos(std::move(upos_)), head_deprel(std::move(head_deprel_)), dep_deprels(std::move(deps)) {
    std::sort(dep_deprels.begin(), dep_deprels.end());
  }

  friend bool operator==(const SyntacticContext&, const SyntacticContext&) = default;
  friend auto operator<=>(const SyntacticContext&, const SyntacticContext&) = default;

  /// `UPOS|head_deprel|dep1,dep2,...`
  std::string key() const {
    std::string out = upos + '|' + head_deprel + '|';
    for (std::size_t i = 0; i < dep_deprels.size(); ++i) {
      if (i > 0) out += ',';
      out += dep_deprels[i];
    }
    return out;
  }

  static SyntacticContext from_key(std::string_view key) {
    const std::size_t a = key.find('|');
    const std::size_t b = a == std::string_view::npos ? a : key.find('|', a + 1);
    if (b == std::string_view::npos) throw std::invalid_argument("malformed context key '" + std::string(key) + "'");
    std::vector<std::string> deps;
    std::string_view rest = key.substr(b + 1);
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      deps.emplace_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return {std::string(key.substr(0, a)), std::string(key.substr(a + 1, b - a - 1)), std::move(deps)};
  }
};

struct SyntacticContextHash {
  std::size_t operator()(const SyntacticContext& c) const { return std::hash<std::string>{}(c.key()); }
};

/// How much of the context takes part in matching.
struct ContextOptions {
  /// Key on UPOS alone.
  bool ignore_deprels = false;
  /// Leave `punct` dependents out of the dependent multiset.
  bool drop_punct_deps = false;

  friend bool operator==(const ContextOptions&, const ContextOptions&) = default;
};

inline SyntacticContext extract_context(const Sentence& s, int token_id) {
  if (token_id < 1 || token_id > static_cast<int>(s.tokens.size()))
    throw std::out_of_range("unknown token id " + std::to_string(token_id) + " in sentence " + s.sent_id);
  const Token& t = s.token(token_id);
  std::vector<std::string> deps;
  for (const auto& d : s.tokens)
    if (d.head == token_id) deps.push_back(d.deprel);
  return {t.upos, t.deprel, std::move(deps)};
}

inline SyntacticContext reduce_context(SyntacticContext ctx, const ContextOptions& opts) {
  if (opts.ignore_deprels) return {std::move(ctx.upos), {}, {}};
  if (opts.drop_punct_deps)
    std::erase_if(ctx.dep_deprels, [](const std::string& r) { return r == "punct" || r.starts_with("punct:"); });
  return ctx;
}

inline SyntacticContext extract_context(const Sentence& s, int token_id, const ContextOptions& opts) {
  return reduce_context(extract_context(s, token_id), opts);
}

/// Attestations of a lemma before and after its head.
struct HeadSideCounts {
  std::size_t before = 0;
  std::size_t after = 0;
};

struct CandidatePool {
  std::map<SyntacticContext, std::map<std::string, std::size_t>> contexts;
  /// Keyed by (UPOS, lowercased lemma); only tokens with a non-root head.
  std::map<std::pair<std::string, std::string>, HeadSideCounts> head_sides;
  ContextOptions options;
  std::string provenance;

  bool empty() const { return contexts.empty(); }

  std::size_t attestations() const {
    std::size_t n = 0;
    for (const auto& [ctx, lemmas] : contexts)
      for (const auto& [lemma, count] : lemmas) n += count;
    return n;
  }

  HeadSideCounts head_side(std::string_view upos, std::string_view lemma) const {
    auto it = head_sides.find({std::string(upos), utf8::lower(lemma)});
    return it == head_sides.end() ? HeadSideCounts{} : it->second;
  }

  /// Adds the counts of `other` (built with the same options).
  void merge(const CandidatePool& other) {
    if (!(other.options == options)) throw std::invalid_argument("cannot merge pools built with different options");
    for (const auto& [ctx, lemmas] : other.contexts)
      for (const auto& [lemma, count] : lemmas) contexts[ctx][lemma] += count;
    for (const auto& [key, sides] : other.head_sides) {
      auto& mine = head_sides[key];
      mine.before += sides.before;
      mine.after += sides.after;
    }
  }
};

inline void add_sentence(CandidatePool& pool, const Sentence& s, const std::set<std::string>& content_upos) {
  for (const auto& t : s.tokens) {
    if (!content_upos.contains(t.upos)) continue;
    const std::string lemma = utf8::lower(t.lemma);
    pool.contexts[extract_context(s, t.id, pool.options)][lemma] += 1;
    if (t.head != 0) {
      auto& sides = pool.head_sides[{t.upos, lemma}];
      (t.id < t.head ? sides.before : sides.after) += 1;
    }
  }
}

inline CandidatePool build_pools(const Treebank& tb, const std::set<std::string>& content_upos = default_content_upos(),
                                 const ContextOptions& opts = {}) {
  CandidatePool pool;
  pool.options = opts;
  pool.provenance = tb.source_path;
  for (const auto& s : tb.sentences) add_sentence(pool, s, content_upos);
  return pool;
}

/// Lemmas attested under exactly `ctx`, in lexicographic order. `exclude` is
/// removed unless it is the only lemma.
inline std::vector<std::string> candidates(const CandidatePool& pool, const SyntacticContext& ctx,
                                           std::string_view exclude) {
  std::vector<std::string> out;
  auto it = pool.contexts.find(ctx);
  if (it == pool.contexts.end()) return out;
  const std::string ex = utf8::lower(exclude);
  for (const auto& [lemma, count] : it->second)
    if (lemma != ex) out.push_back(lemma);
  if (out.empty() && it->second.contains(ex)) out.push_back(ex);
  return out;
}

// Cache format: a header line, then `context-key<TAB>lemma<TAB>count` rows
// sorted by key and lemma, then `@side<TAB>UPOS<TAB>lemma<TAB>before<TAB>after`.

inline void dump_pool(const CandidatePool& pool, std::ostream& out) {
  out << "#spud-pool\tv1\tignore_deprels=" << pool.options.ignore_deprels
      << "\tdrop_punct_deps=" << pool.options.drop_punct_deps << "\tsource=" << pool.provenance << '\n';
  std::vector<std::pair<std::string, const std::map<std::string, std::size_t>*>> rows;
  rows.reserve(pool.contexts.size());
  for (const auto& [ctx, lemmas] : pool.contexts) rows.emplace_back(ctx.key(), &lemmas);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, lemmas] : rows)
    for (const auto& [lemma, count] : *lemmas) out << key << '\t' << lemma << '\t' << count << '\n';
  for (const auto& [k, sides] : pool.head_sides)
    out << "@side\t" << k.first << '\t' << k.second << '\t' << sides.before << '\t' << sides.after << '\n';
}

inline CandidatePool load_pool(std::istream& in) {
  CandidatePool pool;
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#spud-pool\tv1"))
    throw std::runtime_error("not a pool cache (missing header)");
  for (auto col : detail::split_tabs(line)) {
    if (col == "ignore_deprels=1") pool.options.ignore_deprels = true;
    if (col == "drop_punct_deps=1") pool.options.drop_punct_deps = true;
    if (col.starts_with("source=")) pool.provenance = std::string(col.substr(7));
  }
  std::size_t line_no = 1;
  auto count_of = [&](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw std::runtime_error("pool cache line " + std::to_string(line_no) + ": bad count");
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = detail::split_tabs(line);
    if (cols[0] == "@side") {
      if (cols.size() != 5) throw std::runtime_error("pool cache line " + std::to_string(line_no) + ": bad side row");
      pool.head_sides[{std::string(cols[1]), std::string(cols[2])}] = {count_of(cols[3]), count_of(cols[4])};
      continue;
    }
    if (cols.size() != 3) throw std::runtime_error("pool cache line " + std::to_string(line_no) + ": expected 3 columns");
    const std::size_t c = count_of(cols[2]);
    if (c == 0) throw std::runtime_error("pool cache line " + std::to_string(line_no) + ": zero count");
    pool.contexts[SyntacticContext::from_key(cols[0])][std::string(cols[1])] += c;
  }
  return pool;
}

}  // namespace spud
