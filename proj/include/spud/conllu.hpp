#pragma once

// CoNLL-U v2 reading and writing.
//
// Parsing keeps everything needed for a byte-exact round trip of well-formed
// files: raw comment lines, multiword-token range lines, empty-node lines and
// the verbatim DEPS/MISC columns. Only integer-id lines become Tokens.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "spud/utf8.hpp"

namespace spud {

/// Case-insensitive ordering of feature names; ties fall back to a byte compare
/// so that the order is total.
struct FeatNameLess {
  bool operator()(const std::string& a, const std::string& b) const {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto ca = static_cast<unsigned char>(a[i]);
      const auto cb = static_cast<unsigned char>(b[i]);
      const int la = (ca >= 'A' && ca <= 'Z') ? ca + 32 : ca;
      const int lb = (cb >= 'A' && cb <= 'Z') ? cb + 32 : cb;
      if (la != lb) return la < lb;
    }
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

using Feats = std::map<std::string, std::string, FeatNameLess>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string sent_id, std::size_t line)
      : std::runtime_error(format(what, sent_id, line)), sent_id_(std::move(sent_id)), line_(line) {}

  const std::string& sent_id() const { return sent_id_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& sent_id, std::size_t line) {
    std::string msg = "line " + std::to_string(line);
    if (!sent_id.empty()) msg += " (sentence " + sent_id + ")";
    return msg + ": " + what;
  }

  std::string sent_id_;
  std::size_t line_;
};

/// Parses a FEATS column. "_" and "" give an empty mapping.
inline Feats parse_feats(std::string_view text) {
  Feats feats;
  if (text.empty() || text == "_") return feats;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    if (bar == std::string_view::npos) bar = text.size();
    std::string_view item = text.substr(start, bar - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size())
      throw std::invalid_argument("malformed feature '" + std::string(item) + "'");
    feats.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    start = bar + 1;
  }
  return feats;
}

inline std::string format_feats(const Feats& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (const auto& [name, value] : feats) {
    if (!out.empty()) out += '|';
    out += name;
    out += '=';
    out += value;
  }
  return out;
}

/// True when every name=value pair of `request` occurs in `entry`.
inline bool feats_superset(const Feats& entry, const Feats& request) {
  for (const auto& [name, value] : request) {
    auto it = entry.find(name);
    if (it == entry.end() || it->second != value) return false;
  }
  return true;
}

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::optional<std::string> xpos;
  Feats feats;
  int head = 0;
  std::string deprel;
  std::optional<std::string> deps;
  std::optional<std::string> misc;

  bool has_misc(std::string_view item) const {
    if (!misc) return false;
    std::string_view m = *misc;
    std::size_t start = 0;
    while (start <= m.size()) {
      std::size_t bar = m.find('|', start);
      if (bar == std::string_view::npos) bar = m.size();
      if (m.substr(start, bar - start) == item) return true;
      start = bar + 1;
    }
    return false;
  }
};

struct MwtRange {
  int first = 0;
  int last = 0;
  std::string form;
  std::optional<std::string> misc;
  /// Columns 3-9 verbatim (normally all "_").
  std::string middle = "_\t_\t_\t_\t_\t_\t_";
};

/// Empty node line ("5.1") kept opaque; `after` is the integer id it follows.
struct EmptyNode {
  int after = 0;
  std::string line;
};

struct Sentence {
  std::string sent_id;
  std::optional<std::string> text;
  std::vector<std::string> comments;
  std::vector<Token> tokens;
  std::vector<MwtRange> mwt;
  std::vector<EmptyNode> empty_nodes;

  std::size_t size() const { return tokens.size(); }
  const Token& token(int id) const { return tokens.at(static_cast<std::size_t>(id - 1)); }
  Token& token(int id) { return tokens.at(static_cast<std::size_t>(id - 1)); }

  /// The range covering token `id`, if any.
  const MwtRange* range_of(int id) const {
    for (const auto& r : mwt)
      if (id >= r.first && id <= r.last) return &r;
    return nullptr;
  }
};

struct Treebank {
  std::vector<Sentence> sentences;
  std::string source_path;

  const Sentence* find(std::string_view sent_id) const {
    for (const auto& s : sentences)
      if (s.sent_id == sent_id) return &s;
    return nullptr;
  }
};

/// Checks that heads (1-based, 0 = root) form a single rooted tree.
/// Returns a description of the first violation, or nullopt.
inline std::optional<std::string> tree_violation(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int h = heads[static_cast<std::size_t>(i)];
    if (h < 0 || h > n) return "head " + std::to_string(h) + " of token " + std::to_string(i + 1) + " out of range";
    if (h == i + 1) return "token " + std::to_string(i + 1) + " is its own head";
    if (h == 0) ++roots;
  }
  if (n > 0 && roots != 1) return "expected exactly one root, found " + std::to_string(roots);
  // 0 = unvisited, 1 = on the current path, 2 = known to reach the root.
  std::vector<char> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = heads[static_cast<std::size_t>(cur - 1)];
    }
    if (state[static_cast<std::size_t>(cur)] == 1) return "cycle through token " + std::to_string(cur);
    for (int v : path) state[static_cast<std::size_t>(v)] = 2;
  }
  return std::nullopt;
}

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

inline std::optional<int> to_int(std::string_view s) {
  if (s.empty() || (s.size() > 1 && s[0] == '0')) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<std::string> opt_col(std::string_view s) {
  if (s == "_") return std::nullopt;
  return std::string(s);
}

inline std::optional<std::string_view> comment_value(std::string_view line, std::string_view key) {
  // "# key = value"
  std::string_view rest = line.substr(1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (rest.substr(0, key.size()) != key) return std::nullopt;
  rest.remove_prefix(key.size());
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (rest.empty() || rest.front() != '=') return std::nullopt;
  rest.remove_prefix(1);
  if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return rest;
}

class SentenceBuilder {
 public:
  void comment(std::string_view line) {
    if (auto id = comment_value(line, "sent_id")) sent.sent_id = std::string(*id);
    if (auto text = comment_value(line, "text")) sent.text = std::string(*text);
    sent.comments.emplace_back(line);
  }

  void word_line(std::string_view line, std::size_t line_no) {
    if (first_line == 0) first_line = line_no;
    auto cols = split_tabs(line);
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()), sent.sent_id,
                       line_no);
    std::string_view id = cols[0];
    if (id.find('.') != std::string_view::npos) {
      sent.empty_nodes.push_back({static_cast<int>(sent.tokens.size()), std::string(line)});
      return;
    }
    if (auto dash = id.find('-'); dash != std::string_view::npos) {
      auto first = to_int(id.substr(0, dash));
      auto last = to_int(id.substr(dash + 1));
      if (!first || !last || *first > *last || *first < 1)
        throw ParseError("malformed range id '" + std::string(id) + "'", sent.sent_id, line_no);
      if (*first != static_cast<int>(sent.tokens.size()) + 1)
        throw ParseError("range " + std::string(id) + " does not start at the next token", sent.sent_id, line_no);
      for (const auto& r : sent.mwt)
        if (*first <= r.last)
          throw ParseError("overlapping range " + std::string(id), sent.sent_id, line_no);
      MwtRange r;
      r.first = *first;
      r.last = *last;
      r.form = std::string(cols[1]);
      r.middle.clear();
      for (std::size_t c = 2; c <= 8; ++c) {
        if (c > 2) r.middle += '\t';
        r.middle += cols[c];
      }
      r.misc = opt_col(cols[9]);
      sent.mwt.push_back(std::move(r));
      return;
    }
    auto tid = to_int(id);
    if (!tid || *tid < 1) throw ParseError("malformed token id '" + std::string(id) + "'", sent.sent_id, line_no);
    const int expected = static_cast<int>(sent.tokens.size()) + 1;
    if (*tid < expected)
      throw ParseError("duplicate token id " + std::string(id), sent.sent_id, line_no);
    if (*tid > expected)
      throw ParseError("token id " + std::string(id) + " skips " + std::to_string(expected), sent.sent_id, line_no);
    Token t;
    t.id = *tid;
    t.form = std::string(cols[1]);
    t.lemma = std::string(cols[2]);
    t.upos = std::string(cols[3]);
    t.xpos = opt_col(cols[4]);
    try {
      t.feats = parse_feats(cols[5]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), sent.sent_id, line_no);
    }
    auto head = to_int(cols[6]);
    if (cols[6] == "0") head = 0;
    if (!head) throw ParseError("malformed head '" + std::string(cols[6]) + "'", sent.sent_id, line_no);
    t.head = *head;
    t.deprel = std::string(cols[7]);
    t.deps = opt_col(cols[8]);
    t.misc = opt_col(cols[9]);
    sent.tokens.push_back(std::move(t));
  }

  Sentence finish(std::size_t line_no) {
    if (first_line == 0) first_line = line_no;
    for (const auto& r : sent.mwt)
      if (r.last > static_cast<int>(sent.tokens.size()))
        throw ParseError("range " + std::to_string(r.first) + "-" + std::to_string(r.last) + " exceeds sentence",
                         sent.sent_id, first_line);
    std::vector<int> heads;
    heads.reserve(sent.tokens.size());
    for (const auto& t : sent.tokens) heads.push_back(t.head);
    if (auto err = tree_violation(heads)) throw ParseError("invalid tree: " + *err, sent.sent_id, first_line);
    return std::move(sent);
  }

  bool empty() const { return sent.comments.empty() && sent.tokens.empty() && sent.mwt.empty(); }

 private:
  Sentence sent;
  std::size_t first_line = 0;
};

}  // namespace detail

inline Treebank parse_conllu(std::string_view text, std::string source_path = {}) {
  Treebank tb;
  tb.source_path = std::move(source_path);
  detail::SentenceBuilder builder;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t start = 0;

  auto flush = [&](std::size_t at_line) {
    if (builder.empty()) return;
    Sentence s = builder.finish(at_line);
    if (s.tokens.empty()) throw ParseError("sentence without tokens", s.sent_id, at_line);
    if (s.sent_id.empty()) s.sent_id = "s" + std::to_string(tb.sentences.size() + 1);
    if (!seen_ids.insert(s.sent_id).second) throw ParseError("duplicate sent_id", s.sent_id, at_line);
    tb.sentences.push_back(std::move(s));
    builder = detail::SentenceBuilder{};
  };

  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    ++line_no;
    if (line.empty()) {
      flush(line_no);
    } else if (line.front() == '#') {
      builder.comment(line);
    } else {
      builder.word_line(line, line_no);
    }
    start = nl + 1;
  }
  flush(line_no + 1);
  return tb;
}

inline void serialize_sentence(const Sentence& s, std::string& out) {
  for (const auto& c : s.comments) {
    out += c;
    out += '\n';
  }
  auto empties_after = [&](int id) {
    for (const auto& e : s.empty_nodes)
      if (e.after == id) {
        out += e.line;
        out += '\n';
      }
  };
  empties_after(0);
  for (const auto& t : s.tokens) {
    for (const auto& r : s.mwt)
      if (r.first == t.id) {
        out += std::to_string(r.first) + "-" + std::to_string(r.last) + '\t' + r.form + '\t' + r.middle + '\t' +
               r.misc.value_or("_") + '\n';
      }
    out += std::to_string(t.id);
    out += '\t' + t.form + '\t' + t.lemma + '\t' + t.upos + '\t' + t.xpos.value_or("_") + '\t' + format_feats(t.feats) +
           '\t' + std::to_string(t.head) + '\t' + t.deprel + '\t' + t.deps.value_or("_") + '\t' +
           t.misc.value_or("_") + '\n';
    empties_after(t.id);
  }
  out += '\n';
}

inline std::string serialize(const Treebank& tb) {
  std::string out;
  for (const auto& s : tb.sentences) serialize_sentence(s, out);
  return out;
}

/// Number of edges on the undirected path between every pair of tokens.
/// Index i corresponds to token id i+1.
inline std::vector<std::vector<int>> path_distance_matrix(const Sentence& s) {
  const std::size_t n = s.tokens.size();
  std::vector<std::vector<int>> adj(n);
  for (const auto& t : s.tokens) {
    if (t.head == 0) continue;
    adj[static_cast<std::size_t>(t.id - 1)].push_back(t.head - 1);
    adj[static_cast<std::size_t>(t.head - 1)].push_back(t.id - 1);
  }
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (std::size_t src = 0; src < n; ++src) {
    auto& row = dist[src];
    std::deque<int> queue{static_cast<int>(src)};
    row[src] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (row[static_cast<std::size_t>(v)] >= 0) continue;
        row[static_cast<std::size_t>(v)] = row[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

/// Keeps sentences with at least `min_words` syntactic words.
inline Treebank filter_short(const Treebank& tb, std::size_t min_words) {
  Treebank out;
  out.source_path = tb.source_path;
  for (const auto& s : tb.sentences)
    if (s.tokens.size() >= min_words) out.sentences.push_back(s);
  return out;
}

/// Rebuilds the sentence surface from forms, MWT surfaces and SpaceAfter=No.
inline std::string detokenize(const Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.tokens.size();) {
    const Token& t = s.tokens[i];
    const MwtRange* r = nullptr;
    for (const auto& cand : s.mwt)
      if (cand.first == t.id) r = &cand;
    bool no_space;
    if (r != nullptr) {
      out += r->form;
      Token tmp;
      tmp.misc = r->misc;
      no_space = tmp.has_misc("SpaceAfter=No");
      i = static_cast<std::size_t>(r->last);
    } else {
      out += t.form;
      no_space = t.has_misc("SpaceAfter=No");
      ++i;
    }
    if (!no_space && i < s.tokens.size()) out += ' ';
  }
  return out;
}

}  // namespace spud
