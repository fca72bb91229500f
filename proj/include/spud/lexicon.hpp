#pragma once

// Morphological lexicon lookup and phonological hints.

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "spud/conllu.hpp"
#include "spud/utf8.hpp"

namespace spud {

struct LexEntry {
  std::string form;
  std::string lemma;
  std::string upos;
  Feats feats;
};

/// Entries grouped by (lowercased lemma, UPOS). Within a group entries are kept
/// sorted by (canonical FEATS string, form) and are unique on that pair.
class Lexicon {
 public:
  using Key = std::pair<std::string, std::string>;

  /// Returns false when an identical entry was already present.
  bool add(LexEntry entry) {
    if (entry.form.empty() || entry.lemma.empty()) throw std::invalid_argument("lexicon entry with empty form or lemma");
    auto& group = groups_[Key{utf8::lower(entry.lemma), entry.upos}];
    const std::string fs = format_feats(entry.feats);
    auto cmp = [](const Slot& a, const std::pair<std::string_view, std::string_view>& b) {
      return std::tie(a.feats_key, a.entry.form) < std::tie(b.first, b.second);
    };
    auto it = std::lower_bound(group.begin(), group.end(), std::pair<std::string_view, std::string_view>{fs, entry.form},
                               cmp);
    if (it != group.end() && it->feats_key == fs && it->entry.form == entry.form) return false;
    group.insert(it, Slot{fs, std::move(entry)});
    ++size_;
    return true;
  }

  /// Entries of (lemma, upos) whose FEATS contain `request`, in stable order.
  std::vector<const LexEntry*> matching(std::string_view lemma, std::string_view upos, const Feats& request) const {
    std::vector<const LexEntry*> out;
    auto it = groups_.find(Key{utf8::lower(lemma), std::string(upos)});
    if (it == groups_.end()) return out;
    for (const auto& slot : it->second)
      if (feats_superset(slot.entry.feats, request)) out.push_back(&slot.entry);
    return out;
  }

  std::vector<std::string> inflections(std::string_view lemma, std::string_view upos, const Feats& request) const {
    std::vector<std::string> forms;
    for (const auto* e : matching(lemma, upos, request)) forms.push_back(e->form);
    return forms;
  }

  std::vector<LexEntry> entries(std::string_view lemma, std::string_view upos) const {
    std::vector<LexEntry> out;
    auto it = groups_.find(Key{utf8::lower(lemma), std::string(upos)});
    if (it != groups_.end())
      for (const auto& slot : it->second) out.push_back(slot.entry);
    return out;
  }

  void merge(const Lexicon& other) {
    for (const auto& [key, group] : other.groups_)
      for (const auto& slot : group) add(slot.entry);
  }

  /// Applies `fn` to every form and lemma (e.g. diacritic stripping).
  Lexicon transformed(const std::function<std::string(std::string_view)>& fn) const {
    Lexicon out;
    out.warnings = warnings;
    for (const auto& [key, group] : groups_)
      for (const auto& slot : group) {
        LexEntry e = slot.entry;
        e.form = fn(e.form);
        e.lemma = fn(e.lemma);
        if (!e.form.empty() && !e.lemma.empty()) out.add(std::move(e));
      }
    return out;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Rows skipped while loading.
  std::size_t warnings = 0;

 private:
  struct Slot {
    std::string feats_key;
    LexEntry entry;
  };
  std::map<Key, std::vector<Slot>> groups_;
  std::size_t size_ = 0;
};

/// First form whose FEATS are a superset of the request.
inline std::optional<std::string> inflect(const Lexicon& lex, std::string_view lemma, std::string_view upos,
                                          const Feats& feats) {
  auto forms = lex.inflections(lemma, upos, feats);
  if (forms.empty()) return std::nullopt;
  return forms.front();
}

struct PhonologyHint {
  bool vowel_initial = false;
  bool fr_elidable = false;
  bool fr_aspirated_h = false;
};

class PhonologyHints {
 public:
  void set(std::string_view form, PhonologyHint hint) {
    if (hint.fr_aspirated_h) hint.fr_elidable = false;
    hints_[utf8::lower(form)] = hint;
  }

  /// Does not overwrite an existing hint.
  void set_default(std::string_view form, PhonologyHint hint) {
    if (hint.fr_aspirated_h) hint.fr_elidable = false;
    hints_.emplace(utf8::lower(form), hint);
  }

  std::optional<PhonologyHint> get(std::string_view form) const {
    auto it = hints_.find(utf8::lower(form));
    if (it == hints_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return hints_.size(); }

 private:
  std::unordered_map<std::string, PhonologyHint> hints_;
};

namespace detail {

inline bool is_ipa_vowel(char32_t c) {
  static const std::u32string vowels =
      U"aeiouyɑɐɒæɛɜəɪɔʊʌøœɶɨʉɯɤɵɘɞɚɝɑ̃ãẽĩõũ";
  return vowels.find(c) != std::u32string::npos;
}

/// First phonetic segment of an IPA transcription, skipping delimiters and
/// stress/syllable marks.
inline char32_t ipa_first_segment(std::string_view ipa) {
  static const std::u32string skip = U"/[]\\ˈˌ.()‿-ːˑ ";
  for (std::size_t pos = 0; pos < ipa.size();) {
    char32_t c = utf8::next(ipa, pos);
    if (skip.find(c) == std::u32string::npos) return c;
  }
  return 0;
}

inline bool ipa_marks_aspirated_h(std::string_view ipa) {
  char32_t c = ipa_first_segment(ipa);
  return c == U'\'' || c == U'ʔ' || c == U'’';
}

}  // namespace detail

/// Hint derived from an IPA transcription.
inline PhonologyHint hint_from_ipa(std::string_view ipa, bool aspirated_marker = false) {
  PhonologyHint h;
  const char32_t first = detail::ipa_first_segment(ipa);
  h.fr_aspirated_h = aspirated_marker || detail::ipa_marks_aspirated_h(ipa);
  h.vowel_initial = !h.fr_aspirated_h && detail::is_ipa_vowel(first);
  // French elides before vowels and the glides /w/ and /ɥ/ (l'oiseau, l'huile).
  h.fr_elidable = !h.fr_aspirated_h && (h.vowel_initial || first == U'w' || first == U'ɥ');
  return h;
}

/// Orthographic fallback for words without a dictionary pronunciation.
inline PhonologyHint hint_from_spelling(std::string_view form) {
  static const std::u32string vowels = U"aeiouyàâäéèêëîïôöùûüœæ";
  PhonologyHint h;
  const char32_t first = utf8::to_lower(utf8::first(form));
  // 'y' counts as a consonant for both articles (a year, le yaourt).
  h.vowel_initial = first != U'y' && vowels.find(first) != std::u32string::npos;
  h.fr_elidable = h.vowel_initial || first == U'h';
  return h;
}

/// Reads the tab-separated `form lemma upos feats` projection of UDLexicons.
/// Rows with fewer than four columns are skipped and counted in `warnings`.
inline Lexicon load_udlexicon(std::istream& in, const std::optional<std::set<std::string>>& upos_filter = {}) {
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cols = detail::split_tabs(line);
    if (cols.size() < 4 || cols[0].empty() || cols[1].empty()) {
      ++lex.warnings;
      continue;
    }
    if (upos_filter && !upos_filter->contains(std::string(cols[2]))) continue;
    LexEntry e{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), {}};
    try {
      e.feats = parse_feats(cols[3]);
    } catch (const std::invalid_argument&) {
      ++lex.warnings;
      continue;
    }
    lex.add(std::move(e));
  }
  return lex;
}

inline Lexicon load_udlexicon(const std::string& path, const std::optional<std::set<std::string>>& upos_filter = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon " + path);
  return load_udlexicon(in, upos_filter);
}

namespace detail {

inline std::optional<std::string> wiktextract_upos(std::string_view pos) {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"noun", "NOUN"}, {"verb", "VERB"}, {"adj", "ADJ"}, {"adv", "ADV"}, {"name", "PROPN"}};
  auto it = table.find(pos);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

/// Maps wiktextract inflection tags onto UD features. Unknown tags are ignored.
inline Feats wiktextract_feats(const nlohmann::json& tags) {
  static const std::map<std::string, std::pair<std::string, std::string>, std::less<>> table = {
      {"singular", {"Number", "Sing"}},
      {"plural", {"Number", "Plur"}},
      {"masculine", {"Gender", "Masc"}},
      {"feminine", {"Gender", "Fem"}},
      {"neuter", {"Gender", "Neut"}},
      {"past", {"Tense", "Past"}},
      {"present", {"Tense", "Pres"}},
      {"future", {"Tense", "Fut"}},
      {"imperfect", {"Tense", "Imp"}},
      {"participle", {"VerbForm", "Part"}},
      {"infinitive", {"VerbForm", "Inf"}},
      {"gerund", {"VerbForm", "Ger"}},
      {"first-person", {"Person", "1"}},
      {"second-person", {"Person", "2"}},
      {"third-person", {"Person", "3"}},
      {"comparative", {"Degree", "Cmp"}},
      {"superlative", {"Degree", "Sup"}},
      {"nominative", {"Case", "Nom"}},
      {"accusative", {"Case", "Acc"}},
      {"dative", {"Case", "Dat"}},
      {"genitive", {"Case", "Gen"}},
      {"indicative", {"Mood", "Ind"}},
      {"subjunctive", {"Mood", "Sub"}},
      {"imperative", {"Mood", "Imp"}},
  };
  Feats feats;
  if (!tags.is_array()) return feats;
  for (const auto& tag : tags) {
    if (!tag.is_string()) continue;
    auto it = table.find(tag.get<std::string>());
    if (it != table.end()) feats[it->second.first] = it->second.second;
  }
  return feats;
}

inline bool has_aspirated_tag(const nlohmann::json& obj) {
  if (!obj.is_object() || !obj.contains("tags") || !obj["tags"].is_array()) return false;
  for (const auto& tag : obj["tags"])
    if (tag.is_string() && (tag == "h-aspirated" || tag == "aspirated-h" || tag == "h-aspire")) return true;
  return false;
}

}  // namespace detail

struct WiktextractData {
  Lexicon lexicon;
  PhonologyHints hints;
};

/// Reads a line-delimited wiktextract dump. Records for other languages are
/// ignored; malformed lines are skipped and counted in `lexicon.warnings`.
///
/// Inflected forms without their own transcription inherit the headword's hint
/// when they share its first letter.
inline WiktextractData load_wiktextract(std::istream& in, std::string_view lang) {
  WiktextractData out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      ++out.lexicon.warnings;
      continue;
    }
    if (!rec.is_object() || !rec.contains("word") || !rec["word"].is_string()) {
      ++out.lexicon.warnings;
      continue;
    }
    if (rec.contains("lang_code") && rec["lang_code"].is_string() && rec["lang_code"].get<std::string>() != lang)
      continue;
    const std::string word = rec["word"].get<std::string>();
    if (word.empty()) continue;

    std::optional<PhonologyHint> head_hint;
    const bool record_aspirated = detail::has_aspirated_tag(rec);
    if (rec.contains("sounds") && rec["sounds"].is_array()) {
      for (const auto& snd : rec["sounds"]) {
        if (!snd.is_object() || !snd.contains("ipa") || !snd["ipa"].is_string()) continue;
        head_hint = hint_from_ipa(snd["ipa"].get<std::string>(), record_aspirated || detail::has_aspirated_tag(snd));
        break;
      }
    }
    if (!head_hint && record_aspirated) head_hint = PhonologyHint{false, false, true};
    if (head_hint) out.hints.set(word, *head_hint);

    auto upos = rec.contains("pos") && rec["pos"].is_string()
                    ? detail::wiktextract_upos(rec["pos"].get<std::string>())
                    : std::nullopt;
    if (upos) out.lexicon.add(LexEntry{word, word, *upos, detail::wiktextract_feats(rec.value("tags", nlohmann::json()))});

    if (!rec.contains("forms") || !rec["forms"].is_array()) continue;
    for (const auto& f : rec["forms"]) {
      if (!f.is_object() || !f.contains("form") || !f["form"].is_string()) continue;
      const std::string form = f["form"].get<std::string>();
      if (form.empty() || form == word) continue;
      if (f.contains("ipa") && f["ipa"].is_string()) {
        out.hints.set(form, hint_from_ipa(f["ipa"].get<std::string>(), detail::has_aspirated_tag(f)));
      } else if (head_hint && utf8::to_lower(utf8::first(form)) == utf8::to_lower(utf8::first(word))) {
        out.hints.set_default(form, *head_hint);
      }
      if (upos) out.lexicon.add(LexEntry{form, word, *upos, detail::wiktextract_feats(f.value("tags", nlohmann::json()))});
    }
  }
  return out;
}

inline WiktextractData load_wiktextract(const std::string& path, std::string_view lang) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open wiktextract dump " + path);
  return load_wiktextract(in, lang);
}

/// Lexicon of the (form, lemma, UPOS, FEATS) combinations attested in a treebank.
/// Sentence-initial capitals are undone when the lemma is lowercase.
inline Lexicon lexicon_from_treebank(const Treebank& tb) {
  Lexicon lex;
  for (const auto& s : tb.sentences)
    for (const auto& t : s.tokens) {
      if (t.form.empty() || t.lemma.empty() || t.lemma == "_") continue;
      std::string form = t.form;
      if (t.id == 1 && utf8::starts_upper(form) && !utf8::starts_upper(t.lemma)) {
        auto cps = utf8::decode(form);
        cps[0] = utf8::to_lower(cps[0]);
        form = utf8::encode(cps);
      }
      lex.add(LexEntry{std::move(form), t.lemma, t.upos, t.feats});
    }
  return lex;
}

}  // namespace spud
