#pragma once

// Language-specific adjustments around content-word replacement.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spud/conllu.hpp"
#include "spud/context.hpp"
#include "spud/lexicon.hpp"
#include "spud/utf8.hpp"

namespace spud {

enum class Language { ar, de, en, fr, ru };

inline std::optional<Language> parse_language(std::string_view code) {
  if (code == "ar") return Language::ar;
  if (code == "de") return Language::de;
  if (code == "en") return Language::en;
  if (code == "fr") return Language::fr;
  if (code == "ru") return Language::ru;
  return std::nullopt;
}

inline std::string_view language_code(Language lang) {
  switch (lang) {
    case Language::ar: return "ar";
    case Language::de: return "de";
    case Language::en: return "en";
    case Language::fr: return "fr";
    case Language::ru: return "ru";
  }
  return "";
}

inline bool latin_script(Language lang) {
  return lang == Language::de || lang == Language::en || lang == Language::fr;
}

// ---- Arabic ---------------------------------------------------------------

inline bool is_arabic_diacritic(char32_t c) { return (c >= 0x064B && c <= 0x0652) || c == 0x0670; }

inline std::string strip_arabic_diacritics(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) {
    const char32_t c = utf8::next(s, pos);
    if (!is_arabic_diacritic(c)) utf8::append(out, c);
  }
  return out;
}

/// Removes diacritics from FORM, LEMMA and MWT surfaces. Forms made entirely of
/// diacritics are left untouched.
inline void strip_arabic_diacritics(Treebank& tb) {
  auto strip = [](std::string& s) {
    std::string t = strip_arabic_diacritics(s);
    if (!t.empty()) s = std::move(t);
  };
  for (auto& sent : tb.sentences) {
    for (auto& t : sent.tokens) {
      strip(t.form);
      strip(t.lemma);
    }
    for (auto& r : sent.mwt) strip(r.form);
  }
}

// ---- German ---------------------------------------------------------------

/// The inflectional ending (-e, -em, -en, -er, -es) of a German adjective form.
inline std::optional<std::string_view> german_adjective_ending(std::string_view form) {
  static constexpr std::array<std::string_view, 5> endings = {"em", "en", "er", "es", "e"};
  for (auto e : endings)
    if (form.size() > e.size() && utf8::ends_with(form, e)) return e;
  return std::nullopt;
}

/// A replacement for an adjective with one of the tracked endings must share it.
inline bool german_ending_compatible(std::string_view original, std::string_view replacement) {
  auto want = german_adjective_ending(original);
  if (!want) return true;
  auto got = german_adjective_ending(replacement);
  return got && *got == *want;
}

// ---- French ---------------------------------------------------------------

/// Whether `lemma` is attested on the same side of its head as `t`.
inline bool french_adjective_position_ok(const Token& t, std::string_view lemma, const CandidatePool& pool) {
  if (t.upos != "ADJ" || t.head == 0) return true;
  const HeadSideCounts sides = pool.head_side("ADJ", lemma);
  return t.id < t.head ? sides.before > 0 : sides.after > 0;
}

// ---- Capitalization -------------------------------------------------------

/// Capitalizes `replacement` when `original` starts with a capital letter.
inline std::string match_capitalization(std::string_view original, std::string_view replacement) {
  if (utf8::starts_upper(original)) return utf8::capitalize_first(replacement);
  return std::string(replacement);
}

// ---- MISC helpers ---------------------------------------------------------

inline void misc_set(Token& t, std::string_view item, bool present) {
  std::vector<std::string> items;
  if (t.misc) {
    std::string_view m = *t.misc;
    std::size_t start = 0;
    while (start <= m.size()) {
      std::size_t bar = m.find('|', start);
      if (bar == std::string_view::npos) bar = m.size();
      if (m.substr(start, bar - start) != item) items.emplace_back(m.substr(start, bar - start));
      start = bar + 1;
    }
  }
  if (present) items.emplace_back(item);
  if (items.empty()) {
    t.misc.reset();
    return;
  }
  std::string out;
  for (const auto& i : items) {
    if (!out.empty()) out += '|';
    out += i;
  }
  t.misc = std::move(out);
}

inline PhonologyHint hint_for(const PhonologyHints& hints, std::string_view form) {
  if (auto h = hints.get(form)) return *h;
  return hint_from_spelling(form);
}

// ---- English articles -----------------------------------------------------

/// Switches a/an when the first sound of the following word changed between
/// `old_next` and `new_next`. Returns true if `article` was modified.
inline bool adjust_english_article(Token& article, std::string_view old_next, std::string_view new_next,
                                   const PhonologyHints& hints) {
  const std::string low = utf8::lower(article.form);
  if (low != "a" && low != "an") return false;
  const bool was_vowel = hint_for(hints, old_next).vowel_initial;
  const bool is_vowel = hint_for(hints, new_next).vowel_initial;
  if (was_vowel == is_vowel) return false;
  const bool upper = utf8::starts_upper(article.form);
  std::string repl = low == "a" ? "an" : "a";
  article.form = upper ? utf8::capitalize_first(repl) : repl;
  return true;
}

// ---- French elision -------------------------------------------------------

/// Alternates le/la/de with l'/d' according to the elidability of `next_form`.
/// `gender_hint` is used to restore le/la from l'. Returns true if modified.
inline bool adjust_french_elision(Token& article, std::string_view next_form, std::string_view gender_hint,
                                  const PhonologyHints& hints) {
  std::string low = utf8::lower(article.form);
  if (utf8::ends_with(low, "\xE2\x80\x99")) low = low.substr(0, low.size() - 3) + "'";
  const bool elidable = hint_for(hints, next_form).fr_elidable;
  const bool upper = utf8::starts_upper(article.form);
  std::string repl;
  if (elidable && (low == "le" || low == "la")) {
    repl = "l'";
  } else if (elidable && low == "de") {
    repl = "d'";
  } else if (!elidable && low == "l'") {
    auto g = article.feats.find("Gender");
    std::string_view gender = g != article.feats.end() ? std::string_view(g->second) : gender_hint;
    repl = gender == "Fem" ? "la" : "le";
  } else if (!elidable && low == "d'") {
    repl = "de";
  } else {
    return false;
  }
  article.form = upper ? utf8::capitalize_first(repl) : repl;
  misc_set(article, "SpaceAfter=No", repl.back() == '\'');
  return true;
}

}  // namespace spud
