#pragma once

// Nonce treebank generation: in-context content-word replacement followed by
// language-specific surface adjustments.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "spud/conllu.hpp"
#include "spud/context.hpp"
#include "spud/lexicon.hpp"
#include "spud/random.hpp"
#include "spud/rules.hpp"
#include "spud/utf8.hpp"

namespace spud {

struct GenOptions {
  std::uint64_t seed = 0;
  Language language = Language::en;
  bool ignore_deprels = false;
  bool drop_punct_deps = false;
  unsigned n_variants = 1;
  std::set<std::string> content_upos = default_content_upos();
  /// Rule-filtered draws per token before the original is kept.
  unsigned max_draws = 16;
  /// Worker threads; output does not depend on it.
  unsigned jobs = 1;

  ContextOptions context_options() const { return {ignore_deprels, drop_punct_deps}; }
};

enum class FailureReason { no_candidate, no_inflection, rule_filtered, in_mwt, not_content };

inline std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::no_candidate: return "no_candidate";
    case FailureReason::no_inflection: return "no_inflection";
    case FailureReason::rule_filtered: return "rule_filtered";
    case FailureReason::in_mwt: return "in_mwt";
    case FailureReason::not_content: return "not_content";
  }
  return "";
}

inline std::optional<FailureReason> parse_failure_reason(std::string_view s) {
  for (auto r : {FailureReason::no_candidate, FailureReason::no_inflection, FailureReason::rule_filtered,
                 FailureReason::in_mwt, FailureReason::not_content})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

/// One row per input token. `replaced` is false exactly when `failure_reason`
/// is set, and then `new_form == original_form`. Surface changes made to
/// function words by the article rules are flagged in `rule_adjusted` and do
/// not count as replacements.
struct ReplacementRecord {
  unsigned variant = 0;
  std::string sent_id;
  int token_id = 0;
  std::string original_lemma;
  std::string original_form;
  std::string new_lemma;
  std::string new_form;
  std::string upos;
  bool replaced = false;
  std::optional<FailureReason> failure_reason;
  bool rule_adjusted = false;
};

struct UposRatio {
  std::size_t total = 0;
  std::size_t replaced = 0;
  double ratio() const { return total == 0 ? 0.0 : static_cast<double>(replaced) / static_cast<double>(total); }
};

struct GenerationReport {
  std::map<std::string, UposRatio> per_upos;
  UposRatio overall;
  std::map<FailureReason, std::size_t> failures;
};

inline GenerationReport replacement_stats(const std::vector<ReplacementRecord>& records) {
  GenerationReport rep;
  for (const auto& r : records) {
    auto& u = rep.per_upos[r.upos];
    ++u.total;
    ++rep.overall.total;
    if (r.replaced) {
      ++u.replaced;
      ++rep.overall.replaced;
    }
    if (r.failure_reason) ++rep.failures[*r.failure_reason];
  }
  return rep;
}

inline nlohmann::json to_json(const GenerationReport& rep) {
  nlohmann::json j;
  j["per_upos"] = nlohmann::json::object();
  for (const auto& [upos, u] : rep.per_upos)
    j["per_upos"][upos] = {{"ratio", u.ratio()}, {"replaced", u.replaced}, {"total", u.total}};
  j["total"] = {{"ratio", rep.overall.ratio()}, {"replaced", rep.overall.replaced}, {"total", rep.overall.total}};
  j["failures"] = nlohmann::json::object();
  for (const auto& [reason, n] : rep.failures) j["failures"][std::string(to_string(reason))] = n;
  return j;
}

// ---- deterministic per-token streams ---------------------------------------

inline std::uint64_t token_stream_seed(std::uint64_t seed, unsigned variant, std::string_view sent_id, int token_id) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ static_cast<std::uint64_t>(variant));
  h = mix64(h ^ fnv1a64(sent_id));
  h = mix64(h ^ static_cast<std::uint64_t>(token_id));
  return h;
}

// ---- generation ------------------------------------------------------------

namespace detail {

enum class FormStatus { ok, no_inflection, rule_rejected };

/// Realizes `lemma` with the FEATS of `t`; the first form passing the
/// language's form-level rules wins. `out_lemma` gets the lexicon's spelling.
inline FormStatus pick_form(const Token& t, const std::string& lemma, const Lexicon& lex, Language lang,
                            std::string& out_form, std::string& out_lemma) {
  auto entries = lex.matching(lemma, t.upos, t.feats);
  if (entries.empty()) return FormStatus::no_inflection;
  for (const auto* e : entries) {
    std::string form = latin_script(lang) ? match_capitalization(t.form, e->form) : e->form;
    if (lang == Language::ar) form = strip_arabic_diacritics(form);
    if (lang == Language::de && t.upos == "ADJ" && !german_ending_compatible(t.form, form)) continue;
    out_form = std::move(form);
    out_lemma = e->lemma;
    return FormStatus::ok;
  }
  return FormStatus::rule_rejected;
}

}  // namespace detail

/// Post-replacement surface rules: capitalization for Latin-script languages,
/// English a/an, French le/la/de versus l'/d'. `records` is indexed by token
/// position and updated in place.
inline void apply_language_rules(Sentence& s, std::vector<ReplacementRecord>& records, Language lang,
                                 const PhonologyHints& hints) {
  if (latin_script(lang)) {
    for (auto& r : records) {
      if (!r.replaced) continue;
      Token& t = s.token(r.token_id);
      t.form = match_capitalization(r.original_form, t.form);
      r.new_form = t.form;
    }
  }
  if (lang != Language::en && lang != Language::fr) return;
  for (std::size_t i = 0; i + 1 < s.tokens.size(); ++i) {
    Token& art = s.tokens[i];
    const auto& next = records[i + 1];
    if (!next.replaced || s.range_of(art.id) != nullptr) continue;
    bool changed = false;
    if (lang == Language::en && art.upos == "DET") {
      changed = adjust_english_article(art, next.original_form, next.new_form, hints);
    } else if (lang == Language::fr && (art.upos == "DET" || art.upos == "ADP")) {
      auto g = s.tokens[i + 1].feats.find("Gender");
      std::string_view gender = g != s.tokens[i + 1].feats.end() ? std::string_view(g->second) : "";
      changed = adjust_french_elision(art, next.new_form, gender, hints);
    }
    if (changed) records[i].rule_adjusted = true;
  }
}

struct GenerationResult {
  Treebank treebank;
  std::vector<ReplacementRecord> records;
  GenerationReport report;
};

/// Replaces the content words of one sentence. `s` is modified in place.
inline std::vector<ReplacementRecord> generate_sentence(Sentence& s, const CandidatePool& pool, const Lexicon& lex,
                                                        const PhonologyHints& hints, const GenOptions& opts,
                                                        unsigned variant) {
  std::vector<ReplacementRecord> records;
  records.reserve(s.tokens.size());
  const Sentence original = s;
  for (auto& t : s.tokens) {
    ReplacementRecord rec;
    rec.variant = variant;
    rec.sent_id = s.sent_id;
    rec.token_id = t.id;
    rec.original_lemma = t.lemma;
    rec.original_form = t.form;
    rec.new_lemma = t.lemma;
    rec.new_form = t.form;
    rec.upos = t.upos;

    auto fail = [&](FailureReason why) {
      rec.failure_reason = why;
      records.push_back(rec);
    };
    if (!opts.content_upos.contains(t.upos)) {
      fail(FailureReason::not_content);
      continue;
    }
    if (original.range_of(t.id) != nullptr) {
      fail(FailureReason::in_mwt);
      continue;
    }
    std::vector<std::string> remaining = candidates(pool, extract_context(original, t.id, pool.options), t.lemma);
    if (remaining.empty()) {
      fail(FailureReason::no_candidate);
      continue;
    }
    std::mt19937_64 rng(token_stream_seed(opts.seed, variant, s.sent_id, t.id));
    bool rule_rejected = false;
    bool uninflectable = false;
    std::string new_form, new_lemma;
    for (unsigned draw = 0; draw < opts.max_draws && !remaining.empty(); ++draw) {
      const std::size_t k = uniform_index(rng, remaining.size());
      std::string lemma = remaining[k];
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
      if (opts.language == Language::fr && !french_adjective_position_ok(t, lemma, pool)) {
        rule_rejected = true;
        continue;
      }
      std::string form, lex_lemma;
      const auto status = detail::pick_form(t, lemma, lex, opts.language, form, lex_lemma);
      if (status == detail::FormStatus::no_inflection) {
        uninflectable = true;
        continue;
      }
      if (status == detail::FormStatus::rule_rejected) {
        rule_rejected = true;
        continue;
      }
      if (form == t.form) continue;  // same surface; draw another lemma
      new_form = std::move(form);
      new_lemma = std::move(lex_lemma);
      break;
    }
    if (new_form.empty()) {
      fail(rule_rejected   ? FailureReason::rule_filtered
           : uninflectable ? FailureReason::no_inflection
                           : FailureReason::no_candidate);
      continue;
    }
    t.form = new_form;
    t.lemma = new_lemma;
    rec.new_form = t.form;
    rec.new_lemma = new_lemma;
    rec.replaced = true;
    records.push_back(rec);
  }
  apply_language_rules(s, records, opts.language, hints);
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!records[i].replaced) records[i].new_form = records[i].original_form;

  if (s.text) {
    s.text = detokenize(s);
    for (auto& c : s.comments)
      if (detail::comment_value(c, "text")) c = "# text = " + *s.text;
  }
  return records;
}

/// Produces variant `variant` of the nonce treebank. The pool must have been
/// built with the same context options as `opts`; for Arabic, from
/// diacritic-stripped data.
inline GenerationResult generate(const Treebank& tb, const CandidatePool& pool, const Lexicon& lex,
                                 const PhonologyHints& hints, const GenOptions& opts, unsigned variant = 0) {
  if (!(pool.options == opts.context_options()))
    throw std::invalid_argument("candidate pool was built with different context options");
  GenerationResult result;
  result.treebank = tb;
  Lexicon stripped;
  const Lexicon* lexicon = &lex;
  if (opts.language == Language::ar) {
    strip_arabic_diacritics(result.treebank);
    stripped = lex.transformed([](std::string_view s) { return strip_arabic_diacritics(s); });
    lexicon = &stripped;
  }

  auto& sentences = result.treebank.sentences;
  std::vector<std::vector<ReplacementRecord>> per_sentence(sentences.size());
  const unsigned jobs = std::max(1U, std::min<unsigned>(opts.jobs, static_cast<unsigned>(sentences.size())));
  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < sentences.size(); i += jobs)
      per_sentence[i] = generate_sentence(sentences[i], pool, *lexicon, hints, opts, variant);
  };
  if (jobs <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
  }
  for (auto& recs : per_sentence)
    for (auto& r : recs) result.records.push_back(std::move(r));
  result.report = replacement_stats(result.records);
  return result;
}

// ---- records.tsv ----------------------------------------------------------

inline std::string records_header() {
  return "variant\tsent_id\ttoken_id\tupos\toriginal_form\tnew_form\toriginal_lemma\tnew_lemma\treplaced\tfailure_"
         "reason\trule_adjusted\n";
}

inline std::string format_record(const ReplacementRecord& r) {
  std::string out = std::to_string(r.variant) + '\t' + r.sent_id + '\t' + std::to_string(r.token_id) + '\t' + r.upos +
                    '\t' + r.original_form + '\t' + r.new_form + '\t' + r.original_lemma + '\t' + r.new_lemma + '\t' +
                    (r.replaced ? "1" : "0") + '\t' +
                    (r.failure_reason ? std::string(to_string(*r.failure_reason)) : std::string("_")) + '\t' +
                    (r.rule_adjusted ? "1" : "0") + '\n';
  return out;
}

inline std::vector<ReplacementRecord> parse_records(std::istream& in) {
  std::vector<ReplacementRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.starts_with("variant\t")) continue;
    auto cols = detail::split_tabs(line);
    if (cols.size() != 11) throw std::runtime_error("records line " + std::to_string(line_no) + ": expected 11 columns");
    ReplacementRecord r;
    r.variant = static_cast<unsigned>(std::stoul(std::string(cols[0])));
    r.sent_id = cols[1];
    r.token_id = std::stoi(std::string(cols[2]));
    r.upos = cols[3];
    r.original_form = cols[4];
    r.new_form = cols[5];
    r.original_lemma = cols[6];
    r.new_lemma = cols[7];
    r.replaced = cols[8] == "1";
    if (cols[9] != "_") {
      r.failure_reason = parse_failure_reason(cols[9]);
      if (!r.failure_reason)
        throw std::runtime_error("records line " + std::to_string(line_no) + ": unknown failure reason");
    }
    r.rule_adjusted = cols[10] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace spud
