#include <gtest/gtest.h>

#include <sstream>

#include "spud/generator.hpp"
#include "support.hpp"

using namespace spud;

namespace {

struct LangSetup {
  Language language;
  Treebank treebank;
  Lexicon lexicon;
  PhonologyHints hints;
  CandidatePool pool;
};

LangSetup setup(const std::string& code, const ContextOptions& copts = {}) {
  LangSetup s;
  s.language = *parse_language(code);
  s.treebank = parse_conllu(test::read_file(test::data_path("mini/" + code + ".conllu")), code + ".conllu");
  s.lexicon = load_udlexicon(test::data_path("mini/" + code + ".lexicon.tsv"));
  if (code == "en" || code == "fr")
    s.hints = load_wiktextract(test::data_path("mini/" + code + ".wiktextract.jsonl"), code).hints;
  Treebank for_pool = s.treebank;
  if (s.language == Language::ar) strip_arabic_diacritics(for_pool);
  s.pool = build_pools(for_pool, default_content_upos(), copts);
  return s;
}

GenerationResult run(const LangSetup& s, std::uint64_t seed, unsigned jobs = 1, unsigned variant = 0) {
  GenOptions opts;
  opts.language = s.language;
  opts.seed = seed;
  opts.jobs = jobs;
  opts.ignore_deprels = s.pool.options.ignore_deprels;
  opts.drop_punct_deps = s.pool.options.drop_punct_deps;
  return generate(s.treebank, s.pool, s.lexicon, s.hints, opts, variant);
}

std::string records_text(const std::vector<ReplacementRecord>& records) {
  std::string out = records_header();
  for (const auto& r : records) out += format_record(r);
  return out;
}

class PerLanguage : public ::testing::TestWithParam<std::string> {};

}  // namespace

TEST_P(PerLanguage, StructureIsPreserved) {
  const auto s = setup(GetParam());
  const auto res = run(s, 42);
  ASSERT_EQ(res.treebank.sentences.size(), s.treebank.sentences.size());
  for (std::size_t i = 0; i < s.treebank.sentences.size(); ++i) {
    const auto& a = s.treebank.sentences[i];
    const auto& b = res.treebank.sentences[i];
    EXPECT_EQ(a.sent_id, b.sent_id);
    ASSERT_EQ(a.tokens.size(), b.tokens.size());
    for (std::size_t k = 0; k < a.tokens.size(); ++k) {
      EXPECT_EQ(a.tokens[k].id, b.tokens[k].id);
      EXPECT_EQ(a.tokens[k].head, b.tokens[k].head);
      EXPECT_EQ(a.tokens[k].deprel, b.tokens[k].deprel);
      EXPECT_EQ(a.tokens[k].upos, b.tokens[k].upos);
      EXPECT_EQ(format_feats(a.tokens[k].feats), format_feats(b.tokens[k].feats));
    }
    EXPECT_EQ(a.mwt.size(), b.mwt.size());
    EXPECT_EQ(a.empty_nodes.size(), b.empty_nodes.size());
  }
  // The output is itself a valid treebank.
  EXPECT_NO_THROW(parse_conllu(serialize(res.treebank)));
}

TEST_P(PerLanguage, ReplacementsAreContextValid) {
  const auto s = setup(GetParam());
  const auto res = run(s, 42);
  std::size_t replaced = 0;
  Treebank reference = s.treebank;
  if (s.language == Language::ar) strip_arabic_diacritics(reference);
  for (const auto& r : res.records) {
    EXPECT_EQ(r.replaced, !r.failure_reason.has_value());
    if (!r.replaced) {
      EXPECT_EQ(r.new_form, r.original_form);
      continue;
    }
    ++replaced;
    EXPECT_NE(r.new_form, r.original_form);
    const Sentence* sent = reference.find(r.sent_id);
    ASSERT_NE(sent, nullptr);
    const auto ctx = extract_context(*sent, r.token_id, s.pool.options);
    const auto cands = candidates(s.pool, ctx, sent->token(r.token_id).lemma);
    EXPECT_TRUE(std::find(cands.begin(), cands.end(), utf8::lower(r.new_lemma)) != cands.end())
        << r.sent_id << ":" << r.token_id << " " << r.new_lemma;
  }
  EXPECT_GT(replaced, 20U) << GetParam();
}

TEST_P(PerLanguage, DeterministicUnderFixedSeed) {
  const auto s = setup(GetParam());
  const auto a = run(s, 42);
  const auto b = run(s, 42);
  EXPECT_EQ(serialize(a.treebank), serialize(b.treebank));
  EXPECT_EQ(records_text(a.records), records_text(b.records));
  const auto threaded = run(s, 42, 4);
  EXPECT_EQ(serialize(a.treebank), serialize(threaded.treebank));
  EXPECT_EQ(records_text(a.records), records_text(threaded.records));
  EXPECT_NE(serialize(a.treebank), serialize(run(s, 43).treebank));
  EXPECT_NE(serialize(a.treebank), serialize(run(s, 42, 1, 1).treebank));
}

TEST_P(PerLanguage, ReducedContextsStillValid) {
  const auto s = setup(GetParam(), {true, true});
  const auto res = run(s, 7);
  EXPECT_GT(res.report.overall.replaced, 0U);
  for (const auto& r : res.records) {
    if (!r.replaced) continue;
    EXPECT_TRUE(default_content_upos().contains(r.upos));
  }
}

INSTANTIATE_TEST_SUITE_P(Mini, PerLanguage, ::testing::ValuesIn(test::mini_languages()),
                         [](const auto& info) { return info.param; });

TEST(Generator, PoolOptionsMustMatch) {
  const auto s = setup("en");
  GenOptions opts;
  opts.ignore_deprels = true;
  EXPECT_THROW(generate(s.treebank, s.pool, s.lexicon, s.hints, opts), std::invalid_argument);
}

TEST(Generator, FunctionWordsOnlyIsUnchanged) {
  const auto tb = parse_conllu(
      "# text = and so\n"
      "1\tand\tand\tCCONJ\t_\t_\t0\troot\t_\t_\n"
      "2\tso\tso\tSCONJ\t_\t_\t1\tfixed\t_\t_\n\n");
  const auto res = generate(tb, build_pools(tb), Lexicon{}, {}, GenOptions{});
  EXPECT_EQ(serialize(res.treebank), serialize(tb));
  EXPECT_EQ(res.report.overall.replaced, 0U);
  EXPECT_EQ(res.report.failures.at(FailureReason::not_content), 2U);
}

TEST(Generator, MissingInflectionKeepsOriginal) {
  const auto tb = parse_conllu(
      "1\tMaria\tMaria\tPROPN\t_\tNumber=Sing\t2\tnsubj\t_\t_\n"
      "2\tslept\tsleep\tVERB\t_\t_\t0\troot\t_\t_\n\n"
      "1\tJohn\tJohn\tPROPN\t_\tNumber=Sing\t2\tnsubj\t_\t_\n"
      "2\tslept\tsleep\tVERB\t_\t_\t0\troot\t_\t_\n\n");
  Lexicon lex;
  lex.add({"slept", "sleep", "VERB", {}});
  const auto res = generate(tb, build_pools(tb), lex, {}, GenOptions{});
  EXPECT_EQ(res.treebank.sentences[0].token(1).form, "Maria");
  EXPECT_EQ(res.records[0].failure_reason, FailureReason::no_inflection);
  // "sleep" is the only VERB lemma in its context and only yields the same form.
  EXPECT_EQ(res.records[1].failure_reason, FailureReason::no_candidate);
  EXPECT_EQ(generate(tb, build_pools(tb), Lexicon{}, {}, GenOptions{}).records[1].failure_reason,
            FailureReason::no_inflection);
}

TEST(Generator, MwtMembersAreNotReplaced) {
  const auto s = setup("ar");
  const auto res = run(s, 42);
  std::size_t in_mwt = 0;
  for (const auto& r : res.records)
    if (r.failure_reason == FailureReason::in_mwt) ++in_mwt;
  EXPECT_GT(in_mwt, 0U);
}

TEST(Generator, LemmaCasingComesFromTheLexicon) {
  const auto s = setup("de");
  const auto res = run(s, 42);
  for (const auto& r : res.records)
    if (r.replaced && r.upos == "NOUN") {
      ASSERT_FALSE(r.new_lemma.empty());
      EXPECT_EQ(match_capitalization("X", r.new_lemma), r.new_lemma) << r.new_lemma;
    }
}

TEST(Generator, StatsExample) {
  std::vector<ReplacementRecord> recs(4);
  recs[0].upos = "NOUN";
  recs[0].replaced = true;
  recs[1].upos = "NOUN";
  recs[1].failure_reason = FailureReason::no_inflection;
  recs[2].upos = "DET";
  recs[2].failure_reason = FailureReason::not_content;
  recs[3].upos = "VERB";
  recs[3].replaced = true;
  const auto rep = replacement_stats(recs);
  EXPECT_DOUBLE_EQ(rep.per_upos.at("NOUN").ratio(), 0.5);
  EXPECT_DOUBLE_EQ(rep.per_upos.at("VERB").ratio(), 1.0);
  EXPECT_DOUBLE_EQ(rep.overall.ratio(), 0.5);
  const auto j = to_json(rep);
  EXPECT_EQ(j["failures"]["no_inflection"], 1);
  EXPECT_EQ(j["per_upos"]["DET"]["total"], 1);
}

TEST(Generator, RecordsRoundTrip) {
  const auto s = setup("fr");
  const auto res = run(s, 3);
  std::istringstream in(records_text(res.records));
  const auto back = parse_records(in);
  EXPECT_EQ(records_text(back), records_text(res.records));
  std::istringstream bad("0\ts\t1\tNOUN\ta\tb\ta\tb\t1\twhatever\t0\n");
  EXPECT_THROW(parse_records(bad), std::runtime_error);
}

TEST(Generator, TextCommentIsRegenerated) {
  const auto s = setup("en");
  const auto res = run(s, 42);
  for (const auto& sent : res.treebank.sentences) {
    ASSERT_TRUE(sent.text.has_value());
    EXPECT_EQ(*sent.text, detokenize(sent));
  }
}

TEST(Generator, EnglishArticlesAgreeAfterGeneration) {
  const auto s = setup("en");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto res = run(s, seed);
    for (const auto& sent : res.treebank.sentences)
      for (std::size_t k = 0; k + 1 < sent.tokens.size(); ++k) {
        const auto& t = sent.tokens[k];
        if (t.upos != "DET" || (utf8::lower(t.form) != "a" && utf8::lower(t.form) != "an")) continue;
        const auto& next = sent.tokens[k + 1];
        const bool vowel = hint_for(s.hints, next.form).vowel_initial;
        EXPECT_EQ(utf8::lower(t.form), vowel ? "an" : "a") << sent.sent_id << " " << next.form;
      }
  }
}
