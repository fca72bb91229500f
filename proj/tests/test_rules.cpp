#include <gtest/gtest.h>

#include "spud/generator.hpp"
#include "spud/rules.hpp"
#include "support.hpp"

using namespace spud;

namespace {

PhonologyHints english_hints() {
  PhonologyHints h;
  h.set("apple", hint_from_ipa("/ˈæp.əl/"));
  h.set("bicycle", hint_from_ipa("/ˈbaɪ.sɪ.kəl/"));
  h.set("hour", hint_from_ipa("/ˈaʊ.ə/"));
  h.set("university", hint_from_ipa("/ˌjuː.nɪˈvɜː.sɪ.ti/"));
  return h;
}

Token article(std::string form) {
  Token t;
  t.id = 1;
  t.form = std::move(form);
  t.lemma = "a";
  t.upos = "DET";
  t.head = 2;
  t.deprel = "det";
  return t;
}

}  // namespace

TEST(Rules, EnglishAnAppleBecomesABicycle) {
  Token t = article("an");
  EXPECT_TRUE(adjust_english_article(t, "apple", "bicycle", english_hints()));
  EXPECT_EQ(t.form, "a");
}

TEST(Rules, EnglishArticleFollowsSoundNotSpelling) {
  const auto hints = english_hints();
  Token t = article("a");
  EXPECT_TRUE(adjust_english_article(t, "bicycle", "hour", hints));
  EXPECT_EQ(t.form, "an");
  Token u = article("An");
  EXPECT_TRUE(adjust_english_article(u, "apple", "university", hints));
  EXPECT_EQ(u.form, "A");
  Token v = article("a");
  EXPECT_FALSE(adjust_english_article(v, "bicycle", "university", hints));
  EXPECT_EQ(v.form, "a");
  Token the = article("the");
  EXPECT_FALSE(adjust_english_article(the, "bicycle", "apple", hints));
}

TEST(Rules, EnglishArticleInGeneratedSentence) {
  const auto tb = parse_conllu(
      "# sent_id = x\n"
      "# text = I ate an apple.\n"
      "1\tI\tI\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tate\teat\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\tan\ta\tDET\t_\t_\t4\tdet\t_\t_\n"
      "4\tapple\tapple\tNOUN\t_\tNumber=Sing\t2\tobj\t_\tSpaceAfter=No\n"
      "5\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n\n"
      "# sent_id = y\n"
      "1\tI\tI\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tate\teat\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\ta\ta\tDET\t_\t_\t4\tdet\t_\t_\n"
      "4\tbicycle\tbicycle\tNOUN\t_\tNumber=Sing\t2\tobj\t_\t_\n"
      "5\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n\n");
  Lexicon lex;
  lex.add({"apple", "apple", "NOUN", parse_feats("Number=Sing")});
  lex.add({"bicycle", "bicycle", "NOUN", parse_feats("Number=Sing")});
  GenOptions opts;
  opts.language = Language::en;
  opts.content_upos = {"NOUN"};
  const auto pool = build_pools(tb, opts.content_upos);
  const auto res = generate(tb, pool, lex, english_hints(), opts);
  const auto& s = res.treebank.sentences[0];
  EXPECT_EQ(s.token(4).form, "bicycle");
  EXPECT_EQ(s.token(3).form, "a");
  EXPECT_EQ(*s.text, "I ate a bicycle.");
  EXPECT_EQ(res.treebank.sentences[1].token(3).form, "an");
  EXPECT_TRUE(res.records[2].rule_adjusted);
  EXPECT_FALSE(res.records[2].replaced);
}

TEST(Rules, GermanEnFilter) {
  EXPECT_EQ(german_adjective_ending("kleinen"), "en");
  EXPECT_EQ(german_adjective_ending("große"), "e");
  EXPECT_EQ(german_adjective_ending("kleinem"), "em");
  EXPECT_FALSE(german_adjective_ending("klein").has_value());
  EXPECT_FALSE(german_ending_compatible("kleinen", "große"));
  EXPECT_TRUE(german_ending_compatible("kleinen", "großen"));
  EXPECT_TRUE(german_ending_compatible("klein", "große"));
}

TEST(Rules, GermanKleinenTakesGroßenNotGroße) {
  const auto tb = parse_conllu(
      "# sent_id = a\n"
      "1\tden\tder\tDET\t_\t_\t3\tdet\t_\t_\n"
      "2\tkleinen\tklein\tADJ\t_\tDegree=Pos\t3\tamod\t_\t_\n"
      "3\tHund\tHund\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
      "# sent_id = b\n"
      "1\tdie\tder\tDET\t_\t_\t3\tdet\t_\t_\n"
      "2\tgroße\tgroß\tADJ\t_\tDegree=Pos\t3\tamod\t_\t_\n"
      "3\tKatze\tKatze\tNOUN\t_\t_\t0\troot\t_\t_\n\n");
  Lexicon lex;
  // "große" sorts first, so without the filter it would be chosen for "kleinen".
  lex.add({"große", "groß", "ADJ", parse_feats("Case=Acc|Degree=Pos|Gender=Fem|Number=Sing")});
  lex.add({"großen", "groß", "ADJ", parse_feats("Case=Acc|Degree=Pos|Gender=Masc|Number=Sing")});
  lex.add({"kleine", "klein", "ADJ", parse_feats("Case=Nom|Degree=Pos|Gender=Fem|Number=Sing")});
  GenOptions opts;
  opts.language = Language::de;
  opts.content_upos = {"ADJ"};
  const auto pool = build_pools(tb, opts.content_upos);
  const auto res = generate(tb, pool, lex, {}, opts);
  EXPECT_EQ(res.treebank.sentences[0].token(2).form, "großen");
  EXPECT_EQ(res.treebank.sentences[1].token(2).form, "kleine");
}

TEST(Rules, GermanRuleFilteredWhenNoEndingMatches) {
  const auto tb = parse_conllu(
      "1\tden\tder\tDET\t_\t_\t3\tdet\t_\t_\n"
      "2\tkleinen\tklein\tADJ\t_\tDegree=Pos\t3\tamod\t_\t_\n"
      "3\tHund\tHund\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
      "1\tdie\tder\tDET\t_\t_\t3\tdet\t_\t_\n"
      "2\tgroße\tgroß\tADJ\t_\tDegree=Pos\t3\tamod\t_\t_\n"
      "3\tKatze\tKatze\tNOUN\t_\t_\t0\troot\t_\t_\n\n");
  Lexicon lex;
  lex.add({"große", "groß", "ADJ", parse_feats("Degree=Pos")});
  GenOptions opts;
  opts.language = Language::de;
  opts.content_upos = {"ADJ"};
  const auto res = generate(tb, build_pools(tb, opts.content_upos), lex, {}, opts);
  EXPECT_EQ(res.treebank.sentences[0].token(2).form, "kleinen");
  EXPECT_EQ(res.records[1].failure_reason, FailureReason::rule_filtered);
}

TEST(Rules, FrenchElision) {
  PhonologyHints hints;
  hints.set("oiseau", hint_from_ipa("/wa.zo/"));
  hints.set("héros", hint_from_ipa("/e.ʁo/", true));
  hints.set("chat", hint_from_ipa("/ʃa/"));
  Token le = article("le");
  le.feats = parse_feats("Gender=Masc|Number=Sing");
  EXPECT_TRUE(adjust_french_elision(le, "oiseau", "Masc", hints));
  EXPECT_EQ(le.form, "l'");
  EXPECT_TRUE(le.has_misc("SpaceAfter=No"));

  Token la = article("La");
  EXPECT_TRUE(adjust_french_elision(la, "école", "Fem", hints));
  EXPECT_EQ(la.form, "L'");

  Token l = article("l'");
  l.misc = "SpaceAfter=No";
  EXPECT_TRUE(adjust_french_elision(l, "chat", "Masc", hints));
  EXPECT_EQ(l.form, "le");
  EXPECT_FALSE(l.misc.has_value());

  Token lf = article("l’");
  lf.misc = "SpaceAfter=No";
  EXPECT_TRUE(adjust_french_elision(lf, "maison", "Fem", hints));
  EXPECT_EQ(lf.form, "la");

  Token h = article("le");
  EXPECT_FALSE(adjust_french_elision(h, "héros", "Masc", hints));
  EXPECT_EQ(h.form, "le");

  Token de = article("de");
  de.upos = "ADP";
  EXPECT_TRUE(adjust_french_elision(de, "arbre", "", hints));
  EXPECT_EQ(de.form, "d'");
}

TEST(Rules, FrenchLeChatBecomesLOiseau) {
  const auto tb = parse_conllu(
      "# sent_id = a\n"
      "# text = Le chat dort.\n"
      "1\tLe\tle\tDET\t_\tGender=Masc|Number=Sing\t2\tdet\t_\t_\n"
      "2\tchat\tchat\tNOUN\t_\tGender=Masc|Number=Sing\t3\tnsubj\t_\t_\n"
      "3\tdort\tdormir\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No\n"
      "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n\n"
      "# sent_id = b\n"
      "# text = L'oiseau chante.\n"
      "1\tL'\tle\tDET\t_\tNumber=Sing\t2\tdet\t_\tSpaceAfter=No\n"
      "2\toiseau\toiseau\tNOUN\t_\tGender=Masc|Number=Sing\t3\tnsubj\t_\t_\n"
      "3\tchante\tchanter\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No\n"
      "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n\n");
  Lexicon lex;
  lex.add({"chat", "chat", "NOUN", parse_feats("Gender=Masc|Number=Sing")});
  lex.add({"oiseau", "oiseau", "NOUN", parse_feats("Gender=Masc|Number=Sing")});
  PhonologyHints hints;
  hints.set("oiseau", hint_from_ipa("/wa.zo/"));
  hints.set("chat", hint_from_ipa("/ʃa/"));
  GenOptions opts;
  opts.language = Language::fr;
  opts.content_upos = {"NOUN"};
  const auto res = generate(tb, build_pools(tb, opts.content_upos), lex, hints, opts);
  EXPECT_EQ(*res.treebank.sentences[0].text, "L'oiseau dort.");
  EXPECT_EQ(*res.treebank.sentences[1].text, "Le chat chante.");
}

TEST(Rules, FrenchPrenominalAdjectiveFilter) {
  // "petit" is only attested before its head, "rouge" only after.
  const auto tb = parse_conllu(
      "# sent_id = a\n"
      "1\tle\tle\tDET\t_\t_\t3\tdet\t_\t_\n"
      "2\tpetit\tpetit\tADJ\t_\t_\t3\tamod\t_\t_\n"
      "3\tchat\tchat\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
      "# sent_id = b\n"
      "1\tle\tle\tDET\t_\t_\t2\tdet\t_\t_\n"
      "2\tchat\tchat\tNOUN\t_\t_\t0\troot\t_\t_\n"
      "3\trouge\trouge\tADJ\t_\t_\t2\tamod\t_\t_\n\n"
      "# sent_id = c\n"
      "1\tle\tle\tDET\t_\t_\t3\tdet\t_\t_\n"
      "2\tgrand\tgrand\tADJ\t_\t_\t3\tamod\t_\t_\n"
      "3\tchien\tchien\tNOUN\t_\t_\t0\troot\t_\t_\n\n");
  Lexicon lex;
  for (const char* a : {"petit", "rouge", "grand"}) lex.add({a, a, "ADJ", {}});
  GenOptions opts;
  opts.language = Language::fr;
  opts.content_upos = {"ADJ"};
  const auto pool = build_pools(tb, opts.content_upos, opts.context_options());
  // Contexts differ by side only through the filter: all three are ADJ|amod|.
  EXPECT_EQ(candidates(pool, extract_context(tb.sentences[0], 2), "petit"), (std::vector<std::string>{"grand", "rouge"}));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    opts.seed = seed;
    const auto res = generate(tb, pool, lex, {}, opts);
    EXPECT_EQ(res.treebank.sentences[0].token(2).form, "grand");
    EXPECT_EQ(res.treebank.sentences[2].token(2).form, "petit");
    // "rouge" has no postnominal competitor.
    EXPECT_EQ(res.treebank.sentences[1].token(3).form, "rouge");
    EXPECT_EQ(res.records[5].failure_reason, FailureReason::rule_filtered);
  }
  EXPECT_TRUE(french_adjective_position_ok(tb.sentences[0].token(2), "grand", pool));
  EXPECT_FALSE(french_adjective_position_ok(tb.sentences[0].token(2), "rouge", pool));
}

TEST(Rules, ArabicDiacriticsStripped) {
  // kataba with fatha on each letter, and a word with kasra and sukun
  EXPECT_EQ(strip_arabic_diacritics("كَتَبَ"), "كتب");
  EXPECT_EQ(strip_arabic_diacritics("بِسْمِ"), "بسم");
  EXPECT_EQ(strip_arabic_diacritics("الدَّرْسَ"), "الدرس");
  EXPECT_EQ(strip_arabic_diacritics("هٰذا"), "هذا");
  EXPECT_EQ(strip_arabic_diacritics("plain"), "plain");
  for (char32_t c = 0x064B; c <= 0x0652; ++c) EXPECT_TRUE(is_arabic_diacritic(c));
  EXPECT_TRUE(is_arabic_diacritic(0x0670));
  EXPECT_FALSE(is_arabic_diacritic(0x0627));
}

TEST(Rules, ArabicTreebankStripping) {
  auto tb = parse_conllu(test::read_file(test::data_path("mini/ar.conllu")));
  strip_arabic_diacritics(tb);
  for (const auto& s : tb.sentences) {
    for (const auto& t : s.tokens)
      for (std::size_t pos = 0; pos < t.form.size();) ASSERT_FALSE(is_arabic_diacritic(utf8::next(t.form, pos)));
    for (const auto& r : s.mwt)
      for (std::size_t pos = 0; pos < r.form.size();) ASSERT_FALSE(is_arabic_diacritic(utf8::next(r.form, pos)));
  }
}

TEST(Rules, Capitalization) {
  EXPECT_EQ(match_capitalization("Service", "interior"), "Interior");
  EXPECT_EQ(match_capitalization("service", "interior"), "interior");
  EXPECT_EQ(match_capitalization("Hund", "katze"), "Katze");
  EXPECT_EQ(match_capitalization("École", "arbre"), "Arbre");
  EXPECT_EQ(match_capitalization("Chat", "école"), "École");
  EXPECT_EQ(match_capitalization("chat", "Paris"), "Paris");
}

TEST(Rules, MiscSetKeepsOrder) {
  Token t;
  t.misc = "Gloss=x|SpaceAfter=No|Foo=y";
  misc_set(t, "SpaceAfter=No", false);
  EXPECT_EQ(*t.misc, "Gloss=x|Foo=y");
  misc_set(t, "SpaceAfter=No", true);
  EXPECT_EQ(*t.misc, "Gloss=x|Foo=y|SpaceAfter=No");
}
