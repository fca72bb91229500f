#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "spud/scoring.hpp"
#include "support.hpp"

using namespace spud;
using namespace spud::scoring;

namespace {

std::vector<TokenScore> sentence(const std::string& id, Variant v, Regime r, const std::vector<double>& logprobs) {
  std::vector<TokenScore> out;
  for (std::size_t i = 0; i < logprobs.size(); ++i) {
    TokenScore t;
    t.sent_id = id;
    t.variant = v;
    t.regime = r;
    t.token_index = static_cast<int>(i);
    t.word_index = static_cast<int>(i);
    t.logprob = logprobs[i];
    out.push_back(t);
  }
  return out;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Scoring, UniformHalfOverFourTokensIsTwo) {
  const auto s = score_sentence(sentence("s", Variant::orig, Regime::alm, std::vector<double>(4, std::log(0.5))));
  EXPECT_LE(rel_err(s.score, 2.0), 1e-12);
  EXPECT_EQ(s.n_tokens, 4);
}

TEST(Scoring, TwoTokenClosedForm) {
  const auto s = score_sentence(sentence("s", Variant::orig, Regime::alm, {std::log(0.5), std::log(0.125)}));
  EXPECT_LE(rel_err(s.score, 4.0), 1e-12);
}

TEST(Scoring, SingleSubwordRegimesAgree) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> lp(1 + uniform_index(rng, 30));
    for (auto& x : lp) x = -5.0 * uniform01(rng);
    const auto a = score_sentence(sentence("s", Variant::orig, Regime::mlm_pppl, lp));
    const auto b = score_sentence(sentence("s", Variant::orig, Regime::mlm_pppl_l2r, lp));
    EXPECT_EQ(a.score, b.score);
  }
}

TEST(Scoring, InputOrderDoesNotMatter) {
  std::mt19937_64 rng(5);
  std::vector<double> lp(40);
  for (auto& x : lp) x = -10.0 * uniform01(rng);
  auto recs = sentence("s", Variant::nonce, Regime::alm, lp);
  const double ref = score_sentence(recs).score;
  for (int k = 0; k < 20; ++k) {
    spud::shuffle(recs, rng);
    EXPECT_EQ(score_sentence(recs).score, ref);
  }
}

TEST(Scoring, ScoreSentenceRejectsBadGroups) {
  EXPECT_THROW(score_sentence(std::vector<TokenScore>{}), std::invalid_argument);
  auto mixed = sentence("s", Variant::orig, Regime::alm, {-1.0, -1.0});
  mixed[1].regime = Regime::mlm_pppl;
  EXPECT_THROW(score_sentence(mixed), std::invalid_argument);
  auto gap = sentence("s", Variant::orig, Regime::alm, {-1.0, -1.0});
  gap[1].token_index = 2;
  EXPECT_THROW(score_sentence(gap), std::invalid_argument);
  auto dup = sentence("s", Variant::orig, Regime::alm, {-1.0, -1.0});
  dup[1].token_index = 0;
  EXPECT_THROW(score_sentence(dup), std::invalid_argument);
}

TEST(Scoring, Ratios) {
  SentenceScore o{"s", Variant::orig, Regime::alm, 1, std::log(4.0), 4.0};
  SentenceScore n{"s", Variant::nonce, Regime::alm, 1, std::log(2.0), 2.0};
  EXPECT_DOUBLE_EQ(ratio(o, n).r, 0.5);
  SentenceScore same = o;
  same.variant = Variant::nonce;
  EXPECT_DOUBLE_EQ(ratio(o, same).r, 1.0);
  EXPECT_THROW(ratio(n, o), std::invalid_argument);
}

TEST(Scoring, QuartilesAndOutliers) {
  std::vector<PairRatio> rs;
  for (double r : {5.0, 1.0, 3.0, 2.0, 4.0}) rs.push_back({"x", Regime::alm, r});
  const auto s = summarize(rs);
  EXPECT_DOUBLE_EQ(s.q1, 2.0);
  EXPECT_DOUBLE_EQ(s.median, 3.0);
  EXPECT_DOUBLE_EQ(s.q3, 4.0);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.max, 5.0);
  EXPECT_EQ(s.outlier_count, 0U);
  rs.push_back({"y", Regime::alm, 300.0});
  rs.push_back({"z", Regime::alm, 250.0});
  EXPECT_EQ(summarize(rs).outlier_count, 1U);
  EXPECT_EQ(summarize(rs, 4.5).outlier_count, 3U);
  const std::vector<double> two{1.0, 2.0};
  EXPECT_DOUBLE_EQ(quantile(two, 0.5), 1.5);
}

TEST(Scoring, WilcoxonSmallExact) {
  const std::vector<double> a{1, 2, 3}, b{0, 0, 0};
  const auto w = wilcoxon_signed_rank(a, b);
  EXPECT_TRUE(w.exact);
  EXPECT_DOUBLE_EQ(w.w_plus, 6.0);
  EXPECT_DOUBLE_EQ(w.p_one_sided, 0.125);
  EXPECT_DOUBLE_EQ(w.p_two_sided, 0.25);
}

TEST(Scoring, WilcoxonMatchesEnumeration) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 10;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      // coarse grid so that ties and zeros occur
      a[i] = static_cast<double>(uniform_index(rng, 7));
      b[i] = static_cast<double>(uniform_index(rng, 7));
    }
    if (a == b) continue;
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i) all_zero = all_zero && a[i] == b[i];
    if (all_zero) continue;
    const auto w = wilcoxon_signed_rank(a, b, WilcoxonMethod::exact);
    const auto o = test::brute_wilcoxon(a, b);
    EXPECT_NEAR(w.w_plus, o.w_plus, 1e-9);
    EXPECT_NEAR(w.p_one_sided, o.p_one, 1e-9);
    EXPECT_NEAR(w.p_two_sided, o.p_two, 1e-9);
  }
}

TEST(Scoring, WilcoxonNormalCloseToExactAtFifteen) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(15), b(15);
    for (std::size_t i = 0; i < 15; ++i) {
      a[i] = standard_normal(rng) + 0.3;
      b[i] = standard_normal(rng);
    }
    const auto e = wilcoxon_signed_rank(a, b, WilcoxonMethod::exact);
    const auto z = wilcoxon_signed_rank(a, b, WilcoxonMethod::normal);
    EXPECT_NEAR(e.p_one_sided, z.p_one_sided, 0.01);
    // two-sided p doubles a tail, and with it the approximation error
    EXPECT_NEAR(e.p_two_sided, z.p_two_sided, 0.02);
  }
}

TEST(Scoring, WilcoxonSubsampleOfFifty) {
  std::mt19937_64 rng(50);
  std::vector<double> a(50), b(50);
  for (std::size_t i = 0; i < 50; ++i) {
    a[i] = standard_normal(rng) + 0.2;
    b[i] = standard_normal(rng);
  }
  const auto full = wilcoxon_signed_rank(a, b);
  EXPECT_FALSE(full.exact);
  const std::vector<double> sa(a.begin(), a.begin() + 15), sb(b.begin(), b.begin() + 15);
  const auto e = wilcoxon_signed_rank(sa, sb, WilcoxonMethod::exact);
  const auto z = wilcoxon_signed_rank(sa, sb, WilcoxonMethod::normal);
  EXPECT_TRUE(e.exact);
  EXPECT_NEAR(e.p_one_sided, z.p_one_sided, 0.01);
  EXPECT_NEAR(e.p_one_sided, test::brute_wilcoxon(sa, sb).p_one, 1e-9);
}

TEST(Scoring, WilcoxonErrors) {
  const std::vector<double> a{1, 2}, b{1, 2}, c{1};
  EXPECT_THROW(wilcoxon_signed_rank(a, b), std::invalid_argument);
  EXPECT_THROW(wilcoxon_signed_rank(a, c), std::invalid_argument);
}

TEST(Scoring, TypeTokenRatio) {
  const std::vector<std::string> t{"a", "b", "a", "c"};
  EXPECT_DOUBLE_EQ(ttr(t), 0.75);
  EXPECT_THROW(ttr(std::vector<std::string>{}), std::invalid_argument);
}

TEST(Scoring, TokenStreamNeedsTokens) {
  auto recs = sentence("s", Variant::orig, Regime::alm, {-1, -1});
  EXPECT_THROW(token_stream(recs, Variant::orig, Regime::alm), std::invalid_argument);
  recs[0].token = "x";
  recs[1].token = "y";
  EXPECT_EQ(token_stream(recs, Variant::orig, Regime::alm), (std::vector<std::string>{"x", "y"}));
  EXPECT_TRUE(token_stream(recs, Variant::nonce, Regime::alm).empty());
}

TEST(Scoring, ExtremesTieBreakBySentId) {
  std::vector<ExtremePair> pairs{{"c", 2.0, {}, {}, {}}, {"a", 2.0, {}, {}, {}}, {"b", 0.5, {}, {}, {}},
                                 {"d", 9.0, {}, {}, {}}};
  const auto rep = extremes_report(pairs, 2);
  ASSERT_EQ(rep.top.size(), 2U);
  EXPECT_EQ(rep.top[0].sent_id, "d");
  EXPECT_EQ(rep.top[1].sent_id, "a");
  EXPECT_EQ(rep.bottom[0].sent_id, "b");
  EXPECT_EQ(rep.bottom[1].sent_id, "a");
  EXPECT_TRUE(extremes_report(pairs, 0).top.empty());
}

TEST(Scoring, LoaderValidates) {
  std::istringstream ok(
      R"({"sent_id":"s","variant":"orig","regime":"alm","token_index":0,"word_index":0,"logprob":-0.5,"token":"The"})"
      "\n\n");
  const auto recs = load_token_scores(ok);
  ASSERT_EQ(recs.size(), 1U);
  EXPECT_EQ(*recs[0].token, "The");
  std::istringstream pos(R"({"sent_id":"s","variant":"orig","regime":"alm","token_index":0,"word_index":0,"logprob":0.5})");
  EXPECT_THROW(load_token_scores(pos), FormatError);
  std::istringstream regime(R"({"sent_id":"s","variant":"orig","regime":"x","token_index":0,"word_index":0,"logprob":-1})");
  EXPECT_THROW(load_token_scores(regime), FormatError);
  std::istringstream junk("{\n");
  try {
    load_token_scores(junk);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Scoring, ReportShape) {
  std::vector<TokenScore> all;
  std::mt19937_64 rng(9);
  for (int s = 0; s < 12; ++s) {
    const std::string id = "s" + std::to_string(s);
    for (auto regime : {Regime::alm, Regime::mlm_pppl}) {
      for (auto variant : {Variant::orig, Variant::nonce}) {
        std::vector<double> lp(5);
        for (auto& x : lp) x = -(variant == Variant::nonce ? 3.0 : 1.0) * uniform01(rng) - 0.01;
        auto recs = sentence(id, variant, regime, lp);
        all.insert(all.end(), recs.begin(), recs.end());
      }
    }
  }
  // an orphan original
  auto extra = sentence("lonely", Variant::orig, Regime::alm, {-1.0});
  all.insert(all.end(), extra.begin(), extra.end());
  ReportOptions opts;
  opts.raw_nll = true;
  opts.extremes_k = 3;
  const auto j = build_report(all, opts);
  EXPECT_EQ(j["regimes"]["alm"]["pairs"], 12);
  EXPECT_EQ(j["regimes"]["alm"]["dropped_incomplete"], 1);
  EXPECT_TRUE(j["regimes"]["mlm_pppl"]["raw_nll"].contains("mean_difference"));
  ASSERT_EQ(j["comparisons"].size(), 1U);
  EXPECT_EQ(j["comparisons"][0]["unfiltered"]["n_pairs"], 12);
  EXPECT_EQ(j["extremes"]["alm"]["top"].size(), 3U);
  EXPECT_EQ(build_report(all, opts).dump(), j.dump());
}
