#pragma once

// Sentence scores from token log-probabilities, orig/nonce ratios and their
// summaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

namespace spud::scoring {

enum class Variant { orig, nonce };
enum class Regime { alm, mlm_pppl, mlm_pppl_l2r };

inline std::string_view to_string(Variant v) { return v == Variant::orig ? "orig" : "nonce"; }

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::alm: return "alm";
    case Regime::mlm_pppl: return "mlm_pppl";
    case Regime::mlm_pppl_l2r: return "mlm_pppl_l2r";
  }
  return "";
}

inline std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "orig") return Variant::orig;
  if (s == "nonce") return Variant::nonce;
  return std::nullopt;
}

inline std::optional<Regime> parse_regime(std::string_view s) {
  if (s == "alm") return Regime::alm;
  if (s == "mlm_pppl") return Regime::mlm_pppl;
  if (s == "mlm_pppl_l2r") return Regime::mlm_pppl_l2r;
  return std::nullopt;
}

struct TokenScore {
  std::string sent_id;
  Variant variant = Variant::orig;
  Regime regime = Regime::alm;
  int token_index = 0;
  int word_index = 0;
  double logprob = 0.0;
  std::optional<std::string> token;  // surface of the scored token, if the producer sent it
};

struct FormatError : std::runtime_error {
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

/// One JSON object per line; blank lines are skipped.
inline std::vector<TokenScore> load_token_scores(std::istream& in) {
  std::vector<TokenScore> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    try {
      TokenScore t;
      t.sent_id = j.at("sent_id").get<std::string>();
      auto v = parse_variant(j.at("variant").get<std::string>());
      if (!v) throw FormatError(line_no, "unknown variant");
      auto r = parse_regime(j.at("regime").get<std::string>());
      if (!r) throw FormatError(line_no, "unknown regime");
      t.variant = *v;
      t.regime = *r;
      t.token_index = j.at("token_index").get<int>();
      t.word_index = j.at("word_index").get<int>();
      t.logprob = j.at("logprob").get<double>();
      if (j.contains("token") && j["token"].is_string()) t.token = j["token"].get<std::string>();
      if (t.token_index < 0 || t.word_index < 0) throw FormatError(line_no, "negative index");
      if (!std::isfinite(t.logprob) || t.logprob > 0.0) throw FormatError(line_no, "logprob must be finite and <= 0");
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(line_no, std::string("bad record: ") + e.what());
    }
  }
  return out;
}

struct SentenceScore {
  std::string sent_id;
  Variant variant = Variant::orig;
  Regime regime = Regime::alm;
  int n_tokens = 0;
  double mean_nll = 0.0;  // -(1/n) sum logprob
  double score = 0.0;     // exp(mean_nll)
};

/// exp(-(1/n) sum logprob) over one sentence's tokens. The sum runs in
/// token_index order, so the result does not depend on input order.
inline SentenceScore score_sentence(std::span<const TokenScore> scores) {
  if (scores.empty()) throw std::invalid_argument("score_sentence: no tokens");
  const TokenScore& first = scores.front();
  std::vector<const TokenScore*> by_index(scores.size(), nullptr);
  for (const auto& t : scores) {
    if (t.regime != first.regime) throw std::invalid_argument("score_sentence: mixed regimes");
    if (t.variant != first.variant || t.sent_id != first.sent_id)
      throw std::invalid_argument("score_sentence: records from different sentences");
    if (t.token_index < 0 || static_cast<std::size_t>(t.token_index) >= scores.size())
      throw std::invalid_argument("score_sentence: missing token index in " + first.sent_id);
    auto& slot = by_index[static_cast<std::size_t>(t.token_index)];
    if (slot) throw std::invalid_argument("score_sentence: duplicate token index in " + first.sent_id);
    slot = &t;
  }
  double sum = 0.0;
  for (const auto* t : by_index) sum += t->logprob;
  SentenceScore s;
  s.sent_id = first.sent_id;
  s.variant = first.variant;
  s.regime = first.regime;
  s.n_tokens = static_cast<int>(scores.size());
  s.mean_nll = -sum / static_cast<double>(scores.size());
  s.score = std::exp(s.mean_nll);
  return s;
}

struct PairRatio {
  std::string sent_id;
  Regime regime = Regime::alm;
  double r = 1.0;
};

inline PairRatio ratio(const SentenceScore& orig, const SentenceScore& nonce) {
  if (orig.sent_id != nonce.sent_id || orig.regime != nonce.regime)
    throw std::invalid_argument("ratio: mismatched pair " + orig.sent_id + " / " + nonce.sent_id);
  if (orig.variant != Variant::orig || nonce.variant != Variant::nonce)
    throw std::invalid_argument("ratio: expected (orig, nonce) pair");
  if (!(orig.score > 0.0)) throw std::invalid_argument("ratio: non-positive original score");
  return {orig.sent_id, orig.regime, nonce.score / orig.score};
}

/// Linear interpolation between closest ranks: position (n-1)q of the sorted sample.
inline double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

struct RatioSummary {
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double threshold = 250.0;
  std::size_t outlier_count = 0;
  double mean_log_r = 0;
};

inline RatioSummary summarize(std::span<const PairRatio> ratios, double outlier_threshold = 250.0) {
  if (ratios.empty()) throw std::invalid_argument("summarize: empty input");
  std::vector<double> v;
  v.reserve(ratios.size());
  double log_sum = 0.0;
  RatioSummary s;
  s.threshold = outlier_threshold;
  for (const auto& p : ratios) {
    v.push_back(p.r);
    log_sum += std::log(p.r);
    if (p.r > outlier_threshold) ++s.outlier_count;
  }
  std::sort(v.begin(), v.end());
  s.count = v.size();
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(v, 0.25);
  s.median = quantile(v, 0.5);
  s.q3 = quantile(v, 0.75);
  s.mean_log_r = log_sum / static_cast<double>(v.size());
  return s;
}

// ---- Wilcoxon signed-rank ---------------------------------------------------

enum class WilcoxonMethod { automatic, exact, normal };

struct WilcoxonResult {
  std::size_t n = 0;       // pairs with a non-zero difference
  std::size_t n_zero = 0;  // dropped pairs
  double w_plus = 0;       // rank sum of positive differences (a > b)
  double w_minus = 0;
  double p_one_sided = 1;  // P(W+ >= w_plus) under H0
  double p_two_sided = 1;
  bool exact = false;
};

namespace detail {

/// Average ranks of |d| (1-based); also returns the tie-group sizes.
inline std::vector<double> signed_ranks(const std::vector<double>& d, std::vector<std::size_t>& ties) {
  std::vector<std::size_t> order(d.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(d[a]) < std::abs(d[b]) || (std::abs(d[a]) == std::abs(d[b]) && a < b);
  });
  std::vector<double> rank(d.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    ties.push_back(j - i + 1);
    i = j + 1;
  }
  return rank;
}

inline double normal_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

/// Paired signed-rank test on d = a - b. Exact null distribution (average
/// ranks, enumerated over sign assignments by dynamic programming on doubled
/// ranks) for n <= 25 under `automatic`; otherwise the normal approximation
/// with tie and continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                           WilcoxonMethod method = WilcoxonMethod::automatic) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: samples differ in length");
  std::vector<double> d;
  WilcoxonResult res;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    if (x == 0.0) {
      ++res.n_zero;
    } else {
      d.push_back(x);
    }
  }
  if (d.empty()) throw std::invalid_argument("wilcoxon: all differences are zero");
  res.n = d.size();
  std::vector<std::size_t> ties;
  const auto rank = detail::signed_ranks(d, ties);
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? res.w_plus : res.w_minus) += rank[i];

  const bool exact = method == WilcoxonMethod::exact || (method == WilcoxonMethod::automatic && res.n <= 25);
  res.exact = exact;
  const double n = static_cast<double>(res.n);
  if (exact) {
    if (res.n > 60) throw std::invalid_argument("wilcoxon: exact mode limited to n <= 60");
    // Doubled ranks are integers even with half-integer average ranks.
    std::vector<std::size_t> r2(res.n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < res.n; ++i) {
      r2[i] = static_cast<std::size_t>(std::llround(rank[i] * 2.0));
      total += r2[i];
    }
    std::vector<double> count(total + 1, 0.0);
    count[0] = 1.0;
    std::size_t reach = 0;
    for (auto r : r2) {
      reach += r;
      for (std::size_t s = reach; s >= r; --s) {
        count[s] += count[s - r];
        if (s == r) break;
      }
    }
    const double all = std::ldexp(1.0, static_cast<int>(res.n));
    const auto w2 = static_cast<std::size_t>(std::llround(res.w_plus * 2.0));
    double upper = 0.0, lower = 0.0;
    for (std::size_t s = 0; s <= total; ++s) {
      if (s >= w2) upper += count[s];
      if (s <= w2) lower += count[s];
    }
    res.p_one_sided = upper / all;
    res.p_two_sided = std::min(1.0, 2.0 * std::min(upper, lower) / all);
  } else {
    const double mean = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    for (auto t : ties) {
      const double tt = static_cast<double>(t);
      var -= (tt * tt * tt - tt) / 48.0;
    }
    const double sd = std::sqrt(var);
    const double upper = detail::normal_upper((res.w_plus - mean - 0.5) / sd);
    const double lower = 1.0 - detail::normal_upper((res.w_plus - mean + 0.5) / sd);
    res.p_one_sided = upper;
    res.p_two_sided = std::min(1.0, 2.0 * std::min(upper, lower));
  }
  return res;
}

// ---- TTR --------------------------------------------------------------------

inline double ttr(std::span<const std::string> tokens) {
  if (tokens.empty()) throw std::invalid_argument("ttr: empty token stream");
  std::unordered_set<std::string_view> types;
  for (const auto& t : tokens) types.insert(t);
  return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

/// Token stream of one (variant, regime) from score records that carry a
/// `token` field, in sentence-id then token-index order.
inline std::vector<std::string> token_stream(std::span<const TokenScore> scores, Variant variant, Regime regime) {
  std::map<std::pair<std::string, int>, std::string> ordered;
  for (const auto& t : scores) {
    if (t.variant != variant || t.regime != regime) continue;
    if (!t.token) throw std::invalid_argument("score record for " + t.sent_id + " has no token field");
    ordered[{t.sent_id, t.token_index}] = *t.token;
  }
  std::vector<std::string> out;
  out.reserve(ordered.size());
  for (auto& [k, v] : ordered) out.push_back(std::move(v));
  return out;
}

// ---- extremes ---------------------------------------------------------------

struct ExtremePair {
  std::string sent_id;
  double r = 1.0;
  std::map<std::string, double> per_regime;
  std::string orig_text;
  std::string nonce_text;
};

struct ExtremesReport {
  std::vector<ExtremePair> top;     // largest r first
  std::vector<ExtremePair> bottom;  // smallest r first
};

/// Top-k and bottom-k by r; equal ratios are ordered by sent_id.
inline ExtremesReport extremes_report(std::vector<ExtremePair> pairs, std::size_t k) {
  ExtremesReport rep;
  if (k == 0 || pairs.empty()) return rep;
  const std::size_t m = std::min(k, pairs.size());
  auto asc = [](const ExtremePair& a, const ExtremePair& b) { return std::tie(a.r, a.sent_id) < std::tie(b.r, b.sent_id); };
  auto desc = [](const ExtremePair& a, const ExtremePair& b) {
    return a.r > b.r || (a.r == b.r && a.sent_id < b.sent_id);
  };
  std::sort(pairs.begin(), pairs.end(), asc);
  rep.bottom.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(pairs.begin(), pairs.end(), desc);
  rep.top.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(m));
  return rep;
}

// ---- report -----------------------------------------------------------------

struct ReportOptions {
  double threshold = 250.0;
  bool raw_nll = false;
  std::size_t extremes_k = 5;
  std::map<std::string, std::string> orig_texts;
  std::map<std::string, std::string> nonce_texts;
};

struct ScoreTables {
  // regime -> sent_id -> (orig, nonce)
  std::map<Regime, std::map<std::string, std::pair<std::optional<SentenceScore>, std::optional<SentenceScore>>>> sentences;
};

inline ScoreTables score_all(std::span<const TokenScore> scores) {
  std::map<std::tuple<Regime, Variant, std::string>, std::vector<TokenScore>> groups;
  for (const auto& t : scores) groups[{t.regime, t.variant, t.sent_id}].push_back(t);
  ScoreTables tables;
  for (const auto& [key, recs] : groups) {
    auto s = score_sentence(recs);
    auto& slot = tables.sentences[std::get<0>(key)][std::get<2>(key)];
    (std::get<1>(key) == Variant::orig ? slot.first : slot.second) = s;
  }
  return tables;
}

namespace detail {

inline nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const RatioSummary& s) {
  return {{"count", s.count},   {"min", number(s.min)}, {"q1", number(s.q1)},
          {"median", number(s.median)}, {"q3", number(s.q3)}, {"max", number(s.max)},
          {"threshold", s.threshold}, {"outlier_count", s.outlier_count}, {"mean_log_r", number(s.mean_log_r)}};
}

inline nlohmann::json wilcoxon_json(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty()) return {{"n_pairs", 0}, {"error", "no pairs"}};
  try {
    auto w = wilcoxon_signed_rank(a, b);
    return {{"n_pairs", a.size()},           {"n", w.n},
            {"n_zero", w.n_zero},            {"w_plus", w.w_plus},
            {"w_minus", w.w_minus},          {"p_one_sided", w.p_one_sided},
            {"p_two_sided", w.p_two_sided},  {"method", w.exact ? "exact" : "normal"}};
  } catch (const std::invalid_argument& e) {
    return {{"n_pairs", a.size()}, {"error", e.what()}};
  }
}

inline nlohmann::json to_json(const ExtremePair& p) {
  nlohmann::json j = {{"sent_id", p.sent_id}, {"r", number(p.r)}};
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [k, v] : p.per_regime) per[k] = number(v);
  j["per_regime"] = per;
  if (!p.orig_text.empty()) j["orig_text"] = p.orig_text;
  if (!p.nonce_text.empty()) j["nonce_text"] = p.nonce_text;
  return j;
}

}  // namespace detail

/// Per-regime ratio summaries, pairwise Wilcoxon tests on r between regimes
/// (with and without pairs above the threshold), and extremes.
inline nlohmann::json build_report(std::span<const TokenScore> scores, const ReportOptions& opts = {}) {
  const ScoreTables tables = score_all(scores);
  std::map<Regime, std::map<std::string, double>> ratios;
  nlohmann::json regimes = nlohmann::json::object();
  for (const auto& [regime, sents] : tables.sentences) {
    std::vector<PairRatio> pr;
    std::size_t dropped = 0;
    double orig_nll = 0, nonce_nll = 0;
    for (const auto& [id, pair] : sents) {
      if (!pair.first || !pair.second) {
        ++dropped;
        continue;
      }
      pr.push_back(ratio(*pair.first, *pair.second));
      ratios[regime][id] = pr.back().r;
      orig_nll += pair.first->mean_nll;
      nonce_nll += pair.second->mean_nll;
    }
    nlohmann::json r = {{"pairs", pr.size()}, {"dropped_incomplete", dropped}};
    if (!pr.empty()) {
      r["summary"] = detail::to_json(summarize(pr, opts.threshold));
      if (opts.raw_nll) {
        const double n = static_cast<double>(pr.size());
        r["raw_nll"] = {{"orig_mean", orig_nll / n}, {"nonce_mean", nonce_nll / n},
                        {"mean_difference", (nonce_nll - orig_nll) / n}};
      }
    }
    regimes[std::string(to_string(regime))] = r;
  }

  nlohmann::json comparisons = nlohmann::json::array();
  for (auto i = ratios.begin(); i != ratios.end(); ++i) {
    for (auto j = std::next(i); j != ratios.end(); ++j) {
      std::vector<double> a, b, fa, fb;
      for (const auto& [id, ra] : i->second) {
        auto it = j->second.find(id);
        if (it == j->second.end()) continue;
        a.push_back(ra);
        b.push_back(it->second);
        if (ra <= opts.threshold && it->second <= opts.threshold) {
          fa.push_back(ra);
          fb.push_back(it->second);
        }
      }
      comparisons.push_back({{"a", to_string(i->first)},
                             {"b", to_string(j->first)},
                             {"unfiltered", detail::wilcoxon_json(a, b)},
                             {"filtered", detail::wilcoxon_json(fa, fb)}});
    }
  }

  nlohmann::json extremes = nlohmann::json::object();
  for (const auto& [regime, by_id] : ratios) {
    std::vector<ExtremePair> pairs;
    for (const auto& [id, r] : by_id) {
      ExtremePair p;
      p.sent_id = id;
      p.r = r;
      for (const auto& [other, other_ids] : ratios) {
        auto it = other_ids.find(id);
        if (it != other_ids.end()) p.per_regime[std::string(to_string(other))] = it->second;
      }
      if (auto t = opts.orig_texts.find(id); t != opts.orig_texts.end()) p.orig_text = t->second;
      if (auto t = opts.nonce_texts.find(id); t != opts.nonce_texts.end()) p.nonce_text = t->second;
      pairs.push_back(std::move(p));
    }
    auto rep = extremes_report(std::move(pairs), opts.extremes_k);
    nlohmann::json top = nlohmann::json::array(), bottom = nlohmann::json::array();
    for (const auto& p : rep.top) top.push_back(detail::to_json(p));
    for (const auto& p : rep.bottom) bottom.push_back(detail::to_json(p));
    extremes[std::string(to_string(regime))] = {{"top", top}, {"bottom", bottom}};
  }

  return {{"threshold", opts.threshold}, {"regimes", regimes}, {"comparisons", comparisons}, {"extremes", extremes}};
}

}  // namespace spud::scoring
