// spud: nonce treebank generation, score-ratio analysis and DepProbe training.
//
// Exit codes: 0 success, 1 usage error, 2 data error. Logs go to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "spud/conllu.hpp"
#include "spud/context.hpp"
#include "spud/generator.hpp"
#include "spud/lexicon.hpp"
#include "spud/probe.hpp"
#include "spud/rules.hpp"
#include "spud/scoring.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spud;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "spud: " << msg << '\n'; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Resolved configuration plus digests of every file read and written.
struct Manifest {
  std::string command;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::object();

  std::string input(const std::string& path) {
    std::string bytes = read_file(path);
    inputs[path] = sha256_hex(bytes);
    return bytes;
  }
  void output(const fs::path& path, std::string_view content) {
    write_file(path, content);
    outputs[path.string()] = sha256_hex(content);
  }
  void write(const fs::path& path) const {
    const json j = {{"tool", "spud"}, {"version", kVersion}, {"command", command},
                    {"config", config}, {"inputs", inputs}, {"outputs", outputs}};
    write_file(path, dump(j));
  }
};

Treebank load_treebank(Manifest& m, const std::string& path) { return parse_conllu(m.input(path), path); }

void emit(Manifest& m, const std::string& out, const json& report) {
  if (out.empty() || out == "-") {
    std::cout << dump(report);
    return;
  }
  m.output(out, dump(report));
  m.write(out + ".run-manifest.json");
}

// ---- generate -----------------------------------------------------------------

struct GenerateArgs {
  std::string treebank, pool_from, pool_cache, save_pool, lexicon, wiktextract, lang = "en", out;
  std::uint64_t seed = 0;
  unsigned variants = 1;
  bool ignore_deprels = false, drop_punct_deps = false;
  std::size_t min_words = 0;
  std::vector<std::string> content_upos;
};

void run_generate(const GenerateArgs& a, unsigned jobs) {
  Manifest m;
  m.command = "generate";
  GenOptions opts;
  opts.language = *parse_language(a.lang);
  opts.seed = a.seed;
  opts.n_variants = a.variants;
  opts.ignore_deprels = a.ignore_deprels;
  opts.drop_punct_deps = a.drop_punct_deps;
  opts.jobs = jobs;
  if (!a.content_upos.empty()) opts.content_upos = {a.content_upos.begin(), a.content_upos.end()};

  Treebank tb = load_treebank(m, a.treebank);
  if (a.min_words > 0) {
    const std::size_t before = tb.sentences.size();
    tb = filter_short(tb, a.min_words);
    log("dropped " + std::to_string(before - tb.sentences.size()) + " sentences shorter than " +
        std::to_string(a.min_words) + " words");
  }

  CandidatePool pool;
  if (!a.pool_cache.empty()) {
    std::istringstream in(m.input(a.pool_cache));
    try {
      pool = load_pool(in);
    } catch (const std::runtime_error& e) {
      throw DataError(a.pool_cache + ": " + e.what());
    }
    if (!(pool.options == opts.context_options()))
      throw UsageError("--pool-cache was built with different --ignore-deprels/--drop-punct-deps settings");
  } else {
    Treebank source = a.pool_from.empty() ? tb : load_treebank(m, a.pool_from);
    if (opts.language == Language::ar) strip_arabic_diacritics(source);
    pool = build_pools(source, opts.content_upos, opts.context_options());
  }
  log("pool: " + std::to_string(pool.contexts.size()) + " contexts, " + std::to_string(pool.attestations()) +
      " attestations");

  Lexicon lex;
  if (!a.lexicon.empty()) {
    std::istringstream in(m.input(a.lexicon));
    lex = load_udlexicon(in);
    if (lex.warnings > 0) log(a.lexicon + ": skipped " + std::to_string(lex.warnings) + " malformed rows");
  } else {
    lex = lexicon_from_treebank(a.pool_from.empty() ? tb : load_treebank(m, a.pool_from));
    log("no --lexicon given; inflecting from forms attested in the treebank");
  }
  PhonologyHints hints;
  if (!a.wiktextract.empty()) {
    std::istringstream in(m.input(a.wiktextract));
    auto w = load_wiktextract(in, a.lang);
    if (w.lexicon.warnings > 0) log(a.wiktextract + ": skipped " + std::to_string(w.lexicon.warnings) + " records");
    hints = std::move(w.hints);
  }

  m.config = {{"treebank", a.treebank},       {"pool_from", a.pool_from},
              {"pool_cache", a.pool_cache},   {"save_pool", a.save_pool},
              {"lexicon", a.lexicon},         {"wiktextract", a.wiktextract},
              {"lang", a.lang},               {"seed", a.seed},
              {"variants", a.variants},       {"ignore_deprels", a.ignore_deprels},
              {"drop_punct_deps", a.drop_punct_deps}, {"min_words", a.min_words},
              {"content_upos", opts.content_upos}, {"max_draws", opts.max_draws},
              {"out", a.out}};

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  if (!a.save_pool.empty()) {
    std::ostringstream ss;
    dump_pool(pool, ss);
    m.output(a.save_pool, ss.str());
  }

  std::string records = records_header();
  std::vector<ReplacementRecord> all;
  json per_variant = json::array();
  for (unsigned v = 0; v < a.variants; ++v) {
    GenerationResult res = generate(tb, pool, lex, hints, opts, v);
    m.output(dir / ("nonce-" + std::to_string(v) + ".conllu"), serialize(res.treebank));
    for (const auto& r : res.records) records += format_record(r);
    json jv = to_json(res.report);
    jv["variant"] = v;
    per_variant.push_back(jv);
    log("variant " + std::to_string(v) + ": replaced " + std::to_string(res.report.overall.replaced) + " of " +
        std::to_string(res.report.overall.total) + " tokens");
    all.insert(all.end(), std::make_move_iterator(res.records.begin()), std::make_move_iterator(res.records.end()));
  }
  m.output(dir / "records.tsv", records);
  const json report = {{"language", a.lang},
                       {"seed", a.seed},
                       {"sentences", tb.sentences.size()},
                       {"variants", per_variant},
                       {"combined", to_json(replacement_stats(all))}};
  m.output(dir / "report.json", dump(report));
  m.write(dir / "run-manifest.json");
}

// ---- stats ----------------------------------------------------------------------

void run_stats(const std::string& records_path, const std::string& out) {
  Manifest m;
  m.command = "stats";
  m.config = {{"records", records_path}, {"out", out}};
  std::istringstream in(m.input(records_path));
  std::vector<ReplacementRecord> recs;
  try {
    recs = parse_records(in);
  } catch (const std::exception& e) {
    throw DataError(records_path + ": " + e.what());
  }
  std::map<unsigned, std::vector<ReplacementRecord>> by_variant;
  for (const auto& r : recs) by_variant[r.variant].push_back(r);
  json per = json::array();
  for (const auto& [v, rs] : by_variant) {
    json j = to_json(replacement_stats(rs));
    j["variant"] = v;
    per.push_back(j);
  }
  emit(m, out, {{"variants", per}, {"combined", to_json(replacement_stats(recs))}});
}

// ---- score / ttr ----------------------------------------------------------------

std::vector<scoring::TokenScore> load_scores(Manifest& m, const std::string& path) {
  std::istringstream in(m.input(path));
  try {
    return scoring::load_token_scores(in);
  } catch (const scoring::FormatError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::map<std::string, std::string> sentence_texts(const Treebank& tb) {
  std::map<std::string, std::string> out;
  for (const auto& s : tb.sentences) out[s.sent_id] = s.text ? *s.text : detokenize(s);
  return out;
}

struct ScoreArgs {
  std::string records, out, orig_treebank, nonce_treebank;
  double threshold = 250.0;
  bool raw_nll = false;
  std::size_t extremes = 5;
};

void run_score(const ScoreArgs& a) {
  Manifest m;
  m.command = "score";
  m.config = {{"records", a.records},     {"out", a.out},         {"threshold", a.threshold},
              {"raw_nll", a.raw_nll},     {"extremes", a.extremes}, {"orig_treebank", a.orig_treebank},
              {"nonce_treebank", a.nonce_treebank}};
  const auto scores = load_scores(m, a.records);
  scoring::ReportOptions opts;
  opts.threshold = a.threshold;
  opts.raw_nll = a.raw_nll;
  opts.extremes_k = a.extremes;
  if (!a.orig_treebank.empty()) opts.orig_texts = sentence_texts(load_treebank(m, a.orig_treebank));
  if (!a.nonce_treebank.empty()) opts.nonce_texts = sentence_texts(load_treebank(m, a.nonce_treebank));
  json report;
  try {
    report = scoring::build_report(scores, opts);
  } catch (const std::invalid_argument& e) {
    throw DataError(a.records + ": " + e.what());
  }
  emit(m, a.out, report);
}

json ttr_json(const std::vector<std::string>& tokens) {
  std::set<std::string> types(tokens.begin(), tokens.end());
  return {{"tokens", tokens.size()}, {"types", types.size()}, {"ttr", tokens.empty() ? 0.0 : scoring::ttr(tokens)}};
}

void run_ttr(const std::vector<std::string>& treebanks, const std::string& records, const std::string& out) {
  Manifest m;
  m.command = "ttr";
  m.config = {{"treebank", treebanks}, {"records", records}, {"out", out}};
  json report = json::object();
  if (!records.empty()) {
    const auto scores = load_scores(m, records);
    std::set<std::pair<scoring::Regime, scoring::Variant>> seen;
    for (const auto& t : scores) seen.insert({t.regime, t.variant});
    for (const auto& [regime, variant] : seen) {
      std::vector<std::string> stream;
      try {
        stream = scoring::token_stream(scores, variant, regime);
      } catch (const std::invalid_argument& e) {
        throw DataError(records + ": " + e.what());
      }
      report[std::string(to_string(regime))][std::string(to_string(variant))] = ttr_json(stream);
    }
  } else {
    for (const auto& path : treebanks) {
      const Treebank tb = load_treebank(m, path);
      std::vector<std::string> forms;
      for (const auto& s : tb.sentences)
        for (const auto& t : s.tokens) forms.push_back(t.form);
      report[path] = ttr_json(forms);
    }
  }
  emit(m, out, report);
}

// ---- probe ----------------------------------------------------------------------

probe::ReprSet load_reprs(Manifest& m, const std::string& path) {
  std::istringstream in(m.input(path));
  try {
    return probe::read_reprs(in);
  } catch (const probe::BinaryFormatError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<probe::Example> examples(const Treebank& tb, const probe::ReprSet& dist, const probe::ReprSet& rel,
                                     const probe::LabelInventory& labels) {
  try {
    return probe::make_examples(tb, dist, rel, labels);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

json counts_json(const probe::MetricCounts& c) {
  return {{"tokens", c.tokens}, {"rel_acc", c.rel_acc()}, {"uas", c.uas_pct()}, {"las", c.las_pct()}};
}

struct ProbeTrainArgs {
  std::string reprs_dist, reprs_rel, treebank, dev_treebank, dev_reprs_dist, dev_reprs_rel, out, log_path;
  probe::TrainOptions opts;
  bool no_bias = false;
};

void run_probe_train(ProbeTrainArgs a) {
  Manifest m;
  m.command = "probe train";
  if (a.reprs_rel.empty()) a.reprs_rel = a.reprs_dist;
  if (a.dev_reprs_rel.empty()) a.dev_reprs_rel = a.dev_reprs_dist;
  a.opts.has_bias = !a.no_bias;
  if (a.dev_treebank.empty() != a.dev_reprs_dist.empty())
    throw UsageError("--dev-treebank and --dev-reprs-dist must be given together");
  m.config = {{"reprs_dist", a.reprs_dist},   {"reprs_rel", a.reprs_rel},         {"treebank", a.treebank},
              {"dev_treebank", a.dev_treebank}, {"dev_reprs_dist", a.dev_reprs_dist}, {"dev_reprs_rel", a.dev_reprs_rel},
              {"b_dim", a.opts.b},             {"lr", a.opts.lr},                 {"batch_size", a.opts.batch_size},
              {"epochs", a.opts.epochs},       {"patience", a.opts.patience},     {"decay_patience", a.opts.decay_patience},
              {"decay_factor", a.opts.decay_factor}, {"bias", a.opts.has_bias},  {"seed", a.opts.seed},
              {"out", a.out}};

  const Treebank tb = load_treebank(m, a.treebank);
  const auto dist = load_reprs(m, a.reprs_dist);
  const auto rel = a.reprs_rel == a.reprs_dist ? dist : load_reprs(m, a.reprs_rel);
  const auto labels = probe::LabelInventory::from_treebank(tb);
  const auto train_ex = examples(tb, dist, rel, labels);

  Treebank dev_tb;
  probe::ReprSet dev_dist, dev_rel;
  std::vector<probe::Example> dev_ex;
  if (!a.dev_treebank.empty()) {
    dev_tb = load_treebank(m, a.dev_treebank);
    dev_dist = load_reprs(m, a.dev_reprs_dist);
    dev_rel = a.dev_reprs_rel == a.dev_reprs_dist ? dev_dist : load_reprs(m, a.dev_reprs_rel);
    dev_ex = examples(dev_tb, dev_dist, dev_rel, labels);
  } else {
    log("no dev set; selecting epochs on training LAS");
  }
  if (a.opts.b >= dist.d_h) throw UsageError("--b-dim must be smaller than the representation width");

  json history = json::array();
  const auto res = probe::train(train_ex, dev_ex, labels, dist.d_h, a.opts, [&](const probe::EpochLog& e) {
    std::ostringstream ss;
    ss << "epoch " << e.epoch << " lr " << e.lr << " loss_rel " << e.loss_relation << " loss_dist " << e.loss_distance
       << " las " << e.dev_las;
    log(ss.str());
    history.push_back({{"epoch", e.epoch},
                       {"lr", e.lr},
                       {"loss_relation", e.loss_relation},
                       {"loss_distance", e.loss_distance},
                       {"selection_las", e.dev_las}});
  });
  std::ostringstream model;
  probe::write_params(model, res.params);
  m.output(a.out, model.str());
  if (!a.log_path.empty())
    m.output(a.log_path, dump({{"best_epoch", res.best_epoch}, {"best_las", res.best_dev_las}, {"history", history}}));
  m.write(a.out + ".run-manifest.json");
  log("best epoch " + std::to_string(res.best_epoch) + ", LAS " + std::to_string(res.best_dev_las));
}

struct ProbeEvalArgs {
  std::string model, reprs_dist, reprs_rel, treebank, out, pred_out;
  bool by_direction = false;
};

void run_probe_eval(ProbeEvalArgs a) {
  Manifest m;
  m.command = "probe eval";
  if (a.reprs_rel.empty()) a.reprs_rel = a.reprs_dist;
  m.config = {{"model", a.model},         {"reprs_dist", a.reprs_dist}, {"reprs_rel", a.reprs_rel},
              {"treebank", a.treebank},   {"out", a.out},               {"pred_out", a.pred_out},
              {"by_direction", a.by_direction}};
  probe::ProbeParams params;
  {
    std::istringstream in(m.input(a.model));
    try {
      params = probe::read_params(in);
    } catch (const probe::BinaryFormatError& e) {
      throw DataError(a.model + ": " + e.what());
    }
  }
  const Treebank tb = load_treebank(m, a.treebank);
  const auto dist = load_reprs(m, a.reprs_dist);
  const auto rel = a.reprs_rel == a.reprs_dist ? dist : load_reprs(m, a.reprs_rel);
  if (dist.d_h != params.d_h()) throw DataError("representation width does not match the model");
  const auto ex = examples(tb, dist, rel, params.labels);

  std::vector<probe::DecodedTree> pred;
  std::vector<probe::GoldTree> gold;
  for (const auto& e : ex) {
    pred.push_back(probe::predict(params, *e.h_dist, *e.h_rel));
    gold.push_back(e.gold);
  }
  const auto rep = probe::evaluate(pred, gold);
  json report = counts_json(rep.all);
  report["sentences"] = tb.sentences.size();
  if (a.by_direction)
    report["by_direction"] = {{"left", counts_json(rep.left)}, {"right", counts_json(rep.right)},
                              {"root", counts_json(rep.roots)}};

  if (!a.pred_out.empty()) {
    Treebank out = tb;
    for (std::size_t s = 0; s < out.sentences.size(); ++s)
      for (std::size_t i = 0; i < out.sentences[s].tokens.size(); ++i) {
        auto& t = out.sentences[s].tokens[i];
        t.head = pred[s].heads[i];
        t.deprel = params.labels.labels[static_cast<std::size_t>(pred[s].labels[i])];
        t.deps.reset();
      }
    m.output(a.pred_out, serialize(out));
  }
  emit(m, a.out, report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantically implausible (nonce) treebank generation, LM score ratios, and DepProbe probing."};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML file of option values; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  unsigned jobs = 1;
  app.add_option("--jobs,-j", jobs, "Worker threads (outputs do not depend on it)")->check(CLI::PositiveNumber);

  const std::vector<std::string> langs{"ar", "de", "en", "fr", "ru"};

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write nonce variants of a treebank");
  g->add_option("--treebank", gen.treebank, "Input CoNLL-U")->required()->check(CLI::ExistingFile);
  auto* pool_from = g->add_option("--pool-from", gen.pool_from, "Build candidate pools from this CoNLL-U instead")
                        ->check(CLI::ExistingFile);
  auto* pool_cache = g->add_option("--pool-cache", gen.pool_cache, "Load candidate pools saved with --save-pool")
                         ->check(CLI::ExistingFile);
  pool_from->excludes(pool_cache);
  g->add_option("--save-pool", gen.save_pool, "Write the candidate pools to this file");
  g->add_option("--lexicon", gen.lexicon, "UDLexicon-style TSV (form, lemma, upos, feats)")->check(CLI::ExistingFile);
  g->add_option("--wiktextract", gen.wiktextract, "Wiktextract JSONL for pronunciation hints")
      ->check(CLI::ExistingFile);
  g->add_option("--lang", gen.lang, "Language rules to apply")->check(CLI::IsMember(langs));
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--variants", gen.variants, "Number of nonce variants")->check(CLI::PositiveNumber);
  g->add_flag("--ignore-deprels", gen.ignore_deprels, "Contexts by UPOS only");
  g->add_flag("--drop-punct-deps", gen.drop_punct_deps, "Ignore punct dependents in contexts");
  g->add_option("--min-words", gen.min_words, "Drop sentences with fewer words");
  g->add_option("--content-upos", gen.content_upos, "UPOS tags to replace (default ADJ ADV NOUN PROPN VERB)");
  g->add_option("--out", gen.out, "Output directory")->required();

  std::string stats_records, stats_out;
  auto* st = app.add_subcommand("stats", "Replacement statistics from records.tsv");
  st->add_option("--records", stats_records, "records.tsv written by generate")->required()->check(CLI::ExistingFile);
  st->add_option("--out", stats_out, "Report path (default stdout)");

  ScoreArgs sc;
  auto* s = app.add_subcommand("score", "Score ratios, summaries and Wilcoxon tests from token log-probabilities");
  s->add_option("--records", sc.records, "Token-score JSONL")->required()->check(CLI::ExistingFile);
  s->add_option("--out", sc.out, "Report path (default stdout)");
  s->add_option("--threshold", sc.threshold, "Outlier threshold on r");
  s->add_flag("--raw-nll", sc.raw_nll, "Also report mean negative log-likelihoods");
  s->add_option("--extremes", sc.extremes, "Pairs listed at each end");
  s->add_option("--orig-treebank", sc.orig_treebank, "Original CoNLL-U, for texts in extremes")
      ->check(CLI::ExistingFile);
  s->add_option("--nonce-treebank", sc.nonce_treebank, "Nonce CoNLL-U, for texts in extremes")
      ->check(CLI::ExistingFile);

  std::vector<std::string> ttr_treebanks;
  std::string ttr_records, ttr_out;
  auto* t = app.add_subcommand("ttr", "Type-token ratio of treebank forms or scored token streams");
  auto* ttr_tb = t->add_option("--treebank", ttr_treebanks, "CoNLL-U file(s)")->check(CLI::ExistingFile);
  auto* ttr_rec = t->add_option("--records", ttr_records, "Token-score JSONL with token fields")
                      ->check(CLI::ExistingFile);
  ttr_tb->excludes(ttr_rec);
  t->add_option("--out", ttr_out, "Report path (default stdout)");

  auto* p = app.add_subcommand("probe", "DepProbe structural probe");
  p->require_subcommand(1);
  ProbeTrainArgs pt;
  auto* ptr = p->add_subcommand("train", "Train a probe");
  ptr->add_option("--reprs-dist", pt.reprs_dist, "SPUDREPR file for the distance component")
      ->required()
      ->check(CLI::ExistingFile);
  ptr->add_option("--reprs-rel", pt.reprs_rel, "SPUDREPR file for the relation component (default: --reprs-dist)")
      ->check(CLI::ExistingFile);
  ptr->add_option("--treebank", pt.treebank, "Training CoNLL-U")->required()->check(CLI::ExistingFile);
  ptr->add_option("--dev-treebank", pt.dev_treebank, "Development CoNLL-U")->check(CLI::ExistingFile);
  ptr->add_option("--dev-reprs,--dev-reprs-dist", pt.dev_reprs_dist, "Development SPUDREPR (distance)")
      ->check(CLI::ExistingFile);
  ptr->add_option("--dev-reprs-rel", pt.dev_reprs_rel, "Development SPUDREPR (relation)")->check(CLI::ExistingFile);
  ptr->add_option("--b-dim", pt.opts.b, "Subspace dimension b")->check(CLI::PositiveNumber);
  ptr->add_option("--lr", pt.opts.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  ptr->add_option("--batch-size", pt.opts.batch_size, "Sentences per batch")->check(CLI::PositiveNumber);
  ptr->add_option("--epochs", pt.opts.epochs, "Maximum epochs");
  ptr->add_option("--patience", pt.opts.patience, "Stop after this many epochs without LAS gain");
  ptr->add_option("--decay-patience", pt.opts.decay_patience, "Scale lr after this many epochs without gain");
  ptr->add_option("--decay-factor", pt.opts.decay_factor, "Learning-rate scale on plateau");
  ptr->add_flag("--no-bias", pt.no_bias, "Relation classifier without bias");
  ptr->add_option("--seed", pt.opts.seed, "Random seed");
  ptr->add_option("--out", pt.out, "Model path")->required();
  ptr->add_option("--log", pt.log_path, "Write per-epoch history JSON here");

  ProbeEvalArgs pe;
  auto* pev = p->add_subcommand("eval", "Decode and score against gold trees");
  pev->add_option("--model", pe.model, "Probe written by probe train")->required()->check(CLI::ExistingFile);
  pev->add_option("--reprs-dist", pe.reprs_dist, "SPUDREPR (distance)")->required()->check(CLI::ExistingFile);
  pev->add_option("--reprs-rel", pe.reprs_rel, "SPUDREPR (relation; default: --reprs-dist)")
      ->check(CLI::ExistingFile);
  pev->add_option("--treebank", pe.treebank, "Gold CoNLL-U")->required()->check(CLI::ExistingFile);
  pev->add_option("--out", pe.out, "Report path (default stdout)");
  pev->add_option("--pred-out", pe.pred_out, "Write predicted trees as CoNLL-U");
  pev->add_flag("--by-direction", pe.by_direction, "Split metrics by gold edge direction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*g) {
      run_generate(gen, jobs);
    } else if (*st) {
      run_stats(stats_records, stats_out);
    } else if (*s) {
      run_score(sc);
    } else if (*t) {
      if (ttr_treebanks.empty() && ttr_records.empty()) throw UsageError("ttr needs --treebank or --records");
      run_ttr(ttr_treebanks, ttr_records, ttr_out);
    } else if (*ptr) {
      run_probe_train(pt);
    } else if (*pev) {
      run_probe_eval(pe);
    }
  } catch (const UsageError& e) {
    std::cerr << "spud: " << e.what() << "\n";
    return 1;
  } catch (const spud::ParseError& e) {
    std::cerr << "spud: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "spud: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
