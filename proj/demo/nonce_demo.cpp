// Builds nonce variants of one English sentence using the bundled mini data.
//   spud_demo [DATA_DIR]

#include <fstream>
#include <iostream>
#include <string>

#include "spud/generator.hpp"

using namespace spud;

namespace {

const char* kSentence =
    "# sent_id = demo-1\n"
    "# text = The service was friendly and fast.\n"
    "1\tThe\tthe\tDET\t_\tDefinite=Def|PronType=Art\t2\tdet\t_\t_\n"
    "2\tservice\tservice\tNOUN\t_\tNumber=Sing\t4\tnsubj\t_\t_\n"
    "3\twas\tbe\tAUX\t_\tMood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin\t4\tcop\t_\t_\n"
    "4\tfriendly\tfriendly\tADJ\t_\tDegree=Pos\t0\troot\t_\t_\n"
    "5\tand\tand\tCCONJ\t_\t_\t6\tcc\t_\t_\n"
    "6\tfast\tfast\tADJ\t_\tDegree=Pos\t4\tconj\t_\tSpaceAfter=No\n"
    "7\t.\t.\tPUNCT\t_\t_\t4\tpunct\t_\t_\n\n";

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : SPUD_DEMO_DATA_DIR;
  try {
    Treebank source = parse_conllu(read_all(dir + "/en.conllu"), "en.conllu");
    const Treebank target = parse_conllu(kSentence, "demo");
    source.sentences.push_back(target.sentences.front());
    const auto pool = build_pools(source);
    const auto lexicon = load_udlexicon(dir + "/en.lexicon.tsv");
    const auto hints = load_wiktextract(dir + "/en.wiktextract.jsonl", "en").hints;

    std::cout << "original: " << *target.sentences.front().text << "\n";
    GenOptions opts;
    opts.language = Language::en;
    opts.seed = 42;
    for (unsigned v = 0; v < 5; ++v) {
      const auto res = generate(target, pool, lexicon, hints, opts, v);
      std::cout << "nonce " << v << ": " << *res.treebank.sentences.front().text << "\n";
      for (const auto& r : res.records)
        if (!r.replaced && r.failure_reason != FailureReason::not_content)
          std::cout << "    kept " << r.original_form << " (" << to_string(*r.failure_reason) << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "spud_demo: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
