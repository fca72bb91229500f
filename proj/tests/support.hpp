#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spud/conllu.hpp"
#include "spud/probe.hpp"
#include "spud/random.hpp"

#ifndef SPUD_DATA_DIR
#define SPUD_DATA_DIR "data"
#endif

namespace spud::test {

inline std::string data_path(const std::string& rel) { return std::string(SPUD_DATA_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& mini_languages() {
  static const std::vector<std::string> langs = {"ar", "de", "en", "fr", "ru"};
  return langs;
}

/// Random rooted tree on n nodes as 1-based heads (0 = root): a random
/// permutation where every node after the first hangs off an earlier one.
inline std::vector<int> random_heads(std::mt19937_64& rng, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
  spud::shuffle(perm, rng);
  std::vector<int> heads(static_cast<std::size_t>(n), 0);
  for (int k = 1; k < n; ++k) {
    const auto parent = perm[spud::uniform_index(rng, static_cast<std::size_t>(k))];
    heads[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)] - 1)] = parent;
  }
  return heads;
}

inline Sentence sentence_from_heads(const std::vector<int>& heads, const std::vector<std::string>& deprels,
                                    std::string id = "t") {
  Sentence s;
  s.sent_id = std::move(id);
  for (std::size_t i = 0; i < heads.size(); ++i) {
    Token t;
    t.id = static_cast<int>(i) + 1;
    t.form = "w" + std::to_string(i + 1);
    t.lemma = t.form;
    t.upos = "X";
    t.head = heads[i];
    t.deprel = heads[i] == 0 ? "root" : deprels[i];
    s.tokens.push_back(t);
  }
  return s;
}

/// All-pairs path lengths by Floyd-Warshall over the undirected tree.
inline std::vector<std::vector<int>> floyd_warshall(const std::vector<int>& heads) {
  const std::size_t n = heads.size();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    if (heads[i] > 0) {
      const auto h = static_cast<std::size_t>(heads[i] - 1);
      d[i][h] = d[h][i] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// "why does my snake refuse to eat ?" with its gold tree and distances.
struct SnakeExample {
  std::vector<std::string> words{"why", "does", "my", "snake", "refuse", "to", "eat", "?"};
  std::vector<int> heads{5, 5, 4, 5, 0, 7, 5, 5};
  std::vector<std::string> deprels{"advmod", "aux", "nmod", "nsubj", "root", "mark", "xcomp", "punct"};
  probe::LabelInventory labels{{"advmod", "aux", "mark", "nmod", "nsubj", "punct", "root", "xcomp"}, "root"};
  Eigen::MatrixXd distances() const {
    Eigen::MatrixXd d(8, 8);
    d << 0, 2, 3, 2, 1, 3, 2, 2,  //
        2, 0, 3, 2, 1, 3, 2, 2,   //
        3, 3, 0, 1, 2, 4, 3, 3,   //
        2, 2, 1, 0, 1, 3, 2, 2,   //
        1, 1, 2, 1, 0, 2, 1, 1,   //
        3, 3, 4, 3, 2, 0, 1, 3,   //
        2, 2, 3, 2, 1, 1, 0, 2,   //
        2, 2, 3, 2, 1, 3, 2, 0;
    return d;
  }
  /// One-hot gold label probabilities.
  Eigen::MatrixXd gold_probs() const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(8, labels.size());
    for (int i = 0; i < 8; ++i) p(i, *labels.index(deprels[static_cast<std::size_t>(i)])) = 1.0;
    return p;
  }
  std::vector<int> gold_label_ids() const {
    std::vector<int> out;
    for (const auto& d : deprels) out.push_back(*labels.index(d));
    return out;
  }
};

struct BruteWilcoxon {
  double w_plus = 0;
  double p_one = 1;
  double p_two = 1;
};

/// Enumerates all 2^n sign assignments of the average ranks of |d|.
inline BruteWilcoxon brute_wilcoxon(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = less + (equal + 1.0) / 2.0;
  }
  BruteWilcoxon out;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) out.w_plus += rank[i];
  std::uint64_t ge = 0, le = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) w += rank[i];
    if (w >= out.w_plus - 1e-9) ++ge;
    if (w <= out.w_plus + 1e-9) ++le;
  }
  out.p_one = static_cast<double>(ge) / static_cast<double>(total);
  out.p_two = std::min(1.0, 2.0 * static_cast<double>(std::min(ge, le)) / static_cast<double>(total));
  return out;
}

inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double sd = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = sd * spud::standard_normal(rng);
  return m;
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(rng, n, n));
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

struct ProbeInstance {
  probe::ProbeParams params;
  Eigen::MatrixXd h_dist;
  Eigen::MatrixXd h_rel;
  std::vector<int> labels;
  Eigen::MatrixXd d_p;
};

inline ProbeInstance random_probe_instance(std::mt19937_64& rng, int d_h, int b, int n_labels, int n) {
  ProbeInstance inst;
  probe::LabelInventory inv;
  for (int k = 0; k + 1 < n_labels; ++k) inv.labels.push_back("l" + std::to_string(k));
  inv.labels.push_back("root");
  inst.params = probe::init_params(d_h, b, inv, true, rng());
  inst.params.bias = gaussian_matrix(rng, n_labels, 1, 0.3);
  inst.h_dist = gaussian_matrix(rng, n, d_h);
  inst.h_rel = gaussian_matrix(rng, n, d_h);
  const auto heads = random_heads(rng, n);
  const auto fw = floyd_warshall(heads);
  inst.d_p.resize(n, n);
  for (int i = 0; i < n; ++i) {
    inst.labels.push_back(static_cast<int>(spud::uniform_index(rng, static_cast<std::size_t>(n_labels))));
    for (int j = 0; j < n; ++j) inst.d_p(i, j) = fw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return inst;
}

/// Max relative error between analytic and central-difference gradients,
/// |a - f| / max(1, |a|, |f|) entrywise, for the summed loss.
inline double gradient_check(const ProbeInstance& inst, double eps = 1e-5) {
  using probe::Matrix;
  const auto g = probe::gradients(inst.params, inst.h_dist, inst.h_rel, inst.labels, inst.d_p);
  auto total = [&](const probe::ProbeParams& p) {
    return probe::loss_relation(p, inst.h_rel, inst.labels) + probe::loss_distance(p, inst.h_dist, inst.d_p);
  };
  double worst = 0.0;
  auto check = [&](auto member, const auto& analytic) {
    probe::ProbeParams p = inst.params;
    auto& m = p.*member;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double orig = m(r, c);
        m(r, c) = orig + eps;
        const double up = total(p);
        m(r, c) = orig - eps;
        const double down = total(p);
        m(r, c) = orig;
        const double fd = (up - down) / (2.0 * eps);
        const double a = analytic(r, c);
        worst = std::max(worst, std::abs(a - fd) / std::max({1.0, std::abs(a), std::abs(fd)}));
      }
  };
  check(&probe::ProbeParams::L, g.dL);
  check(&probe::ProbeParams::B, g.dB);
  check(&probe::ProbeParams::bias, g.dbias);
  return worst;
}

/// Synthetic probing data with a planted syntactic subspace: each word's
/// tree position is a sum of orthogonal per-edge unit vectors inside a
/// b_true-dimensional block (randomly rotated per sentence), its relation is
/// one-hot in a second block, the remaining coordinates are nuisance noise,
/// and a global random orthogonal map mixes everything.
struct PlantedData {
  Treebank treebank;
  probe::ReprSet reprs;
  probe::LabelInventory labels;
};

inline PlantedData planted_data(std::uint64_t seed, int sentences, int d_h = 64, int b_true = 16, int n_rel = 8,
                                double noise = 0.02, double nuisance = 0.5, const std::string& prefix = "p") {
  std::mt19937_64 rng(seed);
  PlantedData out;
  for (int k = 0; k < n_rel; ++k) out.labels.labels.push_back("rel" + std::to_string(k));
  out.labels.labels.push_back("root");
  std::sort(out.labels.labels.begin(), out.labels.labels.end());
  out.reprs.d_h = d_h;
  std::mt19937_64 qrng(0x9e37);  // the mixing map is shared by every split
  const Eigen::MatrixXd q = random_orthogonal(qrng, d_h);
  const int label_base = b_true;
  const int nuisance_base = b_true + n_rel + 1;
  for (int s = 0; s < sentences; ++s) {
    const int n = 4 + static_cast<int>(spud::uniform_index(rng, static_cast<std::size_t>(b_true - 3)));
    const auto heads = random_heads(rng, n);
    std::vector<std::string> rels(static_cast<std::size_t>(n));
    for (auto& r : rels) r = "rel" + std::to_string(spud::uniform_index(rng, static_cast<std::size_t>(n_rel)));
    Sentence sent = sentence_from_heads(heads, rels, prefix + std::to_string(s));
    const Eigen::MatrixXd rot = random_orthogonal(rng, b_true);
    Eigen::VectorXd offset = gaussian_matrix(rng, b_true, 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, d_h);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd pos = Eigen::VectorXd::Zero(b_true);
      for (int w = i + 1; heads[static_cast<std::size_t>(w - 1)] != 0; w = heads[static_cast<std::size_t>(w - 1)])
        pos(w - 1) += 1.0;
      h.row(i).head(b_true) = (rot * pos + offset).transpose();
      const auto& t = sent.tokens[static_cast<std::size_t>(i)];
      const int lab = t.head == 0 ? n_rel : std::stoi(t.deprel.substr(3));
      h(i, label_base + lab) = 1.0;
      for (int c = nuisance_base; c < d_h; ++c) h(i, c) = nuisance * spud::standard_normal(rng);
    }
    h = h * q.transpose();
    h += gaussian_matrix(rng, n, d_h, noise);
    out.reprs.sentences.push_back({sent.sent_id, h});
    out.treebank.sentences.push_back(std::move(sent));
  }
  return out;
}

}  // namespace spud::test
