#pragma once

// DepProbe: a relation classifier L and a distance projection B over word
// representations, trained jointly and decoded greedily into labeled trees.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spud/conllu.hpp"
#include "spud/random.hpp"

namespace spud::probe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---- representations --------------------------------------------------------

struct ReprSentence {
  std::string sent_id;
  Matrix h;  // n_words x d_h
};

struct ReprSet {
  int d_h = 0;
  std::vector<ReprSentence> sentences;

  const ReprSentence* find(std::string_view id) const {
    for (const auto& s : sentences)
      if (s.sent_id == id) return &s;
    return nullptr;
  }
};

struct BinaryFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io {

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
    throw BinaryFormatError(std::string("truncated file while reading ") + what);
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

inline void put_string16(std::ostream& out, std::string_view s) {
  if (s.size() > 0xFFFF) throw std::length_error("string too long for u16 length prefix");
  put<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string16(std::istream& in, const char* what) {
  const auto len = get<std::uint16_t>(in, what);
  std::string s(len, '\0');
  if (len > 0 && !in.read(s.data(), len)) throw BinaryFormatError(std::string("truncated file while reading ") + what);
  return s;
}

inline void expect_magic(std::istream& in, std::string_view magic) {
  char buf[8];
  if (!in.read(buf, 8) || std::string_view(buf, 8) != magic)
    throw BinaryFormatError("bad magic, expected " + std::string(magic));
}

inline void put_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) put<float>(out, static_cast<float>(m(r, c)));
}

inline Matrix get_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols, const char* what) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const float v = get<float>(in, what);
      if (!std::isfinite(v)) throw BinaryFormatError(std::string("non-finite value in ") + what);
      m(r, c) = v;
    }
  return m;
}

}  // namespace io

inline constexpr std::uint16_t repr_format_version = 1;
inline constexpr std::uint16_t probe_format_version = 1;

inline void write_reprs(std::ostream& out, const ReprSet& set) {
  out.write("SPUDREPR", 8);
  io::put<std::uint16_t>(out, repr_format_version);
  io::put<std::uint32_t>(out, static_cast<std::uint32_t>(set.d_h));
  for (const auto& s : set.sentences) {
    if (s.h.cols() != set.d_h) throw std::invalid_argument("representation width differs from d_h in " + s.sent_id);
    io::put_string16(out, s.sent_id);
    io::put<std::uint32_t>(out, static_cast<std::uint32_t>(s.h.rows()));
    io::put_matrix(out, s.h);
  }
}

inline ReprSet read_reprs(std::istream& in) {
  io::expect_magic(in, "SPUDREPR");
  const auto version = io::get<std::uint16_t>(in, "version");
  if (version != repr_format_version) throw BinaryFormatError("unsupported SPUDREPR version " + std::to_string(version));
  ReprSet set;
  set.d_h = static_cast<int>(io::get<std::uint32_t>(in, "d_h"));
  if (set.d_h <= 0) throw BinaryFormatError("d_h must be positive");
  std::set<std::string> seen;
  while (in.peek() != std::char_traits<char>::eof()) {
    ReprSentence s;
    s.sent_id = io::get_string16(in, "sent_id");
    if (!seen.insert(s.sent_id).second) throw BinaryFormatError("duplicate sent_id " + s.sent_id);
    const auto n = io::get<std::uint32_t>(in, "n_words");
    s.h = io::get_matrix(in, n, set.d_h, "representations");
    set.sentences.push_back(std::move(s));
  }
  return set;
}

// ---- labels and parameters --------------------------------------------------

struct LabelInventory {
  std::vector<std::string> labels;
  std::string root = "root";

  std::optional<int> index(std::string_view label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<int>(it - labels.begin());
  }
  int root_index() const {
    auto i = index(root);
    if (!i) throw std::logic_error("label inventory lacks the root label");
    return *i;
  }
  int size() const { return static_cast<int>(labels.size()); }

  /// Sorted relation labels of `tb` plus the root label.
  static LabelInventory from_treebank(const Treebank& tb, std::string root_label = "root") {
    std::set<std::string> all{root_label};
    for (const auto& s : tb.sentences)
      for (const auto& t : s.tokens) all.insert(t.head == 0 ? root_label : t.deprel);
    return {{all.begin(), all.end()}, std::move(root_label)};
  }
};

struct ProbeParams {
  Matrix L;     // l x d_h
  Vector bias;  // l (zero and frozen when has_bias is false)
  bool has_bias = true;
  Matrix B;  // b x d_h
  LabelInventory labels;

  int d_h() const { return static_cast<int>(B.cols()); }
  int b() const { return static_cast<int>(B.rows()); }
  int l() const { return static_cast<int>(L.rows()); }
};

/// Uniform entries in +-1/sqrt(d_h); the bias starts at zero.
inline ProbeParams init_params(int d_h, int b, LabelInventory labels, bool has_bias, std::uint64_t seed) {
  if (d_h <= 0 || b <= 0) throw std::invalid_argument("probe dimensions must be positive");
  if (b >= d_h) throw std::invalid_argument("subspace dimension b must be smaller than d_h");
  labels.root_index();
  ProbeParams p;
  p.has_bias = has_bias;
  p.labels = std::move(labels);
  std::mt19937_64 rng(mix64(seed));
  const double a = 1.0 / std::sqrt(static_cast<double>(d_h));
  auto fill = [&](Matrix& m, Eigen::Index rows) {
    m.resize(rows, d_h);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < d_h; ++c) m(r, c) = (2.0 * uniform01(rng) - 1.0) * a;
  };
  fill(p.L, p.labels.size());
  fill(p.B, b);
  p.bias = Vector::Zero(p.labels.size());
  return p;
}

inline void write_params(std::ostream& out, const ProbeParams& p) {
  out.write("SPUDPROB", 8);
  io::put<std::uint16_t>(out, probe_format_version);
  io::put<std::uint8_t>(out, p.has_bias ? 1 : 0);
  io::put<std::uint32_t>(out, static_cast<std::uint32_t>(p.d_h()));
  io::put<std::uint32_t>(out, static_cast<std::uint32_t>(p.b()));
  io::put<std::uint32_t>(out, static_cast<std::uint32_t>(p.l()));
  io::put_string16(out, p.labels.root);
  for (const auto& l : p.labels.labels) io::put_string16(out, l);
  io::put_matrix(out, p.L);
  io::put_matrix(out, p.bias.transpose());
  io::put_matrix(out, p.B);
}

inline ProbeParams read_params(std::istream& in) {
  io::expect_magic(in, "SPUDPROB");
  const auto version = io::get<std::uint16_t>(in, "version");
  if (version != probe_format_version) throw BinaryFormatError("unsupported SPUDPROB version " + std::to_string(version));
  ProbeParams p;
  p.has_bias = io::get<std::uint8_t>(in, "bias flag") != 0;
  const auto d_h = io::get<std::uint32_t>(in, "d_h");
  const auto b = io::get<std::uint32_t>(in, "b");
  const auto l = io::get<std::uint32_t>(in, "l");
  p.labels.root = io::get_string16(in, "root label");
  for (std::uint32_t i = 0; i < l; ++i) p.labels.labels.push_back(io::get_string16(in, "label"));
  if (!p.labels.index(p.labels.root)) throw BinaryFormatError("root label missing from inventory");
  p.L = io::get_matrix(in, l, d_h, "L");
  p.bias = io::get_matrix(in, 1, l, "bias").transpose();
  p.B = io::get_matrix(in, b, d_h, "B");
  return p;
}

// ---- forward ----------------------------------------------------------------

namespace detail {

inline void check_width(const ProbeParams& p, const Matrix& h) {
  if (h.cols() != p.d_h())
    throw std::invalid_argument("representation width " + std::to_string(h.cols()) + " does not match probe d_h " +
                                std::to_string(p.d_h()));
}

}  // namespace detail

/// Row i: softmax(L h_i + bias), max-shifted.
inline Matrix relation_probs(const ProbeParams& p, const Matrix& h) {
  detail::check_width(p, h);
  Matrix z = h * p.L.transpose();
  if (p.has_bias) z.rowwise() += p.bias.transpose();
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - m).exp().matrix();
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

/// d_B(i,j) = |B h_i - B h_j|.
inline Matrix subspace_distance(const ProbeParams& p, const Matrix& h) {
  detail::check_width(p, h);
  const Matrix proj = h * p.B.transpose();
  const Eigen::Index n = proj.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (proj.row(i) - proj.row(j)).norm();
  return d;
}

/// (1/N^2) sum_ij |d_P - d_B| for a sentence of N+1 words; 0 for one word.
inline double loss_distance(const Matrix& d_b, const Matrix& d_p) {
  if (d_b.rows() != d_p.rows() || d_b.cols() != d_p.cols() || d_b.rows() != d_b.cols())
    throw std::invalid_argument("loss_distance: size mismatch");
  const double big_n = static_cast<double>(d_b.rows()) - 1.0;
  if (big_n < 1.0) return 0.0;
  return (d_p - d_b).cwiseAbs().sum() / (big_n * big_n);
}

inline double loss_distance(const ProbeParams& p, const Matrix& h, const Matrix& d_p) {
  return loss_distance(subspace_distance(p, h), d_p);
}

/// Mean negative log-probability of the gold labels.
inline double loss_relation(const ProbeParams& p, const Matrix& h, const std::vector<int>& gold) {
  if (static_cast<Eigen::Index>(gold.size()) != h.rows()) throw std::invalid_argument("loss_relation: size mismatch");
  if (gold.empty()) return 0.0;
  const Matrix probs = relation_probs(p, h);
  double sum = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= p.l()) throw std::invalid_argument("loss_relation: unknown label");
    sum -= std::log(probs(static_cast<Eigen::Index>(i), gold[i]));
  }
  return sum / static_cast<double>(gold.size());
}

// ---- gradients ----------------------------------------------------------------

struct Gradients {
  Matrix dL;
  Vector dbias;
  Matrix dB;
  double loss_relation = 0;
  double loss_distance = 0;
};

/// Analytic gradients of loss_relation (w.r.t. L, bias) on `h_rel` and of
/// loss_distance (w.r.t. B) on `h_dist`. Pairs with d_B = 0 and pairs with
/// d_B = d_P contribute the zero subgradient.
inline Gradients gradients(const ProbeParams& p, const Matrix& h_dist, const Matrix& h_rel, const std::vector<int>& gold,
                           const Matrix& d_p) {
  Gradients g;
  const Eigen::Index n = h_rel.rows();
  if (h_dist.rows() != n || d_p.rows() != n || d_p.cols() != n || static_cast<Eigen::Index>(gold.size()) != n)
    throw std::invalid_argument("gradients: size mismatch");

  g.dL = Matrix::Zero(p.L.rows(), p.L.cols());
  g.dbias = Vector::Zero(p.l());
  if (n > 0) {
    Matrix delta = relation_probs(p, h_rel);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int y = gold[static_cast<std::size_t>(i)];
      if (y < 0 || y >= p.l()) throw std::invalid_argument("gradients: unknown label");
      g.loss_relation -= std::log(delta(i, y));
      delta(i, y) -= 1.0;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    g.loss_relation *= inv_n;
    g.dL = delta.transpose() * h_rel * inv_n;
    if (p.has_bias) g.dbias = delta.colwise().sum().transpose() * inv_n;
  }

  g.dB = Matrix::Zero(p.B.rows(), p.B.cols());
  if (n >= 2) {
    detail::check_width(p, h_dist);
    const Matrix proj = h_dist * p.B.transpose();  // n x b
    Matrix w = Matrix::Zero(n, n);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double d = (proj.row(i) - proj.row(j)).norm();
        const double diff = d - d_p(i, j);
        loss += std::abs(diff) + std::abs(d - d_p(j, i));
        if (d > 0.0) {
          const double s = (diff > 0) - (diff < 0) + ((d - d_p(j, i)) > 0) - ((d - d_p(j, i)) < 0);
          w(i, j) = w(j, i) = s / d;
        }
      }
    const double big_n = static_cast<double>(n) - 1.0;
    g.loss_distance = loss / (big_n * big_n);
    // sum_ij w_ij B (h_i - h_j)(h_i - h_j)^T = 2 B H^T (D - W) H, with the
    // ordered-pair sum folded into w (both directions share one weight slot).
    Matrix lap = -w;
    lap.diagonal() = w.rowwise().sum();
    g.dB = proj.transpose() * lap * h_dist / (big_n * big_n);
  }
  return g;
}

// ---- decoding -----------------------------------------------------------------

struct DecodedTree {
  std::vector<int> heads;   // 1-based heads, 0 for the root
  std::vector<int> labels;  // indices into the label inventory
};

/// Root: highest root-label probability. Then repeatedly attach the uncovered
/// word closest to the covered set to its nearest covered word. Ties go to
/// the lowest index. Non-root words take their best non-root label.
inline DecodedTree decode(const Matrix& rel_probs, const Matrix& dist, int root_label) {
  const Eigen::Index n = rel_probs.rows();
  if (n == 0) throw std::invalid_argument("decode: empty sentence");
  if (dist.rows() != n || dist.cols() != n) throw std::invalid_argument("decode: distance matrix size mismatch");
  if (root_label < 0 || root_label >= rel_probs.cols()) throw std::invalid_argument("decode: bad root label");
  if (n > 1 && rel_probs.cols() < 2) throw std::invalid_argument("decode: no non-root label available");

  DecodedTree t;
  t.heads.assign(static_cast<std::size_t>(n), 0);
  t.labels.assign(static_cast<std::size_t>(n), root_label);

  Eigen::Index root = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (rel_probs(i, root_label) > rel_probs(root, root_label)) root = i;

  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<Eigen::Index> attach(static_cast<std::size_t>(n), -1);
  auto cover = [&](Eigen::Index c) {
    covered[static_cast<std::size_t>(c)] = 1;
    for (Eigen::Index u = 0; u < n; ++u) {
      const auto ui = static_cast<std::size_t>(u);
      if (covered[ui]) continue;
      const double d = dist(u, c);
      if (d < best[ui] || (d == best[ui] && c < attach[ui]) || attach[ui] < 0) {
        best[ui] = d;
        attach[ui] = c;
      }
    }
  };
  cover(root);
  for (Eigen::Index step = 1; step < n; ++step) {
    Eigen::Index next = -1;
    for (Eigen::Index u = 0; u < n; ++u) {
      const auto ui = static_cast<std::size_t>(u);
      if (covered[ui]) continue;
      if (next < 0 || best[ui] < best[static_cast<std::size_t>(next)]) next = u;
    }
    t.heads[static_cast<std::size_t>(next)] = static_cast<int>(attach[static_cast<std::size_t>(next)]) + 1;
    cover(next);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == root) continue;
    int arg = -1;
    for (int k = 0; k < rel_probs.cols(); ++k) {
      if (k == root_label) continue;
      if (arg < 0 || rel_probs(i, k) > rel_probs(i, arg)) arg = k;
    }
    t.labels[static_cast<std::size_t>(i)] = arg;
  }
  return t;
}

// ---- metrics ------------------------------------------------------------------

struct MetricCounts {
  std::size_t tokens = 0;
  std::size_t rel = 0;  // correct incoming label
  std::size_t uas = 0;  // correct head
  std::size_t las = 0;  // both

  double rel_acc() const { return pct(rel); }
  double uas_pct() const { return pct(uas); }
  double las_pct() const { return pct(las); }
  double pct(std::size_t k) const {
    return tokens == 0 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(tokens);
  }
  MetricCounts& operator+=(const MetricCounts& o) {
    tokens += o.tokens;
    rel += o.rel;
    uas += o.uas;
    las += o.las;
    return *this;
  }
};

/// Overall counts plus a split by gold edge direction: left when the
/// dependent precedes its head. Gold roots are counted apart.
struct EvalReport {
  MetricCounts all;
  MetricCounts left;
  MetricCounts right;
  MetricCounts roots;
};

struct GoldTree {
  std::vector<int> heads;
  std::vector<int> labels;  // -1 for labels outside the inventory
};

inline GoldTree gold_tree(const Sentence& s, const LabelInventory& labels) {
  GoldTree g;
  for (const auto& t : s.tokens) {
    g.heads.push_back(t.head);
    g.labels.push_back(labels.index(t.head == 0 ? labels.root : t.deprel).value_or(-1));
  }
  return g;
}

inline EvalReport evaluate(const std::vector<DecodedTree>& pred, const std::vector<GoldTree>& gold) {
  if (pred.size() != gold.size()) throw std::invalid_argument("evaluate: sentence counts differ");
  EvalReport rep;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    const auto& p = pred[s];
    const auto& g = gold[s];
    if (p.heads.size() != g.heads.size() || p.labels.size() != g.labels.size() || p.heads.size() != p.labels.size())
      throw std::invalid_argument("evaluate: sentence " + std::to_string(s) + " lengths differ");
    for (std::size_t i = 0; i < p.heads.size(); ++i) {
      MetricCounts c;
      c.tokens = 1;
      c.rel = p.labels[i] == g.labels[i] ? 1 : 0;
      c.uas = p.heads[i] == g.heads[i] ? 1 : 0;
      c.las = c.rel & c.uas;
      rep.all += c;
      if (g.heads[i] == 0) {
        rep.roots += c;
      } else if (static_cast<int>(i) + 1 < g.heads[i]) {
        rep.left += c;
      } else {
        rep.right += c;
      }
    }
  }
  return rep;
}

// ---- training -----------------------------------------------------------------

struct Example {
  std::string sent_id;
  const Matrix* h_dist = nullptr;
  const Matrix* h_rel = nullptr;
  std::vector<int> labels;
  Matrix d_p;
  GoldTree gold;
};

/// Pairs the sentences of `tb` with their representations by sent_id.
inline std::vector<Example> make_examples(const Treebank& tb, const ReprSet& dist, const ReprSet& rel,
                                          const LabelInventory& labels) {
  if (dist.d_h != rel.d_h) throw std::invalid_argument("distance and relation representations differ in d_h");
  std::map<std::string_view, const ReprSentence*> by_dist, by_rel;
  for (const auto& s : dist.sentences) by_dist[s.sent_id] = &s;
  for (const auto& s : rel.sentences) by_rel[s.sent_id] = &s;
  std::vector<Example> out;
  for (const auto& s : tb.sentences) {
    auto d = by_dist.find(s.sent_id);
    auto r = by_rel.find(s.sent_id);
    if (d == by_dist.end() || r == by_rel.end())
      throw std::invalid_argument("no representations for sentence " + s.sent_id);
    const auto n = static_cast<Eigen::Index>(s.tokens.size());
    if (d->second->h.rows() != n || r->second->h.rows() != n)
      throw std::invalid_argument("representation count differs from word count in " + s.sent_id);
    Example e;
    e.sent_id = s.sent_id;
    e.h_dist = &d->second->h;
    e.h_rel = &r->second->h;
    e.gold = gold_tree(s, labels);
    e.labels = e.gold.labels;
    const auto dp = path_distance_matrix(s);
    e.d_p.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        e.d_p(i, j) = dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    out.push_back(std::move(e));
  }
  return out;
}

inline DecodedTree predict(const ProbeParams& p, const Matrix& h_dist, const Matrix& h_rel) {
  return decode(relation_probs(p, h_rel), subspace_distance(p, h_dist), p.labels.root_index());
}

inline EvalReport evaluate(const ProbeParams& p, const std::vector<Example>& data) {
  std::vector<DecodedTree> pred;
  std::vector<GoldTree> gold;
  for (const auto& e : data) {
    pred.push_back(predict(p, *e.h_dist, *e.h_rel));
    gold.push_back(e.gold);
  }
  return evaluate(pred, gold);
}

struct TrainOptions {
  int b = 128;
  double lr = 1e-3;
  std::size_t batch_size = 32;
  int epochs = 30;
  int patience = 5;           // epochs without dev LAS improvement before stopping
  int decay_patience = 2;     // epochs without improvement before lr is scaled
  double decay_factor = 0.5;
  bool has_bias = true;
  std::uint64_t seed = 0;
};

struct EpochLog {
  int epoch = 0;
  double loss_relation = 0;
  double loss_distance = 0;
  double dev_las = 0;
  double lr = 0;
};

struct TrainResult {
  ProbeParams params;
  int best_epoch = 0;  // 0 = initialization
  double best_dev_las = 0;
  std::vector<EpochLog> history;
};

namespace detail {

struct Adam {
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long t = 0;
  Matrix mL, vL, mB, vB;
  Vector mb, vb;

  explicit Adam(const ProbeParams& p)
      : mL(Matrix::Zero(p.L.rows(), p.L.cols())),
        vL(mL),
        mB(Matrix::Zero(p.B.rows(), p.B.cols())),
        vB(mB),
        mb(Vector::Zero(p.bias.size())),
        vb(mb) {}

  template <class P, class G, class M>
  void step(P& param, const G& grad, M& m, M& v, double lr) {
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }

  void update(ProbeParams& p, const Gradients& g, double lr) {
    ++t;
    step(p.L, g.dL, mL, vL, lr);
    step(p.B, g.dB, mB, vB, lr);
    if (p.has_bias) step(p.bias, g.dbias, mb, vb, lr);
  }
};

}  // namespace detail

/// Minibatch Adam on the unweighted sum of both losses (each averaged over
/// the batch's sentences). Returns the parameters of the epoch with the best
/// LAS on `dev`, or on `train` when `dev` is empty.
inline TrainResult train(const std::vector<Example>& train_set, const std::vector<Example>& dev, LabelInventory labels,
                         int d_h, const TrainOptions& opts,
                         const std::function<void(const EpochLog&)>& on_epoch = {}) {
  if (train_set.empty()) throw std::invalid_argument("train: empty dataset");
  if (opts.batch_size == 0) throw std::invalid_argument("train: batch size must be positive");
  ProbeParams p = init_params(d_h, opts.b, std::move(labels), opts.has_bias, opts.seed);
  const auto& select = dev.empty() ? train_set : dev;

  TrainResult res;
  res.params = p;
  res.best_dev_las = evaluate(p, select).all.las_pct();
  if (opts.epochs <= 0) return res;

  detail::Adam adam(p);
  std::mt19937_64 rng(mix64(opts.seed ^ 0x5bd1e995ULL));
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  double lr = opts.lr;
  int since_best = 0, since_decay = 0;

  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    shuffle(order, rng);
    EpochLog log;
    log.epoch = epoch;
    log.lr = lr;
    for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + opts.batch_size);
      Gradients acc;
      acc.dL = Matrix::Zero(p.L.rows(), p.L.cols());
      acc.dbias = Vector::Zero(p.bias.size());
      acc.dB = Matrix::Zero(p.B.rows(), p.B.cols());
      for (std::size_t k = start; k < end; ++k) {
        const auto& e = train_set[order[k]];
        const Gradients g = gradients(p, *e.h_dist, *e.h_rel, e.labels, e.d_p);
        acc.dL += g.dL;
        acc.dbias += g.dbias;
        acc.dB += g.dB;
        log.loss_relation += g.loss_relation;
        log.loss_distance += g.loss_distance;
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      acc.dL *= inv;
      acc.dbias *= inv;
      acc.dB *= inv;
      adam.update(p, acc, lr);
    }
    log.loss_relation /= static_cast<double>(train_set.size());
    log.loss_distance /= static_cast<double>(train_set.size());
    log.dev_las = evaluate(p, select).all.las_pct();
    res.history.push_back(log);
    if (on_epoch) on_epoch(log);

    if (log.dev_las > res.best_dev_las) {
      res.best_dev_las = log.dev_las;
      res.best_epoch = epoch;
      res.params = p;
      since_best = since_decay = 0;
    } else {
      ++since_best;
      if (++since_decay >= opts.decay_patience) {
        lr *= opts.decay_factor;
        since_decay = 0;
      }
      if (since_best >= opts.patience) break;
    }
  }
  return res;
}

}  // namespace spud::probe
