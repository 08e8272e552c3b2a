#pragma once

// Relation-aware recursive tree embedding and its projection layer.
//
// A leaf encodes to the mean of its token vectors. An internal node with
// relation r encodes to W^r [enc(left); emb(connective); enc(right)] + b^r.
// The root embedding is then projected by W2 (W1 v + b1) + b2.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logictree/diagnostics.hpp"
#include "logictree/error.hpp"
#include "logictree/logic_tree.hpp"
#include "logictree/taxonomy.hpp"

namespace logictree {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Token vectors of one fixed dimension, looked up case-insensitively.
template <typename Scalar = double>
class VectorTable {
 public:
  explicit VectorTable(Eigen::Index dim = 0) : dim_(dim) {}

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }

  /// The first vector added fixes the dimension when none was given.
  void add(std::string_view token, Vector<Scalar> v) {
    if (dim_ == 0) dim_ = v.size();
    if (v.size() != dim_) {
      throw ValidationError("vector for '" + std::string(token) + "' has length " +
                            std::to_string(v.size()) + ", expected " + std::to_string(dim_));
    }
    vectors_.insert_or_assign(to_lower(token), std::move(v));
  }

  const Vector<Scalar>* find(std::string_view token) const {
    const auto it = vectors_.find(to_lower(token));
    return it == vectors_.end() ? nullptr : &it->second;
  }

 private:
  Eigen::Index dim_;
  std::unordered_map<std::string, Vector<Scalar>> vectors_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline bool is_word2vec_header(const std::vector<std::string_view>& fields) {
  long a = 0;
  long b = 0;
  return fields.size() == 2 && parse_number(fields[0], a) && parse_number(fields[1], b);
}

}  // namespace detail

/// Reads "token v1 v2 ... vd" lines. A leading word2vec "count dim" header is skipped.
template <typename Scalar = double>
VectorTable<Scalar> parse_vectors(std::istream& in, const std::string& source = "vectors") {
  VectorTable<Scalar> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (line_no == 1 && detail::is_word2vec_header(fields)) continue;
    if (fields.size() < 2) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": token without a vector");
    }
    Vector<Scalar> v(static_cast<Eigen::Index>(fields.size() - 1));
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double x = 0;
      if (!detail::parse_number(fields[i], x)) {
        throw ValidationError(source + ":" + std::to_string(line_no) + ": bad number '" +
                              std::string(fields[i]) + "'");
      }
      v(static_cast<Eigen::Index>(i - 1)) = static_cast<Scalar>(x);
    }
    try {
      table.add(fields[0], std::move(v));
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (table.size() == 0) throw ValidationError(source + ": no vectors");
  return table;
}

template <typename Scalar = double>
VectorTable<Scalar> load_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return parse_vectors<Scalar>(in, path.string());
}

/// Mean of the token vectors. Unknown tokens count as zero vectors.
template <typename Scalar>
Vector<Scalar> leaf_embedding(const std::vector<std::string>& tokens,
                              const VectorTable<Scalar>& table,
                              Diagnostics* diagnostics = nullptr) {
  if (tokens.empty()) throw ValidationError("leaf_embedding: empty token list");
  Vector<Scalar> sum = Vector<Scalar>::Zero(table.dim());
  std::size_t found = 0;
  for (const auto& t : tokens) {
    if (const auto* v = table.find(t)) {
      sum += *v;
      ++found;
    }
  }
  if (found == 0) {
    std::string text;
    for (const auto& t : tokens) text += (text.empty() ? "" : " ") + t;
    warn(diagnostics, "no known token in '" + text + "'; using the zero vector");
  }
  return sum / static_cast<Scalar>(tokens.size());
}

template <typename Scalar = double>
struct EncoderParams {
  std::array<Matrix<Scalar>, kRelationCount> relation_weight;  // d x 3d each
  std::array<Vector<Scalar>, kRelationCount> relation_bias;    // d each
  Matrix<Scalar> proj1_weight;                                 // d' x d
  Vector<Scalar> proj1_bias;                                   // d'
  Matrix<Scalar> proj2_weight;                                 // d' x d'
  Vector<Scalar> proj2_bias;                                   // d'

  Eigen::Index dim() const { return proj1_weight.cols(); }
  Eigen::Index proj_dim() const { return proj1_weight.rows(); }

  /// All-zero parameters of the given shape.
  static EncoderParams zeros(Eigen::Index d, Eigen::Index d_prime) {
    EncoderParams p;
    for (std::size_t r = 0; r < kRelationCount; ++r) {
      p.relation_weight[r] = Matrix<Scalar>::Zero(d, 3 * d);
      p.relation_bias[r] = Vector<Scalar>::Zero(d);
    }
    p.proj1_weight = Matrix<Scalar>::Zero(d_prime, d);
    p.proj1_bias = Vector<Scalar>::Zero(d_prime);
    p.proj2_weight = Matrix<Scalar>::Zero(d_prime, d_prime);
    p.proj2_bias = Vector<Scalar>::Zero(d_prime);
    return p;
  }

  void validate() const {
    const auto d = dim();
    const auto dp = proj_dim();
    if (d <= 0 || dp <= 0) throw ValidationError("encoder dimensions must be positive");
    for (std::size_t r = 0; r < kRelationCount; ++r) {
      const auto name = std::string(to_string(kAllRelations[r]));
      if (relation_weight[r].rows() != d || relation_weight[r].cols() != 3 * d) {
        throw ValidationError("relation " + name + " weight is not d x 3d");
      }
      if (relation_bias[r].size() != d) throw ValidationError("relation " + name + " bias is not d");
    }
    if (proj1_bias.size() != dp || proj2_weight.rows() != dp || proj2_weight.cols() != dp ||
        proj2_bias.size() != dp) {
      throw ValidationError("projection shapes disagree with d'");
    }
  }

  bool operator==(const EncoderParams& o) const {
    for (std::size_t r = 0; r < kRelationCount; ++r) {
      if (relation_weight[r] != o.relation_weight[r] || relation_bias[r] != o.relation_bias[r]) {
        return false;
      }
    }
    return proj1_weight == o.proj1_weight && proj1_bias == o.proj1_bias &&
           proj2_weight == o.proj2_weight && proj2_bias == o.proj2_bias;
  }
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per matrix, zero biases.
template <typename Scalar = double>
EncoderParams<Scalar> init_params(std::uint64_t seed, Eigen::Index d, Eigen::Index d_prime) {
  if (d <= 0 || d_prime <= 0) throw ValidationError("encoder dimensions must be positive");
  std::mt19937_64 rng(seed);
  const auto fill = [&](Matrix<Scalar>& m) {
    const Scalar s = Scalar(1) / std::sqrt(static_cast<Scalar>(m.cols()));
    std::uniform_real_distribution<Scalar> dist(-s, s);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
    }
  };
  auto p = EncoderParams<Scalar>::zeros(d, d_prime);
  for (auto& w : p.relation_weight) fill(w);
  fill(p.proj1_weight);
  fill(p.proj2_weight);
  return p;
}

/// Each W^r = [I/3 | I/3 | I/3], projections identity, all biases zero.
template <typename Scalar = double>
EncoderParams<Scalar> averaging_params(Eigen::Index d) {
  auto p = EncoderParams<Scalar>::zeros(d, d);
  const Matrix<Scalar> third = Matrix<Scalar>::Identity(d, d) / Scalar(3);
  for (auto& w : p.relation_weight) w << third, third, third;
  p.proj1_weight.setIdentity();
  p.proj2_weight.setIdentity();
  return p;
}

/// Per-node record of a forward pass; `input` is the concatenated [l; c; r]
/// for internal nodes and empty for leaves.
template <typename Scalar>
struct EncoderTrace {
  std::vector<Vector<Scalar>> output;
  std::vector<Vector<Scalar>> input;
};

namespace detail {

template <typename Scalar>
void check_dims(const EncoderParams<Scalar>& params, const VectorTable<Scalar>& table) {
  if (params.dim() != table.dim()) {
    throw ValidationError("vector dimension " + std::to_string(table.dim()) +
                          " does not match encoder dimension " + std::to_string(params.dim()));
  }
}

template <typename Scalar>
const Vector<Scalar>& forward(const LogicTree& tree, NodeId id, const EncoderParams<Scalar>& params,
                              const VectorTable<Scalar>& table, EncoderTrace<Scalar>& trace,
                              Diagnostics* diagnostics) {
  const auto* in = tree.internal(id);
  if (in == nullptr) {
    trace.output[id] = leaf_embedding(tree.text(id), table, diagnostics);
    return trace.output[id];
  }
  const auto d = params.dim();
  Vector<Scalar> x(3 * d);
  x.segment(0, d) = forward(tree, in->left, params, table, trace, diagnostics);
  x.segment(d, d) = leaf_embedding(in->connective, table, diagnostics);
  x.segment(2 * d, d) = forward(tree, in->right, params, table, trace, diagnostics);
  const auto r = index_of(in->relation);
  trace.output[id] = params.relation_weight[r] * x + params.relation_bias[r];
  trace.input[id] = std::move(x);
  return trace.output[id];
}

}  // namespace detail

template <typename Scalar>
EncoderTrace<Scalar> encode_tree_traced(const LogicTree& tree, const EncoderParams<Scalar>& params,
                                        const VectorTable<Scalar>& table,
                                        Diagnostics* diagnostics = nullptr) {
  detail::check_dims(params, table);
  if (tree.size() == 0) throw ValidationError("cannot encode an empty tree");
  EncoderTrace<Scalar> trace;
  trace.output.resize(tree.size());
  trace.input.resize(tree.size());
  detail::forward(tree, tree.root(), params, table, trace, diagnostics);
  return trace;
}

template <typename Scalar>
Vector<Scalar> encode_tree(const LogicTree& tree, const EncoderParams<Scalar>& params,
                           const VectorTable<Scalar>& table, Diagnostics* diagnostics = nullptr) {
  return encode_tree_traced(tree, params, table, diagnostics).output[tree.root()];
}

/// W2 (W1 v + b1) + b2, with no nonlinearity.
template <typename Scalar>
Vector<Scalar> project(const Vector<Scalar>& v, const EncoderParams<Scalar>& params) {
  if (v.size() != params.dim()) {
    throw ValidationError("project: vector length " + std::to_string(v.size()) +
                          " does not match d = " + std::to_string(params.dim()));
  }
  return params.proj2_weight * (params.proj1_weight * v + params.proj1_bias) + params.proj2_bias;
}

/// Analytic gradient of sum(project(encode_tree(tree))) with respect to every
/// parameter, returned in the shape of the parameters.
template <typename Scalar>
EncoderParams<Scalar> loss_gradient(const LogicTree& tree, const EncoderParams<Scalar>& params,
                                    const VectorTable<Scalar>& table) {
  const auto trace = encode_tree_traced(tree, params, table);
  const auto d = params.dim();
  const auto dp = params.proj_dim();
  auto grad = EncoderParams<Scalar>::zeros(d, dp);

  const Vector<Scalar>& e = trace.output[tree.root()];
  const Vector<Scalar> ones = Vector<Scalar>::Ones(dp);
  const Vector<Scalar> h1 = params.proj1_weight * e + params.proj1_bias;
  grad.proj2_bias = ones;
  grad.proj2_weight = ones * h1.transpose();
  const Vector<Scalar> g1 = params.proj2_weight.transpose() * ones;
  grad.proj1_bias = g1;
  grad.proj1_weight = g1 * e.transpose();

  std::vector<std::pair<NodeId, Vector<Scalar>>> stack;
  stack.emplace_back(tree.root(), params.proj1_weight.transpose() * g1);
  while (!stack.empty()) {
    auto [id, g] = std::move(stack.back());
    stack.pop_back();
    const auto* in = tree.internal(id);
    if (in == nullptr) continue;
    const auto r = index_of(in->relation);
    grad.relation_weight[r] += g * trace.input[id].transpose();
    grad.relation_bias[r] += g;
    const Vector<Scalar> gx = params.relation_weight[r].transpose() * g;
    stack.emplace_back(in->left, gx.segment(0, d));
    stack.emplace_back(in->right, gx.segment(2 * d, d));
  }
  return grad;
}

struct GradProbe {
  std::string array;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double analytic = 0;
  double numeric = 0;
  double relative_error = 0;
};

struct GradCheckReport {
  std::vector<GradProbe> probes;
  double max_relative_error = 0;
};

namespace detail {

/// Named views over every parameter array, in file order.
template <typename P, typename F>
void for_each_array(P& params, F&& fn) {
  for (std::size_t r = 0; r < kRelationCount; ++r) {
    const auto name = "relation." + std::string(to_string(kAllRelations[r]));
    fn(name + ".weight", params.relation_weight[r]);
    fn(name + ".bias", params.relation_bias[r]);
  }
  fn(std::string("proj1.weight"), params.proj1_weight);
  fn(std::string("proj1.bias"), params.proj1_bias);
  fn(std::string("proj2.weight"), params.proj2_weight);
  fn(std::string("proj2.bias"), params.proj2_bias);
}

}  // namespace detail

/// Compares loss_gradient against central differences on `probe_count`
/// entries sampled from the arrays the tree actually touches (the relations
/// it uses plus both projection layers).
/// relative error = |a - n| / max(|a|, |n|, 1e-8)
template <typename Scalar>
GradCheckReport grad_check(const LogicTree& tree, const EncoderParams<Scalar>& params,
                           const VectorTable<Scalar>& table, Scalar epsilon,
                           std::size_t probe_count, std::uint64_t seed = 0) {
  if (!(epsilon > 0)) throw ValidationError("grad_check: epsilon must be positive");
  GradCheckReport report;
  if (probe_count == 0) return report;

  std::vector<bool> used(kRelationCount, false);
  for (const auto& n : tree.nodes()) {
    if (const auto* in = std::get_if<LogicInternal>(&n)) used[index_of(in->relation)] = true;
  }
  auto grad = loss_gradient(tree, params, table);

  struct Slot {
    std::string name;
    Eigen::Index rows;
    Eigen::Index cols;
  };
  std::vector<Slot> slots;
  std::size_t index = 0;
  detail::for_each_array(params, [&](const std::string& name, const auto& a) {
    const bool relation = index < 2 * kRelationCount;
    if (!relation || used[index / 2]) slots.push_back({name, a.rows(), a.cols()});
    ++index;
  });

  const auto loss = [&](const EncoderParams<Scalar>& p) {
    return static_cast<double>(project(encode_tree(tree, p, table), p).sum());
  };
  const auto entry = [](auto& p, const std::string& name, Eigen::Index i, Eigen::Index j) {
    Scalar* out = nullptr;
    detail::for_each_array(p, [&](const std::string& n, auto& a) {
      if (n == name) out = &a(i, j);
    });
    return out;
  };

  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < probe_count; ++k) {
    const auto& s = slots[std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng)];
    const auto i = std::uniform_int_distribution<Eigen::Index>(0, s.rows - 1)(rng);
    const auto j = std::uniform_int_distribution<Eigen::Index>(0, s.cols - 1)(rng);

    auto p = params;
    Scalar* x = entry(p, s.name, i, j);
    const Scalar saved = *x;
    *x = saved + epsilon;
    const double up = loss(p);
    *x = saved - epsilon;
    const double down = loss(p);

    GradProbe probe{s.name, i, j, static_cast<double>(*entry(grad, s.name, i, j)),
                    (up - down) / (2 * static_cast<double>(epsilon)), 0};
    probe.relative_error = std::abs(probe.analytic - probe.numeric) /
                           std::max({std::abs(probe.analytic), std::abs(probe.numeric), 1e-8});
    report.max_relative_error = std::max(report.max_relative_error, probe.relative_error);
    report.probes.push_back(std::move(probe));
  }
  return report;
}

inline constexpr std::string_view kParamsMagic = "logictree-encoder-params 1";

/// Text format: magic line, "dim d", "proj_dim d'", then per array a
/// "name rows cols" line followed by its values row by row.
template <typename Scalar>
void write_params(std::ostream& out, const EncoderParams<Scalar>& params) {
  params.validate();
  out << kParamsMagic << "\ndim " << params.dim() << "\nproj_dim " << params.proj_dim() << '\n';
  out << std::setprecision(17);
  detail::for_each_array(params, [&](const std::string& name, const auto& a) {
    out << name << ' ' << a.rows() << ' ' << a.cols() << '\n';
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        out << (j == 0 ? "" : " ") << static_cast<double>(a(i, j));
      }
      out << '\n';
    }
  });
}

template <typename Scalar = double>
EncoderParams<Scalar> read_params(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kParamsMagic) {
    throw ValidationError("not an encoder parameter file");
  }
  const auto read_dim = [&](std::string_view key) {
    std::string k;
    long v = 0;
    if (!(in >> k >> v) || k != key || v <= 0) {
      throw ValidationError("parameter file: expected '" + std::string(key) + " <positive>'");
    }
    return static_cast<Eigen::Index>(v);
  };
  const auto d = read_dim("dim");
  const auto dp = read_dim("proj_dim");
  auto params = EncoderParams<Scalar>::zeros(d, dp);
  detail::for_each_array(params, [&](const std::string& name, auto& a) {
    std::string n;
    long rows = 0;
    long cols = 0;
    if (!(in >> n >> rows >> cols) || n != name || rows != a.rows() || cols != a.cols()) {
      throw ValidationError("parameter file: expected array " + name + " " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        double v = 0;
        if (!(in >> v)) throw ValidationError("parameter file: truncated array " + name);
        a(i, j) = static_cast<Scalar>(v);
      }
    }
  });
  return params;
}

template <typename Scalar>
void save_params(const std::filesystem::path& path, const EncoderParams<Scalar>& params) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_params(out, params);
}

template <typename Scalar = double>
EncoderParams<Scalar> load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_params<Scalar>(in);
}

}  // namespace logictree
