#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fgs/words.hpp"

namespace fgs {

// Symbol codes extend the letter codes by a terminal padding symbol with code
// 2p, modelling finite words as sequences ending in an infinite string of
// empty symbols.
inline std::uint8_t pad_symbol(Rank p) { return static_cast<std::uint8_t>(2 * p.p); }

using Block = std::vector<std::uint8_t>;  // symbol codes, position 0 first

// All admissible blocks of length len made of letters only.
std::vector<Block> pure_blocks(Rank p, int len);
// All admissible letter-initial blocks of length len with at least one
// trailing padding symbol (padding is suffix-closed). Excludes the all-pad
// block.
std::vector<Block> padded_blocks(Rank p, int len);

// 2p x 2p 0/1 transition matrix: A(a,b) = 0 iff b = a^-1.
Eigen::MatrixXd transition_matrix(Rank p);

// Topological entropy h = log(2p-1).
double entropy(Rank p);

// mu_0 of the cylinder of w: (2p)^-1 (2p-1)^-(n-1). Throws on the empty word.
double mu0_cylinder(Rank p, const Word& w);

// Depth-q locally constant weight on Sigma*: a table over admissible q-blocks
// with padding symbols allowed in the tail. Immutable after construction.
class WeightFunction {
 public:
  // Metric-tree displacement: depth-1 with f(a_i) = f(a_i^-1) = lengths[i-1].
  static WeightFunction tree(Rank p, std::span<const double> lengths, double theta = 0.5);
  static WeightFunction constant(Rank p, double c, int q = 1, double theta = 0.5);
  // entries keyed by block strings in the word text format ("a1.a2"); keys of
  // length q are the mandatory pure blocks, shorter keys override the values
  // on the corresponding pad-tailed blocks. Missing pure blocks are an error;
  // missing padded blocks default to the mean of f over their admissible
  // one-letter extensions (the conditional mu_0 average given the prefix).
  static WeightFunction from_entries(Rank p, int q,
                                     const std::vector<std::pair<std::string, double>>& entries,
                                     double theta = 0.5);

  Rank rank() const { return p_; }
  int depth() const { return q_; }
  double theta() const { return theta_; }

  // Value on a q-block given as symbol codes (shorter spans are pad-extended).
  double block_value(std::span<const std::uint8_t> symbols) const;
  // f at the point of Sigma* given by a finite-word suffix (pad-extended).
  double value_at(std::span<const Letter> suffix) const;

 private:
  WeightFunction(Rank p, int q, double theta) : p_(p), q_(q), theta_(theta) {}
  std::uint64_t key(std::span<const std::uint8_t> symbols) const;
  Rank p_;
  int q_;
  double theta_;
  std::vector<double> table_;  // dense over base-(2p+1) keys; NaN = inadmissible
  friend WeightFunction symmetrized_depth1(const WeightFunction& f);
};

// Tablewise symmetrisation (f(a)+f(a^-1))/2; depth-1 only.
WeightFunction symmetrized_depth1(const WeightFunction& f);

// Birkhoff sum f^n(w) over the padded suffixes of w; 0 for the empty word.
double birkhoff(const WeightFunction& f, const Word& w);

// max over |x| <= n_max of |f^n(x) - f^n(x^-1)|; 0 means the symmetry
// assumption holds on the tested range.
double check_symmetry_A2(const WeightFunction& f, Rank p, int n_max);

// Exact Lipschitz seminorm |f|_theta of a locally constant weight, taken over
// all letter-initial q-blocks including pad-tailed ones (blocks starting with
// the padding symbol are never evaluated and are excluded).
double holder_seminorm(const WeightFunction& f);

// Word of length n with the mu_0 marginal law on n-cylinders. Identical in
// law to sample_uniform_sphere.
Word sample_mu0_path(Rank p, int n, std::mt19937_64& rng);

// Parse a weight spec document:
//   {"kind": "tree", "lengths": [l1, ..., lp]}
//   {"kind": "table", "depth": q, "entries": [{"block": "a1.a2", "value": v}, ...]}
// Optional "theta" in either form.
WeightFunction parse_weight_spec(const std::string& json_text, Rank p);

}  // namespace fgs
