#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fgs/words.hpp"

namespace fgs {

struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A non-trivial conjugacy class, held as its canonical cyclically reduced
// representative (the lexicographically minimal rotation) together with the
// set of distinct cyclic rotations.
class ConjugacyClass {
 public:
  // Cyclically reduces w, then canonicalises. Throws on the identity.
  static ConjugacyClass of(const Word& w);

  const Word& representative() const { return representative_; }
  int k() const { return static_cast<int>(representative_.length()); }
  // Distinct cyclic rotations, sorted lexicographically. Size divides k and
  // is < k exactly for proper powers.
  const std::vector<Word>& orbit() const { return orbit_; }

  friend bool operator==(const ConjugacyClass& a, const ConjugacyClass& b) {
    return a.representative_ == b.representative_;
  }

 private:
  ConjugacyClass(Word rep, std::vector<Word> orbit)
      : representative_(std::move(rep)), orbit_(std::move(orbit)) {}
  Word representative_;
  std::vector<Word> orbit_;
};

// #Gamma_m(g) = (2p-2)(2p-1)^(m-1) for m >= 1, 1 for m = 0.
std::uint64_t restricted_sphere_size(Rank p, int m);

// #C_{k+2m} = (2p-2)(2p-1)^(m-1) #C_k for m >= 1; m = 0 gives #orbit.
std::uint64_t class_sphere_size(const ConjugacyClass& c, Rank p, int m);

// Gamma_m(g): reduced words of length m whose first letter avoids g_1 and
// g_k^{-1}. Lexicographic order.
template <class Fn>
void for_each_restricted_sphere(Rank p, const Word& g, int m, Fn&& fn) {
  if (!is_cyclically_reduced(g))
    throw std::invalid_argument("for_each_restricted_sphere: g not cyclically reduced");
  if (m < 0) throw std::invalid_argument("for_each_restricted_sphere: m < 0");
  if (m == 0) {
    fn(std::span<const Letter>());
    return;
  }
  const std::uint8_t ex0 = g.front().code;
  const std::uint8_t ex1 = g.back().inverse().code;
  std::vector<Letter> buf;
  buf.reserve(m);
  for (int c = 0; c < p.alphabet_size(); ++c) {
    if (c == ex0 || c == ex1) continue;
    buf.push_back(Letter{static_cast<std::uint8_t>(c)});
    detail::sphere_rec(p.alphabet_size(), m, buf, fn);
    buf.pop_back();
  }
}

// Streams every x in C_{k+2m} exactly once via the (g, w) bijection
// x = w^-1 g w, outer loop over the orbit, inner over Gamma_m(g), both
// lexicographic.
template <class Fn>
void for_each_class_sphere(const ConjugacyClass& c, Rank p, int m, Fn&& fn) {
  if (m == 0) {
    for (const Word& g : c.orbit()) fn(g);
    return;
  }
  for (const Word& g : c.orbit()) {
    for_each_restricted_sphere(p, g, m, [&](std::span<const Letter> w) {
      std::vector<Letter> x;
      x.reserve(g.length() + 2 * w.size());
      for (std::size_t i = w.size(); i > 0; --i) x.push_back(w[i - 1].inverse());
      x.insert(x.end(), g.letters().begin(), g.letters().end());
      x.insert(x.end(), w.begin(), w.end());
      fn(Word(std::move(x)));  // reduced with no cancellation by w_1 != g_1, g_k^-1
    });
  }
}

// Exactly uniform over C_{k+2m} via uniform (g, w) pairs.
Word sample_uniform_class_sphere(const ConjugacyClass& c, Rank p, int m, std::mt19937_64& rng);

}  // namespace fgs
