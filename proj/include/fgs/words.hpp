#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fgs {

// Generator rank p >= 2. The alphabet has 2p letters with codes
//   a_i   -> 2(i-1)
//   a_i^-1 -> 2(i-1)+1
// so the enumeration order is a1 < A1 < a2 < A2 < ... (capital = inverse).
struct Rank {
  int p;
  explicit Rank(int p_) : p(p_) {
    if (p < 2) throw std::invalid_argument("Rank: p must be >= 2");
  }
  int alphabet_size() const { return 2 * p; }
  friend bool operator==(Rank a, Rank b) { return a.p == b.p; }
};

struct Letter {
  std::uint8_t code = 0;

  static Letter make(int index, int sign) {
    if (index < 1 || (sign != 1 && sign != -1))
      throw std::invalid_argument("Letter: bad index or sign");
    return Letter{static_cast<std::uint8_t>(2 * (index - 1) + (sign < 0 ? 1 : 0))};
  }
  int index() const { return code / 2 + 1; }
  int sign() const { return (code & 1) ? -1 : 1; }
  Letter inverse() const { return Letter{static_cast<std::uint8_t>(code ^ 1)}; }
  // Two letters cancel iff same index, opposite sign.
  bool cancels(Letter other) const { return (code ^ other.code) == 1; }

  auto operator<=>(const Letter&) const = default;
};

inline bool is_reduced(std::span<const Letter> letters) {
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i].cancels(letters[i + 1])) return false;
  return true;
}

// A freely reduced word. The constructor rejects non-reduced input rather
// than silently reducing, so invariant breaches surface where they happen.
class Word {
 public:
  Word() = default;  // identity
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
    if (!is_reduced(letters_)) throw std::invalid_argument("Word: not reduced");
  }
  explicit Word(std::span<const Letter> letters)
      : Word(std::vector<Letter>(letters.begin(), letters.end())) {}

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<Letter> letters_;
};

inline bool is_cyclically_reduced(const Word& w) {
  if (w.empty()) return false;
  return is_reduced(w.letters()) && !w.front().cancels(w.back());
}

// Reduced product, cancelling at the junction.
Word multiply(const Word& u, const Word& v);
Word invert(const Word& w);

// #Gamma_n = 2p(2p-1)^(n-1) for n >= 1, 1 for n = 0.
std::uint64_t sphere_size(Rank p, int n);

// Text format: letters "a1", "A1" (capital = inverse) joined with '.',
// identity rendered "e".
std::string to_string(const Word& w);
Word parse_word(std::string_view text, Rank p);

// Deterministic bounded draw; avoids std::uniform_int_distribution so output
// is pinned by the engine alone.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

namespace detail {

template <class Fn>
void sphere_rec(int alphabet, int n, std::vector<Letter>& buf, Fn& fn) {
  if (static_cast<int>(buf.size()) == n) {
    fn(std::span<const Letter>(buf));
    return;
  }
  for (int c = 0; c < alphabet; ++c) {
    Letter l{static_cast<std::uint8_t>(c)};
    if (!buf.empty() && buf.back().cancels(l)) continue;
    buf.push_back(l);
    sphere_rec(alphabet, n, buf, fn);
    buf.pop_back();
  }
}

}  // namespace detail

// Streams every reduced word of length n exactly once, in lexicographic
// order over the letter codes. fn receives a span valid for the call only.
template <class Fn>
void for_each_sphere(Rank p, int n, Fn&& fn) {
  if (n < 0) throw std::invalid_argument("for_each_sphere: n < 0");
  std::vector<Letter> buf;
  buf.reserve(n);
  detail::sphere_rec(p.alphabet_size(), n, buf, fn);
}

// Shard of the sphere with a fixed reduced prefix; enables parallel
// consumption over disjoint prefixes.
template <class Fn>
void for_each_sphere_prefix(Rank p, int n, std::span<const Letter> prefix, Fn&& fn) {
  if (static_cast<int>(prefix.size()) > n)
    throw std::invalid_argument("for_each_sphere_prefix: prefix longer than n");
  if (!is_reduced(prefix)) throw std::invalid_argument("for_each_sphere_prefix: prefix not reduced");
  std::vector<Letter> buf(prefix.begin(), prefix.end());
  buf.reserve(n);
  detail::sphere_rec(p.alphabet_size(), n, buf, fn);
}

// Exactly uniform over Gamma_n: first letter uniform over 2p, each next
// uniform over the 2p-1 non-cancelling letters.
Word sample_uniform_sphere(Rank p, int n, std::mt19937_64& rng);

}  // namespace fgs
