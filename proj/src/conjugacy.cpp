#include "fgs/conjugacy.hpp"

namespace fgs {

ConjugacyClass ConjugacyClass::of(const Word& w) {
  if (w.empty()) throw std::invalid_argument("ConjugacyClass::of: trivial class");
  // Strip the conjugation shell u^-1 ... u.
  std::span<const Letter> ls = w.letters();
  std::size_t lo = 0, hi = ls.size();
  while (hi - lo >= 2 && ls[lo].cancels(ls[hi - 1])) {
    ++lo;
    --hi;
  }
  std::vector<Letter> core(ls.begin() + lo, ls.begin() + hi);
  if (core.empty()) throw std::invalid_argument("ConjugacyClass::of: trivial class");
  const std::size_t k = core.size();
  std::vector<Word> orbit;
  for (std::size_t r = 0; r < k; ++r) {
    std::vector<Letter> rot;
    rot.reserve(k);
    rot.insert(rot.end(), core.begin() + r, core.end());
    rot.insert(rot.end(), core.begin(), core.begin() + r);
    orbit.emplace_back(std::move(rot));
  }
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  Word rep = orbit.front();
  return ConjugacyClass(std::move(rep), std::move(orbit));
}

std::uint64_t restricted_sphere_size(Rank p, int m) {
  if (m < 0) throw std::invalid_argument("restricted_sphere_size: m < 0");
  if (m == 0) return 1;
  std::uint64_t s = static_cast<std::uint64_t>(2 * p.p - 2);
  for (int i = 1; i < m; ++i) s *= static_cast<std::uint64_t>(2 * p.p - 1);
  return s;
}

std::uint64_t class_sphere_size(const ConjugacyClass& c, Rank p, int m) {
  if (m < 0) throw std::invalid_argument("class_sphere_size: m < 0");
  if (m == 0) return c.orbit().size();
  return restricted_sphere_size(p, m) * c.orbit().size();
}

Word sample_uniform_class_sphere(const ConjugacyClass& c, Rank p, int m, std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("sample_uniform_class_sphere: m < 1");
  const Word& g = c.orbit()[uniform_below(rng, c.orbit().size())];
  const std::uint8_t ex0 = g.front().code;
  const std::uint8_t ex1 = g.back().inverse().code;
  std::vector<Letter> w;
  w.reserve(m);
  // first letter uniform over the 2p-2 allowed letters
  {
    std::uint64_t r = uniform_below(rng, 2 * p.p - 2);
    std::uint8_t c0 = 0;
    for (int code = 0;; ++code) {
      if (code == ex0 || code == ex1) continue;
      if (r == 0) {
        c0 = static_cast<std::uint8_t>(code);
        break;
      }
      --r;
    }
    w.push_back(Letter{c0});
  }
  for (int i = 1; i < m; ++i) {
    std::uint64_t r = uniform_below(rng, 2 * p.p - 1);
    std::uint8_t forbidden = w.back().inverse().code;
    w.push_back(Letter{static_cast<std::uint8_t>(r >= forbidden ? r + 1 : r)});
  }
  std::vector<Letter> x;
  x.reserve(g.length() + 2 * w.size());
  for (std::size_t i = w.size(); i > 0; --i) x.push_back(w[i - 1].inverse());
  x.insert(x.end(), g.letters().begin(), g.letters().end());
  x.insert(x.end(), w.begin(), w.end());
  return Word(std::move(x));
}

}  // namespace fgs
