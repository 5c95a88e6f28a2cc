#include "fgs/words.hpp"

#include <charconv>

namespace fgs {

Word multiply(const Word& u, const Word& v) {
  std::span<const Letter> a = u.letters();
  std::span<const Letter> b = v.letters();
  std::size_t i = a.size(), j = 0;
  while (i > 0 && j < b.size() && a[i - 1].cancels(b[j])) {
    --i;
    ++j;
  }
  std::vector<Letter> out;
  out.reserve(i + b.size() - j);
  out.insert(out.end(), a.begin(), a.begin() + i);
  out.insert(out.end(), b.begin() + j, b.end());
  return Word(std::move(out));
}

Word invert(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.length());
  for (std::size_t i = w.length(); i > 0; --i) out.push_back(w[i - 1].inverse());
  return Word(std::move(out));
}

std::uint64_t sphere_size(Rank p, int n) {
  if (n < 0) throw std::invalid_argument("sphere_size: n < 0");
  if (n == 0) return 1;
  std::uint64_t s = static_cast<std::uint64_t>(2 * p.p);
  for (int i = 1; i < n; ++i) s *= static_cast<std::uint64_t>(2 * p.p - 1);
  return s;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i > 0) out.push_back('.');
    out.push_back(w[i].sign() > 0 ? 'a' : 'A');
    out += std::to_string(w[i].index());
  }
  return out;
}

Word parse_word(std::string_view text, Rank p) {
  if (text == "e") return Word();
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view tok = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
    if (tok.size() < 2 || (tok[0] != 'a' && tok[0] != 'A'))
      throw std::invalid_argument("parse_word: bad letter token '" + std::string(tok) + "'");
    int index = 0;
    auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), index);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || index < 1 || index > p.p)
      throw std::invalid_argument("parse_word: bad generator index in '" + std::string(tok) + "'");
    letters.push_back(Letter::make(index, tok[0] == 'a' ? 1 : -1));
    pos = dot == std::string_view::npos ? text.size() : dot + 1;
  }
  return Word(std::move(letters));  // rejects non-reduced input
}

Word sample_uniform_sphere(Rank p, int n, std::mt19937_64& rng) {
  if (n < 0) throw std::invalid_argument("sample_uniform_sphere: n < 0");
  std::vector<Letter> letters;
  letters.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      letters.push_back(Letter{static_cast<std::uint8_t>(uniform_below(rng, 2 * p.p))});
    } else {
      // skip over the cancelling letter
      std::uint64_t r = uniform_below(rng, 2 * p.p - 1);
      std::uint8_t forbidden = letters.back().inverse().code;
      std::uint8_t c = static_cast<std::uint8_t>(r >= forbidden ? r + 1 : r);
      letters.push_back(Letter{c});
    }
  }
  return Word(std::move(letters));
}

}  // namespace fgs
