#include "fgs/symbolic.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

namespace fgs {

namespace {

void blocks_rec(Rank p, int len, int letters, Block& buf, std::vector<Block>& out) {
  if (static_cast<int>(buf.size()) == letters) {
    Block b = buf;
    b.resize(len, pad_symbol(p));
    out.push_back(std::move(b));
    return;
  }
  for (int c = 0; c < p.alphabet_size(); ++c) {
    if (!buf.empty() && ((buf.back() ^ c) == 1)) continue;
    buf.push_back(static_cast<std::uint8_t>(c));
    blocks_rec(p, len, letters, buf, out);
    buf.pop_back();
  }
}

}  // namespace

std::vector<Block> pure_blocks(Rank p, int len) {
  std::vector<Block> out;
  Block buf;
  blocks_rec(p, len, len, buf, out);
  return out;
}

std::vector<Block> padded_blocks(Rank p, int len) {
  std::vector<Block> out;
  for (int letters = 1; letters < len; ++letters) {
    Block buf;
    blocks_rec(p, len, letters, buf, out);
  }
  return out;
}

Eigen::MatrixXd transition_matrix(Rank p) {
  const int a = p.alphabet_size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Ones(a, a);
  for (int i = 0; i < a; ++i) A(i, i ^ 1) = 0.0;
  return A;
}

double entropy(Rank p) { return std::log(2.0 * p.p - 1.0); }

double mu0_cylinder(Rank p, const Word& w) {
  if (w.empty())
    throw std::invalid_argument("mu0_cylinder: empty word (cylinder is the whole space)");
  const double n = static_cast<double>(w.length());
  return 1.0 / (2.0 * p.p) * std::pow(2.0 * p.p - 1.0, -(n - 1.0));
}

std::uint64_t WeightFunction::key(std::span<const std::uint8_t> symbols) const {
  const std::uint64_t base = static_cast<std::uint64_t>(2 * p_.p + 1);
  std::uint64_t k = 0, mult = 1;
  for (int i = 0; i < q_; ++i) {
    const std::uint8_t s = i < static_cast<int>(symbols.size()) ? symbols[i] : pad_symbol(p_);
    k += mult * s;
    mult *= base;
  }
  return k;
}

double WeightFunction::block_value(std::span<const std::uint8_t> symbols) const {
  const double v = table_[key(symbols)];
  if (std::isnan(v)) throw std::logic_error("WeightFunction: evaluated on inadmissible block");
  return v;
}

double WeightFunction::value_at(std::span<const Letter> suffix) const {
  std::uint8_t syms[8];
  const int n = std::min<int>(q_, static_cast<int>(suffix.size()));
  for (int i = 0; i < n; ++i) syms[i] = suffix[i].code;
  return block_value(std::span<const std::uint8_t>(syms, n));
}

WeightFunction WeightFunction::tree(Rank p, std::span<const double> lengths, double theta) {
  if (static_cast<int>(lengths.size()) != p.p)
    throw std::invalid_argument("tree weight: need exactly p edge lengths");
  for (double l : lengths)
    if (!(l > 0.0)) throw std::invalid_argument("tree weight: lengths must be positive");
  std::vector<std::pair<std::string, double>> entries;
  for (int i = 1; i <= p.p; ++i) {
    entries.emplace_back("a" + std::to_string(i), lengths[i - 1]);
    entries.emplace_back("A" + std::to_string(i), lengths[i - 1]);
  }
  return from_entries(p, 1, entries, theta);
}

WeightFunction WeightFunction::constant(Rank p, double c, int q, double theta) {
  std::vector<std::pair<std::string, double>> entries;
  for (const Block& b : pure_blocks(p, q)) {
    std::vector<Letter> ls;
    for (std::uint8_t s : b) ls.push_back(Letter{s});
    entries.emplace_back(to_string(Word(std::move(ls))), c);
  }
  return from_entries(p, q, entries, theta);
}

WeightFunction WeightFunction::from_entries(
    Rank p, int q, const std::vector<std::pair<std::string, double>>& entries, double theta) {
  if (q < 1 || q > 4) throw std::invalid_argument("WeightFunction: depth must be in 1..4");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("WeightFunction: theta must be in (0,1)");
  WeightFunction f(p, q, theta);
  const std::uint64_t base = static_cast<std::uint64_t>(2 * p.p + 1);
  std::uint64_t size = 1;
  for (int i = 0; i < q; ++i) size *= base;
  f.table_.assign(size, std::numeric_limits<double>::quiet_NaN());

  std::vector<std::vector<Block>> by_letters(q + 1);  // admissible blocks by letter count
  by_letters[q] = pure_blocks(p, q);
  {
    Block buf;
    for (int r = 1; r < q; ++r) blocks_rec(p, q, r, buf, by_letters[r]);
  }

  std::vector<bool> given(size, false);
  for (const auto& [block_text, value] : entries) {
    Word w = parse_word(block_text, p);  // validated reduced = admissible
    if (w.empty() || static_cast<int>(w.length()) > q)
      throw std::invalid_argument("WeightFunction: block '" + block_text +
                                  "' has bad length for depth " + std::to_string(q));
    std::uint8_t syms[8];
    for (std::size_t i = 0; i < w.length(); ++i) syms[i] = w[i].code;
    const std::uint64_t k = f.key(std::span<const std::uint8_t>(syms, w.length()));
    if (given[k])
      throw std::invalid_argument("WeightFunction: duplicate entry for block '" + block_text + "'");
    given[k] = true;
    f.table_[k] = value;
  }
  for (const Block& b : by_letters[q]) {
    if (!given[f.key(b)]) {
      std::vector<Letter> ls;
      for (std::uint8_t s : b) ls.push_back(Letter{s});
      throw std::invalid_argument("WeightFunction: missing entry for block '" +
                                  to_string(Word(std::move(ls))) + "'");
    }
  }
  // Pad-tailed blocks the user did not pin: conditional average over
  // one-letter extensions, filled from the deepest level down.
  for (int r = q - 1; r >= 1; --r) {
    for (const Block& b : by_letters[r]) {
      const std::uint64_t k = f.key(b);
      if (given[k]) continue;
      double sum = 0.0;
      int count = 0;
      Block ext(b.begin(), b.begin() + r);
      ext.push_back(0);
      for (int c = 0; c < p.alphabet_size(); ++c) {
        if ((ext[r - 1] ^ c) == 1) continue;
        ext[r] = static_cast<std::uint8_t>(c);
        sum += f.table_[f.key(ext)];
        ++count;
      }
      f.table_[k] = sum / count;
    }
  }
  return f;
}

WeightFunction symmetrized_depth1(const WeightFunction& f) {
  if (f.depth() != 1) throw std::invalid_argument("symmetrized_depth1: depth-1 weights only");
  WeightFunction g = f;
  for (int c = 0; c < f.rank().alphabet_size(); c += 2) {
    const double avg = 0.5 * (f.table_[c] + f.table_[c + 1]);
    g.table_[c] = avg;
    g.table_[c + 1] = avg;
  }
  return g;
}

double birkhoff(const WeightFunction& f, const Word& w) {
  double sum = 0.0;
  std::span<const Letter> ls = w.letters();
  for (std::size_t i = 0; i < ls.size(); ++i) sum += f.value_at(ls.subspan(i));
  return sum;
}

double check_symmetry_A2(const WeightFunction& f, Rank p, int n_max) {
  if (n_max < 1) throw std::invalid_argument("check_symmetry_A2: n_max < 1");
  double max_dev = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    for_each_sphere(p, n, [&](std::span<const Letter> ls) {
      Word x(ls);
      const double dev = std::abs(birkhoff(f, x) - birkhoff(f, invert(x)));
      if (dev > max_dev) max_dev = dev;
    });
  }
  return max_dev;
}

double holder_seminorm(const WeightFunction& f) {
  const Rank p = f.rank();
  const int q = f.depth();
  std::vector<Block> blocks = pure_blocks(p, q);
  std::vector<Block> padded = padded_blocks(p, q);
  blocks.insert(blocks.end(), padded.begin(), padded.end());
  std::vector<double> values(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) values[i] = f.block_value(blocks[i]);
  double best = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      int diff = -1;
      for (int t = 0; t < q; ++t) {
        if (blocks[i][t] != blocks[j][t]) {
          diff = t;
          break;
        }
      }
      if (diff < 0) continue;
      const double ratio = std::abs(values[i] - values[j]) / std::pow(f.theta(), diff);
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

Word sample_mu0_path(Rank p, int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("sample_mu0_path: n < 1");
  return sample_uniform_sphere(p, n, rng);
}

WeightFunction parse_weight_spec(const std::string& json_text, Rank p) {
  nlohmann::json spec = nlohmann::json::parse(json_text);
  const std::string kind = spec.at("kind").get<std::string>();
  const double theta = spec.value("theta", 0.5);
  if (kind == "tree") {
    std::vector<double> lengths = spec.at("lengths").get<std::vector<double>>();
    return WeightFunction::tree(p, lengths, theta);
  }
  if (kind == "table") {
    const int q = spec.at("depth").get<int>();
    std::vector<std::pair<std::string, double>> entries;
    for (const auto& e : spec.at("entries"))
      entries.emplace_back(e.at("block").get<std::string>(), e.at("value").get<double>());
    return WeightFunction::from_entries(p, q, entries, theta);
  }
  throw std::invalid_argument("weight spec: unknown kind '" + kind + "'");
}

}  // namespace fgs
