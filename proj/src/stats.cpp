#include "fgs/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fgs/thermo.hpp"

namespace fgs {

namespace {

// Kahan-compensated accumulator; reductions stay order-independent enough
// for byte-stable CSV output.
struct CompensatedSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

void require_nondegenerate(double sigma2) {
  if (!(sigma2 > 1e-8)) throw DegenerateWeightError("degenerate weight");
}

}  // namespace

EmpiricalSummary summarize(const Sample& s) {
  if (s.values.empty()) throw std::invalid_argument("summarize: empty sample");
  const double n = static_cast<double>(s.values.size());
  CompensatedSum acc;
  for (double v : s.values) acc.add(v);
  const double mean = acc.sum / n;
  CompensatedSum m2, m3;
  for (double v : s.values) {
    const double d = v - mean;
    m2.add(d * d);
    m3.add(std::abs(d * d * d));
  }
  EmpiricalSummary out;
  out.mean = mean;
  out.variance = m2.sum / n;
  const double sd = std::sqrt(out.variance);
  out.third_abs = sd > 0.0 ? m3.sum / n / (sd * sd * sd) : 0.0;
  return out;
}

Sample collect_class_sample(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                            SampleMode mode, std::uint64_t count, std::uint64_t seed,
                            std::uint64_t enumeration_cap) {
  Sample s;
  s.n = c.k() + 2 * m;
  s.mode = mode;
  if (mode == SampleMode::exact) {
    const std::uint64_t size = class_sphere_size(c, p, m);
    if (size > enumeration_cap) throw EnumerationCapError("enumeration cap exceeded");
    s.values.reserve(size);
    for_each_class_sphere(c, p, m, [&](const Word& x) { s.values.push_back(birkhoff(f, x)); });
  } else {
    if (count < 1000) throw std::invalid_argument("sampled mode needs count >= 1000");
    s.seed = seed;
    s.count = count;
    std::mt19937_64 rng(seed);
    s.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
      s.values.push_back(birkhoff(f, sample_uniform_class_sphere(c, p, m, rng)));
  }
  return s;
}

Sample collect_sphere_sample(Rank p, const WeightFunction& f, int n, SampleMode mode,
                             std::uint64_t count, std::uint64_t seed,
                             std::uint64_t enumeration_cap) {
  Sample s;
  s.n = n;
  s.mode = mode;
  if (mode == SampleMode::exact) {
    const std::uint64_t size = sphere_size(p, n);
    if (size > enumeration_cap) throw EnumerationCapError("enumeration cap exceeded");
    s.values.reserve(size);
    for_each_sphere(p, n,
                    [&](std::span<const Letter> ls) { s.values.push_back(birkhoff(f, Word(ls))); });
  } else {
    if (count < 1000) throw std::invalid_argument("sampled mode needs count >= 1000");
    s.seed = seed;
    s.count = count;
    std::mt19937_64 rng(seed);
    s.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
      s.values.push_back(birkhoff(f, sample_uniform_sphere(p, n, rng)));
  }
  return s;
}

MeanConvergence mean_convergence(const ConjugacyClass& c, Rank p, const WeightFunction& f,
                                 const std::vector<int>& m_list, SampleMode mode,
                                 std::uint64_t count, std::uint64_t seed,
                                 std::uint64_t enumeration_cap) {
  if (m_list.empty()) throw std::invalid_argument("mean_convergence: empty m list");
  MeanConvergence out;
  out.lambda = lambda_exact(f);
  for (int m : m_list) {
    Sample s = collect_class_sample(c, p, f, m, mode, count, seed + m, enumeration_cap);
    MeanConvergenceRow row;
    row.m = m;
    row.normalized_mean = summarize(s).mean / s.n;
    row.deviation = std::abs(row.normalized_mean - out.lambda);
    out.rows.push_back(row);
  }
  return out;
}

double normal_cdf(double y, double mean, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("normal_cdf: variance must be positive");
  return 0.5 * std::erfc(-(y - mean) / std::sqrt(2.0 * variance));
}

double ks_statistic(std::vector<double> values, double mean, double variance) {
  if (values.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  if (!(variance > 0.0)) throw std::invalid_argument("ks_statistic: variance must be positive");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double phi = normal_cdf(values[i], mean, variance);
    ks = std::max(ks, std::max(std::abs((i + 1) / n - phi), std::abs(phi - i / n)));
  }
  return ks;
}

CltResult clt_experiment(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                         SampleMode mode, std::uint64_t count, std::uint64_t seed,
                         const std::vector<double>& grid, std::uint64_t enumeration_cap) {
  CltResult out;
  out.sigma2 = sigma2_green_kubo(f);
  require_nondegenerate(out.sigma2);
  out.lambda = lambda_exact(f);
  Sample s = collect_class_sample(c, p, f, m, mode, count, seed, enumeration_cap);
  const double scale = std::sqrt(static_cast<double>(s.n));
  std::vector<double> z(s.values.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (s.values[i] - s.n * out.lambda) / scale;
  out.ks = ks_statistic(z, 0.0, 2.0 * out.sigma2);
  {
    Sample zs;
    zs.values = z;
    zs.n = s.n;
    out.standardized = summarize(zs);
  }
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  for (double y : grid) {
    CdfRow row;
    row.y = y;
    row.empirical = std::upper_bound(z.begin(), z.end(), y) - z.begin();
    row.empirical /= n;
    row.reference = normal_cdf(y, 0.0, 2.0 * out.sigma2);
    out.cdf.push_back(row);
  }
  return out;
}

VarianceRatio variance_ratio(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                             SampleMode mode, std::uint64_t count, std::uint64_t seed,
                             std::uint64_t enumeration_cap) {
  require_nondegenerate(sigma2_green_kubo(f));
  const int n = c.k() + 2 * m;
  Sample cls = collect_class_sample(c, p, f, m, mode, count, seed, enumeration_cap);
  Sample sph = collect_sphere_sample(p, f, n, SampleMode::sampled, std::max<std::uint64_t>(count, 1000),
                                     seed + 1, enumeration_cap);
  VarianceRatio out;
  out.var_class = summarize(cls).variance;
  out.var_sphere = summarize(sph).variance;
  out.ratio = out.var_class / out.var_sphere;
  return out;
}

std::vector<CharFnRow> characteristic_function(const ConjugacyClass& c, Rank p,
                                               const WeightFunction& f, int m,
                                               const std::vector<double>& t_list, SampleMode mode,
                                               std::uint64_t count, std::uint64_t seed,
                                               std::uint64_t enumeration_cap) {
  const double sigma2 = sigma2_green_kubo(f);
  require_nondegenerate(sigma2);
  const double lambda = lambda_exact(f);
  Sample s = collect_class_sample(c, p, f, m, mode, count, seed, enumeration_cap);
  const double scale = std::sqrt(static_cast<double>(s.n));
  std::vector<CharFnRow> out;
  for (double t : t_list) {
    CompensatedSum re, im;
    for (double v : s.values) {
      const double phase = t * (v - s.n * lambda) / scale;
      re.add(std::cos(phase));
      im.add(std::sin(phase));
    }
    const double n = static_cast<double>(s.values.size());
    CharFnRow row;
    row.t = t;
    row.phi = {re.sum / n, im.sum / n};
    row.deviation = std::abs(row.phi - std::complex<double>(std::exp(-sigma2 * t * t), 0.0));
    out.push_back(row);
  }
  return out;
}

}  // namespace fgs
