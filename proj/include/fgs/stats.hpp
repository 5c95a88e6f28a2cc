#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fgs/conjugacy.hpp"
#include "fgs/symbolic.hpp"

namespace fgs {

// Raised when an experiment requires sigma_f^2 > 0 but the weight is
// cohomologous to a constant (operationalised as sigma^2 <= 1e-8).
struct DegenerateWeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SampleMode { exact, sampled };

// F(x) over the population of C_{k+2m} (or Gamma_n), either the full
// enumeration or uniform draws.
struct Sample {
  std::vector<double> values;
  int n = 0;  // normalising length: k+2m or n
  SampleMode mode = SampleMode::exact;
  std::uint64_t seed = 0;   // sampled mode only
  std::uint64_t count = 0;  // sampled mode only
};

// Mean, population variance (divide by N) and standardized third absolute
// moment, via compensated summation.
struct EmpiricalSummary {
  double mean = 0.0;
  double variance = 0.0;
  double third_abs = 0.0;
};

EmpiricalSummary summarize(const Sample& s);

Sample collect_class_sample(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                            SampleMode mode, std::uint64_t count, std::uint64_t seed,
                            std::uint64_t enumeration_cap = 10'000'000);

Sample collect_sphere_sample(Rank p, const WeightFunction& f, int n, SampleMode mode,
                             std::uint64_t count, std::uint64_t seed,
                             std::uint64_t enumeration_cap = 10'000'000);

struct MeanConvergenceRow {
  int m = 0;
  double normalized_mean = 0.0;  // mean F / (k+2m)
  double deviation = 0.0;        // |normalized_mean - lambda|
};

struct MeanConvergence {
  double lambda = 0.0;
  std::vector<MeanConvergenceRow> rows;
};

MeanConvergence mean_convergence(const ConjugacyClass& c, Rank p, const WeightFunction& f,
                                 const std::vector<int>& m_list, SampleMode mode,
                                 std::uint64_t count, std::uint64_t seed,
                                 std::uint64_t enumeration_cap = 10'000'000);

// Normal CDF with the given mean and variance (std::erfc based, absolute
// error well below 1e-7).
double normal_cdf(double y, double mean, double variance);

// Two-sided KS sup-distance of the values against Normal(mean, variance),
// evaluated at the sorted points.
double ks_statistic(std::vector<double> values, double mean, double variance);

struct CdfRow {
  double y = 0.0;
  double empirical = 0.0;
  double reference = 0.0;
};

// Standardizes F as (F - (k+2m) lambda) / sqrt(k+2m) and compares against
// Normal(0, 2 sigma^2).
struct CltResult {
  double ks = 0.0;
  double sigma2 = 0.0;  // the unrestricted variance sigma_f^2
  double lambda = 0.0;
  EmpiricalSummary standardized;
  std::vector<CdfRow> cdf;
};

CltResult clt_experiment(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                         SampleMode mode, std::uint64_t count, std::uint64_t seed,
                         const std::vector<double>& grid,
                         std::uint64_t enumeration_cap = 10'000'000);

// Empirical Var of F over C_{k+2m} divided by empirical Var over
// Gamma_{k+2m}; the class sphere is collected in the requested mode, the
// full sphere is always sampled. Expected -> 2.
struct VarianceRatio {
  double var_class = 0.0;
  double var_sphere = 0.0;
  double ratio = 0.0;
};

VarianceRatio variance_ratio(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                             SampleMode mode, std::uint64_t count, std::uint64_t seed,
                             std::uint64_t enumeration_cap = 10'000'000);

struct CharFnRow {
  double t = 0.0;
  std::complex<double> phi;
  double deviation = 0.0;  // |phi - e^{-sigma^2 t^2}|
};

std::vector<CharFnRow> characteristic_function(const ConjugacyClass& c, Rank p,
                                               const WeightFunction& f, int m,
                                               const std::vector<double>& t_list, SampleMode mode,
                                               std::uint64_t count, std::uint64_t seed,
                                               std::uint64_t enumeration_cap = 10'000'000);

}  // namespace fgs
