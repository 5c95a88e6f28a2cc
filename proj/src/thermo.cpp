#include "fgs/thermo.hpp"

#include <cmath>
#include <unordered_map>

namespace fgs {

namespace {

std::uint64_t block_key(Rank p, std::span<const std::uint8_t> b) {
  const std::uint64_t base = static_cast<std::uint64_t>(2 * p.p + 1);
  std::uint64_t k = 0, mult = 1;
  for (std::uint8_t s : b) {
    k += mult * s;
    mult *= base;
  }
  return k;
}

// chi_g: 0 on states whose first symbol is g_1 or g_k^-1, else 1. The
// pad-initial (empty-word) state gets 1.
Eigen::VectorXd chi_vector(const std::vector<Block>& states, const Word& g) {
  const std::uint8_t ex0 = g.front().code;
  const std::uint8_t ex1 = g.back().inverse().code;
  Eigen::VectorXd chi(static_cast<int>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::uint8_t s0 = states[i][0];
    chi(static_cast<int>(i)) = (s0 == ex0 || s0 == ex1) ? 0.0 : 1.0;
  }
  return chi;
}

}  // namespace

template <class Scalar>
TransferMatrix<Scalar> build_transfer_matrix(const WeightFunction& f, Scalar s) {
  const Rank p = f.rank();
  const int q = f.depth();
  const int L = std::max(q - 1, 1);

  TransferMatrix<Scalar> tm{p, q, L, {}, 0, 0, {}};
  tm.states = pure_blocks(p, L);
  tm.n_pure = static_cast<int>(tm.states.size());
  {
    std::vector<Block> padded = padded_blocks(p, L);
    tm.states.insert(tm.states.end(), padded.begin(), padded.end());
  }
  tm.states.push_back(Block(L, pad_symbol(p)));
  tm.empty_index = static_cast<int>(tm.states.size()) - 1;

  std::unordered_map<std::uint64_t, int> index;
  for (std::size_t i = 0; i < tm.states.size(); ++i)
    index[block_key(p, tm.states[i])] = static_cast<int>(i);

  const int n = static_cast<int>(tm.states.size());
  tm.M.setZero(n, n);
  Block fblock(q), next(L);
  for (int iu = 0; iu < n; ++iu) {
    const Block& u = tm.states[iu];
    const bool at_empty = u[0] == pad_symbol(p);
    for (int b = 0; b < p.alphabet_size(); ++b) {
      if (!at_empty && ((u[0] ^ b) == 1)) continue;  // b would cancel with u_0
      fblock[0] = static_cast<std::uint8_t>(b);
      for (int t = 1; t < q; ++t) fblock[t] = u[t - 1];
      next[0] = static_cast<std::uint8_t>(b);
      for (int t = 1; t < L; ++t) next[t] = u[t - 1];
      const int ju = index.at(block_key(p, next));
      tm.M(iu, ju) += std::exp(s * f.block_value(fblock));
    }
  }
  return tm;
}

template TransferMatrix<double> build_transfer_matrix<double>(const WeightFunction&, double);
template TransferMatrix<std::complex<double>> build_transfer_matrix<std::complex<double>>(
    const WeightFunction&, std::complex<double>);

PerronData perron(const TransferMatrix<double>& tm) {
  const int n = static_cast<int>(tm.states.size());
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(n, 1.0 / n);
  Eigen::VectorXd nu = Eigen::VectorXd::Constant(n, 1.0 / n);
  const double tol = 1e-12;
  const int max_iter = 100000;
  double beta = 0.0;
  bool converged = false;
  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    Eigen::VectorXd v = tm.M * psi;
    psi = v / v.sum();
    Eigen::VectorXd w = tm.M.transpose() * nu;
    nu = w / w.sum();
    if (iter % 4 == 3) {
      Eigen::VectorXd mpsi = tm.M * psi;
      beta = nu.dot(mpsi) / nu.dot(psi);
      const double r1 = (mpsi - beta * psi).lpNorm<Eigen::Infinity>();
      const double r2 = (tm.M.transpose() * nu - beta * nu).lpNorm<Eigen::Infinity>();
      converged = r1 <= tol * beta && r2 <= tol * beta;
    }
  }
  if (!converged) throw std::runtime_error("spectral iteration failed");
  nu /= nu.sum();
  psi /= nu.dot(psi);

  // Second-eigenvalue estimate: power iteration on the deflated matrix.
  Eigen::VectorXd x(n);
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < n; ++i) {
    h ^= h >> 12;
    h *= 0x2545f4914f6cdd1dULL;
    h ^= h << 25;
    x(i) = static_cast<double>(h % 1000003) / 1000003.0 - 0.5;
  }
  x -= psi * nu.dot(x);
  double log_growth = 0.0;
  const int warmup = 60, window = 40;
  for (int iter = 0; iter < warmup + window; ++iter) {
    Eigen::VectorXd y = tm.M * x - (beta * nu.dot(x)) * psi;
    const double norm = y.norm();
    if (norm == 0.0) {
      log_growth = -1e9;
      break;
    }
    x = y / norm;
    if (iter >= warmup) log_growth += std::log(norm);
  }
  const double lambda2 = std::exp(log_growth / window);

  PerronData pd;
  pd.beta = beta;
  pd.psi = std::move(psi);
  pd.nu = std::move(nu);
  pd.gap = lambda2 / beta;
  return pd;
}

SpectralDecomposition spectral_decomposition(const TransferMatrix<double>& tm,
                                             const PerronData& pd) {
  SpectralDecomposition sd;
  sd.projection = pd.psi * pd.nu.transpose();
  sd.remainder = tm.M - pd.beta * sd.projection;
  return sd;
}

double pressure(const WeightFunction& f, double t) {
  return std::log(perron(build_transfer_matrix(f, t)).beta);
}

double lambda_exact(const WeightFunction& f) {
  const Rank p = f.rank();
  const int q = f.depth();
  const double weight =
      1.0 / (2.0 * p.p) * std::pow(2.0 * p.p - 1.0, -(static_cast<double>(q) - 1.0));
  double sum = 0.0;
  for (const Block& b : pure_blocks(p, q)) sum += f.block_value(b) * weight;
  return sum;
}

double lambda_fd(const WeightFunction& f) {
  const double h = 1e-4;
  auto central = [&](double step) {
    return (pressure(f, step) - pressure(f, -step)) / (2.0 * step);
  };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

double sigma2_fd(const WeightFunction& f) {
  const double h = 1e-3;
  const double p0 = pressure(f, 0.0);
  auto central2 = [&](double step) {
    return (pressure(f, step) - 2.0 * p0 + pressure(f, -step)) / (step * step);
  };
  return (4.0 * central2(h / 2.0) - central2(h)) / 3.0;
}

double sigma2_green_kubo(const WeightFunction& f) {
  const Rank p = f.rank();
  const int q = f.depth();
  const std::vector<Block> blocks = pure_blocks(p, q);
  const int n = static_cast<int>(blocks.size());
  std::unordered_map<std::uint64_t, int> index;
  for (int i = 0; i < n; ++i) index[block_key(p, blocks[i])] = i;

  // q-block Markov chain under mu_0: stationary weights are uniform over the
  // admissible blocks, each step appends one of the 2p-1 allowed letters.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  const double step_prob = 1.0 / (2.0 * p.p - 1.0);
  Block next(q);
  for (int i = 0; i < n; ++i) {
    const Block& b = blocks[i];
    for (int c = 0; c < p.alphabet_size(); ++c) {
      if ((b[q - 1] ^ c) == 1) continue;
      for (int t = 0; t + 1 < q; ++t) next[t] = b[t + 1];
      next[q - 1] = static_cast<std::uint8_t>(c);
      Q(i, index.at(block_key(p, next))) += step_prob;
    }
  }

  const double pi = 1.0 / n;  // each admissible q-block has equal mu_0 mass
  Eigen::VectorXd fv(n);
  for (int i = 0; i < n; ++i) fv(i) = f.block_value(blocks[i]);
  const double mean = pi * fv.sum();
  Eigen::VectorXd v0 = fv.array() - mean;
  const double var = pi * v0.squaredNorm();

  double sigma2 = var;
  Eigen::VectorXd v = v0;
  const double tol = 1e-14;
  for (int j = 1; j <= 100000; ++j) {
    v = Q * v;
    const double cov = pi * v0.dot(v);
    sigma2 += 2.0 * cov;
    if (std::abs(cov) < tol) return sigma2;
  }
  throw std::runtime_error("sigma2_green_kubo: autocovariance series did not converge");
}

std::complex<double> weighted_restricted_sum(const WeightFunction& f, const Word& g, int m,
                                             std::complex<double> s) {
  if (!is_cyclically_reduced(g))
    throw std::invalid_argument("weighted_restricted_sum: g not cyclically reduced");
  if (m < 0) throw std::invalid_argument("weighted_restricted_sum: m < 0");
  TransferMatrix<std::complex<double>> tm = build_transfer_matrix(f, s);
  Eigen::VectorXcd v = chi_vector(tm.states, g).cast<std::complex<double>>();
  for (int i = 0; i < m; ++i) v = tm.M * v;
  return v(tm.empty_index);
}

double weighted_restricted_sum(const WeightFunction& f, const Word& g, int m, double s) {
  if (!is_cyclically_reduced(g))
    throw std::invalid_argument("weighted_restricted_sum: g not cyclically reduced");
  if (m < 0) throw std::invalid_argument("weighted_restricted_sum: m < 0");
  TransferMatrix<double> tm = build_transfer_matrix(f, s);
  Eigen::VectorXd v = chi_vector(tm.states, g);
  for (int i = 0; i < m; ++i) v = tm.M * v;
  return v(tm.empty_index);
}

EtaCoefficient eta_coefficient(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                               std::complex<double> s, EtaMode mode,
                               std::uint64_t enumeration_cap) {
  EtaCoefficient out;
  if (mode == EtaMode::exact) {
    if (class_sphere_size(c, p, m) > enumeration_cap)
      throw EnumerationCapError("enumeration cap exceeded");
    std::complex<double> sum = 0.0;
    for_each_class_sphere(c, p, m, [&](const Word& x) { sum += std::exp(s * birkhoff(f, x)); });
    out.value = sum;
    out.kappa_envelope = 0.0;
    return out;
  }
  std::complex<double> sum = 0.0;
  double magnitude = 0.0;
  for (const Word& g : c.orbit()) {
    const double fg = birkhoff(f, g);
    sum += std::exp(s * fg) * weighted_restricted_sum(f, g, m, 2.0 * s);
    magnitude += std::exp(s.real() * fg) * weighted_restricted_sum(f, g, m, 2.0 * s.real());
  }
  out.value = sum;
  out.kappa_envelope = std::expm1(std::abs(s) * kappa_bound(f)) * magnitude;
  return out;
}

double kappa_exact(const WeightFunction& f, const Word& g, const Word& w) {
  if (!is_cyclically_reduced(g)) throw std::invalid_argument("kappa_exact: g not cyclically reduced");
  if (!w.empty() &&
      (w.front() == g.front() || w.front() == g.back().inverse()))
    throw std::invalid_argument("kappa_exact: w not in Gamma_m(g)");
  const Word wi = invert(w);
  const Word x = multiply(wi, multiply(g, w));
  return birkhoff(f, x) - birkhoff(f, w) - birkhoff(f, g) - birkhoff(f, wi);
}

double kappa_bound(const WeightFunction& f) {
  return 2.0 * holder_seminorm(f) * f.theta() / (1.0 - f.theta());
}

double spectral_projection_value(const WeightFunction& f, const Word& g) {
  if (!is_cyclically_reduced(g))
    throw std::invalid_argument("spectral_projection_value: g not cyclically reduced");
  TransferMatrix<double> tm = build_transfer_matrix(f, 0.0);
  PerronData pd = perron(tm);
  const Eigen::VectorXd chi = chi_vector(tm.states, g);
  return pd.psi(tm.empty_index) * pd.nu.dot(chi);
}

}  // namespace fgs
