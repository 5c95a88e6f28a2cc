#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <vector>

#include "fgs/conjugacy.hpp"
#include "fgs/symbolic.hpp"

namespace fgs {

// Finite-matrix realisation of the transfer operator L_{sf} on block states.
//
// States are the admissible blocks of length L = max(q-1, 1): the pure
// (letter-only) blocks first, then the pad-tailed blocks, then the all-pad
// block representing the empty word (index empty_index). M(u, u') carries
// e^{s f(u'_0 . u)} whenever the state u' arises by prepending the letter
// u'_0 to u, so that M applied to the state-vector of omega realises
// L_{sf} omega. No transition enters the empty state: the preimage y = 1 is
// excluded structurally.
template <class Scalar>
struct TransferMatrix {
  Rank p;
  int q = 1;
  int L = 1;
  std::vector<Block> states;
  int n_pure = 0;
  int empty_index = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> M;

  // Leading L x L-block submatrix acting on functions on Sigma; at s = 0 and
  // q = 1 this is exactly the transition matrix A.
  auto pure() const { return M.topLeftCorner(n_pure, n_pure); }
};

template <class Scalar>
TransferMatrix<Scalar> build_transfer_matrix(const WeightFunction& f, Scalar s);

// Perron eigendata of a real transfer matrix: simple leading eigenvalue
// beta = e^{P(sf)}, right eigenvector psi (over all states, including the
// pad-tailed ones and the empty word), left eigenvector nu (supported on the
// pure states, normalised to a probability vector, with <nu, psi> = 1) and an
// estimate of |second eigenvalue| / beta.
struct PerronData {
  double beta = 0.0;
  Eigen::VectorXd psi;
  Eigen::VectorXd nu;
  double gap = 0.0;
};

PerronData perron(const TransferMatrix<double>& tm);

// Rank-one projection R0 = psi nu^T and remainder Q = M - beta R0, at s = 0
// or any real s the PerronData came from.
struct SpectralDecomposition {
  Eigen::MatrixXd projection;
  Eigen::MatrixXd remainder;
};

SpectralDecomposition spectral_decomposition(const TransferMatrix<double>& tm,
                                             const PerronData& pd);

// P(tf) = log beta(t); P(0) = log(2p-1).
double pressure(const WeightFunction& f, double t);

// Drift: integral of f against mu_0, as the exact cylinder sum over pure
// q-blocks.
double lambda_exact(const WeightFunction& f);
// Cross-check: central finite difference of the pressure with Richardson
// extrapolation.
double lambda_fd(const WeightFunction& f);

// Variance sigma_f^2 = P''(0), two independent routes.
double sigma2_fd(const WeightFunction& f);
double sigma2_green_kubo(const WeightFunction& f);

// Sum over Gamma_m(g) of e^{s f^m(w)}, evaluated as (M_s^m chi_g)(1) with m
// matrix-vector products; 1 for m = 0.
std::complex<double> weighted_restricted_sum(const WeightFunction& f, const Word& g, int m,
                                             std::complex<double> s);
double weighted_restricted_sum(const WeightFunction& f, const Word& g, int m, double s);

enum class EtaMode { exact, decomposed };

// Coefficient of z^{k+2m} in the weighted class generating function:
// sum over C_{k+2m} of e^{s F(x)}. Exact mode enumerates; decomposed mode
// evaluates sum_g e^{s f^k(g)} (L_{2sf}^m chi_g)(1), which matches exactly
// for depth-1 symmetric weights and otherwise deviates within the reported
// kappa envelope.
struct EtaCoefficient {
  std::complex<double> value;
  double kappa_envelope = 0.0;  // guaranteed |exact - decomposed| bound; 0 in exact mode
};

EtaCoefficient eta_coefficient(const ConjugacyClass& c, Rank p, const WeightFunction& f, int m,
                               std::complex<double> s, EtaMode mode,
                               std::uint64_t enumeration_cap = 10'000'000);

// kappa_w = f^{k+2m}(w^-1 g w) - f^m(w) - f^k(g) - f^m(w^-1). Identically 0
// for depth-1 weights.
double kappa_exact(const WeightFunction& f, const Word& g, const Word& w);

// Uniform bound 2 |f|_theta theta / (1 - theta) on |kappa_w|.
double kappa_bound(const WeightFunction& f);

// R0 chi_g(1) = psi(1) <nu, chi_g> from the s = 0 Perron data; the summands
// of the limit of #C_{k+2m} / e^{mh} over the orbit.
double spectral_projection_value(const WeightFunction& f, const Word& g);

}  // namespace fgs
