#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgtree {

// Predictions for the weights w_n = ((n-1)!)^alpha. Index i in these
// functions refers to vertices of degree i+1; vectors are stored 0-based
// (entry i-1 belongs to index i).

/// floor(1/alpha), robust to 1/alpha landing a hair below an integer.
std::size_t degree_bound(double alpha);
/// True when 1/alpha is an integer (the Poisson boundary case).
bool poisson_boundary(double alpha);

/// n_i = i!^alpha N^{1 - i alpha}, for 1 <= i <= floor(1/alpha).
double n_i_value(double alpha, double N, std::size_t i);

/// n_i (1 - (1 - i alpha) N^{-alpha}), for i < 1/alpha.
double mhat_first_order(double alpha, double N, std::size_t i);

/// The variational function f(m_1, ..., m_K), with A = sum m_i and
/// B = sum i m_i. Throws std::domain_error for nonpositive m_i.
double f_value(double alpha, double N, std::span<const double> m);
std::vector<double> f_gradient(double alpha, double N, std::span<const double> m);
std::vector<std::vector<double>> f_hessian(double alpha, double N, std::span<const double> m);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MhatSolution {
  /// Length K; when 1/alpha is an integer the last entry is held at n_K.
  std::vector<double> m;
  std::vector<double> n;
  double gradient_norm = 0.0;
  double beta = 0.0;  // f at the solution
  std::size_t iterations = 0;
  bool used_bisection = false;
};

/// Stationary point of f in V = prod [(1-eta) n_i, (1+eta) n_i] over the
/// indices i < 1/alpha, by damped Newton from m = n with a coordinate
/// bisection fallback. Throws SolverError on non-convergence or when the
/// stationary point is not interior to V.
MhatSolution solve_mhat(double alpha, double N, double tol = 1e-10, double eta = 0.5, std::size_t max_iter = 200);

enum class Regime { theorem2, alpha_lt_1, alpha_gt_1 };

/// Leading-order log Z_N: theorem2 uses param = lambda, the others alpha.
double predict_logzn(Regime regime, double param, std::size_t N);

struct ReferenceLaw {
  enum class Kind { gaussian, poisson };
  std::size_t degree = 0;  // vertex degree i+1
  Kind kind = Kind::gaussian;
  double center = 0.0;     // m-hat_i, or the Poisson mean n_K
  double scale = 0.0;      // sqrt(n_i) for the Gaussian case
};

/// Predicted laws of X_{i+1,N} for i <= floor(1/alpha), mutually independent.
std::vector<ReferenceLaw> reference_laws(double alpha, std::size_t N);

}  // namespace sgtree
