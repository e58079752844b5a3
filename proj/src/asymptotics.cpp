#include "sgtree/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sgtree/logmath.hpp"

namespace sgtree {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
}

struct Sums {
  double A = 0.0;
  double B = 0.0;
};

Sums sums(std::span<const double> m) {
  Sums s;
  for (std::size_t k = 0; k < m.size(); ++k) {
    s.A += m[k];
    s.B += static_cast<double>(k + 1) * m[k];
  }
  return s;
}

void require_size(double alpha, std::span<const double> m) {
  if (m.size() != degree_bound(alpha)) throw std::invalid_argument("f expects floor(1/alpha) coordinates");
  for (double v : m)
    if (!(v > 0.0)) throw std::domain_error("f is defined for positive m_i only");
}

// Solves a x = b in place by Gaussian elimination with partial pivoting.
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t k = c + 1; k < n; ++k) b[c] -= a[c][k] * b[k];
    b[c] /= a[c][c];
  }
  return true;
}

double max_abs(std::span<const double> v, std::size_t count) {
  double r = 0.0;
  for (std::size_t i = 0; i < count; ++i) r = std::max(r, std::abs(v[i]));
  return r;
}

}  // namespace

std::size_t degree_bound(double alpha) {
  require_alpha(alpha);
  return static_cast<std::size_t>(std::floor(1.0 / alpha + 1e-9));
}

bool poisson_boundary(double alpha) {
  require_alpha(alpha);
  const double inv = 1.0 / alpha;
  return std::abs(inv - std::round(inv)) < 1e-9;
}

double n_i_value(double alpha, double N, std::size_t i) {
  if (i < 1 || i > degree_bound(alpha)) throw std::out_of_range("n_i needs 1 <= i <= floor(1/alpha)");
  const double di = static_cast<double>(i);
  return std::exp(alpha * log_factorial(i) + (1.0 - di * alpha) * std::log(N));
}

double mhat_first_order(double alpha, double N, std::size_t i) {
  const std::size_t free = degree_bound(alpha) - (poisson_boundary(alpha) ? 1 : 0);
  if (i < 1 || i > free) throw std::out_of_range("first-order m-hat needs i < 1/alpha");
  return n_i_value(alpha, N, i) * (1.0 - (1.0 - static_cast<double>(i) * alpha) * std::pow(N, -alpha));
}

double f_value(double alpha, double N, std::span<const double> m) {
  require_alpha(alpha);
  require_size(alpha, m);
  const double logN = std::log(N);
  double f = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double i = static_cast<double>(k + 1);
    const double mi = m[k];
    f += (1.0 - alpha * i) * mi * logN + alpha * mi * log_factorial(k + 1) - mi * std::log(mi) + mi -
         0.5 * std::log(2.0 * std::numbers::pi * mi);
  }
  const auto [A, B] = sums(m);
  for (std::size_t j = 2; j <= m.size(); ++j) {
    const double dj = static_cast<double>(j);
    f += (alpha * std::pow(B, dj) - std::pow(A, dj)) / (dj * (dj - 1.0) * std::pow(N, dj - 1.0));
  }
  return f;
}

std::vector<double> f_gradient(double alpha, double N, std::span<const double> m) {
  require_alpha(alpha);
  require_size(alpha, m);
  const double logN = std::log(N);
  const auto [A, B] = sums(m);
  std::vector<double> g(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double i = static_cast<double>(k + 1);
    double gi = (1.0 - alpha * i) * logN + alpha * log_factorial(k + 1) - std::log(m[k]) - 0.5 / m[k];
    for (std::size_t j = 2; j <= m.size(); ++j) {
      const double dj = static_cast<double>(j);
      gi += (alpha * i * std::pow(B, dj - 1.0) - std::pow(A, dj - 1.0)) / ((dj - 1.0) * std::pow(N, dj - 1.0));
    }
    g[k] = gi;
  }
  return g;
}

std::vector<std::vector<double>> f_hessian(double alpha, double N, std::span<const double> m) {
  require_alpha(alpha);
  require_size(alpha, m);
  const auto [A, B] = sums(m);
  const std::size_t K = m.size();
  std::vector<std::vector<double>> h(K, std::vector<double>(K, 0.0));
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = 0; b < K; ++b) {
      const double ia = static_cast<double>(a + 1);
      const double ib = static_cast<double>(b + 1);
      double v = 0.0;
      for (std::size_t j = 2; j <= K; ++j) {
        const double dj = static_cast<double>(j);
        v += (alpha * ia * ib * std::pow(B, dj - 2.0) - std::pow(A, dj - 2.0)) / std::pow(N, dj - 1.0);
      }
      if (a == b) v += -1.0 / m[a] + 0.5 / (m[a] * m[a]);
      h[a][b] = v;
    }
  }
  return h;
}

MhatSolution solve_mhat(double alpha, double N, double tol, double eta, std::size_t max_iter) {
  const std::size_t K = degree_bound(alpha);
  const std::size_t free = K - (poisson_boundary(alpha) ? 1 : 0);
  MhatSolution sol;
  for (std::size_t i = 1; i <= K; ++i) sol.n.push_back(n_i_value(alpha, N, i));
  sol.m = sol.n;
  if (free == 0) {
    sol.beta = f_value(alpha, N, sol.m);
    return sol;
  }
  for (std::size_t i = 0; i < free; ++i)
    if (sol.n[i] < 1.0) throw SolverError("N too small: n_" + std::to_string(i + 1) + " < 1");

  auto grad_norm = [&](const std::vector<double>& m) { return max_abs(f_gradient(alpha, N, m), free); };

  // Damped Newton on the free coordinates.
  double gnorm = grad_norm(sol.m);
  std::size_t it = 0;
  for (; it < max_iter && gnorm >= tol; ++it) {
    const auto g = f_gradient(alpha, N, sol.m);
    const auto h = f_hessian(alpha, N, sol.m);
    std::vector<std::vector<double>> hf(free, std::vector<double>(free));
    std::vector<double> step(free);
    for (std::size_t a = 0; a < free; ++a) {
      step[a] = -g[a];
      for (std::size_t b = 0; b < free; ++b) hf[a][b] = h[a][b];
    }
    if (!solve_linear(hf, step)) break;
    bool accepted = false;
    for (double t = 1.0; t > 1e-8; t *= 0.5) {
      auto trial = sol.m;
      bool positive = true;
      for (std::size_t a = 0; a < free; ++a) {
        trial[a] += t * step[a];
        positive = positive && trial[a] > 0.0;
      }
      if (!positive) continue;
      const double tn = grad_norm(trial);
      if (tn < gnorm) {
        sol.m = trial;
        gnorm = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  sol.iterations = it;

  if (gnorm >= tol) {
    // Coordinate bisection on sign changes of the partial derivatives within V.
    sol.used_bisection = true;
    for (std::size_t sweep = 0; sweep < max_iter && gnorm >= tol; ++sweep) {
      for (std::size_t a = 0; a < free; ++a) {
        double lo = (1.0 - eta) * sol.n[a];
        double hi = (1.0 + eta) * sol.n[a];
        auto partial = [&](double x) {
          auto trial = sol.m;
          trial[a] = x;
          return f_gradient(alpha, N, trial)[a];
        };
        if (partial(lo) <= 0.0 || partial(hi) >= 0.0)
          throw SolverError("stationary point on the boundary of V; eta or N too small");
        for (int b = 0; b < 200 && hi - lo > 1e-15 * hi; ++b) {
          const double mid = 0.5 * (lo + hi);
          (partial(mid) > 0.0 ? lo : hi) = mid;
        }
        sol.m[a] = 0.5 * (lo + hi);
      }
      gnorm = grad_norm(sol.m);
      ++sol.iterations;
    }
  }
  sol.gradient_norm = gnorm;
  if (gnorm >= tol) {
    throw SolverError("m-hat solver did not converge; final gradient norm " + std::to_string(gnorm));
  }
  for (std::size_t a = 0; a < free; ++a) {
    if (std::abs(sol.m[a] - sol.n[a]) >= eta * sol.n[a])
      throw SolverError("stationary point outside V; eta or N too small");
  }
  sol.beta = f_value(alpha, N, sol.m);
  return sol;
}

double predict_logzn(Regime regime, double param, std::size_t N) {
  if (N < 1) throw std::domain_error("N must be >= 1");
  const double lg = log_factorial(N - 1);
  const double dN = static_cast<double>(N);
  switch (regime) {
    case Regime::theorem2: return param + lg;
    case Regime::alpha_lt_1: {
      require_alpha(param);
      return param * lg + std::pow(dN, 1.0 - param) +
             (std::pow(2.0, param) - (1.0 - param) / 2.0) * std::pow(dN, 1.0 - 2.0 * param);
    }
    case Regime::alpha_gt_1:
      if (!(param > 1.0)) throw std::domain_error("alpha_gt_1 regime needs alpha > 1");
      return param * lg;
  }
  throw std::invalid_argument("unsupported regime");
}

std::vector<ReferenceLaw> reference_laws(double alpha, std::size_t N) {
  const auto sol = solve_mhat(alpha, static_cast<double>(N));
  const std::size_t K = degree_bound(alpha);
  const bool boundary = poisson_boundary(alpha);
  std::vector<ReferenceLaw> laws;
  for (std::size_t i = 1; i <= K; ++i) {
    ReferenceLaw law;
    law.degree = i + 1;
    if (boundary && i == K) {
      law.kind = ReferenceLaw::Kind::poisson;
      law.center = sol.n[i - 1];
    } else {
      law.center = sol.m[i - 1];
      law.scale = std::sqrt(sol.n[i - 1]);
    }
    laws.push_back(law);
  }
  return laws;
}

}  // namespace sgtree
