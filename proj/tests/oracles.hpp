#pragma once

// Independent reference implementations used only by the tests. None of these
// touch FFTW or the library's operator code.

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "acsplit/grid.hpp"

namespace oracle {

using acsplit::Field;
using acsplit::GridSpec;

// O(M^2) orthonormal DCT-II along one axis of a row-major array.
inline void dct_axis(std::vector<double>& v, const GridSpec& g, int axis, bool inverse) {
  std::size_t stride = 1;
  for (int a = g.dims() - 1; a > axis; --a) stride *= g.cells(a);
  const std::size_t m = g.cells(axis);
  const std::size_t block = stride * m;
  std::vector<double> line(m), out(m);
  for (std::size_t base = 0; base < v.size(); base += block) {
    for (std::size_t s = 0; s < stride; ++s) {
      for (std::size_t l = 0; l < m; ++l) line[l] = v[base + s + l * stride];
      for (std::size_t i = 0; i < m; ++i) {
        long double acc = 0;
        for (std::size_t j = 0; j < m; ++j) {
          // forward: out_k = alpha_k sum_l f_l cos(pi k (l+1/2)/M)
          // inverse: out_l = sum_k alpha_k c_k cos(pi k (l+1/2)/M)
          const std::size_t k = inverse ? j : i;
          const std::size_t l = inverse ? i : j;
          const long double alpha = k == 0 ? std::sqrt(1.0L / m) : std::sqrt(2.0L / m);
          acc += alpha * line[j] * std::cos(std::numbers::pi_v<long double> * k * (l + 0.5L) / m);
        }
        out[i] = static_cast<double>(acc);
      }
      for (std::size_t l = 0; l < m; ++l) v[base + s + l * stride] = out[l];
    }
  }
}

inline std::vector<double> dct(const Field& f, bool inverse = false) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (int a = 0; a < f.grid().dims(); ++a) dct_axis(v, f.grid(), a, inverse);
  return v;
}

// Adaptive Dormand-Prince on d(phi)/dt = (phi - phi^3) / eps^2, either sign of tau.
inline double free_energy_ode(double phi, double tau, double eps) {
  if (tau == 0.0) return phi;
  using state = double;
  auto rhs = [eps](const state& y, state& dy, double) { dy = (y - y * y * y) / (eps * eps); };
  auto stepper = boost::numeric::odeint::make_controlled(1e-14, 1e-14,
                                                         boost::numeric::odeint::runge_kutta_dopri5<state>());
  state y = phi;
  boost::numeric::odeint::integrate_adaptive(stepper, rhs, y, 0.0, tau, tau / 1000.0);
  return y;
}

// Second-order finite-difference Laplacian with mirrored ghost cells
// (zero-Neumann), integrated by classical RK4 over `substeps` steps.
inline Field heat_fd(const Field& f, double tau, int substeps) {
  const GridSpec& g = f.grid();
  const std::size_t n = g.total_cells();
  std::vector<std::size_t> stride(static_cast<std::size_t>(g.dims()));
  std::size_t s = 1;
  for (int a = g.dims() - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= g.cells(a);
  }
  auto lap = [&](const std::vector<double>& u, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = g.unravel(i);
      double acc = 0;
      for (int a = 0; a < g.dims(); ++a) {
        const std::size_t l = idx[static_cast<std::size_t>(a)];
        const std::size_t st = stride[static_cast<std::size_t>(a)];
        const double h = g.spacing(a);
        const double left = l == 0 ? u[i] : u[i - st];
        const double right = l + 1 == g.cells(a) ? u[i] : u[i + st];
        acc += (left - 2 * u[i] + right) / (h * h);
      }
      out[i] = acc;
    }
  };
  std::vector<double> u(f.values().begin(), f.values().end()), k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double dt = tau / substeps;
  for (int step = 0; step < substeps; ++step) {
    lap(u, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    lap(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    lap(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
    lap(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) u[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return Field(g, u);
}

// heat_fd on a 1D grid refined by an odd factor, restricted back to the
// coarse cell centers (which coincide with fine ones). `profile` is sampled
// directly on the fine grid so the oracle carries O((h/refine)^2) error.
template <class Profile>
Field heat_fd_refined(const GridSpec& coarse, Profile profile, double tau, std::size_t refine, int substeps) {
  const GridSpec fine = GridSpec::line(coarse.cells(0) * refine, coarse.length(0));
  Field f(fine);
  for (std::size_t l = 0; l < f.size(); ++l) f[l] = profile(fine.cell_center(0, l));
  const Field out = heat_fd(f, tau, substeps);
  Field g(coarse);
  for (std::size_t l = 0; l < g.size(); ++l) g[l] = out[refine * l + (refine - 1) / 2];
  return g;
}

// h^d [ sum F/eps^2 + 1/2 sum over interior faces ((u_+ - u_-)/h)^2 ].
inline double energy_fd(const Field& f, double eps) {
  const GridSpec& g = f.grid();
  double bulk = 0;
  for (double v : f.values()) bulk += 0.25 * (v * v - 1) * (v * v - 1);
  double grad = 0;
  std::size_t st = 1;
  for (int a = g.dims() - 1; a >= 0; --a) {
    const double h = g.spacing(a);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (g.unravel(i)[static_cast<std::size_t>(a)] + 1 == g.cells(a)) continue;
      const double d = (f[i + st] - f[i]) / h;
      grad += d * d;
    }
    st *= g.cells(a);
  }
  return g.cell_volume() * (bulk / (eps * eps) + 0.5 * grad);
}

}  // namespace oracle
