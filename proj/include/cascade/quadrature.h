#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <vector>

#include "cascade/errors.h"

namespace cascade {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= N; ++k) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = N * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      x[N - 1 - i] = z;
      w[i] = w[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  static const GaussLegendre& get() {
    static const GaussLegendre rule;
    return rule;
  }
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_panels = 20000;
  int min_panels = 1;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double err;
  double mass;
  bool operator<(const Panel& o) const { return err < o.err; }
};

template <int N, class F>
auto gl_panel(F& f, double a, double b, double* mass) {
  const auto& r = GaussLegendre<N>::get();
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  using T = decltype(f(a));
  T s{};
  double s_abs = 0.0;
  for (int i = 0; i < N; ++i) {
    T v = f(m + h * r.x[i]);
    s += r.w[i] * v;
    s_abs += r.w[i] * magnitude(v);
  }
  if (mass) *mass = s_abs * h;
  return T(s * h);
}

}  // namespace detail

// Globally adaptive Gauss-Legendre quadrature. The interval is first cut at
// the supplied breakpoints; the panel with the largest error estimate (a
// 10-point rule against its two halves) is bisected until the total error
// meets max(abs_tol, rel_tol*|I|) or the roundoff floor of the integrand mass.
template <class F>
auto integrate(F&& f, double a, double b, const std::vector<double>& breaks = {},
               const QuadOptions& opt = {}) -> decltype(f(a)) {
  using T = decltype(f(a));
  if (b <= a) return T{};
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (opt.min_panels > 1) {
    std::vector<double> fine;
    double h = (b - a) / opt.min_panels;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      double lo = cuts[i], hi = cuts[i + 1];
      int k = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
      for (int j = 0; j < k; ++j) fine.push_back(lo + (hi - lo) * j / k);
    }
    fine.push_back(b);
    cuts.swap(fine);
  }

  auto make = [&](double lo, double hi, const T& coarse) {
    double mid = 0.5 * (lo + hi), m1 = 0.0, m2 = 0.0;
    T left = detail::gl_panel<10>(f, lo, mid, &m1);
    T right = detail::gl_panel<10>(f, mid, hi, &m2);
    T fine = left + right;
    return detail::Panel<T>{lo, hi, fine, detail::magnitude(T(fine - coarse)), m1 + m2};
  };

  std::priority_queue<detail::Panel<T>> heap;
  T total{};
  double err = 0.0, mass = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    T coarse = detail::gl_panel<10>(f, cuts[i], cuts[i + 1], nullptr);
    auto p = make(cuts[i], cuts[i + 1], coarse);
    total += p.value;
    err += p.err;
    mass += p.mass;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  auto tol = [&] {
    return std::max({opt.abs_tol, opt.rel_tol * detail::magnitude(total), 64 * 2.2e-16 * mass});
  };
  while (err > tol()) {
    if (panels >= opt.max_panels) {
      if (err > 1e3 * tol()) throw NumericError("adaptive quadrature did not converge");
      break;
    }
    auto p = heap.top();
    heap.pop();
    double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      err -= p.err;
      heap.push({p.a, p.b, p.value, 0.0, p.mass});
      continue;
    }
    T cl = detail::gl_panel<10>(f, p.a, mid, nullptr);
    T cr = detail::gl_panel<10>(f, mid, p.b, nullptr);
    auto l = make(p.a, mid, cl);
    auto r = make(mid, p.b, cr);
    total += l.value + r.value - p.value;
    err += l.err + r.err - p.err;
    mass += l.mass + r.mass - p.mass;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  return total;
}

// Fixed composite rule: n equal panels of a 16-point Gauss-Legendre rule.
template <class F>
auto integrate_fixed(F&& f, double a, double b, int panels) -> decltype(f(a)) {
  using T = decltype(f(a));
  T s{};
  double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) s += detail::gl_panel<16>(f, a + i * h, a + (i + 1) * h, nullptr);
  return s;
}

// Composite 16-point nodes on [a, b], split at the given interior points and
// then into `panels` equal pieces per subinterval.
struct NodeSet {
  std::vector<double> x, w;
};

inline NodeSet composite_nodes(double a, double b, std::vector<double> breaks, int panels) {
  static const GaussLegendre<16> gl;
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  NodeSet ns;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    double lo = std::max(a, breaks[k]), hi = std::min(b, breaks[k + 1]);
    if (!(hi > lo)) continue;
    double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      double c = lo + (p + 0.5) * h;
      for (int i = 0; i < 16; ++i) {
        ns.x.push_back(c + 0.5 * h * gl.x[i]);
        ns.w.push_back(0.5 * h * gl.w[i]);
      }
    }
  }
  return ns;
}

}  // namespace cascade
