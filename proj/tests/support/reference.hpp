#pragma once

// Straight-from-the-definition reference implementations used to validate
// the production estimators. Everything here is computed per index with
// fresh inner loops in extended precision: O(n k) or worse, no rolling
// windows, no shared state with the library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ref {

using std::size_t;

inline long double inc(const std::vector<double>& x, size_t l) {
  return static_cast<long double>(x[l]) - static_cast<long double>(x[l - 1]);
}

inline size_t nobs(const std::vector<double>& x) { return x.size() - 1; }

inline size_t grid_floor(size_t n, double t) {
  return static_cast<size_t>(static_cast<double>(n) * t + 1e-9);
}

inline long double sigma2(const std::vector<double>& x, size_t k, size_t i) {
  const size_t n = nobs(x);
  long double s = 0.0L;
  for (size_t j = 1; j <= k; ++j) {
    const long double d = inc(x, i + j);
    s += d * d;
  }
  return static_cast<long double>(n) / static_cast<long double>(k) * s;
}

inline long double sigma4(const std::vector<double>& x, size_t k, size_t i) {
  const size_t n = nobs(x);
  long double s = 0.0L;
  for (size_t j = 1; j <= k; ++j) {
    const long double d = inc(x, i + j);
    s += d * d * d * d;
  }
  return static_cast<long double>(n) * static_cast<long double>(n) /
         (3.0L * static_cast<long double>(k)) * s;
}

inline long double tau2(const std::vector<double>& x, size_t k, size_t i) {
  const size_t n = nobs(x);
  const long double nd = static_cast<long double>(n);
  const long double kd = static_cast<long double>(k);
  const long double ds2 = sigma2(x, k, i + k) - sigma2(x, k, i);
  return 1.5L * nd / kd * ds2 * ds2 - 6.0L * nd / (kd * kd) * sigma4(x, k, i);
}

inline long double vhat(const std::vector<double>& x, size_t k, double t) {
  const size_t n = nobs(x);
  const size_t m = grid_floor(n, t);
  long double s = 0.0L;
  for (size_t i = 0; i + 2 * k <= m; ++i) s += tau2(x, k, i);
  return s / static_cast<long double>(n);
}

// Partial-sum path: entry m holds the integrated estimator up to m/n.
inline std::vector<long double> vhat_path(const std::vector<double>& x,
                                          size_t k) {
  const size_t n = nobs(x);
  std::vector<long double> out(n + 1, 0.0L);
  for (size_t m = 2 * k; m <= n; ++m) {
    long double s = 0.0L;
    for (size_t i = 0; i + 2 * k <= m; ++i) s += tau2(x, k, i);
    out[m] = s / static_cast<long double>(n);
  }
  return out;
}

struct GRef {
  long double g1 = 0.0L, g2 = 0.0L, g3 = 0.0L;
};

inline GRef gstats(const std::vector<double>& x, size_t k, double t) {
  const size_t n = nobs(x);
  const size_t m = grid_floor(n, t);
  const long double nd = static_cast<long double>(n);
  const long double kd = static_cast<long double>(k);
  GRef g;
  for (size_t i = 1; i + k <= m; ++i) {
    const long double s4 = sigma4(x, k, i);
    g.g1 += s4 * s4;
  }
  for (size_t i = 1; i + 2 * k <= m; ++i) {
    g.g2 += tau2(x, k, i) * sigma4(x, k, i);
    const long double ds2 = sigma2(x, k, i + k) - sigma2(x, k, i);
    g.g3 += nd * nd / (kd * kd) * ds2 * ds2 * ds2 * ds2;
  }
  g.g1 /= nd;
  g.g2 /= nd;
  g.g3 /= nd;
  return g;
}

inline long double chat(const std::vector<double>& x, size_t k, double t) {
  const size_t n = nobs(x);
  const long double nd = static_cast<long double>(n);
  const long double kd = static_cast<long double>(k);
  const GRef g = gstats(x, k, t);
  return 453.0L / 280.0L * g.g3 - nd / (kd * kd) * 486.0L / 35.0L * g.g2 -
         nd * nd / (kd * kd * kd * kd) * 1038.0L / 35.0L * g.g1;
}

inline long double that(const std::vector<double>& x, size_t k, double t) {
  const size_t n = nobs(x);
  const long double nd = static_cast<long double>(n);
  const long double kd = static_cast<long double>(k);
  const GRef g = gstats(x, k, t);
  return 0.75L * g.g3 - 12.0L * nd / (kd * kd) * g.g2 -
         36.0L * nd * nd / (kd * kd * kd * kd) * g.g1;
}

inline long double alpha2(const std::vector<double>& x, size_t k, size_t i) {
  const size_t n = nobs(x);
  const long double nd = static_cast<long double>(n);
  const long double kd = static_cast<long double>(k);
  const long double ds2 = sigma2(x, k, i + k) - sigma2(x, k, i);
  long double p8 = 0.0L;
  for (size_t j = 1; j <= k; ++j) {
    const long double d = inc(x, i + j);
    const long double d2 = d * d;
    p8 += d2 * d2 * d2 * d2;
  }
  const long double n2k2 = nd * nd / (kd * kd);
  const long double n6k5 = nd * nd * nd * nd * nd * nd / (kd * kd * kd * kd * kd);
  return 453.0L / 280.0L * n2k2 * ds2 * ds2 * ds2 * ds2 -
         486.0L / 35.0L * nd / (kd * kd) * tau2(x, k, i) * sigma4(x, k, i) -
         346.0L / 1225.0L * n6k5 * p8;
}

using ShapeFn = std::function<double(double, double, double)>;

inline std::vector<long double> fvals(const std::vector<double>& x, size_t k,
                                      const ShapeFn& f) {
  const size_t n = nobs(x);
  std::vector<long double> out(n - k + 1);
  for (size_t i = 0; i + k <= n; ++i) {
    out[i] = f(static_cast<double>(i) / static_cast<double>(n), x[i],
               static_cast<double>(sigma2(x, k, i)));
  }
  return out;
}

inline std::vector<long double> bpath(const std::vector<double>& x, size_t k,
                                      const ShapeFn& f) {
  const size_t n = nobs(x);
  const std::vector<long double> fv = fvals(x, k, f);
  std::vector<long double> out(n + 1, 0.0L);
  for (size_t m = k; m <= n; ++m) {
    long double s = 0.0L;
    for (size_t i = 0; i + k <= m; ++i) s += fv[i];
    out[m] = s / static_cast<long double>(n);
  }
  return out;
}

inline long double dhat(const std::vector<double>& x, size_t k,
                        const ShapeFn& f) {
  const size_t n = nobs(x);
  const std::vector<long double> fv = fvals(x, k, f);
  long double s = 0.0L;
  for (size_t i = 0; i + k <= n; ++i) s += fv[i] * fv[i];
  return s / static_cast<long double>(n);
}

inline long double chatf(const std::vector<double>& x, size_t k,
                         const ShapeFn& f) {
  const size_t n = nobs(x);
  const std::vector<long double> fv = fvals(x, k, f);
  long double s = 0.0L;
  for (size_t i = 0; i + 2 * k <= n; ++i) s += tau2(x, k, i) * fv[i];
  return s / static_cast<long double>(n);
}

inline std::vector<long double> nhat_path(const std::vector<double>& x,
                                          size_t k, const ShapeFn& f) {
  const size_t n = nobs(x);
  const long double theta = chatf(x, k, f) / dhat(x, k, f);
  const std::vector<long double> v = vhat_path(x, k);
  const std::vector<long double> b = bpath(x, k, f);
  std::vector<long double> out(n + 1);
  for (size_t m = 0; m <= n; ++m) out[m] = v[m] - theta * b[m];
  return out;
}

// Studentizer path: entry m (m >= 2k+1) holds the plug-in variance of the
// projected residual at horizon m/n.
inline std::vector<long double> s2hat_path(const std::vector<double>& x,
                                           size_t k, const ShapeFn& f) {
  const size_t n = nobs(x);
  const long double d = dhat(x, k, f);
  const std::vector<long double> fv = fvals(x, k, f);
  const std::vector<long double> b = bpath(x, k, f);
  std::vector<long double> a2(n - 2 * k + 1);
  for (size_t i = 0; i + 2 * k <= n; ++i) a2[i] = alpha2(x, k, i);
  std::vector<long double> out(n + 1, 0.0L);
  for (size_t m = 2 * k + 1; m <= n; ++m) {
    const long double w = b[m] / d;
    long double s = 0.0L;
    for (size_t i = 1; i + 2 * k <= m; ++i) {
      s += a2[i] * (1.0L - 2.0L * w * fv[i] + w * w * fv[i] * fv[i]);
    }
    out[m] = s / static_cast<long double>(n);
  }
  return out;
}

struct KsRef {
  long double y = 0.0L;
  size_t used = 0, skipped = 0;
};

inline KsRef ks(const std::vector<double>& x, size_t k, const ShapeFn& f,
                double t_min, bool from_t_min, double eps_var) {
  const size_t n = nobs(x);
  const std::vector<long double> nh = nhat_path(x, k, f);
  const std::vector<long double> s2 = s2hat_path(x, k, f);
  size_t lo = 2 * k + 1;
  if (from_t_min) {
    const long double raw = static_cast<long double>(t_min) * n;
    size_t ceil_lo = static_cast<size_t>(std::ceil(static_cast<double>(raw) - 1e-9));
    lo = std::max(lo, ceil_lo);
  }
  KsRef out;
  const long double rate = std::sqrt(static_cast<long double>(n) /
                                     static_cast<long double>(k));
  for (size_t m = lo; m + 2 * k <= n; ++m) {
    if (!(s2[m] > eps_var)) {
      ++out.skipped;
      continue;
    }
    ++out.used;
    const long double cand = std::abs(rate * nh[m] / std::sqrt(s2[m]));
    if (cand > out.y) out.y = cand;
  }
  return out;
}

// Bisection inverse of the erfc-based normal CDF, independent of the
// polynomial inverse used in production.
inline double normal_quantile_bisect(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    if (cdf < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ref
