#include "lifts/mode_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "lifts/quadrature.hpp"

namespace lifts {

using std::numbers::pi;
using cplx = std::complex<double>;

double ExpPolyTerm::value(double t) const {
  double v = coef * std::exp(rate * (t - anchor));
  if (power > 0) v *= std::pow(t - shift, power);
  return v;
}

namespace {

bool in_support(const ExpPolyTerm& term, double t, double T) {
  return (t >= term.lo && t < term.hi) || (t == term.hi && term.hi >= T);
}

// sum_{k=0}^{N} a_k cos(k theta) by Clenshaw's recurrence.
double cos_series(const std::vector<double>& a, double theta) {
  if (a.empty()) return 0.0;
  const double x = std::cos(theta);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = a.size() - 1; k >= 1; --k) {
    const double b0 = a[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a[0] + x * b1 - b2;
}

double sin_series(const std::vector<double>& b, double theta) {
  if (b.size() < 2) return 0.0;
  const double x = std::cos(theta);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = b.size() - 1; k >= 1; --k) {
    const double b0 = b[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return std::sin(theta) * b1;
}

constexpr int kMaxDegree = 16;

// Coefficients of (s + d)^n in powers of s.
void shifted_power(int n, double d, double* c) {
  c[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    c[i] = 0.0;
    for (int j = i; j >= 1; --j) c[j] = c[j] * d + c[j - 1];
    c[0] *= d;
  }
}

// Integral over [lo, hi] of (t-p1)^n1 (t-p2)^n2 exp(l1 (t-q1) + l2 (t-q2) + i omega t).
cplx product_integral(double lo, double hi, int n1, double p1, int n2, double p2, double l1,
                      double q1, double l2, double q2, double omega) {
  const double w = hi - lo;
  if (w <= 0.0) return 0.0;
  if (n1 + n2 >= kMaxDegree) throw std::invalid_argument("time term degree too large");
  const cplx lambda(l1 + l2, omega);
  const bool left = lambda.real() <= 0.0;
  const double c = left ? lo : hi;
  const cplx scale = std::exp(cplx(l1 * (c - q1) + l2 * (c - q2), omega * c));
  double a[kMaxDegree], b[kMaxDegree], d[kMaxDegree];
  shifted_power(n1, c - p1, a);
  shifted_power(n2, c - p2, b);
  const int n = n1 + n2;
  for (int k = 0; k <= n; ++k) d[k] = 0.0;
  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j <= n2; ++j) d[i + j] += a[i] * b[j];
  cplx moments[kMaxDegree];
  detail::exp_moments(left ? lambda : -lambda, w, n, moments);
  cplx sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double sign = (left || k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * d[k] * moments[k];
  }
  return scale * sum;
}

// Integral over [0, T] of cos(i pi t/T) sin(j pi t/T).
double cos_sin_integral(int i, int j, double T) {
  if (j == 0 || (i + j) % 2 == 0) return 0.0;
  return 2.0 * j * T / ((static_cast<double>(j) * j - static_cast<double>(i) * i) * pi);
}

// Terms sharing one exponential and support, with the polynomial factors summed
// in powers of s = t - c, c the endpoint where the exponential is largest.
struct TermGroup {
  double rate, anchor, lo, hi, c;
  int degree = 0;
  double poly[kMaxDegree] = {};
};

std::vector<TermGroup> group_terms(const std::vector<ExpPolyTerm>& terms) {
  std::vector<TermGroup> groups;
  for (const auto& t : terms) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const TermGroup& g) {
      return g.rate == t.rate && g.anchor == t.anchor && g.lo == t.lo && g.hi == t.hi;
    });
    if (it == groups.end()) {
      TermGroup g;
      g.rate = t.rate;
      g.anchor = t.anchor;
      g.lo = t.lo;
      g.hi = t.hi;
      g.c = t.rate <= 0.0 ? t.lo : t.hi;
      groups.push_back(g);
      it = groups.end() - 1;
    }
    if (t.power >= kMaxDegree) throw std::invalid_argument("time term degree too large");
    double c[kMaxDegree];
    shifted_power(t.power, it->c - t.shift, c);
    for (int i = 0; i <= t.power; ++i) it->poly[i] += t.coef * c[i];
    it->degree = std::max(it->degree, t.power);
  }
  return groups;
}

double trig_group_inner(const ModeFunction& trig, const TermGroup& g) {
  const double T = trig.T;
  const double w = g.hi - g.lo;
  const bool left = g.rate <= 0.0;
  const double base = std::exp(g.rate * (g.c - g.anchor));
  auto integral = [&](double omega) {
    const cplx lambda(g.rate, omega);
    cplx moments[kMaxDegree];
    detail::exp_moments(left ? lambda : -lambda, w, g.degree, moments);
    cplx sum = 0.0;
    for (int k = 0; k <= g.degree; ++k) {
      const double sign = (left || k % 2 == 0) ? 1.0 : -1.0;
      sum += sign * g.poly[k] * moments[k];
    }
    return base * std::exp(cplx(0.0, omega * g.c)) * sum;
  };
  double total = 0.0;
  const std::size_t n = std::max(trig.cos_coef.size(), trig.sin_coef.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double a = j < trig.cos_coef.size() ? trig.cos_coef[j] : 0.0;
    const double b = (j >= 1 && j < trig.sin_coef.size()) ? trig.sin_coef[j] : 0.0;
    if (a == 0.0 && b == 0.0) continue;
    const cplx v = integral(j * pi / T);
    total += a * v.real() + b * v.imag();
  }
  return total;
}

double trig_trig_inner(const ModeFunction& f, const ModeFunction& g) {
  const double T = f.T;
  double total = 0.0;
  const std::size_t nc = std::min(f.cos_coef.size(), g.cos_coef.size());
  for (std::size_t j = 0; j < nc; ++j)
    total += f.cos_coef[j] * g.cos_coef[j] * (j == 0 ? T : T / 2.0);
  const std::size_t ns = std::min(f.sin_coef.size(), g.sin_coef.size());
  for (std::size_t j = 1; j < ns; ++j) total += f.sin_coef[j] * g.sin_coef[j] * T / 2.0;
  auto cross = [T](const std::vector<double>& c, const std::vector<double>& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      for (std::size_t j = 1; j < s.size(); ++j)
        if (s[j] != 0.0)
          acc += c[i] * s[j] * cos_sin_integral(static_cast<int>(i), static_cast<int>(j), T);
    }
    return acc;
  };
  total += cross(f.cos_coef, g.sin_coef) + cross(g.cos_coef, f.sin_coef);
  return total;
}

void check_horizons(const ModeFunction& f, const ModeFunction& g) {
  if (std::abs(f.T - g.T) > 1e-14 * std::max(f.T, g.T))
    throw std::invalid_argument("mode functions live on different time horizons");
}

}  // namespace

namespace detail {

cplx exp_moment(cplx mu, double w, int k) {
  const cplx z = mu * w;
  const double az = std::abs(z);
  const double wk1 = std::pow(w, k + 1);
  if (az == 0.0) return wk1 / (k + 1);
  if (az <= 2.0 * k + 8.0) {
    // w^{k+1} e^z sum_m (-z)^m k! / (k+1+m)!
    cplx term = 1.0 / (k + 1.0);
    cplx sum = term;
    for (int m = 0; m < 400; ++m) {
      term *= -z / (k + 2.0 + m);
      sum += term;
      if (m > az && std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return wk1 * std::exp(z) * sum;
  }
  // k!/(-mu)^{k+1} [1 - e^z sum_{j<=k} (-z)^j / j!]
  cplx partial = 0.0, power = 1.0;
  double factorial = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      power *= -z;
      factorial *= j;
    }
    partial += power / factorial;
  }
  double kfact = 1.0;
  for (int j = 2; j <= k; ++j) kfact *= j;
  return kfact / std::pow(-mu, k + 1) * (1.0 - std::exp(z) * partial);
}

void exp_moments(cplx mu, double w, int kmax, cplx* out) {
  const cplx z = mu * w;
  const double az = std::abs(z);
  if (az <= 1.0) {
    for (int k = 0; k <= kmax; ++k) out[k] = exp_moment(mu, w, k);
    return;
  }
  // Upward recursion I_k = (w^k e^z - k I_{k-1}) / mu is stable while k <= |z|.
  const cplx ez = std::exp(z);
  out[0] = (ez - 1.0) / mu;
  double wk = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    wk *= w;
    out[k] = k <= az ? (wk * ez - static_cast<double>(k) * out[k - 1]) / mu : exp_moment(mu, w, k);
  }
}

}  // namespace detail

double ModeFunction::operator()(double t) const {
  const double theta = pi * t / T;
  double v = cos_series(cos_coef, theta) + sin_series(sin_coef, theta);
  for (const auto& term : terms)
    if (in_support(term, t, T)) v += term.value(t);
  return v;
}

ModeFunction ModeFunction::derivative() const {
  ModeFunction d(T);
  for (std::size_t j = 1; j < cos_coef.size(); ++j) d.add_sin(static_cast<int>(j), -cos_coef[j] * j * pi / T);
  for (std::size_t j = 1; j < sin_coef.size(); ++j) d.add_cos(static_cast<int>(j), sin_coef[j] * j * pi / T);
  for (const auto& term : terms) {
    if (term.power > 0) {
      ExpPolyTerm a = term;
      a.coef *= term.power;
      a.power -= 1;
      d.terms.push_back(a);
    }
    if (term.rate != 0.0) {
      ExpPolyTerm b = term;
      b.coef *= term.rate;
      d.terms.push_back(b);
    }
  }
  d.simplify();
  return d;
}

void ModeFunction::add_cos(int j, double a) {
  if (j < 0) throw std::invalid_argument("negative cosine index");
  if (cos_coef.size() <= static_cast<std::size_t>(j)) cos_coef.resize(j + 1, 0.0);
  cos_coef[j] += a;
}

void ModeFunction::add_sin(int j, double b) {
  if (j < 1) throw std::invalid_argument("sine index must be >= 1");
  if (sin_coef.size() <= static_cast<std::size_t>(j)) sin_coef.resize(j + 1, 0.0);
  sin_coef[j] += b;
}

void ModeFunction::add_term(ExpPolyTerm term) {
  term.lo = std::max(term.lo, 0.0);
  term.hi = std::min(term.hi, T);
  if (term.hi <= term.lo || term.coef == 0.0) return;
  terms.push_back(term);
}

void ModeFunction::simplify() {
  auto key = [](const ExpPolyTerm& t) {
    return std::make_tuple(t.power, t.shift, t.rate, t.anchor, t.lo, t.hi);
  };
  std::stable_sort(terms.begin(), terms.end(),
                   [&](const ExpPolyTerm& a, const ExpPolyTerm& b) { return key(a) < key(b); });
  std::vector<ExpPolyTerm> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && key(merged.back()) == key(t))
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const ExpPolyTerm& t) { return t.coef == 0.0; });
  terms = std::move(merged);
}

bool ModeFunction::is_zero() const {
  auto zero = [](double x) { return x == 0.0; };
  return std::all_of(cos_coef.begin(), cos_coef.end(), zero) &&
         std::all_of(sin_coef.begin(), sin_coef.end(), zero) &&
         std::all_of(terms.begin(), terms.end(), [](const ExpPolyTerm& t) { return t.coef == 0.0; });
}

std::vector<double> ModeFunction::breakpoints() const {
  std::vector<double> b;
  for (const auto& t : terms) {
    if (t.lo > 0.0 && t.lo < T) b.push_back(t.lo);
    if (t.hi > 0.0 && t.hi < T) b.push_back(t.hi);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double ModeFunction::max_rate() const {
  double r = 0.0;
  for (const auto& t : terms) r = std::max(r, std::abs(t.rate));
  return r;
}

ModeFunction& ModeFunction::operator+=(const ModeFunction& other) {
  check_horizons(*this, other);
  for (std::size_t j = 0; j < other.cos_coef.size(); ++j)
    if (other.cos_coef[j] != 0.0) add_cos(static_cast<int>(j), other.cos_coef[j]);
  for (std::size_t j = 1; j < other.sin_coef.size(); ++j)
    if (other.sin_coef[j] != 0.0) add_sin(static_cast<int>(j), other.sin_coef[j]);
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  simplify();
  return *this;
}

ModeFunction& ModeFunction::operator-=(const ModeFunction& other) { return *this += (-1.0) * other; }

ModeFunction& ModeFunction::operator*=(double s) {
  for (auto& a : cos_coef) a *= s;
  for (auto& b : sin_coef) b *= s;
  for (auto& t : terms) t.coef *= s;
  if (s == 0.0) terms.clear();
  return *this;
}

ModeFunction operator+(ModeFunction a, const ModeFunction& b) { return a += b; }
ModeFunction operator-(ModeFunction a, const ModeFunction& b) { return a -= b; }
ModeFunction operator*(double s, ModeFunction a) { return a *= s; }

double inner(const ModeFunction& f, const ModeFunction& g) {
  check_horizons(f, g);
  double total = trig_trig_inner(f, g);
  for (const auto& grp : group_terms(g.terms)) total += trig_group_inner(f, grp);
  for (const auto& grp : group_terms(f.terms)) total += trig_group_inner(g, grp);
  for (const auto& a : f.terms) {
    for (const auto& b : g.terms) {
      const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
      if (hi <= lo) continue;
      const cplx v = product_integral(lo, hi, a.power, a.shift, b.power, b.shift, a.rate, a.anchor,
                                      b.rate, b.anchor, 0.0);
      total += a.coef * b.coef * v.real();
    }
  }
  return total;
}

double norm_sq(const ModeFunction& f) { return inner(f, f); }

ModeFunction harmonic_antisym(double alpha, double T) {
  ModeFunction u(T);
  if (alpha == 0.0) {
    u.add_term({2.0, 1, T / 2.0, 0.0, 0.0, 0.0, T});
    return u;
  }
  u.add_term({1.0, 0, 0.0, -alpha, 0.0, 0.0, T});
  u.add_term({-1.0, 0, 0.0, alpha, T, 0.0, T});
  return u;
}

ModeFunction harmonic_sym(double alpha, double T) {
  if (alpha <= 0.0) throw std::invalid_argument("symmetric harmonic requires alpha > 0");
  ModeFunction u(T);
  u.add_term({1.0, 0, 0.0, -alpha, 0.0, 0.0, T});
  u.add_term({1.0, 0, 0.0, alpha, T, 0.0, T});
  return u;
}

ModeFunction cosine(int j, double T) {
  ModeFunction c(T);
  c.add_cos(j, 1.0);
  return c;
}

double TimeRule::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

TimeRule time_rule(double T, std::vector<double> breakpoints, double rate) {
  const int uniform = 16;
  std::vector<double> edges{0.0, T};
  for (int i = 1; i < uniform; ++i) edges.push_back(T * i / uniform);
  for (double b : breakpoints)
    if (b > 0.0 && b < T) edges.push_back(b);
  std::vector<double> anchors{0.0, T};
  for (double b : breakpoints)
    if (b > 0.0 && b < T) anchors.push_back(b);
  if (rate * T > 1.0) {
    const double step = T / uniform;
    for (double b : anchors) {
      for (double d = 1.0 / rate; d < step; d *= 2.0) {
        if (b - d > 0.0) edges.push_back(b - d);
        if (b + d < T) edges.push_back(b + d);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  static const QuadratureRule unit = gauss_legendre(32, 0.0, 1.0);
  TimeRule rule;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], w = edges[p + 1] - edges[p];
    if (w <= 0.0) continue;
    for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
      rule.nodes.push_back(a + w * unit.nodes[i]);
      rule.weights.push_back(w * unit.weights[i]);
    }
  }
  return rule;
}

TimeRule time_rule(const std::vector<const ModeFunction*>& functions) {
  if (functions.empty()) throw std::invalid_argument("time_rule: no functions");
  std::vector<double> breaks;
  double rate = 0.0;
  for (const auto* f : functions) {
    auto b = f->breakpoints();
    breaks.insert(breaks.end(), b.begin(), b.end());
    rate = std::max(rate, f->max_rate());
  }
  return time_rule(functions.front()->T, breaks, rate);
}

double quadrature_inner(const ModeFunction& f, const ModeFunction& g) {
  check_horizons(f, g);
  const TimeRule rule = time_rule({&f, &g});
  return rule.integrate([&](double t) { return f(t) * g(t); });
}

}  // namespace lifts
