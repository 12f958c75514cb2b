#include "lifts/linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lifts::detail {
namespace {

constexpr double kEps = 1e-11;

// Tableau in the layout of the classic dictionary simplex: rows 0..m-1 are
// constraints, row m the objective, row m+1 the phase-one objective.
class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b, const Vector& c)
      : m_(A.rows()), n_(A.cols()), d_(m_ + 2, n_ + 2), basis_(m_), nonbasis_(n_ + 1) {
    d_.setZero();
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) d_(i, j) = A(i, j);
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = b(i);
      basis_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) {
      nonbasis_[j] = j;
      d_(m_, j) = -c(j);
    }
    nonbasis_[n_] = -1;
    d_(m_ + 1, n_) = 1.0;
  }

  LpResult solve() {
    LpResult out;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    if (m_ > 0 && d_(r, n_ + 1) < -kEps) {
      pivot(r, n_);
      if (!run(1) || d_(m_ + 1, n_ + 1) < -kEps) {
        out.status = LpStatus::infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] == -1) {
          int s = -1;
          for (int j = 0; j <= n_; ++j)
            if (s == -1 || d_(i, j) < d_(i, s) || (d_(i, j) == d_(i, s) && nonbasis_[j] < nonbasis_[s]))
              s = j;
          pivot(i, s);
        }
      }
    }
    if (!run(2)) {
      out.status = LpStatus::unbounded;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    out.status = LpStatus::optimal;
    out.x = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) out.x(basis_[i]) = d_(i, n_ + 1);
    out.value = d_(m_, n_ + 1);
    return out;
  }

 private:
  void pivot(int r, int s) {
    const double inv = 1.0 / d_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      for (int j = 0; j < n_ + 2; ++j)
        if (j != s) d_(i, j) -= d_(r, j) * d_(i, s) * inv;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_(r, j) *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) d_(i, s) *= -inv;
    d_(r, s) = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  bool run(int phase) {
    const int x = phase == 1 ? m_ + 1 : m_;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 2 && nonbasis_[j] == -1) continue;
        if (s == -1 || d_(x, j) < d_(x, s) || (d_(x, j) == d_(x, s) && nonbasis_[j] < nonbasis_[s]))
          s = j;
      }
      if (d_(x, s) > -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_(i, s) < kEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = d_(i, n_ + 1) / d_(i, s);
        const double rhs = d_(r, n_ + 1) / d_(r, s);
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  Matrix d_;
  std::vector<int> basis_;
  std::vector<int> nonbasis_;
};

}  // namespace

LpResult maximize(const Vector& c, const Matrix& A, const Vector& b) {
  // Split free variables x = p - q with p, q >= 0.
  const int n = static_cast<int>(A.cols());
  Matrix split(A.rows(), 2 * n);
  split << A, -A;
  Vector split_c(2 * n);
  split_c << c, -c;
  Tableau tableau(split, b, split_c);
  LpResult raw = tableau.solve();
  if (raw.status != LpStatus::optimal) return raw;
  LpResult out = raw;
  out.x = raw.x.head(n) - raw.x.tail(n);
  return out;
}

}  // namespace lifts::detail
