#include "urbanlra/lra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "urbanlra/rttd.hpp"

namespace urbanlra {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Columns = std::vector<std::vector<double>>;

double col_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void rotate(std::vector<double>& p, std::vector<double>& q, double c, double s) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ap = p[i];
    const double aq = q[i];
    p[i] = c * ap - s * aq;
    q[i] = s * ap + c * aq;
  }
}

// Orthonormal vector orthogonal to every column in `basis`, built from the
// first standard basis vector that survives two Gram-Schmidt passes.
std::vector<double> complete_basis(const Columns& basis, std::size_t m) {
  for (std::size_t e = 0; e < m; ++e) {
    std::vector<double> v(m, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double proj = col_dot(v, b);
        for (std::size_t i = 0; i < m; ++i) v[i] -= proj * b[i];
      }
    }
    const double nrm = norm2(v);
    if (nrm > 0.5) {
      for (double& x : v) x /= nrm;
      return v;
    }
  }
  throw Error("svd: cannot complete orthonormal basis");
}

// Jacobi SVD of a tall matrix given by its columns (m >= n).
SvdFactors jacobi_tall(Columns a, const SvdOptions& options) {
  const std::size_t n = a.size();
  const std::size_t m = n ? a[0].size() : 0;

  Columns v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

  double frob2 = 0.0;
  for (const auto& col : a) frob2 += col_dot(col, col);
  // Columns below this squared norm are numerical zeros; their cosines do
  // not count toward convergence.
  const double negligible = frob2 * kEps * kEps;
  const double tol = static_cast<double>(m) * kEps;

  int sweep = 0;
  double off = 0.0;
  bool converged = n < 2;
  for (; sweep < options.max_sweeps && !converged; ++sweep) {
    off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = col_dot(a[p], a[p]);
        const double beta = col_dot(a[q], a[q]);
        const double gamma = col_dot(a[p], a[q]);
        if (gamma == 0.0 || alpha == 0.0 || beta == 0.0) continue;
        const double cosine = std::fabs(gamma) / std::sqrt(alpha * beta);
        if (alpha > negligible && beta > negligible) off = std::max(off, cosine);
        if (cosine <= tol) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(a[p], a[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    }
    converged = off <= tol;
  }
  if (!converged)
    throw ConvergenceError("svd: Jacobi sweeps did not converge, largest column cosine " +
                               std::to_string(off),
                           off);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(a[j]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  const double smax = n ? sigma[order[0]] : 0.0;
  const double zero_cut = static_cast<double>(std::max(m, n)) * kEps * smax;

  Columns u_cols;
  u_cols.reserve(n);
  std::vector<std::size_t> deficient;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    if (sigma[j] > zero_cut && sigma[j] > 0.0) {
      std::vector<double> u = a[j];
      for (double& x : u) x /= sigma[j];
      u_cols.push_back(std::move(u));
    } else {
      u_cols.emplace_back();
      deficient.push_back(k);
    }
  }
  if (!deficient.empty()) {
    Columns basis;
    for (const auto& u : u_cols)
      if (!u.empty()) basis.push_back(u);
    for (std::size_t k : deficient) {
      u_cols[k] = complete_basis(basis, m);
      basis.push_back(u_cols[k]);
    }
  }

  SvdFactors f;
  f.sweeps = sweep;
  f.S.resize(n);
  f.U = Matrix(m, n);
  f.V = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    f.S[k] = sigma[j];
    const auto& u = u_cols[k];
    // Sign convention on U; the largest-magnitude entry becomes nonnegative.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (std::fabs(u[i]) > std::fabs(u[arg])) arg = i;
    const double sign = u[arg] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < m; ++i) f.U(i, k) = sign * u[i];
    for (std::size_t i = 0; i < n; ++i) f.V(i, k) = sign * v[j][i];
  }
  return f;
}

void apply_sign_convention(SvdFactors& f) {
  const std::size_t m = f.U.rows();
  for (std::size_t k = 0; k < f.S.size(); ++k) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (std::fabs(f.U(i, k)) > std::fabs(f.U(arg, k))) arg = i;
    if (f.U(arg, k) < 0.0) {
      for (std::size_t i = 0; i < m; ++i) f.U(i, k) = -f.U(i, k);
      for (std::size_t i = 0; i < f.V.rows(); ++i) f.V(i, k) = -f.V(i, k);
    }
  }
}

void check_rank(std::size_t r, std::size_t p) {
  if (r < 1 || r > p)
    throw InvalidArgument("rank " + std::to_string(r) + " outside [1, " + std::to_string(p) + "]");
}

}  // namespace

SvdFactors svd(const Matrix& m, const SvdOptions& options) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidArgument("svd: empty matrix");
  if (!all_finite(m)) throw InvalidArgument("svd: matrix has non-finite entries");

  const bool tall = m.rows() >= m.cols();
  const Matrix& src = m;
  const std::size_t rows = tall ? m.rows() : m.cols();
  const std::size_t cols = tall ? m.cols() : m.rows();
  Columns a(cols, std::vector<double>(rows));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (tall)
        a[j][i] = src(i, j);
      else
        a[i][j] = src(i, j);
    }

  SvdFactors f = jacobi_tall(std::move(a), options);
  if (!tall) {
    std::swap(f.U, f.V);
    apply_sign_convention(f);
  }
  return f;
}

TruncatedLra truncate(const SvdFactors& f, std::size_t r) {
  check_rank(r, f.S.size());
  TruncatedLra t;
  t.S.assign(f.S.begin(), f.S.begin() + static_cast<std::ptrdiff_t>(r));
  t.U = Matrix(f.U.rows(), r);
  t.V = Matrix(f.V.rows(), r);
  for (std::size_t i = 0; i < f.U.rows(); ++i)
    for (std::size_t k = 0; k < r; ++k) t.U(i, k) = f.U(i, k);
  for (std::size_t i = 0; i < f.V.rows(); ++i)
    for (std::size_t k = 0; k < r; ++k) t.V(i, k) = f.V(i, k);
  return t;
}

Matrix reconstruct(const TruncatedLra& t) {
  Matrix us = t.U;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t k = 0; k < t.rank(); ++k) us(i, k) *= t.S[k];
  return us * t.V.transposed();
}

double reconstruction_error(const Matrix& m, const SvdFactors& f, std::size_t r) {
  check_rank(r, f.S.size());
  const double denom = frobenius_norm(m);
  if (denom == 0.0) throw InvalidArgument("reconstruction_error: matrix has zero Frobenius norm");
  return frobenius_norm(reconstruct(truncate(f, r)) - m) / denom;
}

double reconstruction_error(const Matrix& m, std::size_t r) {
  if (frobenius_norm(m) == 0.0)
    throw InvalidArgument("reconstruction_error: matrix has zero Frobenius norm");
  return reconstruction_error(m, svd(m), r);
}

double energy_ratio(std::span<const double> s, std::size_t r) {
  check_rank(r, s.size());
  double head = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = s[i] * s[i];
    total += e;
    if (i < r) head += e;
  }
  if (total == 0.0) throw InvalidArgument("energy_ratio: all singular values are zero");
  return head / total;
}

RankScanReport rank_scan(const Matrix& m, const SvdFactors& f, std::size_t r_max, bool profiles) {
  const std::size_t p = f.S.size();
  check_rank(r_max, p);
  if (profiles && m.cols() != kTtdCount)
    throw InvalidArgument("rank_scan: profile residuals need a 144-column matrix");

  std::vector<double> prefix(p + 1, 0.0);
  std::vector<double> suffix(p + 1, 0.0);
  for (std::size_t i = 0; i < p; ++i) prefix[i + 1] = prefix[i] + f.S[i] * f.S[i];
  for (std::size_t i = p; i-- > 0;) suffix[i] = suffix[i + 1] + f.S[i] * f.S[i];
  const double total = prefix[p];
  if (total == 0.0) throw InvalidArgument("rank_scan: matrix has zero Frobenius norm");

  RankScanReport report;
  report.singular_values = f.S;
  report.rows.reserve(r_max);

  // Column sums of M and of the running rank-r reconstruction; the 6 x 24
  // profile table is just these 144 sums reshaped.
  std::vector<double> target;
  std::vector<double> approx;
  if (profiles) {
    target.assign(m.cols(), 0.0);
    approx.assign(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) target[j] += m(i, j);
  }

  for (std::size_t r = 1; r <= r_max; ++r) {
    RankScanRow row;
    row.r = r;
    row.energy = prefix[r] / total;
    row.error = std::sqrt(suffix[r] / total);
    if (profiles) {
      double usum = 0.0;
      for (std::size_t i = 0; i < f.U.rows(); ++i) usum += f.U(i, r - 1);
      const double w = f.S[r - 1] * usum;
      for (std::size_t j = 0; j < approx.size(); ++j) approx[j] += w * f.V(j, r - 1);
      std::vector<double> diff(approx.size());
      for (std::size_t j = 0; j < approx.size(); ++j) diff[j] = target[j] - approx[j];
      row.profile_residual = norm2(diff);
    }
    report.rows.push_back(row);
  }
  return report;
}

RankScanReport rank_scan(const Matrix& m, std::size_t r_max, bool profiles) {
  return rank_scan(m, svd(m), r_max, profiles);
}

std::size_t suggest_rank(const RankScanReport& report, double energy_threshold,
                         double error_threshold) {
  if (!(energy_threshold > 0.0 && energy_threshold <= 1.0))
    throw InvalidArgument("energy threshold must lie in (0, 1]");
  if (!(error_threshold >= 0.0 && error_threshold <= 1.0))
    throw InvalidArgument("error threshold must lie in [0, 1]");

  bool energy_met = false;
  bool error_met = false;
  for (const auto& row : report.rows) {
    const bool e_ok = row.energy >= energy_threshold;
    const bool err_ok = row.error <= error_threshold;
    energy_met = energy_met || e_ok;
    error_met = error_met || err_ok;
    if (e_ok && err_ok) return row.r;
  }
  const std::size_t r_max = report.rows.empty() ? 0 : report.rows.back().r;
  std::string binding = !energy_met && !error_met ? "both" : (!energy_met ? "energy" : "error");
  std::string what = "no rank in 1.." + std::to_string(r_max) + " satisfies ";
  if (binding == "energy")
    what += "energy >= " + std::to_string(energy_threshold);
  else if (binding == "error")
    what += "error <= " + std::to_string(error_threshold);
  else
    what += "energy >= " + std::to_string(energy_threshold) + " or error <= " +
            std::to_string(error_threshold);
  if (!report.rows.empty()) {
    const auto& last = report.rows.back();
    what += " (at r=" + std::to_string(r_max) + ": energy " + std::to_string(last.energy) +
            ", error " + std::to_string(last.error) + ")";
  }
  throw RankSelectionError(what, binding);
}

}  // namespace urbanlra
