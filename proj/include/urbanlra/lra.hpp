#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urbanlra/dense.hpp"
#include "urbanlra/error.hpp"

namespace urbanlra {

/// Thin SVD M = U diag(S) V^T with p = min(m, n).
///
/// Sign convention: in every column of U the entry of largest magnitude
/// (first one on ties) is nonnegative; the matching V column flips with it.
/// Singular values are sorted nonincreasing; exactly tied values keep the
/// order the Jacobi sweeps produced them in.
struct SvdFactors {
  Matrix U;               // m x p
  std::vector<double> S;  // p
  Matrix V;               // n x p
  int sweeps = 0;

  std::size_t rank_capacity() const noexcept { return S.size(); }
};

struct SvdOptions {
  int max_sweeps = 60;
};

/// One-sided (Hestenes) Jacobi SVD. Deterministic for a fixed input.
/// Throws InvalidArgument on empty or non-finite input and ConvergenceError,
/// carrying the largest remaining column cosine, if sweeps run out.
SvdFactors svd(const Matrix& m, const SvdOptions& options = {});

/// Leading r components of an SVD.
struct TruncatedLra {
  Matrix U;               // m x r
  std::vector<double> S;  // r
  Matrix V;               // n x r

  std::size_t rank() const noexcept { return S.size(); }
};

/// Requires 1 <= r <= p.
TruncatedLra truncate(const SvdFactors& f, std::size_t r);

/// U diag(S) V^T.
Matrix reconstruct(const TruncatedLra& t);

/// ||M_r - M||_F / ||M||_F computed from the explicit rank-r reconstruction.
/// Throws InvalidArgument when ||M||_F = 0 or r is out of range.
double reconstruction_error(const Matrix& m, std::size_t r);
double reconstruction_error(const Matrix& m, const SvdFactors& f, std::size_t r);

/// Share of squared singular-value mass captured by the leading r values.
double energy_ratio(std::span<const double> s, std::size_t r);

struct RankScanRow {
  std::size_t r = 0;
  double error = 0.0;
  double energy = 0.0;
  std::optional<double> profile_residual;
};

struct RankScanReport {
  std::vector<RankScanRow> rows;  // r = 1..r_max
  std::vector<double> singular_values;
};

/// Diagnostics for r = 1..r_max from a single decomposition. The error column
/// uses the tail-energy identity, so it is exactly nonincreasing. With
/// `profiles` set, the m x 144 input is also compared against each rank-r
/// reconstruction through its 6 x 24 per-demand hourly totals.
RankScanReport rank_scan(const Matrix& m, const SvdFactors& f, std::size_t r_max,
                         bool profiles = false);
RankScanReport rank_scan(const Matrix& m, std::size_t r_max, bool profiles = false);

class RankSelectionError : public Error {
public:
  RankSelectionError(const std::string& what, std::string binding)
      : Error(what), binding_(std::move(binding)) {}
  /// "energy", "error" or "both".
  const std::string& binding() const noexcept { return binding_; }

private:
  std::string binding_;
};

inline constexpr double kDefaultEnergyThreshold = 0.90;
inline constexpr double kDefaultErrorThreshold = 0.05;

/// Smallest scanned r with energy >= energy_threshold and error <= error_threshold.
std::size_t suggest_rank(const RankScanReport& report,
                         double energy_threshold = kDefaultEnergyThreshold,
                         double error_threshold = kDefaultErrorThreshold);

}  // namespace urbanlra
