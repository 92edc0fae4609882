#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "ionquench/errors.hpp"

namespace ionq {

struct ScalingRow {
  double tau_q = 0.0;
  double mean_density = 0.0;
  double std_error = 0.0;
  int n_valid = 0;
};

struct PowerLawFit {
  double exponent = 0.0;   // slope of log d vs log(1/tau_Q)
  double intercept = 0.0;
  double r = 0.0;          // Pearson correlation of the fitted pairs
  int n_used = 0;
  int n_excluded_zero = 0;  // zero-density rows dropped from the fit
};

struct FitWindow {
  std::optional<double> min_tau;
  std::optional<double> max_tau;

  bool contains(double tau) const {
    if (min_tau && tau < *min_tau) return false;
    if (max_tau && tau > *max_tau) return false;
    return true;
  }
};

inline double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Standard error via the sample standard deviation / sqrt(n).
inline double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) throw DataQualityError("standard error needs n >= 2");
  const double m = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1)) / std::sqrt(double(v.size()));
}

// Ordinary least squares on (log(1/tau_Q), log d). Zero-density rows are
// excluded and reported; fewer than 3 usable rows is an error.
inline PowerLawFit fit_power_law(const std::vector<ScalingRow>& rows,
                                 const FitWindow& window = {}) {
  std::vector<double> u, w;
  PowerLawFit fit;
  for (const auto& row : rows) {
    if (!window.contains(row.tau_q)) continue;
    if (!(row.mean_density > 0.0)) {
      ++fit.n_excluded_zero;
      continue;
    }
    u.push_back(std::log(1.0 / row.tau_q));
    w.push_back(std::log(row.mean_density));
  }
  if (u.size() < 3)
    throw DataQualityError("fewer than 3 usable rows for the power-law fit");
  const std::size_t n = u.size();
  const double mu = sample_mean(u), mw = sample_mean(w);
  double suu = 0.0, sww = 0.0, suw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    sww += (w[i] - mw) * (w[i] - mw);
    suw += (u[i] - mu) * (w[i] - mw);
  }
  if (!(suu > 0.0)) throw DataQualityError("degenerate tau_Q grid");
  fit.exponent = suw / suu;
  fit.intercept = mw - fit.exponent * mu;
  fit.r = (sww > 0.0) ? suw / std::sqrt(suu * sww) : 0.0;
  fit.n_used = int(n);
  return fit;
}

// Flags the fast-quench rows where the density has stopped growing
// (relative increase < 10% per grid step towards smaller tau_Q). Returns
// indices into `rows` (assumed sorted ascending in tau_Q); suggestion only.
inline std::vector<std::size_t> saturation_guard(
    const std::vector<ScalingRow>& rows) {
  if (rows.size() < 5)
    throw DataQualityError("saturation guard needs at least 5 rows");
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double slower = rows[i + 1].mean_density;  // larger tau_Q
    const double faster = rows[i].mean_density;
    if (!(slower > 0.0)) continue;
    if ((faster - slower) / slower < 0.10)
      flagged.push_back(i);
    else
      break;  // growth resumed; only flag the contiguous fast-quench prefix
  }
  return flagged;
}

}  // namespace ionq
