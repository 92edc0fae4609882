#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ionquench/equilibrium.hpp"
#include "ionquench/errors.hpp"
#include "ionquench/model.hpp"

// Kink/antikink detection on post-quench configurations. The detector works
// on any transverse-amplitude sequence (ion y's or field grid values):
// staggered signs with an amplitude floor, zeros bridged, defects read off
// as sign changes between consecutive nonzero entries.

namespace ionq {

struct IndexWindow {
  std::size_t begin = 0;  // first index, inclusive
  std::size_t end = 0;    // one past last

  std::size_t size() const { return end - begin; }
};

struct Defect {
  std::size_t bond = 0;  // between entries bond and bond+1
  int charge = 0;        // sigma = +1 kink, -1 antikink
};

struct DefectCensus {
  IndexWindow window;
  std::vector<Defect> defects;
  double density = 0.0;  // defect count / window size

  std::string charge_string() const {
    std::string s;
    for (const auto& d : defects) s += (d.charge > 0) ? '+' : '-';
    return s;
  }
};

struct StopRule {
  double target_fraction = 0.9;
  double reference = 0.0;  // <y> of the zigzag ground state in the final trap
  double min_time = 0.0;   // +tau_Q
};

// The N_C centermost ions that would reach the zigzag structure in an
// adiabatic transition (nu_c^2(x) > nu_t^2 final). Requested window size is
// clamped to the eligible count.
inline IndexWindow central_window(const ChainProfile& profile,
                                  double nu_t_sq_final, int n_central) {
  if (!(nu_t_sq_final < profile.nu_c0_sq))
    throw ConfigError("final frequency does not cross the central critical value");
  const std::size_t n = std::size_t(profile.size());
  std::size_t eligible = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = profile.positions[i];
    if (std::abs(x) < profile.half_length &&
        profile.local_nu_c_sq(x) > nu_t_sq_final)
      ++eligible;
  }
  if (eligible < 2)
    throw ConfigError("quench too shallow: no zigzag window");
  std::size_t n_c = std::min<std::size_t>(std::size_t(n_central), eligible);
  if (n_c < 2) n_c = 2;
  const std::size_t begin = (n - n_c) / 2;
  return {begin, begin + n_c};
}

inline double mean_abs_transverse(const std::vector<double>& y,
                                  const IndexWindow& w) {
  double s = 0.0;
  for (std::size_t i = w.begin; i < w.end; ++i) s += std::abs(y[i]);
  return s / double(w.size());
}

inline double mean_abs_transverse(const IonState& state, const IndexWindow& w) {
  return mean_abs_transverse(state.y, w);
}

// s_i = (-1)^i sign(y_i) when |y_i| >= floor, else 0. Index parity is the
// global index, so the convention cancels in sign changes regardless of the
// window offset.
inline std::vector<int> staggered_signs(const std::vector<double>& y,
                                        const IndexWindow& w, double floor,
                                        bool staggered = true) {
  if (!(floor > 0.0)) throw ConfigError("amplitude floor must be > 0");
  std::vector<int> s(w.size(), 0);
  for (std::size_t i = w.begin; i < w.end; ++i) {
    if (std::abs(y[i]) >= floor) {
      const int parity = (!staggered || i % 2 == 0) ? 1 : -1;
      s[i - w.begin] = parity * (y[i] > 0.0 ? 1 : -1);
    }
  }
  return s;
}

inline std::vector<int> staggered_signs(const IonState& state,
                                        const IndexWindow& w, double floor) {
  return staggered_signs(state.y, w, floor);
}

inline double default_floor(const std::vector<double>& y, const IndexWindow& w) {
  return 0.1 * mean_abs_transverse(y, w);
}

// Sign changes between consecutive nonzero staggered signs; a defect bond is
// reported at the last nonzero entry before the slip. Charge: +1 when the
// staggered phase advances (- to +) left to right.
inline DefectCensus count_defects(const std::vector<double>& y,
                                  const IndexWindow& w, double floor,
                                  bool staggered = true) {
  const auto s = staggered_signs(y, w, floor, staggered);
  DefectCensus census;
  census.window = w;
  long prev_idx = -1;
  int prev_sign = 0;
  int n_nonzero = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == 0) continue;
    ++n_nonzero;
    if (prev_sign != 0 && s[k] != prev_sign)
      census.defects.push_back(
          {w.begin + std::size_t(prev_idx), s[k] > 0 ? +1 : -1});
    prev_sign = s[k];
    prev_idx = long(k);
  }
  if (n_nonzero < 2)
    throw DataQualityError("fewer than 2 ions above the amplitude floor");
  census.density = double(census.defects.size()) / double(w.size());
  return census;
}

inline DefectCensus count_defects(const IonState& state, const IndexWindow& w,
                                  double floor) {
  return count_defects(state.y, w, floor);
}

// Cyclic sign-change count for a periodic ring of field values (no
// staggering): includes the wrap-around bond, so the count is always even.
inline std::size_t count_sign_changes_ring(const std::vector<double>& values,
                                           double floor) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::abs(values[i]) >= floor) idx.push_back(i);
  if (idx.size() < 2)
    throw DataQualityError("fewer than 2 nodes above the amplitude floor");
  std::size_t changes = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double a = values[idx[k]];
    const double b = values[idx[(k + 1) % idx.size()]];
    if ((a > 0.0) != (b > 0.0)) ++changes;
  }
  return changes;
}

inline bool should_stop(const IonState& state, const StopRule& rule,
                        const IndexWindow& w) {
  if (state.t < rule.min_time) return false;
  return mean_abs_transverse(state, w) >=
         rule.target_fraction * rule.reference;
}

}  // namespace ionq
