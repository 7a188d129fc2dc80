#pragma once

/// @file diagnostics.hpp
/// Observables of a scaled run and estimators over recorded traces.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hydrofel/dynamics.hpp"
#include "hydrofel/errors.hpp"
#include "hydrofel/summation.hpp"

namespace hydrofel {

/// One diagnostics row. All quantities are dimensionless.
struct TraceRecord {
  double tau = 0.0;
  double amplitude = 0.0;     ///< scaled |F|
  double phase = 0.0;         ///< arg F
  complex bunching{};         ///< <e^{-i theta}>
  double mean_momentum = 0.0; ///< <p>
  double conserved = 0.0;     ///< <p> + |F|^2

  complex field() const { return std::polar(amplitude, phase); }
};

/// b = <e^{-i theta}>. |b| = 1 for a fully bunched ensemble.
inline complex bunching(std::span<const double> theta) {
  if (theta.empty()) throw DomainError("bunching of an empty phase set");
  PhasorCache cache;
  return cache.update(theta);
}

inline double mean_momentum(const SimState& s) {
  return pairwise_sum(s.momentum) / static_cast<double>(s.momentum.size());
}

/// C = <p> + A0^2, exactly conserved by the scaled equations.
inline double conserved_quantity(const SimState& s) {
  return mean_momentum(s) + std::norm(s.field);
}

inline TraceRecord make_record(const SimState& s) {
  TraceRecord r;
  r.tau = s.time;
  r.amplitude = s.amplitude();
  r.phase = s.phase();
  r.bunching = bunching(s.theta);
  r.mean_momentum = mean_momentum(s);
  r.conserved = r.mean_momentum + r.amplitude * r.amplitude;
  return r;
}

namespace detail {

/// Slope and intercept of an ordinary least-squares line.
struct LineFit {
  double slope;
  double intercept;
  double r_squared;
};

inline LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("least squares needs at least two distinct abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss_res += r * r;
  }
  double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  r2 = std::clamp(r2, 0.0, 1.0);
  return {slope, intercept, r2};
}

}  // namespace detail

/// Least-squares slope of ln A0 against tau over the first contiguous stretch
/// in which the amplitude rises from `lo` through `hi`.
///
/// The window opens at the first record with A0 >= lo and closes at the first
/// later record with A0 > hi; both crossings must exist.
inline double fit_growth_rate(std::span<const TraceRecord> trace, double lo = 1e-4,
                              double hi = 1e-2) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("growth window needs 0 < lo < hi");
  auto begin = std::find_if(trace.begin(), trace.end(),
                            [&](const TraceRecord& r) { return r.amplitude >= lo; });
  if (begin == trace.end()) throw InsufficientGrowthError("amplitude never reaches the window");
  auto end = std::find_if(begin, trace.end(),
                          [&](const TraceRecord& r) { return r.amplitude > hi; });
  if (end == trace.end()) {
    throw InsufficientGrowthError("amplitude does not rise through the growth window");
  }
  if (end - begin < 2) throw InsufficientGrowthError("growth window holds fewer than two records");
  std::vector<double> x, y;
  for (auto it = begin; it != end; ++it) {
    x.push_back(it->tau);
    y.push_back(std::log(it->amplitude));
  }
  const double slope = detail::least_squares_line(x, y).slope;
  if (!(slope > 0.0)) throw InsufficientGrowthError("amplitude is not growing in the window");
  return slope;
}

struct ModalFitOptions {
  double amplitude_cutoff = 0.1;  ///< use records until |F| first exceeds this
  double sample_spacing = 0.25;   ///< largest tau spacing of the resampled series
  int order = 3;                  ///< number of exponential modes
};

struct ModalFit {
  double growth_rate = 0.0;            ///< largest Re(lambda)
  std::vector<complex> exponents;      ///< all fitted lambda, sorted by Re descending
  std::size_t samples = 0;
};

/// Growth rate of the complex field from its linear stage by linear
/// prediction (Prony's method).
///
/// In the small-signal regime the field is a finite sum of complex
/// exponentials sum_k c_k exp(lambda_k tau). Fitting the recurrence
/// F[m] = sum_k a_k F[m-k] on equally spaced samples and rooting its
/// characteristic polynomial returns every lambda_k. Unlike a log-slope
/// over an amplitude window, this separates the growing mode from the
/// neutral and damped ones a shot-noise start excites with comparable
/// weight.
inline ModalFit fit_modal_growth_rate(std::span<const TraceRecord> trace,
                                      const ModalFitOptions& opt = {}) {
  if (opt.order < 1) throw DomainError("modal fit order must be positive");
  if (trace.size() < 2) throw InsufficientGrowthError("trace too short for a modal fit");
  auto stop = std::find_if(trace.begin(), trace.end(),
                           [&](const TraceRecord& r) { return r.amplitude > opt.amplitude_cutoff; });
  if (stop == trace.end()) {
    throw InsufficientGrowthError("amplitude never leaves the small-signal regime");
  }
  const double dt_rec = trace[1].tau - trace[0].tau;
  if (!(dt_rec > 0.0)) throw DomainError("trace times must increase");
  const auto last = static_cast<std::size_t>(stop - trace.begin());
  const auto order = static_cast<std::size_t>(opt.order);
  // Shorter linear stages are resampled more densely, down to every record.
  std::size_t stride = static_cast<std::size_t>(
      std::max(1.0, std::round(opt.sample_spacing / dt_rec)));
  stride = std::max<std::size_t>(1, std::min(stride, last / (4 * order)));
  std::vector<complex> f;
  for (std::size_t i = 0; i < last; i += stride) f.push_back(trace[i].field());
  if (f.size() < 3 * order) {
    throw InsufficientGrowthError("too few samples in the small-signal regime");
  }

  const std::size_t rows = f.size() - order;
  Eigen::MatrixXcd h(rows, order);
  Eigen::VectorXcd rhs(rows);
  // Each equation is normalised by |F[m + order]| so the exponentially small
  // early samples weigh as much as the late ones.
  for (std::size_t m = 0; m < rows; ++m) {
    const double mag = std::abs(f[m + order]);
    const double w = mag > 0.0 ? 1.0 / mag : 1.0;
    for (std::size_t k = 0; k < order; ++k) h(m, k) = w * f[m + order - 1 - k];
    rhs(m) = w * f[m + order];
  }
  const Eigen::VectorXcd a = h.completeOrthogonalDecomposition().solve(rhs);

  // Companion matrix of z^order - a_1 z^(order-1) - ... - a_order.
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(order, order);
  for (std::size_t k = 0; k < order; ++k) companion(0, k) = a(k);
  for (std::size_t k = 1; k < order; ++k) companion(k, k - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion, false);
  if (eig.info() != Eigen::Success) throw InsufficientGrowthError("modal root finding failed");

  const double dt = dt_rec * static_cast<double>(stride);
  ModalFit out;
  out.samples = f.size();
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const complex z = eig.eigenvalues()(k);
    if (std::abs(z) == 0.0) continue;
    out.exponents.push_back(std::log(z) / dt);
  }
  std::sort(out.exponents.begin(), out.exponents.end(),
            [](const complex& x, const complex& y) { return x.real() > y.real(); });
  if (out.exponents.empty() || !(out.exponents.front().real() > 0.0)) {
    throw InsufficientGrowthError("no growing mode in the small-signal regime");
  }
  out.growth_rate = out.exponents.front().real();
  return out;
}

struct Saturation {
  double tau;
  double amplitude;
};

/// First local maximum of A0 with A0 >= threshold.
inline Saturation detect_saturation(std::span<const TraceRecord> trace, double threshold = 0.5) {
  for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
    const double a = trace[i].amplitude;
    if (a >= threshold && a >= trace[i - 1].amplitude && a > trace[i + 1].amplitude) {
      return {trace[i].tau, a};
    }
  }
  throw NotSaturatedError("no amplitude peak above the saturation threshold");
}

/// Time at which A0 first reaches `level`, linearly interpolated between
/// records.
inline std::optional<double> first_crossing(std::span<const TraceRecord> trace, double level) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].amplitude >= level) {
      if (i == 0) return trace[0].tau;
      const auto& a = trace[i - 1];
      const auto& b = trace[i];
      const double w = (level - a.amplitude) / (b.amplitude - a.amplitude);
      return a.tau + w * (b.tau - a.tau);
    }
  }
  return std::nullopt;
}

/// y = prefactor * x^exponent fitted by least squares on (ln x, ln y).
struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("power-law fit needs equally many x and y");
  if (x.size() < 3) throw DomainError("power-law fit needs at least three points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw DomainError("power-law fit needs strictly positive coordinates");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const auto line = detail::least_squares_line(lx, ly);
  return {line.slope, std::exp(line.intercept), line.r_squared};
}

}  // namespace hydrofel
