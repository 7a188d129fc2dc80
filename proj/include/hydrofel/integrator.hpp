#pragma once

/// @file integrator.hpp
/// Fixed-step classical Runge-Kutta integration over any state type that
/// supports the small set of free functions below (found by ADL).

#include <cmath>
#include <concepts>
#include <cstddef>
#include <sstream>
#include <utility>

#include "hydrofel/errors.hpp"

namespace hydrofel {

/// A state `S` with an associated derivative type. Time is not part of the
/// derivative: the integrator sets it with `set_time` so that
/// `time == t0 + k * step` holds exactly after every step.
template <class S>
concept RungeKuttaState =
    std::copyable<S> && requires(S& s, const S& cs, const typename S::derivative_type& d,
                                 double h) {
      { make_derivative(cs) } -> std::same_as<typename S::derivative_type>;
      axpy(s, h, d);  // s += h * d
      set_time(s, h);
      { state_time(cs) } -> std::convertible_to<double>;
      { all_finite(cs) } -> std::convertible_to<bool>;
    };

template <class Rhs, class S>
concept RightHandSide =
    RungeKuttaState<S> && std::invocable<Rhs&, const S&, typename S::derivative_type&>;

struct StepControl {
  double step = 1e-3;
  double horizon = 1.0;
  std::size_t record_stride = 10;
};

/// Raised when a step produces NaN or infinity. `step` is the index of the
/// offending step; the state before it was the last finite one.
class NonFiniteStateError : public Error {
 public:
  NonFiniteStateError(std::size_t step, double time)
      : Error(message(step, time)), step_(step), time_(time) {}
  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  static std::string message(std::size_t step, double time) {
    std::ostringstream os;
    os << "integration diverged at step " << step << " (time " << time << ")";
    return os.str();
  }
  std::size_t step_;
  double time_;
};

inline std::size_t step_count(const StepControl& ctl) {
  if (!(ctl.step > 0.0) || !std::isfinite(ctl.step)) {
    throw DomainError("step must be positive");
  }
  if (!(ctl.horizon >= ctl.step) || !std::isfinite(ctl.horizon)) {
    throw DomainError("horizon must be at least one step");
  }
  if (ctl.record_stride == 0) throw DomainError("record stride must be positive");
  return static_cast<std::size_t>(std::llround(ctl.horizon / ctl.step));
}

/// Workspace for repeated RK4 steps on states of the same shape.
template <RungeKuttaState S>
class Rk4Stepper {
 public:
  using Derivative = typename S::derivative_type;

  explicit Rk4Stepper(const S& shape)
      : k1_(make_derivative(shape)),
        k2_(make_derivative(shape)),
        k3_(make_derivative(shape)),
        k4_(make_derivative(shape)),
        tmp_(shape) {}

  /// Advances `y` by `h` and stamps it with `t_next`.
  template <class Rhs>
    requires RightHandSide<Rhs, S>
  void step(S& y, Rhs& rhs, double h, double t_next) {
    const double t0 = state_time(y);
    rhs(y, k1_);
    stage(y, h / 2, k1_, t0 + h / 2);
    rhs(tmp_, k2_);
    stage(y, h / 2, k2_, t0 + h / 2);
    rhs(tmp_, k3_);
    stage(y, h, k3_, t_next);
    rhs(tmp_, k4_);
    axpy(y, h / 6, k1_);
    axpy(y, h / 3, k2_);
    axpy(y, h / 3, k3_);
    axpy(y, h / 6, k4_);
    set_time(y, t_next);
  }

 private:
  void stage(const S& y, double h, const Derivative& k, double t) {
    tmp_ = y;
    axpy(tmp_, h, k);
    set_time(tmp_, t);
  }

  Derivative k1_, k2_, k3_, k4_;
  S tmp_;
};

/// Integrates from `s0` over `ctl.horizon` in `round(horizon / step)` steps.
/// `observe(state, step_index)` is called for the initial state, every
/// `record_stride` steps, and for the final state.
template <RungeKuttaState S, class Rhs, class Observer>
  requires RightHandSide<Rhs, S> && std::invocable<Observer&, const S&, std::size_t>
S integrate(S s0, Rhs&& rhs, const StepControl& ctl, Observer&& observe) {
  const std::size_t steps = step_count(ctl);
  const double t0 = state_time(s0);
  Rk4Stepper<S> stepper(s0);
  observe(std::as_const(s0), std::size_t{0});
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = t0 + static_cast<double>(k) * ctl.step;
    stepper.step(s0, rhs, ctl.step, t_next);
    if (!all_finite(s0)) throw NonFiniteStateError(k, t_next);
    if (k % ctl.record_stride == 0 || k == steps) observe(std::as_const(s0), k);
  }
  return s0;
}

template <RungeKuttaState S, class Rhs>
  requires RightHandSide<Rhs, S>
S integrate(S s0, Rhs&& rhs, const StepControl& ctl) {
  return integrate(std::move(s0), std::forward<Rhs>(rhs), ctl, [](const S&, std::size_t) {});
}

}  // namespace hydrofel
