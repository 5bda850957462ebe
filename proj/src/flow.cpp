/*
 * Copyright 2026 The fullerkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fullerkit/flow.hpp"

#include "fullerkit/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace fullerkit {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Bang: return "bang";
    case Regime::Singular: return "singular";
    case Regime::Degenerate: return "degenerate";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Crossing: return "crossing";
    case EventKind::Entry: return "entry";
    case EventKind::Exit: return "exit";
  }
  return "?";
}

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Completed: return "completed";
    case FlowStatus::Degenerate: return "degenerate";
    case FlowStatus::Chattering: return "chattering";
    case FlowStatus::BlowUp: return "blow-up";
  }
  return "?";
}

namespace {

// Fields with pre-differentiated Jacobian entries and the brackets needed by
// the control laws.
class CompiledSystem {
 public:
  explicit CompiledSystem(const ControlAffineSystem& sys) : sys_(sys), table_(sys) {
    const int n = sys.n();
    for (const auto& f : sys.fields()) {
      std::vector<Polynomial> d;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) d.push_back(f.component(static_cast<std::size_t>(i)).derivative(static_cast<std::size_t>(j)));
      }
      jac_.push_back(std::move(d));
    }
    const int k = sys.control_count();
    for (int i = 1; i <= k; ++i) {
      h0i_fields_.push_back(table_.get({0, i}));
      for (int j = i + 1; j <= k; ++j) goh_fields_.push_back(table_.get({i, j}));
    }
  }

  int n() const { return sys_.n(); }
  int k() const { return sys_.control_count(); }

  Vector field(int i, const Vector& q) const { return evaluate(sys_.field(i), q); }

  Matrix jacobian(int f, const Vector& q) const {
    const int n = sys_.n();
    Matrix J(n, n);
    const auto& d = jac_[static_cast<std::size_t>(f)];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) J(i, j) = d[static_cast<std::size_t>(i * n + j)].evaluate(q);
    }
    return J;
  }

  Vector hI(const Vector& y) const {
    const int n = this->n();
    Vector v(k());
    for (int i = 0; i < k(); ++i) v[i] = y.tail(n).dot(field(i + 1, y.head(n)));
    return v;
  }

  double h0(const Vector& y) const { return y.tail(n()).dot(field(0, y.head(n()))); }

  Vector h0I(const Vector& y) const {
    Vector v(k());
    for (int i = 0; i < k(); ++i) v[i] = y.tail(n()).dot(evaluate(h0i_fields_[static_cast<std::size_t>(i)], y.head(n())));
    return v;
  }

  SkewMatrix goh(const Vector& y) const {
    std::vector<double> upper;
    for (const auto& f : goh_fields_) upper.push_back(y.tail(n()).dot(evaluate(f, y.head(n()))));
    return SkewMatrix::from_upper(k(), upper);
  }

  Vector rhs(const Vector& y, const Vector& u) const {
    const int n = this->n();
    const Vector q = y.head(n);
    const Vector p = y.tail(n);
    Vector qdot = field(0, q);
    Matrix J = jacobian(0, q);
    for (int i = 0; i < k(); ++i) {
      if (u[i] == 0.0) continue;
      qdot += u[i] * field(i + 1, q);
      J += u[i] * jacobian(i + 1, q);
    }
    Vector out(2 * n);
    out.head(n) = qdot;
    out.tail(n) = -J.transpose() * p;
    return out;
  }

 private:
  const ControlAffineSystem& sys_;
  BracketTable table_;
  std::vector<std::vector<Polynomial>> jac_;
  std::vector<PolyVectorField> h0i_fields_;
  std::vector<PolyVectorField> goh_fields_;
};

enum class Law { Bang, Singular, Fixed };

struct ControlLaw {
  Law law = Law::Bang;
  Vector fixed;
  double gain = 0.0;
};

Vector control_at(const CompiledSystem& cs, const Vector& y, const ControlLaw& law) {
  switch (law.law) {
    case Law::Fixed:
      return law.fixed;
    case Law::Bang: {
      Vector h = cs.hI(y);
      const double nh = h.norm();
      if (nh == 0.0) return law.fixed.size() == h.size() ? law.fixed : Vector(Vector::Zero(h.size()));
      return h / nh;
    }
    case Law::Singular: {
      const Matrix H = cs.goh(y).dense();
      return H.partialPivLu().solve(cs.h0I(y) + law.gain * cs.hI(y));
    }
  }
  return {};
}

Vector pack(const ExtremalState& lam) {
  Vector y(lam.q.size() * 2);
  y << lam.q, lam.p;
  return y;
}

ExtremalState unpack(const Vector& y) {
  const auto n = y.size() / 2;
  return {y.head(n), y.tail(n)};
}

struct StepResult {
  Vector y;
  double err = 0.0;
};

// Dormand–Prince 5(4).
StepResult dp_step(const CompiledSystem& cs, const Vector& y, double h, const ControlLaw& law,
                   double atol, double rtol) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                          e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                          e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
  auto f = [&](const Vector& x) { return cs.rhs(x, control_at(cs, x, law)); };
  const Vector k1 = f(y);
  const Vector k2 = f(y + h * a21 * k1);
  const Vector k3 = f(y + h * (a31 * k1 + a32 * k2));
  const Vector k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const Vector k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Vector k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  StepResult r;
  r.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vector k7 = f(r.y);
  const Vector e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(r.y[i]));
    acc += (e[i] / sc) * (e[i] / sc);
  }
  r.err = std::sqrt(acc / static_cast<double>(y.size()));
  if (!r.y.allFinite()) r.err = std::numeric_limits<double>::infinity();
  return r;
}

Vector rk4_flow(const CompiledSystem& cs, Vector y, double span, int substeps,
                const ControlLaw& law) {
  const double h = span / substeps;
  auto f = [&](const Vector& x) { return cs.rhs(x, control_at(cs, x, law)); };
  for (int s = 0; s < substeps; ++s) {
    const Vector k1 = f(y);
    const Vector k2 = f(y + 0.5 * h * k1);
    const Vector k3 = f(y + 0.5 * h * k2);
    const Vector k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

double step_factor(double err) {
  if (err == 0.0) return 5.0;
  if (!std::isfinite(err)) return 0.2;
  return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
}

class Integrator {
 public:
  Integrator(const ControlAffineSystem& sys, const FlowConfig& cfg) : cs_(sys), cfg_(cfg) {}

  Trajectory run(const ExtremalState& lam0) {
    traj_.config = cfg_;
    y_ = pack(lam0);
    const double p_scale = lam0.p.norm();
    const double theta0 = cfg_.switch_threshold > 0.0
                              ? cfg_.switch_threshold
                              : default_switch_threshold_packed(lam0);
    theta_ = std::max(theta0, 100.0 * (cfg_.abs_tol + cfg_.rel_tol * p_scale));
    traj_.theta = theta_;
    t_ = 0.0;
    h_ = std::min(cfg_.initial_step, cfg_.max_step);

    if (cs_.hI(y_).norm() > theta_) {
      law_.law = Law::Bang;
      record(Regime::Bang);
    } else if (!handle_zero(true)) {
      return traj_;
    }

    const double T = cfg_.horizon;
    while (t_ < T * (1.0 - 1e-14)) {
      if (y_.norm() > 1e12) {
        traj_.status = FlowStatus::BlowUp;
        traj_.diagnostic = "state norm exceeded 1e12 at t=" + std::to_string(t_);
        return traj_;
      }
      h_ = std::min({h_, cfg_.max_step, T - t_});
      if (h_ < 1e-15 * std::max(1.0, T)) {
        traj_.status = FlowStatus::Degenerate;
        traj_.diagnostic = "step size underflow at t=" + std::to_string(t_);
        return traj_;
      }
      const bool ok = law_.law == Law::Singular ? singular_step() : bang_step();
      if (!ok) return traj_;
    }
    return traj_;
  }

 private:
  double default_switch_threshold_packed(const ExtremalState& lam) const {
    double fmax = 0.0;
    for (int i = 1; i <= cs_.k(); ++i) fmax = std::max(fmax, cs_.field(i, lam.q).norm());
    return 1e-9 * (1.0 + lam.p.norm() * fmax);
  }

  void record(Regime regime) {
    Sample s;
    s.t = t_;
    s.state = unpack(y_);
    s.u = control_at(cs_, y_, law_);
    s.regime = regime;
    s.hI_norm = cs_.hI(y_).norm();
    if (!traj_.samples.empty() && traj_.samples.back().t == t_) {
      traj_.samples.back() = std::move(s);
    } else {
      traj_.samples.push_back(std::move(s));
    }
  }

  double approach(const Vector& y) const {
    const Vector h = cs_.hI(y);
    const double nh = h.norm();
    if (nh == 0.0) return 0.0;
    const Vector u = h / nh;
    return h.dot(cs_.h0I(y) - cs_.goh(y).dense() * u);
  }

  bool add_event(EventKind kind) {
    SwitchEvent e;
    e.t = t_;
    e.kind = kind;
    const SkewMatrix H = cs_.goh(y_);
    e.goh_rank = H.dense().isZero(0.0) ? 0 : even_rank(H, cfg_.rank_tol).rank;
    e.hI_norm = cs_.hI(y_).norm();
    traj_.events.push_back(e);
    if (static_cast<int>(traj_.events.size()) > cfg_.max_events) {
      traj_.status = FlowStatus::Chattering;
      traj_.diagnostic = "more than " + std::to_string(cfg_.max_events) +
                         " switching events; accumulation suspected near t=" + std::to_string(t_);
      return false;
    }
    return true;
  }

  // Runs the fixed control until ‖h_I‖ clears the threshold by a wide margin.
  bool kick(const Vector& u) {
    law_.law = Law::Fixed;
    law_.fixed = u;
    const double target = 1e3 * theta_;
    double dt = 1e-9;
    const double cap = std::min(1e-2, cfg_.horizon - t_);
    double spent = 0.0;
    while (cs_.hI(y_).norm() < target && spent < cap) {
      dt = std::min(dt, cap - spent);
      StepResult r = dp_step(cs_, y_, dt, law_, cfg_.abs_tol, cfg_.rel_tol);
      if (r.err > 1.0) {
        dt *= 0.5;
        continue;
      }
      y_ = r.y;
      spent += dt;
      t_ += dt;
      dt *= 2.0;
    }
    law_.law = Law::Bang;
    law_.fixed = u;
    if (spent > 0.0) record(Regime::Bang);
    return true;
  }

  // Decides how to continue from a point with h_I ≈ 0.
  bool handle_zero(bool initial) {
    const SkewMatrix H = cs_.goh(y_);
    const Vector b = cs_.h0I(y_);
    const int k = cs_.k();
    const bool invertible = !H.dense().isZero(0.0) && even_rank(H, cfg_.rank_tol).rank == k;
    if (invertible) {
      const Vector us = H.dense().partialPivLu().solve(b);
      if (us.norm() < 1.0 - 1e-9) {
        law_.law = Law::Singular;
        law_.gain = cfg_.singular_gain;
        if (!initial && !add_event(EventKind::Entry)) return false;
        record(Regime::Singular);
        return true;
      }
    }
    Vector w;
    if (crossing_direction(H, b, w)) {
      if (!initial) {
        if (!add_event(EventKind::Crossing)) return false;
      }
      law_.law = Law::Fixed;
      law_.fixed = w;
      record(Regime::Bang);
      return kick(w);
    }
    law_.law = Law::Fixed;
    law_.fixed = Vector::Zero(k);
    record(Regime::Degenerate);
    traj_.status = FlowStatus::Degenerate;
    traj_.diagnostic = "h_I vanishes at t=" + std::to_string(t_) +
                       " with no admissible singular or crossing continuation";
    return false;
  }

  // Bisection on a sign predicate over sub-steps [0, h] from y_.
  template <class Pred>
  double locate(double h, const ControlLaw& law, Pred after) const {
    double lo = 0.0, hi = h;
    while (hi - lo > cfg_.event_time_tol) {
      const double mid = 0.5 * (lo + hi);
      const Vector ym = dp_step(cs_, y_, mid, law, cfg_.abs_tol, cfg_.rel_tol).y;
      if (after(ym)) {
        hi = mid;
      } else {
        lo = mid;
      }
      if (mid == lo && mid == hi) break;
    }
    return hi;
  }

  bool bang_step() {
    StepResult r = dp_step(cs_, y_, h_, law_, cfg_.abs_tol, cfg_.rel_tol);
    if (approach(y_) < 0.0) {
      const Vector h0v = cs_.hI(y_);
      const bool turned = approach(r.y) >= 0.0 || h0v.dot(cs_.hI(r.y)) <= 0.0;
      if (turned) {
        const double tau = locate(h_, law_, [&](const Vector& ym) {
          return approach(ym) >= 0.0 || h0v.dot(cs_.hI(ym)) <= 0.0;
        });
        StepResult rm = dp_step(cs_, y_, tau, law_, cfg_.abs_tol, cfg_.rel_tol);
        if (rm.err <= 1.0 && cs_.hI(rm.y).norm() <= theta_) {
          y_ = rm.y;
          t_ += tau;
          record(Regime::Bang);
          h_ = std::max(h_, cfg_.initial_step);
          return handle_zero(false);
        }
        if (rm.err > 1.0) {
          h_ = std::max(tau, h_ * 0.2) * step_factor(rm.err);
          return true;
        }
      }
    }
    if (r.err > 1.0) {
      h_ *= step_factor(r.err);
      return true;
    }
    y_ = r.y;
    t_ += h_;
    record(Regime::Bang);
    h_ *= step_factor(r.err);
    return true;
  }

  double singular_excess(const Vector& y) const {
    const SkewMatrix H = cs_.goh(y);
    if (H.dense().isZero(0.0) || even_rank(H, cfg_.rank_tol).rank < cs_.k()) {
      return std::numeric_limits<double>::infinity();
    }
    return H.dense().partialPivLu().solve(cs_.h0I(y)).norm() - 1.0;
  }

  bool singular_step() {
    StepResult r = dp_step(cs_, y_, h_, law_, cfg_.abs_tol, cfg_.rel_tol);
    if (r.err > 1.0) {
      h_ *= step_factor(r.err);
      return true;
    }
    if (singular_excess(r.y) > 0.0) {
      const double tau = locate(h_, law_, [&](const Vector& ym) { return singular_excess(ym) > 0.0; });
      const double back = std::max(0.0, tau - cfg_.event_time_tol);
      if (back > 0.0) {
        y_ = dp_step(cs_, y_, back, law_, cfg_.abs_tol, cfg_.rel_tol).y;
        t_ += back;
      }
      record(Regime::Singular);
      const SkewMatrix H = cs_.goh(y_);
      if (H.dense().isZero(0.0) || even_rank(H, cfg_.rank_tol).rank < cs_.k()) {
        traj_.status = FlowStatus::Degenerate;
        traj_.diagnostic = "Goh matrix lost rank on a singular arc at t=" + std::to_string(t_);
        return false;
      }
      const Vector us = H.dense().partialPivLu().solve(cs_.h0I(y_));
      if (!add_event(EventKind::Exit)) return false;
      return kick(us / us.norm());
    }
    y_ = r.y;
    t_ += h_;
    record(Regime::Singular);
    h_ *= step_factor(r.err);
    return true;
  }

  CompiledSystem cs_;
  FlowConfig cfg_;
  Trajectory traj_;
  ControlLaw law_;
  Vector y_;
  double t_ = 0.0;
  double h_ = 0.0;
  double theta_ = 0.0;
};

void validate(const FlowConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (!(cfg.max_step > 0.0) || !(cfg.initial_step > 0.0)) throw ValidationError("step sizes must be positive");
  if (!(cfg.rank_tol > 0.0) || !(cfg.event_time_tol > 0.0)) throw ValidationError("rank and event tolerances must be positive");
  if (cfg.max_events < 0) throw ValidationError("max_events must be non-negative");
}

}  // namespace

Vector extremal_rhs(const ControlAffineSystem& sys, const ExtremalState& lam, const Vector& u) {
  check_state(sys, lam);
  if (u.size() != sys.control_count()) throw ValidationError("control has wrong dimension");
  const int n = sys.n();
  Vector qdot = evaluate(sys.field(0), lam.q);
  Matrix J = jacobian(sys.field(0), lam.q);
  for (int i = 0; i < sys.control_count(); ++i) {
    qdot += u[i] * evaluate(sys.field(i + 1), lam.q);
    J += u[i] * jacobian(sys.field(i + 1), lam.q);
  }
  Vector out(2 * n);
  out.head(n) = qdot;
  out.tail(n) = -J.transpose() * lam.p;
  return out;
}

double default_switch_threshold(const ControlAffineSystem& sys, const ExtremalState& lam) {
  double fmax = 0.0;
  for (int i = 1; i <= sys.control_count(); ++i) fmax = std::max(fmax, evaluate(sys.field(i), lam.q).norm());
  return 1e-9 * (1.0 + lam.p.norm() * fmax);
}

ControlChoice select_control(const ControlAffineSystem& sys, const ExtremalState& lam,
                             double theta, double rank_tol) {
  check_state(sys, lam);
  BracketTable table(sys);
  const Vector h = hI(table, lam);
  ControlChoice c;
  if (h.norm() > theta) {
    c.u = h / h.norm();
    c.regime = Regime::Bang;
    return c;
  }
  const SkewMatrix H = goh_matrix(table, lam);
  if (!H.dense().isZero(0.0) && even_rank(H, rank_tol).rank == H.size()) {
    const SingularControl sc = singular_control(H, h0I(table, lam), rank_tol);
    if (sc.feasible) {
      c.u = sc.u;
      c.regime = Regime::Singular;
      return c;
    }
  }
  c.u = Vector::Zero(sys.control_count());
  c.regime = Regime::Degenerate;
  return c;
}

bool crossing_direction(const SkewMatrix& H, const Vector& b, Vector& w) {
  const int k = H.size();
  const double nb = b.norm();
  if (nb == 0.0) return false;
  const Matrix I = Matrix::Identity(k, k);
  auto resolvent = [&](double alpha) -> Vector {
    return (alpha * I + H.dense()).partialPivLu().solve(b);
  };
  const double scale = nb + H.dense().norm();
  double lo = 1e-14 * scale;
  double hi = scale + 1.0;
  if (resolvent(lo).norm() < 1.0) return false;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (resolvent(mid).norm() >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  w = resolvent(0.5 * (lo + hi));
  w /= w.norm();
  return true;
}

Trajectory integrate(const ControlAffineSystem& sys, const ExtremalState& lam0,
                     const FlowConfig& cfg) {
  validate(cfg);
  check_state(sys, lam0);
  if (!frame_independent(sys, lam0.q)) {
    throw ValidationError("fields are not linearly independent at the initial point");
  }
  ExtremalState lam = lam0;
  if (cfg.normalize_covector) lam.p /= lam.p.norm();
  Integrator integ(sys, cfg);
  return integ.run(lam);
}

double hdot_residual(const Trajectory& traj, const ControlAffineSystem& sys, double fd_step) {
  if (!(fd_step > 0.0)) throw ValidationError("finite-difference step must be positive");
  CompiledSystem cs(sys);
  const double T = traj.config.horizon;
  double worst = 0.0;
  for (const Sample& s : traj.samples) {
    if (s.regime == Regime::Degenerate) continue;
    if (s.t - fd_step < 0.0 || s.t + fd_step > T) continue;
    bool near_event = false;
    for (const SwitchEvent& e : traj.events) {
      near_event = near_event || std::abs(e.t - s.t) <= fd_step * 1.5;
    }
    if (near_event) continue;
    const Vector y = pack(s.state);
    ControlLaw law;
    law.law = s.regime == Regime::Singular ? Law::Singular : Law::Bang;
    law.gain = traj.config.singular_gain;
    const Vector hdot_formula = [&] {
      const Vector u = control_at(cs, y, law);
      return Vector(cs.h0I(y) - cs.goh(y).dense() * u);
    }();
    if (law.law == Law::Bang && s.hI_norm < 10.0 * fd_step * (1.0 + hdot_formula.norm())) continue;
    const Vector yp = rk4_flow(cs, y, fd_step, 32, law);
    const Vector ym = rk4_flow(cs, y, -fd_step, 32, law);
    const Vector fd = (cs.hI(yp) - cs.hI(ym)) / (2.0 * fd_step);
    worst = std::max(worst, (fd - hdot_formula).norm());
  }
  return worst;
}

double hamiltonian_drift(const Trajectory& traj, const ControlAffineSystem& sys) {
  CompiledSystem cs(sys);
  bool have_ref = false;
  double ref = 0.0, worst = 0.0;
  for (const Sample& s : traj.samples) {
    if (s.regime != Regime::Bang) continue;
    const Vector y = pack(s.state);
    const double value = cs.h0(y) + cs.hI(y).norm();
    if (!have_ref) {
      ref = value;
      have_ref = true;
    }
    worst = std::max(worst, std::abs(value - ref));
  }
  return worst;
}

double hI_norm_drift(const Trajectory& traj) {
  bool have_ref = false;
  double ref = 0.0, worst = 0.0;
  for (const Sample& s : traj.samples) {
    if (s.regime != Regime::Bang) continue;
    if (!have_ref) {
      ref = s.hI_norm;
      have_ref = true;
    }
    worst = std::max(worst, std::abs(s.hI_norm - ref));
  }
  return worst;
}

std::vector<double> switch_times(const Trajectory& traj) {
  std::vector<double> t;
  for (const SwitchEvent& e : traj.events) t.push_back(e.t);
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace fullerkit
