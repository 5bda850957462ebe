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

#pragma once

#include "fullerkit/hamsym.hpp"

#include <string>
#include <vector>

namespace fullerkit {

struct FlowConfig {
  double horizon = 1.0;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double switch_threshold = -1.0;  // θ; negative selects the scale-aware default
  double rank_tol = 1e-10;
  double max_step = 0.05;
  double initial_step = 1e-3;
  double event_time_tol = 1e-12;
  double singular_gain = 10.0;
  bool normalize_covector = false;
  int max_events = 10000;
};

enum class Regime { Bang, Singular, Degenerate };
enum class EventKind { Crossing, Entry, Exit };
enum class FlowStatus { Completed, Degenerate, Chattering, BlowUp };

const char* to_string(Regime r);
const char* to_string(EventKind k);
const char* to_string(FlowStatus s);

struct Sample {
  double t = 0.0;
  ExtremalState state;
  Vector u;
  Regime regime = Regime::Bang;
  double hI_norm = 0.0;
};

struct SwitchEvent {
  double t = 0.0;
  EventKind kind = EventKind::Crossing;
  int goh_rank = 0;
  double hI_norm = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<SwitchEvent> events;
  FlowStatus status = FlowStatus::Completed;
  std::string diagnostic;
  double theta = 0.0;
  FlowConfig config;
};

/// (q̇, ṗ) = (f0 + Σ u_i f_i, −(J_{f0} + Σ u_i J_{fi})ᵀ p), stacked.
Vector extremal_rhs(const ControlAffineSystem& sys, const ExtremalState& lam, const Vector& u);

/// θ = 1e−9·(1 + ‖p‖·max_i ‖f_i(q)‖).
double default_switch_threshold(const ControlAffineSystem& sys, const ExtremalState& lam);

struct ControlChoice {
  Vector u;
  Regime regime = Regime::Bang;
};

ControlChoice select_control(const ControlAffineSystem& sys, const ExtremalState& lam,
                             double theta, double rank_tol = 1e-10);

/// Unit w with w ∥ h0I − H·w, the outgoing direction of h_I through zero.
/// Returns false when no such direction exists.
bool crossing_direction(const SkewMatrix& H, const Vector& h0i, Vector& w);

Trajectory integrate(const ControlAffineSystem& sys, const ExtremalState& lam0,
                     const FlowConfig& cfg);

/// Max ‖FD ḣ_I − (h0I − H u)‖ over samples away from events, re-integrating
/// ±fd_step under each sample's control law.
double hdot_residual(const Trajectory& traj, const ControlAffineSystem& sys,
                     double fd_step = 1e-3);

/// Max |(h0 + ‖h_I‖)(t) − (h0 + ‖h_I‖)(t0)| over bang samples.
double hamiltonian_drift(const Trajectory& traj, const ControlAffineSystem& sys);

/// Max |‖h_I(t)‖ − ‖h_I(t0)‖| over bang samples.
double hI_norm_drift(const Trajectory& traj);

std::vector<double> switch_times(const Trajectory& traj);

}  // namespace fullerkit
