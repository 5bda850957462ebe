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

#include "fullerkit/bound.hpp"
#include "fullerkit/errors.hpp"
#include "fullerkit/flow.hpp"
#include "fullerkit/fuller.hpp"
#include "fullerkit/hamsym.hpp"
#include "fullerkit/mu_ladder.hpp"
#include "fullerkit/skewalg.hpp"
#include "fullerkit/sweeps.hpp"
#include "fullerkit/system_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace fullerkit;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string config;
  std::uint64_t seed = 42;
  std::string out;
  double tol = -1.0;
};

struct Run {
  Common common;
  std::string subcommand;
  std::vector<std::string> outputs;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(Run& run, const std::string& suffix, const std::string& text) {
  const std::string path = run.common.out + suffix;
  std::ofstream out(path);
  if (!out) throw ValidationError(path + ": cannot write file");
  out << text;
  run.outputs.push_back(path);
}

/// Primary JSON result: stdout, or PREFIX.json with --out.
void emit(Run& run, const Json& doc) {
  const std::string text = dump_json(doc) + "\n";
  if (run.common.out.empty()) {
    std::cout << text;
  } else {
    write_text(run, ".json", text);
  }
}

Json load_config(const Common& c) {
  if (c.config.empty()) throw ValidationError("--config is required for this subcommand");
  Json cfg = read_json_file(c.config);
  if (!cfg.is_object()) throw ValidationError(c.config + ": config must be a JSON object");
  static const std::set<std::string> keys{"system", "state", "flow", "lmax", "rmax", "term_budget"};
  for (const auto& [key, value] : cfg.items()) {
    if (keys.count(key) == 0) throw ValidationError(c.config + ": unknown field '" + key + "'");
  }
  return cfg;
}

ControlAffineSystem system_from_config(const Json& cfg, const std::string& config_path) {
  auto it = cfg.find("system");
  if (it == cfg.end()) throw ValidationError(config_path + ": missing field 'system'");
  if (it->is_string()) {
    fs::path p = it->get<std::string>();
    if (p.is_relative()) p = fs::path(config_path).parent_path() / p;
    return parse_system(read_json_file(p.string()));
  }
  return parse_system(*it);
}

ExtremalState state_from_config(const Json& cfg, const std::string& config_path, int n) {
  auto it = cfg.find("state");
  if (it == cfg.end()) throw ValidationError(config_path + ": missing field 'state'");
  return parse_state(*it, n);
}

int int_from_config(const Json& cfg, const char* key, int fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  if (!it->is_number_integer()) throw ValidationError(std::string(key) + ": expected an integer");
  return it->get<int>();
}

Json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// simulate ------------------------------------------------------------------

void run_simulate(Run& run) {
  const Json cfg = load_config(run.common);
  const ControlAffineSystem sys = system_from_config(cfg, run.common.config);
  const ExtremalState lam = state_from_config(cfg, run.common.config, sys.n());
  FlowConfig fc = parse_flow_config(cfg.contains("flow") ? cfg.at("flow") : Json());
  if (run.common.tol > 0) fc.abs_tol = fc.rel_tol = run.common.tol;
  const Trajectory traj = integrate(sys, lam, fc);

  Json events = Json::array();
  for (const auto& e : traj.events) {
    events.push_back(Json{{"t", e.t}, {"kind", to_string(e.kind)}, {"goh_rank", e.goh_rank}, {"hI_norm", e.hI_norm}});
  }
  Json doc{{"status", to_string(traj.status)},
           {"diagnostic", traj.diagnostic},
           {"theta", traj.theta},
           {"samples", traj.samples.size()},
           {"final_time", traj.samples.empty() ? 0.0 : traj.samples.back().t},
           {"events", std::move(events)},
           {"switch_times", switch_times(traj)}};
  if (!run.common.out.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "t";
    for (int i = 0; i < sys.n(); ++i) csv << ",q" << i;
    for (int i = 0; i < sys.n(); ++i) csv << ",p" << i;
    for (int i = 1; i <= sys.control_count(); ++i) csv << ",u" << i;
    csv << ",regime,hI_norm\n";
    for (const auto& s : traj.samples) {
      csv << format_double(s.t);
      for (int i = 0; i < sys.n(); ++i) csv << ',' << format_double(s.state.q(i));
      for (int i = 0; i < sys.n(); ++i) csv << ',' << format_double(s.state.p(i));
      for (int i = 0; i < sys.control_count(); ++i) csv << ',' << format_double(s.u(i));
      csv << ',' << to_string(s.regime) << ',' << format_double(s.hI_norm) << '\n';
    }
    write_text(run, ".samples.csv", csv.str());
  }
  emit(run, doc);
  if (traj.status == FlowStatus::Degenerate || traj.status == FlowStatus::BlowUp) {
    throw NumericalError("integration stopped: " + traj.diagnostic);
  }
}

// identities ----------------------------------------------------------------

int run_identities_cmd(Run& run, const std::vector<int>& sizes, const std::string& mutate,
                       int samples, bool serial) {
  SweepOptions opts;
  opts.seed = run.common.seed;
  opts.sizes = sizes;
  opts.samples = samples;
  opts.parallel = !serial;
  if (mutate == "adj-sign") {
    opts.mutate_adj_sign = true;
  } else if (!mutate.empty()) {
    throw ValidationError("unknown mutation '" + mutate + "'");
  }
  const auto results = run_identities(opts);
  bool all = true;
  Json suites = Json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    suites.push_back(Json{{"name", r.name}, {"pass", r.pass}, {"cases", r.cases}, {"failures", r.failures},
                          {"skipped", r.skipped}, {"worst", r.worst}, {"tolerance", r.tolerance},
                          {"detail", r.detail}});
  }
  Json doc{{"seed", opts.seed}, {"sizes", sizes}, {"samples", samples},
           {"mutation", mutate.empty() ? Json(nullptr) : Json(mutate)}, {"suites", std::move(suites)},
           {"pass", all}};
  emit(run, doc);
  return all ? 0 : 1;
}

// phi / mu ------------------------------------------------------------------

void run_phi(Run& run, std::optional<int> lmax_flag) {
  const Json cfg = load_config(run.common);
  const ControlAffineSystem sys = system_from_config(cfg, run.common.config);
  const ExtremalState lam = state_from_config(cfg, run.common.config, sys.n());
  const int lmax = lmax_flag.value_or(int_from_config(cfg, "lmax", 2));
  const auto budget = static_cast<std::size_t>(int_from_config(cfg, "term_budget", 1'000'000));
  if (lmax < 0) throw ValidationError("lmax must be non-negative");
  BracketTable table(sys);
  const auto values = phi_sequence(table, lam, lmax, pruning_options(table, budget));
  const SkewMatrix H = goh_matrix(table, lam);
  Json doc{{"lmax", lmax}, {"phi", values}, {"goh_pfaffian", pfaffian(H)}, {"h0I", vec_json(h0I(table, lam))}};
  const double tol = run.common.tol > 0 ? run.common.tol : kDefaultRankTol;
  if (even_rank(H, tol).rank == H.size()) {
    const SingularControl sc = singular_control(H, h0I(table, lam), tol);
    doc["singular_control"] = Json{{"u", vec_json(sc.u)}, {"norm", sc.norm}, {"feasible", sc.feasible}};
  } else {
    doc["singular_control"] = nullptr;
  }
  emit(run, doc);
}

void run_mu(Run& run, std::optional<int> rmax_flag, int relh0_samples) {
  const Json cfg = load_config(run.common);
  const ControlAffineSystem sys = system_from_config(cfg, run.common.config);
  const ExtremalState lam = state_from_config(cfg, run.common.config, sys.n());
  const int rmax = rmax_flag.value_or(int_from_config(cfg, "rmax", (2 * sys.m() + 1) * 2 * sys.n()));
  MuOptions opts;
  if (run.common.tol > 0) opts.tol = run.common.tol;
  opts.term_budget = static_cast<std::size_t>(int_from_config(cfg, "term_budget", 1'000'000));
  BracketTable table(sys);
  const MuState st = mu_sequence(table, lam, rmax, opts);
  Json steps = Json::array();
  for (const auto& s : st.steps) {
    std::vector<int> J1;
    for (int j : s.J) J1.push_back(j + 1);
    steps.push_back(Json{{"r", s.r}, {"rho", s.rho}, {"J", J1}, {"increased", s.increased},
                         {"ambiguous", s.ambiguous}, {"sigma_ratio", s.sigma_ratio}, {"mu", s.mu_value},
                         {"mu_terms", st.mu[static_cast<std::size_t>(s.r)].size()}});
  }
  std::vector<int> j0;
  for (int j : st.j0) j0.push_back(j + 1);
  Json doc{{"m", st.m}, {"a", st.a}, {"rho0", st.rho0}, {"J0", j0}, {"rmax", st.rmax()},
           {"any_ambiguous", st.any_ambiguous}, {"steps", std::move(steps)}};
  const int N = 2 * sys.n();
  const auto starts = plateau_starts(st, N);
  doc["plateau_length"] = N;
  doc["plateau_starts"] = starts;
  if (relh0_samples > 0 && !starts.empty()) {
    const int r = starts.front();
    const int k = std::min(2, st.rmax() - r);
    const Relh0Report rep = relh0_check(table, st, r, k, relh0_samples, run.common.seed);
    doc["relh0"] = Json{{"r", rep.r}, {"k", rep.k}, {"certified", rep.certified}, {"max_residual", rep.max_residual}};
  }
  emit(run, doc);
}

// kernel --------------------------------------------------------------------

void run_kernel(Run& run, const std::string& csv_path) {
  std::string text = read_text(csv_path);
  for (char& ch : text) {
    if (ch == ',' || ch == ';' || ch == '\n' || ch == '\r' || ch == '\t') ch = ' ';
  }
  std::istringstream in(text);
  std::vector<double> upper;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      upper.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(csv_path + ": entry " + std::to_string(upper.size() + 1) + " is not a number: '" + tok + "'");
    }
  }
  int k = 1;
  while (k * (k - 1) / 2 < static_cast<int>(upper.size())) ++k;
  if (k * (k - 1) / 2 != static_cast<int>(upper.size()) || upper.empty()) {
    throw ValidationError(csv_path + ": entry count " + std::to_string(upper.size()) + " is not k(k-1)/2");
  }
  const SkewMatrix A = SkewMatrix::from_upper(k, upper);
  const double tol = run.common.tol > 0 ? run.common.tol : kDefaultRankTol;
  const EvenRank er = even_rank(A, tol);
  const BlockDecomposition dec = block_decompose(A, tol);
  std::vector<int> j0, perm;
  for (int j : dec.j0) j0.push_back(j + 1);
  for (int j : dec.permutation) perm.push_back(j + 1);
  Json kernel = Json::array();
  for (const auto& v : kernel_basis(A, dec)) kernel.push_back(vec_json(v));
  Json doc{{"size", k}, {"rank", er.rank}, {"odd_rank_warning", er.odd_raw}, {"m0", dec.m0}, {"J0", j0},
           {"permutation", perm}, {"pfaffian_A1", dec.pf_a1}, {"kernel", std::move(kernel)},
           {"parskew_residual", parskew_residual(dec)}};
  if (k % 2 == 0) doc["pfaffian"] = pfaffian(A);
  emit(run, doc);
}

// fuller --------------------------------------------------------------------

Json strata_json(const CascadeSet& s) {
  Json doc{{"order", fuller_order(s)}, {"set", cascade_to_json(s)}};
  Json st = Json::array();
  for (const auto& part : strata(s)) st.push_back(cascade_to_json(part));
  doc["strata"] = std::move(st);
  return doc;
}

void run_fuller(Run& run, const std::string& cascade_path, const std::string& times_path,
                std::optional<double> eps, std::optional<int> make) {
  const int given = (cascade_path.empty() ? 0 : 1) + (times_path.empty() ? 0 : 1) + (make ? 1 : 0);
  if (given != 1) throw ValidationError("fuller needs exactly one of --cascade, --times, --make");
  if (make) {
    emit(run, strata_json(make_cascade(*make, run.common.seed)));
    return;
  }
  if (!cascade_path.empty()) {
    emit(run, strata_json(parse_cascade(parse_json_text(read_text(cascade_path), cascade_path))));
    return;
  }
  if (!eps) throw ValidationError("--times needs --eps");
  std::string text = read_text(times_path);
  std::istringstream in(text);
  std::vector<double> times;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        times.push_back(std::stod(cell));
      } catch (const std::exception&) {
        if (lineno == 1 && times.empty()) continue;  // header
        throw ValidationError(times_path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
  }
  const SampleStrata ss = sample_strata(times, *eps);
  int order = -1;
  for (int l : ss.labels) order = std::max(order, l);
  emit(run, Json{{"eps", *eps}, {"times", times}, {"labels", ss.labels}, {"rounds", ss.rounds},
                 {"estimated_order", order}});
}

// bound ---------------------------------------------------------------------

void run_bound(Run& run, int n) {
  const FullerBound b = fuller_bound(n);
  Json terms = Json::array();
  for (const auto& t : b.terms) {
    terms.push_back(Json{{"m", t.m}, {"steps", t.steps}, {"N_star_upper", t.n_star.str()}, {"K_m", t.k_m.str()}});
  }
  emit(run, Json{{"n", b.n}, {"N", b.N}, {"m_values", b.m_values}, {"terms", std::move(terms)},
                 {"K", b.K.str()}, {"label", "upper bound"}});
}

void write_manifest(Run& run, double seconds, int exit_code) {
  Json m{{"subcommand", run.subcommand},
         {"config", run.common.config.empty() ? Json(nullptr) : Json(run.common.config)},
         {"seed", run.common.seed},
         {"outputs", run.outputs},
         {"tool_version", kVersion},
         {"threads", configure_threads()},
         {"exit_code", exit_code},
         {"wall_time_s", seconds}};
  const std::string text = dump_json(m) + "\n";
  if (run.common.out.empty()) {
    std::cerr << text;
  } else {
    std::ofstream(run.common.out + ".manifest.json") << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  CLI::App app{"fullerkit: extremal flows, Pfaffian kernels, vanishing-function ladders and Fuller orders"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Run run;
  app.add_option("--config", run.common.config, "JSON config (simulate, phi, mu)");
  app.add_option("--seed", run.common.seed, "Random seed")->capture_default_str();
  app.add_option("--out", run.common.out, "Output prefix; writes PREFIX.json and PREFIX.manifest.json");
  app.add_option("--tol", run.common.tol, "Tolerance override (integrator or rank tolerance)");

  auto* sim = app.add_subcommand("simulate",
                                 "Integrate the extremal flow. Config: {system, state, flow}. With --out, "
                                 "PREFIX.samples.csv has columns t,q0..,p0..,u1..,regime,hI_norm");
  auto* ident = app.add_subcommand("identities", "Run the property suites; exit 0 iff all pass");
  std::vector<int> sizes{2, 4, 6, 8};
  std::string mutate;
  int samples = 1000;
  bool serial = false;
  ident->add_option("--sizes", sizes, "Skew matrix sizes")->delimiter(',')->capture_default_str();
  ident->add_option("--mutate", mutate, "Mutation-test mode")->check(CLI::IsMember({"adj-sign"}));
  ident->add_option("--samples", samples, "Random matrices per size")->capture_default_str();
  ident->add_flag("--serial", serial, "Use the serial reference driver");
  auto* phi = app.add_subcommand("phi", "phi_0..phi_lmax at a state. Config: {system, state, lmax}");
  std::optional<int> lmax;
  phi->add_option("--lmax", lmax, "Highest phi index");
  auto* mu = app.add_subcommand("mu", "mu ladder at a basepoint. Config: {system, state, rmax}");
  std::optional<int> rmax;
  int relh0_samples = 0;
  mu->add_option("--rmax", rmax, "Last ladder index (default (2m+1)*2n)");
  mu->add_option("--relh0-samples", relh0_samples, "Random states for the leading-term check");
  auto* kernel = app.add_subcommand("kernel", "Block decomposition and kernel basis of a skew matrix");
  std::string csv_path;
  kernel->add_option("csv", csv_path, "Strict upper triangle, row-major, comma separated ('-' for stdin)")->required();
  auto* fuller = app.add_subcommand("fuller", "Fuller order and strata");
  std::string cascade_path, times_path;
  std::optional<double> eps;
  std::optional<int> make;
  fuller->add_option("--cascade", cascade_path, "Cascade JSON file");
  fuller->add_option("--times", times_path, "CSV of increasing times");
  fuller->add_option("--eps", eps, "Isolation scale for --times");
  fuller->add_option("--make", make, "Random cascade of the given order (uses --seed)");
  auto* bound = app.add_subcommand("bound", "Explicit upper bound on the generic Fuller order");
  int n = 3;
  bound->add_option("--n", n, "Ambient dimension")->required();
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  run.subcommand = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (*sim) {
      run_simulate(run);
    } else if (*ident) {
      code = run_identities_cmd(run, sizes, mutate, samples, serial);
    } else if (*phi) {
      run_phi(run, lmax);
    } else if (*mu) {
      run_mu(run, rmax, relh0_samples);
    } else if (*kernel) {
      run_kernel(run, csv_path);
    } else if (*fuller) {
      run_fuller(run, cascade_path, times_path, eps, make);
    } else if (*bound) {
      run_bound(run, n);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    code = 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    code = 3;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    code = 4;
  } catch (const UnsupportedOverlap& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    code = 2;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(run, seconds, code);
  return code;
}
