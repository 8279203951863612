// Copyright 2026 The chekhov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. `acceptance 3 5` runs a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "chekhov/evaluation.hpp"
#include "chekhov/gan.hpp"
#include "chekhov/games.hpp"
#include "chekhov/nn.hpp"
#include "chekhov/solver.hpp"
#include "chekhov/trainer.hpp"

using namespace chekhov;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double wall_seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome rps_equilibrium() {
  solver::EquilibriumReport r;
  const double secs = wall_seconds([&] { r = solver::solve_matrix(games::rps_game(), 10000); });
  const double value = *r.value;
  const double dev = (r.d1_strategy->probs().array() - 1.0 / 3.0).abs().maxCoeff();
  const double expl = r.exploitability->max();
  return {std::abs(value) <= 0.02 && dev <= 0.05 && expl <= 0.05 && secs < 1.0,
          "value=" + fmt("%.2e", value) + " uniform_dev=" + fmt("%.2e", dev) + " exploitability=" + fmt("%.2e", expl) +
              " time=" + fmt("%.3fs", secs)};
}

std::vector<games::MatrixGame> random_games() {
  std::vector<games::MatrixGame> out;
  for (std::uint64_t seed = 0; seed < 20; ++seed) out.push_back(games::random_game(5, 5, seed));
  return out;
}

Outcome certificate() {
  solver::SolveOptions opt;
  opt.audit_at = {10, 100, 1000};
  int violations = 0, checks = 0;
  double worst_slack = 1e300;
  for (const auto& g : random_games()) {
    const auto r = solver::solve_matrix(g, 1000, opt);
    for (const auto& a : r.audits) {
      const double slack = a.eps_certificate + 1e-9 - a.exploitability->max();
      worst_slack = std::min(worst_slack, slack);
      ++checks;
      if (slack < 0) ++violations;
    }
  }
  return {violations == 0 && checks == 60,
          std::to_string(checks) + " audits, " + std::to_string(violations) + " violations, min slack " +
              fmt("%.3e", worst_slack)};
}

struct SemiConcaveRun {
  games::SemiConcaveGame game;
  std::int64_t T;
  solver::EquilibriumReport report;
};

const std::vector<SemiConcaveRun>& semiconcave_runs() {
  static const std::vector<SemiConcaveRun> runs = [] {
    std::vector<SemiConcaveRun> out;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto dim_u = static_cast<Eigen::Index>(1 + seed % 3), dim_v = static_cast<Eigen::Index>(1 + (seed / 3) % 3);
      const auto g = games::make_bilinear_semiconcave(seed, dim_u, dim_v);
      for (std::int64_t T : {64, 256, 1024}) out.push_back({g, T, solver::solve_semiconcave(g, T)});
    }
    return out;
  }();
  return runs;
}

Outcome stability() {
  int violations = 0;
  std::size_t pairs = 0;
  double worst_ratio = 0.0;
  for (const auto& run : semiconcave_runs()) {
    const double bound = solver::stability_bound(run.game.k2.diameter(), run.T);
    for (double s : run.report.stability) {
      ++pairs;
      worst_ratio = std::max(worst_ratio, s / bound);
      if (s > bound + 1e-12) ++violations;
    }
  }
  return {violations == 0 && pairs > 0, std::to_string(pairs) + " iterate pairs over 30 runs, " +
                                            std::to_string(violations) + " violations, max step/bound " +
                                            fmt("%.4f", worst_ratio)};
}

Outcome regret_bounds() {
  int violations = 0;
  double worst_min = 0.0, worst_max = 0.0;
  for (const auto& run : semiconcave_runs()) {
    const double d2 = run.game.k2.diameter();
    const double max_bound = solver::ftrl_regret_bound(run.game.lipschitz, d2, run.T);
    const double min_bound = solver::ftl_regret_bound(run.game.lipschitz, d2, run.game.payoff_bound, run.T);
    if (run.report.regret_max > max_bound) ++violations;
    if (run.report.regret_min > min_bound) ++violations;
    worst_max = std::max(worst_max, run.report.regret_max / max_bound);
    worst_min = std::max(worst_min, run.report.regret_min / min_bound);
  }
  return {violations == 0, "30 runs, " + std::to_string(violations) + " violations, max regret/bound: max player " +
                               fmt("%.4f", worst_max) + ", min player " + fmt("%.4f", worst_min)};
}

Outcome decay() {
  std::vector<double> small, large;
  const double secs = wall_seconds([&] {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = games::make_bilinear_semiconcave(seed, 1, 1);
      small.push_back(solver::solve_semiconcave(g, 1024).exploitability->max());
      large.push_back(solver::solve_semiconcave(g, 4096).exploitability->max());
    }
  });
  const double a = median(small), b = median(large);
  return {b <= 0.75 * a && secs < 30.0, "median eps(1024)=" + fmt("%.4e", a) + " eps(4096)=" + fmt("%.4e", b) +
                                            " ratio=" + fmt("%.3f", b / a) + " time=" + fmt("%.2fs", secs)};
}

Outcome concavity() {
  Rng rng(2024);
  const Mat real = evaluation::sample_ring_mixture(evaluation::RingMixtureSpec::uniform(7), 256, 1);
  std::vector<Mat> fakes;
  fakes.push_back(rng.normal_matrix(256, 2));
  fakes.push_back((rng.normal_matrix(256, 3) * rng.normal_matrix(3, 2)).rowwise() + Eigen::RowVector2d(0.5, 0.1));
  const auto deep = nn::MlpSpec::dense(8, {32, 32, 32}, nn::Activation::kTanh, 2, nn::Activation::kLinear,
                                       nn::InitKind::kOrthogonal, 1.2);
  fakes.push_back(nn::mlp_forward(deep, nn::init_params(deep, 7), rng.normal_matrix(256, 8)).output());

  const games::BallDomain ball(Vec::Zero(2), 3.0);
  int violations = 0, probes = 0;
  for (auto link : {gan::Link::kSigmoid, gan::Link::kProbit}) {
    for (std::size_t k = 0; k < fakes.size(); ++k) {
      const auto rep = gan::concavity_probe(
          [&](const Vec& v) { return gan::semi_shallow_payoff({v, link}, real, fakes[k]); }, ball, 1000, 10 + k);
      violations += rep.violations;
      probes += rep.trials;
    }
  }
  return {violations == 0 && probes == 6000,
          std::to_string(probes) + " trials (2 links x 3 generators), " + std::to_string(violations) + " violations"};
}

Outcome minimax_bound() {
  int violations = 0, games_checked = 0;
  double worst = 1e300;
  std::vector<games::MatrixGame> all = random_games();
  all.insert(all.begin(), games::rps_game());
  for (const auto& g : all) {
    const auto r = solver::solve_matrix(g, 10000);
    const auto c = solver::check_minimax_bound(g, *r.d1_strategy, r.eps_certificate);
    ++games_checked;
    worst = std::min(worst, c.margin);
    if (!c.pass) ++violations;
  }
  return {violations == 0, std::to_string(games_checked) + " games, " + std::to_string(violations) +
                               " violations, min margin " + fmt("%.3e", worst)};
}

Outcome gradients() {
  trainer::TrainerConfig c;
  const auto gs = trainer::generator_spec(c), ds = trainer::discriminator_spec(c);
  Rng rng(77);
  double worst = 0.0;
  for (int draw = 0; draw < 10; ++draw) {
    gan::GanObjectiveConfig oc{gs, nn::init_params(gs, rng.next_u64()), ds, nn::init_params(ds, rng.next_u64()),
                               gan::ObjectiveVariant::kCrossEntropy, gan::Link::kSigmoid};
    const Mat data = evaluation::sample_ring_mixture(c.data, 32, rng.next_u64());
    const Mat noise = rng.normal_matrix(32, c.noise_dim);
    const auto g = gan::gan_grads(oc, data, noise);
    const double sign = gan::value_sign(oc.variant);
    const auto payoff_in_gen = [&](const Vec& w) {
      auto cc = oc;
      cc.gen.flat = w;
      return sign * gan::gan_value(cc, data, noise);
    };
    const auto payoff_in_disc = [&](const Vec& w) {
      auto cc = oc;
      cc.disc.flat = w;
      return sign * gan::gan_value(cc, data, noise);
    };
    const auto check = [&](const Vec& at, const std::function<double(const Vec&)>& f, const Vec& analytic) {
      return nn::finite_diff_check(at, f, analytic, 10, rng.next_u64(), 1e-3, 1e-7, nn::Stencil::kFivePoint);
    };
    worst = std::max(worst, check(oc.gen.flat, payoff_in_gen, g.grad_u.flat));
    worst = std::max(worst, check(oc.disc.flat, payoff_in_disc, g.grad_v.flat));
  }
  return {worst <= 1e-5, "10 draws x 2 networks, max relative error " + fmt("%.3e", worst)};
}

trainer::TrainerConfig toy_config(trainer::Method method, std::uint64_t seed) {
  trainer::TrainerConfig c;
  c.method = method;
  c.seed = seed;
  c.eval_interval = c.steps;
  return c;
}

Outcome mode_recovery() {
  const double t0 = cpu_seconds();
  int good_runs = 0;
  std::vector<double> kl_chekhov, kl_vanilla;
  std::string covered;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ch = trainer::train(toy_config(trainer::Method::kChekhov, seed));
    const auto va = trainer::train(toy_config(trainer::Method::kVanilla, seed));
    kl_chekhov.push_back(ch.final_report.reverse_kl);
    kl_vanilla.push_back(va.final_report.reverse_kl);
    if (ch.final_report.modes_covered >= 6) ++good_runs;
    covered += std::to_string(ch.final_report.modes_covered) + "/" + std::to_string(va.final_report.modes_covered) + " ";
  }
  const double cpu = cpu_seconds() - t0;
  const double mc = median(kl_chekhov), mv = median(kl_vanilla);
  return {good_runs >= 3 && mc < mv && cpu <= 1800.0,
          "covered chekhov/vanilla per seed: " + covered + "| runs with >=6 modes: " + std::to_string(good_runs) +
              " | median reverse KL chekhov " + fmt("%.3f", mc) + " vanilla " + fmt("%.3f", mv) + " | cpu " +
              fmt("%.0fs", cpu)};
}

Outcome unequal_modes() {
  int good_runs = 0;
  std::string covered;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = toy_config(trainer::Method::kChekhov, seed);
    c.data = evaluation::RingMixtureSpec::weighted((Vec(5) << 0.35, 0.35, 0.1, 0.1, 0.1).finished());
    const auto r = trainer::train(c);
    covered += std::to_string(r.final_report.modes_covered) + " ";
    if (r.final_report.modes_covered == 5) ++good_runs;
  }
  return {good_runs >= 3, "covered per seed: " + covered + "| runs with all 5 modes: " + std::to_string(good_runs)};
}

Outcome queue_semantics() {
  trainer::ModelQueue q(2, 3, 0);
  const auto snap = [](double v, std::int64_t t) {
    trainer::Snapshot s;
    s.params.flat = Vec::Constant(1, v);
    s.step = t;
    return s;
  };
  q.reset(snap(0, 0));
  const std::vector<std::vector<double>> expected = {{1}, {2}, {3, 2}, {4, 2}, {5, 2}, {6, 5}};
  bool trace_ok = true;
  for (int t = 1; t <= 6; ++t) {
    q.update(snap(t, t), t);
    std::vector<double> got;
    for (const auto& s : q.snapshots()) got.push_back(s.params.flat(0));
    trace_ok = trace_ok && got == expected[t - 1];
  }
  trainer::ModelQueue grow(5, 5, 10);
  grow.reset(snap(0, 0));
  std::vector<std::int64_t> switches;
  for (int t = 1; t <= 80; ++t)
    if (grow.update(snap(t, t), t)) switches.push_back(t);
  const bool schedule_ok = switches == std::vector<std::int64_t>{5, 20, 45, 80};
  std::string s;
  for (auto t : switches) s += std::to_string(t) + " ";
  return {trace_ok && schedule_ok,
          std::string("hand trace ") + (trace_ok ? "matches" : "differs") + ", switch steps " + s};
}

Outcome exact_reduction() {
  trainer::TrainerConfig c;
  const auto gs = trainer::generator_spec(c), ds = trainer::discriminator_spec(c);
  const auto make = [&](const nn::MlpSpec& spec, std::uint64_t seed) {
    trainer::PlayerState p{spec, nn::init_params(spec, seed), {}};
    p.adam = nn::AdamState::for_params(p.params.size(), c.lr, c.beta1, c.beta2);
    return p;
  };
  auto gen_a = make(gs, 1), disc_a = make(ds, 2), gen_b = make(gs, 1), disc_b = make(ds, 2);
  trainer::ModelQueue dq(1, 20, 10), gq(1, 20, 10);
  dq.reset({disc_a.params, 0});
  gq.reset({gen_a.params, 0});
  evaluation::RingSampler data(c.data, Rng::stream(5, "data"));
  Rng noise = Rng::stream(5, "noise");
  int mismatched = 0;
  for (int t = 1; t <= 100; ++t) {
    const trainer::StepBatches b{data.next_batch(c.batch_size), noise.normal_matrix(c.batch_size, c.noise_dim)};
    trainer::chekhov_step(gen_a, disc_a, dq, gq, b, t, 0.0, c.variant);
    trainer::vanilla_step(gen_b, disc_b, b, c.variant);
    if (gen_a.params.flat != gen_b.params.flat || disc_a.params.flat != disc_b.params.flat) ++mismatched;
  }
  return {mismatched == 0, "100 steps, " + std::to_string(mismatched) + " steps with any differing bit"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "rps equilibrium", rps_equilibrium},
      {2, "measured-regret certificate", certificate},
      {3, "ftrl stability", stability},
      {4, "regret bounds", regret_bounds},
      {5, "exploitability decay", decay},
      {6, "discriminator concavity", concavity},
      {7, "minimax bound of the averaged strategy", minimax_bound},
      {8, "backprop vs finite differences", gradients},
      {9, "toy mode recovery", mode_recovery},
      {10, "unequal-probability modes", unequal_modes},
      {11, "queue semantics", queue_semantics},
      {12, "capacity-1 exact reduction", exact_reduction},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
