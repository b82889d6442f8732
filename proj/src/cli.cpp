#include "besicover/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace besicover {

namespace {

std::string csv_float(const Rat& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", rat_to_double(r));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
}

template <typename Fn>
void parallel_trials(int64_t trials, int threads, const Fn& fn) {
  if (threads <= 1 || trials <= 1) {
    for (int64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int64_t> next{0};
  int n = std::min<int64_t>(threads, trials);
  for (int w = 0; w < n; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int64_t t = next.fetch_add(1);
        if (t >= trials) return;
        fn(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

int64_t require_positive(const Json& config, const char* key) {
  if (!config.contains(key)) throw std::invalid_argument(std::string("missing config key '") + key + "'");
  int64_t v = config.at(key).get<int64_t>();
  if (v <= 0) throw std::invalid_argument(std::string("config key '") + key + "' must be positive");
  return v;
}

Rat rat_field(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_number_integer()) return Rat(static_cast<long>(v.get<int64_t>()));
  return rat_from_string(v.get<std::string>());
}

}  // namespace

// ---------------------------------------------------------------------------
// cover: carpet calibration and staircase multiplicity
// ---------------------------------------------------------------------------

int run_cover(const Json& config, const std::string& out_path, uint64_t seed, int threads) {
  std::string mode = config.value("mode", "calibrate");
  std::string csv = "norm,d,trials,max_multiplicity,chi_used,window,r_min,r_max,seed\n";
  bool violation = false;

  if (mode == "staircase") {
    // one-sided cubes: the staircase family realizes multiplicity K+1
    for (const auto& kj : config.at("K_list")) {
      int64_t K = kj.get<int64_t>();
      if (K < 1) throw std::invalid_argument("staircase K must be positive");
      auto family = BallFamilySpec::one_sided_cubes(2);
      std::vector<FamilyBall> balls;
      for (int64_t i = 0; i <= K; ++i) balls.push_back({Point{-i, -(K - i)}, Rat(K)});
      int64_t mult = multiplicity(*family, balls);
      csv += "qcube,2,1," + std::to_string(mult) + ",0," + std::to_string(K) + "," +
             std::to_string(K) + "," + std::to_string(K) + "," + std::to_string(seed) + "\n";
      if (mult != K + 1) violation = true;
    }
    write_file(out_path, csv);
    return violation ? kExitViolation : kExitOk;
  }

  if (mode != "calibrate") throw std::invalid_argument("cover mode must be calibrate or staircase");
  int64_t trials = require_positive(config, "trials");
  CarpetGenParams params;
  params.n_balls = static_cast<int>(config.value("balls", 50));
  params.window = config.value("window", 100);
  params.r_min = config.value("r_min", 1);
  params.r_max = config.value("r_max", 8);
  int64_t doubling_rmax = config.value("doubling_rmax", 64);
  int64_t check_sample = config.value("check_sample", 100);

  for (const auto& nj : config.at("norms")) {
    NormRef norm = make_norm(norm_from_json(nj));
    auto family = BallFamilySpec::norm_balls(norm);

    std::vector<int64_t> mult(static_cast<size_t>(trials), 0);
    parallel_trials(trials, threads, [&](int64_t t) {
      Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
      Carpet carpet = random_carpet(family, params, rng);
      Carpet inc = incremental_select(carpet);
      mult[static_cast<size_t>(t)] = multiplicity(*family, inc.balls());
    });
    int64_t max_mult = 0;
    for (int64_t m : mult) max_mult = std::max(max_mult, m);

    DoublingCertificate dc = certify_doubling(*norm, doubling_rmax);
    int64_t chi = max_mult * dc.D * dc.D + 1;

    // coloring statistics on a fresh sample, with the certified constants
    for (int64_t t = 0; t < std::min(check_sample, trials); ++t) {
      Rng rng(derive_seed(seed ^ 0xc0ffee, static_cast<uint64_t>(t)));
      Carpet carpet = random_carpet(family, params, rng);
      try {
        auto classes = color_disjointify(carpet, max_mult, dc.D);
        std::vector<Point> covered;
        for (const auto& cls : classes) {
          if (!is_well_separated(*family, cls)) violation = true;
          for (const FamilyBall& b : cls) covered.push_back(b.center);
        }
        sort_unique(covered);
        for (const Point& x : carpet.centers()) {
          bool ok = false;
          for (const auto& cls : classes) {
            for (const FamilyBall& b : cls) {
              if (family->contains(b.center, b.radius, x)) {
                ok = true;
                break;
              }
            }
            if (ok) break;
          }
          if (!ok) violation = true;
        }
        if (static_cast<int64_t>(classes.size()) > chi) violation = true;
      } catch (const CoveringCertificateError&) {
        violation = true;
      }
    }

    csv += norm->describe() + "," + std::to_string(norm->dim()) + "," + std::to_string(trials) +
           "," + std::to_string(max_mult) + "," + std::to_string(chi) + "," +
           std::to_string(params.window) + "," + std::to_string(params.r_min) + "," +
           std::to_string(params.r_max) + "," + std::to_string(seed) + "\n";
  }
  write_file(out_path, csv);
  if (violation) std::cerr << "cover: certificate violation detected\n";
  return violation ? kExitViolation : kExitOk;
}

// ---------------------------------------------------------------------------
// concentration: boundary scans and thick-center curves
// ---------------------------------------------------------------------------

namespace {

DiscreteMeasure measure_from_config(const Json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "dyadic_uniform") {
    return dyadic_uniform_measure(j.at("m").get<int>(), j.at("d").get<int>());
  }
  if (type == "atoms") return measure_from_json(j.at("atoms"));
  if (type == "circle") {
    // unit-thick discretized l2 circle: rho - 1 < ‖u‖_2 <= rho
    int64_t rho = j.at("radius").get<int64_t>();
    NormSpec l2 = NormSpec::l2(2);
    std::vector<Point> pts = annulus_points(Point{0, 0}, Rat(2 * rho - 1, 2), Rat(1, 2), l2);
    return DiscreteMeasure::uniform_on(pts);
  }
  throw std::invalid_argument("unknown measure type '" + type + "'");
}

std::vector<Point> samples_from_config(const Json& j, const DiscreteMeasure& mu) {
  if (j.is_array()) {
    std::vector<Point> out;
    for (const auto& e : j) out.push_back(point_from_json(e));
    return out;
  }
  int64_t stride = j.at("stride").get<int64_t>();
  if (stride < 1) throw std::invalid_argument("sample stride must be positive");
  std::vector<Point> out;
  for (size_t i = 0; i < mu.atoms().size(); i += static_cast<size_t>(stride)) {
    out.push_back(mu.atoms()[i].first);
  }
  return out;
}

}  // namespace

int run_concentration(const Json& config, const std::string& out_path, uint64_t seed, int threads) {
  (void)seed;
  (void)threads;
  std::string mode = config.value("mode", "boundary_scan");

  if (mode == "boundary_scan") {
    DiscreteMeasure mu = measure_from_config(config.at("measure"));
    NormSpec norm = norm_from_json(config.at("norm"));
    std::vector<Point> samples = samples_from_config(config.at("samples"), mu);
    std::vector<Rat> radii;
    for (const auto& r : config.at("radii")) {
      radii.push_back(r.is_string() ? rat_from_string(r.get<std::string>())
                                    : Rat(static_cast<long>(r.get<int64_t>())));
    }
    Rat eps = rat_field(config, "eps");
    BoundaryKind kind = config.value("boundary", "shell") == std::string("sphere")
                            ? BoundaryKind::exact_sphere
                            : BoundaryKind::unit_shell;
    BoundaryScanResult res = boundary_ratio_scan(mu, norm, samples, radii, eps, kind);
    std::string csv = "point,r,boundary_mass,ball_mass,ratio,ratio_float\n";
    for (const auto& row : res.rows) {
      csv += point_to_string(row.x) + "," + rat_to_string(row.r) + "," +
             rat_to_string(row.boundary_mass) + "," + rat_to_string(row.ball_mass) + "," +
             rat_to_string(row.ratio) + "," + csv_float(row.ratio) + "\n";
    }
    write_file(out_path, csv);
    std::cout << "exceed_fraction " << rat_to_string(res.exceed_fraction) << "\n";
    return kExitOk;
  }

  if (mode == "thick_center") {
    NormSpec norm = norm_from_json(config.at("norm"));
    OnionParams op;
    for (const auto& c : config.at("centers")) op.centers.push_back(point_from_json(c));
    for (const auto& r : config.at("level_radii")) op.level_radii.push_back(r.get<int64_t>());
    op.growth = StackGrowth::squared;
    op.base_minrad = rat_field(config, "base_minrad");
    op.eps = rat_field(config, "eps_build");
    auto [stack, mu] = build_onion(norm, op);
    Rat eps_test = rat_field(config, "eps_test");

    std::string csv = "height,f_thick_mass,fraction,fraction_float\n";
    for (size_t h = 0; h <= stack.height(); ++h) {
      std::vector<Carpet> prefix(stack.levels().begin(), stack.levels().begin() + h);
      Stack sub(std::move(prefix), StackGrowth::squared, op.base_minrad, stack.centers());
      ThickCenterMassResult r = thick_center_mass(mu, sub, eps_test);
      csv += std::to_string(h) + "," + rat_to_string(r.f_thick_mass) + "," +
             rat_to_string(r.fraction) + "," + csv_float(r.fraction) + "\n";
    }
    write_file(out_path, csv);
    return kExitOk;
  }

  throw std::invalid_argument("concentration mode must be boundary_scan or thick_center");
}

// ---------------------------------------------------------------------------
// ratio: R_n tables, shell ratios, coboundary checks
// ---------------------------------------------------------------------------

int run_ratio(const Json& config, const std::string& out_path, uint64_t seed, int threads) {
  (void)seed;
  (void)threads;
  std::string mode = config.value("mode", "ratio");
  ActionRef action = action_from_json(config.at("action"));
  NormSpec norm = norm_from_json(config.at("norm"));
  Point omega = point_from_json(config.at("omega"));
  int64_t n_min = config.value("n_min", int64_t{0});
  int64_t n_max = require_positive(config, "n_max");

  std::string csv = "omega,n,value,value_float,bound,ok\n";
  bool violation = false;

  if (mode == "ratio") {
    Observable f = observable_from_json(config.at("f"));
    Observable g = observable_from_json(config.at("g"));
    bool tails = action->translation_model() && f.nonnegative() && g.nonnegative();
    for (int64_t n = n_min; n <= n_max; ++n) {
      Rat value;
      try {
        value = ratio_average(*action, f, g, norm, n, omega);
      } catch (const ZeroDenominatorError&) {
        continue;
      }
      std::string bound_str;
      if (tails) {
        RatioTailBound b = ratio_tail_bound(*action, f, g, norm, n, omega);
        if (b.valid) {
          bound_str = rat_to_string(b.bound);
          Rat target = action->integral(f) / action->integral(g);
          if (rat_abs(value - target) > b.bound) violation = true;
        }
      }
      csv += point_to_string(omega) + "," + std::to_string(n) + "," + rat_to_string(value) + "," +
             csv_float(value) + "," + bound_str + ",\n";
    }
  } else if (mode == "shell") {
    Observable h = observable_from_json(config.at("h"));
    int64_t t = require_positive(config, "t");
    for (int64_t n = std::max(n_min, t); n <= n_max; ++n) {
      Rat value;
      try {
        value = shell_ratio(*action, h, norm, n, t, omega);
      } catch (const ZeroDenominatorError&) {
        continue;
      }
      csv += point_to_string(omega) + "," + std::to_string(n) + "," + rat_to_string(value) + "," +
             csv_float(value) + ",,\n";
    }
  } else if (mode == "coboundary") {
    Observable f = observable_from_json(config.at("f"));
    Point v = point_from_json(config.at("v"));
    for (int64_t n = std::max<int64_t>(n_min, 1); n <= n_max; ++n) {
      CoboundaryReport rep = coboundary_ratio_bound_check(*action, f, v, norm, n, omega);
      if (!rep.chain_ok) violation = true;
      std::string value = rep.ratio_lhs ? rat_to_string(*rep.ratio_lhs) : "";
      std::string vf = rep.ratio_lhs ? csv_float(*rep.ratio_lhs) : "";
      std::string bound = rep.ratio_bound ? rat_to_string(*rep.ratio_bound) : "";
      csv += point_to_string(omega) + "," + std::to_string(n) + "," + value + "," + vf + "," +
             bound + "," + (rep.chain_ok ? "1" : "0") + "\n";
    }
  } else {
    throw std::invalid_argument("ratio mode must be ratio, shell, or coboundary");
  }
  write_file(out_path, csv);
  return violation ? kExitViolation : kExitOk;
}

// ---------------------------------------------------------------------------
// maximal: witnesses, validation, randomized boundedness trials
// ---------------------------------------------------------------------------

int run_maximal(const Json& config, const std::string& out_path, uint64_t seed, int threads) {
  std::string mode = config.value("mode", "staircase_sweep");
  Json out;
  out["mode"] = mode;
  bool violation = false;

  if (mode == "staircase_sweep") {
    Rat M = rat_field(config, "M");
    Json rows = Json::array();
    for (const auto& kj : config.at("K_list")) {
      int64_t K = kj.get<int64_t>();
      WitnessPackage w = staircase_witness(K, M);
      WitnessValidationReport rep = witness_validate(w, M);
      ActionRef act = make_counting_translation(2);
      Observable f = Observable::indicator(w.U);
      Observable h = Observable::indicator(w.V);
      Rat score = violation_score(*act, f, h, w.t, K, *w.family);
      if (!rep.ok) violation = true;
      rows.push_back(Json{{"K", K},
                          {"ok", rep.ok},
                          {"score", rat_to_string(score)},
                          {"score_float", rat_to_double(score)},
                          {"package", witness_to_json(w)}});
    }
    out["rows"] = rows;
  } else if (mode == "validate") {
    WitnessPackage w = witness_from_json(config.at("package"));
    Rat M = rat_field(config, "M");
    WitnessValidationReport rep = witness_validate(w, M);
    out["report"] = witness_report_to_json(rep);
    if (!rep.ok) violation = true;
  } else if (mode == "random_trials") {
    int64_t trials = require_positive(config, "trials");
    int64_t window = require_positive(config, "window");
    int64_t n_max = require_positive(config, "n_max");
    Rat eps = rat_field(config, "eps");
    int64_t m_cert = require_positive(config, "M_cert");
    NormRef norm = make_norm(norm_from_json(config.at("norm")));
    auto family = BallFamilySpec::norm_balls(norm);
    ActionRef act = make_counting_translation(norm->dim());

    std::vector<int> bad(static_cast<size_t>(trials), 0);
    parallel_trials(trials, threads, [&](int64_t t) {
      Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
      auto random_obs = [&](int count) {
        std::vector<std::pair<Point, Rat>> vals;
        for (int i = 0; i < count; ++i) {
          Point p(norm->dim());
          for (int k = 0; k < norm->dim(); ++k) p[k] = rng.range(-window, window);
          vals.emplace_back(std::move(p), Rat(static_cast<long>(rng.range(1, 8))));
        }
        return Observable::from_pairs(std::move(vals));
      };
      Observable f = random_obs(static_cast<int>(rng.range(1, 24)));
      Observable h = random_obs(static_cast<int>(rng.range(1, 24)));
      Rat lhs(0);
      for (const auto& [w, hv] : h.atoms()) {
        MaximalRatioResult mr = maximal_ratio(*act, f, h, *family, n_max, w);
        if (mr.value > eps) lhs += hv * act->mass(w);
      }
      Rat rhs = Rat(m_cert) / eps * act->integral(f);
      if (lhs > rhs) bad[static_cast<size_t>(t)] = 1;
    });
    int64_t violations = 0;
    for (int b : bad) violations += b;
    out["trials"] = trials;
    out["violations"] = violations;
    if (violations > 0) violation = true;
  } else if (mode == "search") {
    WitnessSearchParams p;
    p.window = config.value("window", p.window);
    p.v_size = config.value("v_size", p.v_size);
    p.n_cap = config.value("n_cap", p.n_cap);
    p.trials = config.value("trials", p.trials);
    p.seed = seed;
    if (config.contains("t")) p.t = rat_field(config, "t");
    if (config.contains("M")) p.M = rat_field(config, "M");
    auto family = family_from_json(config.at("family"));
    auto found = witness_search(family, p);
    out["found"] = found.has_value();
    if (found) out["package"] = witness_to_json(*found);
  } else {
    throw std::invalid_argument("maximal mode must be staircase_sweep, validate, random_trials, or search");
  }

  write_file(out_path, out.dump(2) + "\n");
  return violation ? kExitViolation : kExitOk;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

int run_subcommand(const std::string& name, const std::string& config_path,
                   const std::string& out_path, std::optional<uint64_t> seed, int threads) {
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config '" << config_path << "'\n";
      return kExitUsage;
    }
    Json config = Json::parse(in);
    uint64_t s = seed ? *seed : config.value("seed", uint64_t{1});
    if (name == "cover") return run_cover(config, out_path, s, threads);
    if (name == "concentration") return run_concentration(config, out_path, s, threads);
    if (name == "ratio") return run_ratio(config, out_path, s, threads);
    if (name == "maximal") return run_maximal(config, out_path, s, threads);
    std::cerr << "unknown subcommand '" << name << "'\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CoveringCertificateError& e) {
    std::cerr << "certificate violation: " << e.what() << "\n";
    return kExitViolation;
  } catch (const ExhaustionOverrunError& e) {
    std::cerr << "exhaustion overrun: " << e.what() << " (failed precondition: " << e.failed_precondition
              << ")\n";
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace besicover
