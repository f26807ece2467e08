#include "latproj/reporting.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace latproj {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Count: return "count";
    case ExperimentKind::Converge: return "converge";
    case ExperimentKind::RotateAverage: return "rotate-average";
    case ExperimentKind::FourierDecay: return "fourier-decay";
    case ExperimentKind::VerifyIdentity: return "verify-identity";
    case ExperimentKind::Theory: return "theory";
  }
  return "?";
}

nlohmann::json config_json(const ExperimentConfig& c) {
  return nlohmann::json{{"kind", kind_name(c.kind)},
                        {"n", c.n},
                        {"body", c.body},
                        {"axes", c.axes},
                        {"k", c.k},
                        {"density", c.density},
                        {"f", c.f},
                        {"rho", c.rho},
                        {"rho_start", c.rho_start},
                        {"rho_stop", c.rho_stop},
                        {"per_octave", c.per_octave},
                        {"jitter_seed", c.jitter_seed},
                        {"rotations", c.rotations},
                        {"angle", c.angle ? nlohmann::json(*c.angle) : nlohmann::json()},
                        {"seed", c.seed},
                        {"out", c.out},
                        {"workers", c.workers},
                        {"mc_samples", c.mc_samples},
                        {"transform", c.transform},
                        {"r_start", c.r_start},
                        {"r_stop", c.r_stop},
                        {"r_step", c.r_step},
                        {"directions", c.directions},
                        {"method", c.method}};
}

nlohmann::json tolerances_json() {
  return nlohmann::json{{"include_tol", 1e-12},
                        {"boundary_band", 1e-9},
                        {"quadrature_error_target", 1e-10},
                        {"transform_rel_tol", 1e-8}};
}

nlohmann::json fit_json(const ExponentFit& f) {
  return nlohmann::json{{"slope", f.slope},
                        {"intercept", f.intercept},
                        {"r_squared", f.r_squared},
                        {"rho_min", f.window.rho_min},
                        {"rho_max", f.window.rho_max},
                        {"method", f.method == FitMethod::DyadicEnvelope ? "dyadic-envelope" : "all-points"},
                        {"floor_dropped", f.floor_dropped},
                        {"points_used", f.points_used}};
}

std::string theory_family(const ExperimentConfig& cfg) {
  if (cfg.body == "superellipsoid") return "superellipsoid";
  if (cfg.body == "square" || cfg.body == "polygon") return "polygon-rational";
  return "positive-curvature";
}

Rotation fixed_rotation(const ExperimentConfig& cfg) {
  if (cfg.angle) {
    if (cfg.n != 2) throw std::invalid_argument("fixed rotation angle is 2-D only");
    return Rotation::angle2d(*cfg.angle);
  }
  return Rotation::identity(cfg.n);
}

void finish_record(RunRecord* record, const nlohmann::json& j, const std::string& out) {
  std::ofstream os(out + ".json");
  os << j.dump(2) << "\n";
  if (record) record->j = j;
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<std::string> validate(const ExperimentConfig& cfg) {
  if (cfg.n < 2 || cfg.n > 4) return "n must be in [2,4]";
  if (cfg.kind == ExperimentKind::Converge || cfg.kind == ExperimentKind::RotateAverage) {
    if (!(cfg.rho_start > 0.0)) return "rho-start must be positive";
    if (!(cfg.rho_start < cfg.rho_stop)) return "rho grid: start must be < stop";
    if (cfg.per_octave < 1) return "per-octave must be >= 1";
  }
  if (cfg.kind == ExperimentKind::Count && !(cfg.rho > 0.0)) return "rho must be positive";
  if (cfg.kind == ExperimentKind::RotateAverage && cfg.rotations < 1)
    return "rotate-average needs rotations >= 1";
  if (cfg.body != "ball" && cfg.body != "ellipsoid" && cfg.body != "superellipsoid" &&
      cfg.body != "polygon" && cfg.body != "square" && cfg.body != "density-body")
    return "unknown body '" + cfg.body + "'";
  if (cfg.body == "superellipsoid" && cfg.k < 1) return "superellipsoid needs k >= 1";
  if (cfg.body == "density-body" && cfg.density == "from-body")
    return "density-body requires an explicit density id";
  if (cfg.kind == ExperimentKind::FourierDecay) {
    if (cfg.n != 2) return "fourier-decay is 2-D only";
    if (!(cfg.r_start > 0.0) || !(cfg.r_stop >= 2.0 * cfg.r_start))
      return "fourier r grid must span at least one octave";
    if (cfg.transform != "surface" && cfg.transform != "shell")
      return "transform must be 'surface' or 'shell'";
  }
  if (cfg.workers < 1) return "workers must be >= 1";
  if (cfg.mc_samples < 1) return "mc-samples must be >= 1";
  if (cfg.method != "dyadic-envelope" && cfg.method != "all-points")
    return "method must be 'dyadic-envelope' or 'all-points'";
  return std::nullopt;
}

SphereField test_function_from_config(const std::string& id) {
  if (id == "one") return constant_field(1.0);
  if (id == "zero") return constant_field(0.0);
  if (id == "u1sq") {
    SphereField f;
    f.eval = [](const Vec& u) { return u[0] * u[0]; };
    return f;
  }
  if (id == "u1") {
    SphereField f;
    f.eval = [](const Vec& u) { return u[0]; };
    return f;
  }
  if (id == "cosbump") {
    SphereField f;
    f.eval = [](const Vec& u) { return 1.0 + 0.5 * u[0]; };
    f.positive = true;
    return f;
  }
  throw std::invalid_argument("unknown test function '" + id + "' (one|zero|u1|u1sq|cosbump)");
}

SphereField density_from_config(const ExperimentConfig& cfg, const StarBody& body) {
  if (cfg.density == "from-body") {
    SphereField m;
    int n = body.n;
    SphereField radial = body.radial;
    m.eval = [radial, n](const Vec& u) { return std::pow(radial.eval(u), n); };
    m.positive = true;
    m.smoothness = radial.smoothness;
    return m;
  }
  if (cfg.density == "four") return constant_field(4.0);
  SphereField m = test_function_from_config(cfg.density);
  if (!m.positive) throw std::invalid_argument("density '" + cfg.density + "' is not positive");
  return m;
}

StarBody body_from_config(const ExperimentConfig& cfg) {
  if (cfg.body == "ball") return make_ball(cfg.n);
  if (cfg.body == "ellipsoid") {
    std::vector<double> axes = cfg.axes;
    axes.resize(static_cast<std::size_t>(cfg.n), 1.0);
    return make_ellipsoid(axes);
  }
  if (cfg.body == "superellipsoid") return make_superellipsoid(cfg.n, cfg.k);
  if (cfg.body == "square") return make_square();
  if (cfg.body == "polygon") {
    if (cfg.polygon_normals.size() < 6 || cfg.polygon_normals.size() % 2 != 0 ||
        cfg.polygon_normals.size() != 2 * cfg.polygon_offsets.size())
      throw std::invalid_argument("polygon needs matching normals (x,y pairs) and offsets");
    std::vector<Vec> ns;
    for (std::size_t i = 0; i < cfg.polygon_normals.size(); i += 2)
      ns.push_back(make_vec(cfg.polygon_normals[i], cfg.polygon_normals[i + 1]));
    return make_polygon(ns, cfg.polygon_offsets);
  }
  // density-body
  SphereField m = test_function_from_config(cfg.density);
  return body_from_density(m, cfg.n);
}

void write_residual_csv(const std::string& path, const ResidualSeries& series) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file " + path);
  os << "rho,rotation_id,count,discrete_value,target,residual,boundary_hits\n";
  for (const auto& r : series.records)
    os << fmt17(r.rho) << "," << r.rotation_id << "," << fmt17(r.weighted_count) << ","
       << fmt17(r.discrete_value) << "," << fmt17(r.target) << "," << fmt17(r.residual) << ","
       << r.boundary_hits << "\n";
}

void write_profile_csv(const std::string& path, const std::vector<DecayProfile>& profiles) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file " + path);
  os << "r,magnitude,direction_x,direction_y,fitted_alpha,kind,j_vanishing\n";
  for (const auto& p : profiles)
    for (std::size_t i = 0; i < p.r_grid.size(); ++i)
      os << fmt17(p.r_grid[i]) << "," << fmt17(p.magnitudes[i]) << "," << fmt17(p.direction[0])
         << "," << fmt17(p.direction[1]) << "," << fmt17(p.fitted_alpha) << ","
         << (p.kind == TransformKind::Surface ? "surface" : "shell") << "," << p.j_vanishing
         << "\n";
}

std::string theory_summary(const TheoryExponents& t) {
  std::ostringstream os;
  os << "family=" << t.family << " n=" << t.n;
  if (t.k) os << " k=" << *t.k;
  os << "\npositive-curvature exponent: " << t.positive_curvature_exp << "\n";
  if (t.k) {
    os << "predicted A = " << t.A << ", B = " << t.B << ", exponent " << t.superellipsoid_exp
       << (t.best_possible ? " (best possible)" : "") << "\n";
    os << "beta = " << t.beta << ", alpha_j =";
    for (double a : t.alpha) os << " " << a;
    os << "\n";
  }
  if (t.family == "polygon-rational")
    os << "rational-normal polygon exponent: " << t.polygon_rational_exp << "\n";
  if (t.family == "polygon-algebraic")
    os << "algebraic polygon exponent: " << t.polygon_algebraic_exp << " + eps\n";
  return os.str();
}

int run(const ExperimentConfig& cfg, RunRecord* record) {
  if (auto err = validate(cfg)) {
    std::fprintf(stderr, "config error: %s\n", err->c_str());
    return kExitConfigError;
  }
  auto t0 = std::chrono::steady_clock::now();
  nlohmann::json j{{"version", kVersion}, {"config", config_json(cfg)}, {"tolerances", tolerances_json()}};
  try {
    if (cfg.kind == ExperimentKind::Theory) {
      std::optional<int> k;
      if (cfg.body == "superellipsoid") k = cfg.k;
      TheoryExponents t = theory_exponents(cfg.n, theory_family(cfg), k);
      std::string s = theory_summary(t);
      std::fputs(s.c_str(), stdout);
      j["theory"] = s;
      finish_record(record, j, cfg.out);
      return kExitOk;
    }

    StarBody body = body_from_config(cfg);
    SphereField m = density_from_config(cfg, body);
    SphereField f = test_function_from_config(cfg.f);

    if (cfg.kind == ExperimentKind::Count) {
      std::vector<double> grid{cfg.rho};
      ResidualSeries s = residual_series(body, f, m, grid, fixed_rotation(cfg), cfg.workers);
      write_residual_csv(cfg.out + ".csv", s);
      j["series"] = nlohmann::json::array();
      for (const auto& r : s.records)
        j["series"].push_back({{"rho", r.rho},
                               {"rotation_id", r.rotation_id},
                               {"count", r.weighted_count},
                               {"discrete_value", r.discrete_value},
                               {"target", r.target},
                               {"residual", r.residual},
                               {"boundary_hits", r.boundary_hits}});
    } else if (cfg.kind == ExperimentKind::Converge) {
      std::vector<double> grid =
          rho_grid_geometric(cfg.rho_start, cfg.rho_stop, cfg.per_octave, cfg.jitter_seed);
      ResidualSeries s = residual_series(body, f, m, grid, fixed_rotation(cfg), cfg.workers);
      write_residual_csv(cfg.out + ".csv", s);
      FitWindow w{grid.front(), grid.back()};
      FitMethod method =
          cfg.method == "all-points" ? FitMethod::AllPoints : FitMethod::DyadicEnvelope;
      ExponentFit fit = fit_envelope_exponent(s, w, method);
      std::optional<int> k;
      if (cfg.body == "superellipsoid") k = cfg.k;
      TheoryExponents t = theory_exponents(cfg.n, theory_family(cfg), k);
      j["series"] = nlohmann::json::array();
      for (const auto& r : s.records)
        j["series"].push_back({{"rho", r.rho},
                               {"rotation_id", r.rotation_id},
                               {"count", r.weighted_count},
                               {"discrete_value", r.discrete_value},
                               {"target", r.target},
                               {"residual", r.residual},
                               {"boundary_hits", r.boundary_hits}});
      j["fit"] = fit_json(fit);
      j["theory"] = theory_summary(t);
      double predicted = t.family == "superellipsoid"  ? t.superellipsoid_exp
                         : t.family == "polygon-rational" ? t.polygon_rational_exp
                                                          : t.positive_curvature_exp;
      j["predicted_exponent"] = predicted;
    } else if (cfg.kind == ExperimentKind::RotateAverage) {
      std::vector<double> grid =
          rho_grid_geometric(cfg.rho_start, cfg.rho_stop, cfg.per_octave, cfg.jitter_seed);
      RotationAverage avg =
          rotation_average(body, f, m, grid, cfg.rotations, cfg.seed, cfg.workers);
      // Full per-(rotation, rho) table, ordered by (rotation index, rho).
      ResidualSeries flat;
      flat.target = avg.target;
      for (const auto& s : avg.per_rotation)
        for (const auto& r : s.records) flat.records.push_back(r);
      write_residual_csv(cfg.out + ".csv", flat);
      ResidualSeries means;
      means.target = avg.target;
      for (std::size_t i = 0; i < avg.rho.size(); ++i) {
        ResidualRecord r;
        r.rho = avg.rho[i];
        r.rotation_id = "mean[" + std::to_string(cfg.rotations) + "]";
        r.target = avg.target;
        r.residual = avg.mean_abs_residual[i];
        r.discrete_value = avg.target - avg.mean_abs_residual[i];
        means.records.push_back(r);
      }
      write_residual_csv(cfg.out + "_mean.csv", means);
      j["fit"] = fit_json(avg.fit);
      j["target"] = avg.target;
      j["mean_abs_residual"] = avg.mean_abs_residual;
      j["std_error"] = avg.std_error;
      j["rho"] = avg.rho;
      j["series"] = nlohmann::json::array();
      for (const auto& r : means.records)
        j["series"].push_back({{"rho", r.rho},
                               {"rotation_id", r.rotation_id},
                               {"count", r.weighted_count},
                               {"discrete_value", r.discrete_value},
                               {"target", r.target},
                               {"residual", r.residual},
                               {"boundary_hits", r.boundary_hits}});
    } else if (cfg.kind == ExperimentKind::FourierDecay) {
      std::vector<double> rg = transform_r_grid(cfg.r_start, cfg.r_stop, cfg.r_step);
      std::vector<Vec> dirs;
      for (int i = 0; i < cfg.directions; ++i)
        dirs.push_back(i == 0 ? make_vec(1.0, 0.0) : unit_from_angle(0.7 + 0.9 * i));
      TransformKind kind =
          cfg.transform == "shell" ? TransformKind::Shell : TransformKind::Surface;
      TransformBudget budget;
      budget.r_max = std::max(512.0, cfg.r_stop);
      auto profiles = decay_sweep(body, f, dirs, rg, kind, budget);
      write_profile_csv(cfg.out + ".csv", profiles);
      j["profiles"] = nlohmann::json::array();
      for (const auto& p : profiles)
        j["profiles"].push_back({{"direction", {p.direction[0], p.direction[1]}},
                                 {"fitted_alpha", p.fitted_alpha},
                                 {"j_vanishing", p.j_vanishing},
                                 {"lambda_sup", p.lambda_sup}});
    } else if (cfg.kind == ExperimentKind::VerifyIdentity) {
      IdentityCheck chk = verify_identity(f, m, body, cfg.mc_samples, cfg.seed);
      j["identity"] = {{"lhs", chk.lhs},
                       {"rhs", chk.rhs},
                       {"std_error", chk.std_error},
                       {"rel_discrepancy", chk.rel_discrepancy},
                       {"sigmas", chk.sigmas}};
      std::printf("lhs=%s rhs=%s sigmas=%.3f\n", fmt17(chk.lhs).c_str(), fmt17(chk.rhs).c_str(),
                  chk.sigmas);
      if (chk.sigmas > 3.0) {
        j["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        finish_record(record, j, cfg.out);
        std::fprintf(stderr, "identity check failed: %.3f standard errors\n", chk.sigmas);
        return kExitThresholdFailure;
      }
    }
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "budget error: %s\n", e.what());
    return kExitBudgetError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  }
  j["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  finish_record(record, j, cfg.out);
  if (cfg.kind == ExperimentKind::Converge || cfg.kind == ExperimentKind::RotateAverage) {
    RunRecord rr{j};
    emit_plot_data(rr, cfg.out);
  }
  return kExitOk;
}

void emit_plot_data(const RunRecord& record, const std::string& out_base) {
  if (!record.j.contains("series") || record.j["series"].empty())
    throw std::invalid_argument("emit_plot_data: record has no series");
  std::ofstream data(out_base + "_loglog.dat");
  int dropped = 0;
  double lo = 1e300, hi = -1e300;
  for (const auto& r : record.j["series"]) {
    double rho = r["rho"].get<double>();
    double res = std::abs(r["residual"].get<double>());
    if (res <= 0.0) {
      ++dropped;  // log of zero excluded
      continue;
    }
    data << fmt17(std::log10(rho)) << " " << fmt17(std::log10(res)) << "\n";
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
  }
  std::ofstream summary(out_base + "_summary.txt");
  if (record.j.contains("fit")) {
    const auto& f = record.j["fit"];
    double slope = f["slope"].get<double>();
    double intercept = f["intercept"].get<double>();
    std::ofstream fitline(out_base + "_fit.dat");
    for (double rho : {lo, hi})
      fitline << fmt17(std::log10(rho)) << " "
              << fmt17((intercept + slope * std::log(rho)) / std::numbers::ln10) << "\n";
    summary << "fitted slope " << fmt17(slope) << " (r^2 " << fmt17(f["r_squared"].get<double>())
            << ", method " << f["method"].get<std::string>() << ")\n";
  }
  if (record.j.contains("predicted_exponent"))
    summary << "predicted " << record.j["predicted_exponent"].get<double>() << "\n";
  if (record.j.contains("theory")) summary << record.j["theory"].get<std::string>();
  if (dropped > 0) summary << dropped << " zero-residual points dropped from log files\n";
}

void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto as_double = [&] { return std::stod(value); };
  auto as_int = [&] { return std::stoi(value); };
  auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
  auto as_list = [&] {
    std::vector<double> v;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    return v;
  };
  if (key == "kind") {
    if (value == "count") cfg.kind = ExperimentKind::Count;
    else if (value == "converge") cfg.kind = ExperimentKind::Converge;
    else if (value == "rotate-average") cfg.kind = ExperimentKind::RotateAverage;
    else if (value == "fourier-decay") cfg.kind = ExperimentKind::FourierDecay;
    else if (value == "verify-identity") cfg.kind = ExperimentKind::VerifyIdentity;
    else if (value == "theory") cfg.kind = ExperimentKind::Theory;
    else throw std::invalid_argument("unknown kind '" + value + "'");
  } else if (key == "n") cfg.n = as_int();
  else if (key == "body") cfg.body = value;
  else if (key == "axes") cfg.axes = as_list();
  else if (key == "k") cfg.k = as_int();
  else if (key == "polygon-normals") cfg.polygon_normals = as_list();
  else if (key == "polygon-offsets") cfg.polygon_offsets = as_list();
  else if (key == "density") cfg.density = value;
  else if (key == "f") cfg.f = value;
  else if (key == "rho") cfg.rho = as_double();
  else if (key == "rho-start") cfg.rho_start = as_double();
  else if (key == "rho-stop") cfg.rho_stop = as_double();
  else if (key == "per-octave") cfg.per_octave = as_int();
  else if (key == "jitter-seed") cfg.jitter_seed = as_u64();
  else if (key == "rotations") cfg.rotations = as_int();
  else if (key == "angle") cfg.angle = as_double();
  else if (key == "seed") cfg.seed = as_u64();
  else if (key == "out") cfg.out = value;
  else if (key == "workers") cfg.workers = as_int();
  else if (key == "mc-samples") cfg.mc_samples = std::stoll(value);
  else if (key == "transform") cfg.transform = value;
  else if (key == "r-start") cfg.r_start = as_double();
  else if (key == "r-stop") cfg.r_stop = as_double();
  else if (key == "r-step") cfg.r_step = as_double();
  else if (key == "directions") cfg.directions = as_int();
  else if (key == "method") cfg.method = value;
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    try {
      apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace latproj
