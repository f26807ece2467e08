#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "latproj/reporting.hpp"

using namespace latproj;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Converge;
  cfg.rho_start = 64.0;
  cfg.rho_stop = 8.0;
  auto err = validate(cfg);
  REQUIRE(err.has_value());
  CHECK(err->find("start") != std::string::npos);

  cfg.rho_stop = 128.0;
  CHECK(!validate(cfg));

  cfg.body = "torus";
  CHECK(validate(cfg).has_value());
  cfg.body = "ball";

  cfg.kind = ExperimentKind::RotateAverage;
  cfg.rotations = 0;
  CHECK(validate(cfg).has_value());

  cfg.kind = ExperimentKind::FourierDecay;
  cfg.n = 3;
  CHECK(validate(cfg).has_value());
}

TEST_CASE("fmt17 round-trips doubles") {
  for (double v : {0.1, 3.141592653589793, -2.0 / 3.0, 1e-13, 12345.678901234567}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("count run writes the expected csv") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Count;
  cfg.rho = 10.0;
  cfg.out = "tmp_count_run";
  RunRecord rec;
  CHECK(run(cfg, &rec) == kExitOk);
  std::string csv = slurp("tmp_count_run.csv");
  CHECK(csv.rfind("rho,rotation_id,count,discrete_value,target,residual,boundary_hits\n", 0) == 0);
  CHECK(csv.find(",316,") != std::string::npos);
  CHECK(rec.j["series"][0]["count"].get<double>() == 316.0);
  std::remove("tmp_count_run.csv");
  std::remove("tmp_count_run.json");
}

TEST_CASE("invalid config exits with the config code") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Count;
  cfg.rho = -1.0;
  CHECK(run(cfg) == kExitConfigError);
}

TEST_CASE("converge run emits plot files and identical csv across workers") {
  ExperimentConfig base;
  base.kind = ExperimentKind::Converge;
  base.rho_start = 8.0;
  base.rho_stop = 64.0;
  base.per_octave = 6;
  base.out = "tmp_conv_w1";
  base.workers = 1;
  CHECK(run(base) == kExitOk);
  ExperimentConfig w4 = base;
  w4.out = "tmp_conv_w4";
  w4.workers = 4;
  CHECK(run(w4) == kExitOk);
  std::string a = slurp("tmp_conv_w1.csv");
  std::string b = slurp("tmp_conv_w4.csv");
  CHECK(a == b);
  CHECK(!a.empty());
  std::string summary = slurp("tmp_conv_w1_summary.txt");
  CHECK(summary.find("fitted slope") != std::string::npos);
  CHECK(!slurp("tmp_conv_w1_loglog.dat").empty());
  for (const char* f : {"tmp_conv_w1.csv", "tmp_conv_w1.json", "tmp_conv_w1_loglog.dat",
                        "tmp_conv_w1_fit.dat", "tmp_conv_w1_summary.txt", "tmp_conv_w4.csv",
                        "tmp_conv_w4.json", "tmp_conv_w4_loglog.dat", "tmp_conv_w4_fit.dat",
                        "tmp_conv_w4_summary.txt"})
    std::remove(f);
}

TEST_CASE("plot emission requires a series") {
  RunRecord empty;
  empty.j = nlohmann::json::object();
  CHECK_THROWS_AS(emit_plot_data(empty, "tmp_noseries"), std::invalid_argument);
}

TEST_CASE("theory summary names the predicted constants") {
  TheoryExponents t = theory_exponents(2, "superellipsoid", 2);
  std::string s = theory_summary(t);
  CHECK(s.find("predicted A = 0.75") != std::string::npos);
  CHECK(s.find("exponent -1.25") != std::string::npos);
  CHECK(s.find("best possible") != std::string::npos);
}

TEST_CASE("config files parse with diagnostics") {
  {
    std::ofstream os("tmp_cfg.ini");
    os << "# comment\n"
       << "kind = converge\n"
       << "body= superellipsoid\n"
       << "k =3\n"
       << "rho-start = 4\n"
       << "rho-stop = 32\n"
       << "axes = 2.0,1.5\n";
  }
  ExperimentConfig cfg = load_config_file("tmp_cfg.ini");
  CHECK(cfg.kind == ExperimentKind::Converge);
  CHECK(cfg.body == "superellipsoid");
  CHECK(cfg.k == 3);
  CHECK(cfg.rho_stop == 32.0);
  REQUIRE(cfg.axes.size() == 2);
  CHECK(cfg.axes[1] == 1.5);

  {
    std::ofstream os("tmp_cfg_bad.ini");
    os << "kind = converge\n" << "frobnicate = 1\n";
  }
  try {
    load_config_file("tmp_cfg_bad.ini");
    FAIL("expected rejection of the unknown key");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
  }
  std::remove("tmp_cfg.ini");
  std::remove("tmp_cfg_bad.ini");
}

TEST_CASE("density catalog rejects non-positive densities") {
  ExperimentConfig cfg;
  cfg.density = "u1";
  StarBody disk = make_ball(2);
  CHECK_THROWS_AS(density_from_config(cfg, disk), std::invalid_argument);
  cfg.density = "four";
  SphereField m = density_from_config(cfg, disk);
  CHECK(m.eval(make_vec(1.0, 0.0)) == 4.0);
}
