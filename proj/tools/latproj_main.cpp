#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "latproj/reporting.hpp"

using namespace latproj;

int main(int argc, char** argv) {
  CLI::App app{"lattice projection measure laboratory"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path;

  // --config is resolved in a pre-pass below so that explicit flags override
  // values taken from the file.
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--n", cfg.n, "ambient dimension (2..4)");
    sub->add_option("--body", cfg.body,
                    "ball|ellipsoid|superellipsoid|polygon|square|density-body");
    sub->add_option("--axes", cfg.axes, "ellipsoid semi-axes")->delimiter(',');
    sub->add_option("--k", cfg.k, "superellipsoid exponent parameter");
    sub->add_option("--polygon-normals", cfg.polygon_normals, "facet normals as x,y pairs")
        ->delimiter(',');
    sub->add_option("--polygon-offsets", cfg.polygon_offsets, "facet offsets")->delimiter(',');
    sub->add_option("--density", cfg.density, "density id (default: radial^n of the body)");
    sub->add_option("--f", cfg.f, "test function id (one|zero|u1|u1sq|cosbump)");
    sub->add_option("--seed", cfg.seed, "ensemble / Monte Carlo seed");
    sub->add_option("--out", cfg.out, "output path base");
    sub->add_option("--workers", cfg.workers, "worker threads (speed only, never results)");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--rho-start", cfg.rho_start, "rho grid start");
    sub->add_option("--rho-stop", cfg.rho_stop, "rho grid stop");
    sub->add_option("--per-octave", cfg.per_octave, "grid points per octave");
    sub->add_option("--jitter-seed", cfg.jitter_seed, "grid jitter seed");
    sub->add_option("--method", cfg.method, "fit method: dyadic-envelope|all-points");
  };

  CLI::App* c_count = app.add_subcommand("count", "weighted lattice count at one rho");
  add_common(c_count);
  c_count->add_option("--rho", cfg.rho, "dilation rho");

  CLI::App* c_conv = app.add_subcommand("converge", "residual series over a rho grid");
  add_common(c_conv);
  add_grid(c_conv);
  c_conv->add_option("--angle", cfg.angle, "fixed 2-D lattice rotation angle");

  CLI::App* c_rot = app.add_subcommand("rotate-average", "Haar rotation ensemble of residuals");
  add_common(c_rot);
  add_grid(c_rot);
  c_rot->add_option("--rotations", cfg.rotations, "Haar ensemble size");

  CLI::App* c_fd = app.add_subcommand("fourier-decay", "transform decay sweep along directions");
  add_common(c_fd);
  c_fd->add_option("--transform", cfg.transform, "surface|shell");
  c_fd->add_option("--r-start", cfg.r_start, "frequency sweep start");
  c_fd->add_option("--r-stop", cfg.r_stop, "frequency sweep stop");
  c_fd->add_option("--r-step", cfg.r_step, "frequency sweep step");
  c_fd->add_option("--directions", cfg.directions, "number of sweep directions");

  CLI::App* c_vi = app.add_subcommand("verify-identity", "Monte Carlo vs quadrature body integral");
  add_common(c_vi);
  c_vi->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples");

  CLI::App* c_th = app.add_subcommand("theory", "print predicted exponents");
  add_common(c_th);

  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        cfg = load_config_file(argv[i + 1]);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
      }
      break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (c_count->parsed()) cfg.kind = ExperimentKind::Count;
  else if (c_conv->parsed()) cfg.kind = ExperimentKind::Converge;
  else if (c_rot->parsed()) cfg.kind = ExperimentKind::RotateAverage;
  else if (c_fd->parsed()) cfg.kind = ExperimentKind::FourierDecay;
  else if (c_vi->parsed()) cfg.kind = ExperimentKind::VerifyIdentity;
  else if (c_th->parsed()) cfg.kind = ExperimentKind::Theory;

  try {
    return run(cfg);
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "budget error: %s\n", e.what());
    return kExitBudgetError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
}
