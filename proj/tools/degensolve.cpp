#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "degen/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "degensolve - degenerate elliptic solver and estimate checker.\n"
      "Exit codes: 0 ok, 2 invalid config, 3 solver failure,\n"
      "4 failed verification assertion, 5 sweep with per-point failures."};
  app.require_subcommand(1);

  struct Common {
    std::string config;
    std::string out;
    int threads = 1;
  };

  auto add = [&](const std::string& name, const std::string& desc) {
    auto* sub = app.add_subcommand(name, desc);
    auto opts = std::make_shared<Common>();
    sub->add_option("--config", opts->config, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts->out,
                    "output directory (overrides the config's \"out\")");
    sub->add_option("--threads", opts->threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    sub->callback([name, opts]() {
      degen::RunConfig cfg = degen::load_config(opts->config, name);
      if (!opts->out.empty()) {
        cfg.out_dir = opts->out;
        cfg.echo["out"] = opts->out;
      }
      degen::RunOutcome res = degen::execute(cfg, opts->threads);
      std::exit(res.exit_code);
    });
  };

  add("solve1d", "solve a two-point problem on the half line");
  add("solve2d", "solve a rectangle problem (direct or reduced route)");
  add("sweep-lambda", "coercivity ratios over a spectral-parameter sector");
  add("sweep-t", "coercivity ratios over small-parameter values");
  add("moving", "solve a time-slice problem by pullback to the unit domain");
  add("nonlinear", "contraction iteration for a state-dependent source");
  add("system", "truncated coupled system: decay check, solve, refinement");
  add("verify-all", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const degen::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const degen::DslError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
