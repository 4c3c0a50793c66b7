#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "degen/nonlinear.hpp"
#include "degen/sysinf.hpp"
#include "degen/verify.hpp"
#include "json.hpp"

namespace degen {

using Json = nlohmann::ordered_json;

struct NonlinearConfig {
  NonlinearSpec spec;
  int probe_samples = 200;
  double probe_radius = 1.0;
};

struct SystemConfig {
  SystemSpec spec;
  std::vector<int> n_list;  // nonempty enables the truncation study
};

// A fully resolved run: every default filled in, grids built, laws parsed.
// `echo` is the resolved document itself; loading it again reproduces the
// run exactly.
struct RunConfig {
  std::string subcommand;
  unsigned seed = 7;
  std::string out_dir = ".";
  std::optional<Problem1D> p1;
  std::optional<Problem2D> p2;
  std::optional<SectorSpec> sector;
  std::vector<double> t_values_1d;
  std::vector<std::pair<double, double>> t_values_2d;
  std::optional<NonlinearConfig> nonlinear;
  std::optional<SystemConfig> system;
  std::string route = "direct";  // solve2d: direct | reduced
  Json echo;
};

// Parse and resolve a config document.  `subcommand` comes from the CLI; a
// "subcommand" key in the document must agree with it.  Unknown keys are
// rejected with their path.
RunConfig parse_config(const Json& doc, const std::string& subcommand);

RunConfig load_config(const std::string& path, const std::string& subcommand);

}  // namespace degen
