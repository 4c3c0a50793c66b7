#include "degen/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace degen {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError("config: " + path + ": " + msg);
}

// Object wrapper that tracks key consumption so leftovers can be rejected.
class Obj {
 public:
  Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  const Json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  std::string sub(const std::string& k) const { return path_ + "." + k; }

  double num(const std::string& k, double dflt) {
    if (!has(k)) return dflt;
    const Json& v = raw(k);
    if (!v.is_number()) fail(sub(k), "expected a number");
    return v.get<double>();
  }

  double num_req(const std::string& k) {
    if (!has(k)) fail(path_, "missing required key '" + k + "'");
    return num(k, 0.0);
  }

  int integer(const std::string& k, int dflt) {
    if (!has(k)) return dflt;
    const Json& v = raw(k);
    if (!v.is_number_integer()) fail(sub(k), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& k, bool dflt) {
    if (!has(k)) return dflt;
    const Json& v = raw(k);
    if (!v.is_boolean()) fail(sub(k), "expected true or false");
    return v.get<bool>();
  }

  std::string str(const std::string& k, const std::string& dflt) {
    if (!has(k)) return dflt;
    const Json& v = raw(k);
    if (!v.is_string()) fail(sub(k), "expected a string");
    return v.get<std::string>();
  }

  std::string str_req(const std::string& k) {
    if (!has(k)) fail(path_, "missing required key '" + k + "'");
    return str(k, "");
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key()))
        fail(path_, "unknown key '" + item.key() + "'");
  }

  const std::string& path() const { return path_; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

dsl::Expression parse_law(const std::string& src, const std::string& path,
                          std::span<const std::string_view> allowed) {
  try {
    return dsl::parse(src, allowed);
  } catch (const DslError& e) {
    fail(path, std::string(e.what()) + " in \"" + src + "\"");
  }
}

constexpr std::string_view kVarsX[] = {"x", "m"};
constexpr std::string_view kVarsXY[] = {"x", "y", "m"};
constexpr std::string_view kVarsScale[] = {"x", "y"};
constexpr std::string_view kVarsEntries[] = {"m", "j", "x", "y"};
constexpr std::string_view kVarsMoving[] = {"t"};
constexpr std::string_view kVarsDiag[] = {"m"};
constexpr std::string_view kVarsState[] = {"x", "y", "m", "u", "ux", "uy"};

std::complex<double> parse_complex(const Json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(path, "expected a number or an [re, im] pair");
}

Json echo_complex(std::complex<double> z) {
  return Json::array({z.real(), z.imag()});
}

std::vector<double> parse_reals(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) fail(path, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> parse_ints(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(path, "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

OperatorSpec parse_operator(const Json& j, const std::string& path,
                            Json& echo) {
  Obj o(j, path);
  int forms = int(o.has("scalar")) + int(o.has("diagonal")) + int(o.has("dense"));
  if (forms != 1)
    fail(path, "give exactly one of 'scalar', 'diagonal', 'dense'");
  if (o.has("scalar")) {
    double c = o.num_req("scalar");
    int dim = o.integer("dim", 1);
    o.finish();
    echo = Json{{"scalar", c}, {"dim", dim}};
    return OperatorSpec::scalar(c, dim);
  }
  if (o.has("diagonal")) {
    std::vector<double> d = parse_reals(o.raw("diagonal"), o.sub("diagonal"));
    o.finish();
    echo = Json{{"diagonal", d}};
    return OperatorSpec::diagonal(std::move(d));
  }
  const Json& rows = o.raw("dense");
  if (!rows.is_array() || rows.empty())
    fail(o.sub("dense"), "expected an array of rows");
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    std::vector<double> row = parse_reals(rows[r], o.sub("dense"));
    if (static_cast<int>(row.size()) != n)
      fail(o.sub("dense"), "rows must form a square matrix");
    for (int c = 0; c < n; ++c) m(r, c) = row[c];
  }
  o.finish();
  echo = Json{{"dense", rows}};
  return OperatorSpec::dense(std::move(m));
}

ComponentNorm parse_norm(Obj& parent, int dim, Json& echo) {
  ComponentNorm nrm;
  if (parent.has("norm")) {
    Obj o(parent.raw("norm"), parent.sub("norm"));
    nrm.q = o.num("q", 2.0);
    if (o.has("weights"))
      nrm.d = parse_reals(o.raw("weights"), o.sub("weights"));
    o.finish();
  }
  try {
    nrm.validate(dim);
  } catch (const ValidationError& e) {
    fail(parent.sub("norm"), e.what());
  }
  echo = Json{{"q", nrm.q}};
  if (!nrm.d.empty()) echo["weights"] = nrm.d;
  return nrm;
}

BoundarySpec parse_bc(Obj& parent, const std::string& key, int dim,
                      Json& echo) {
  BoundarySpec bc;
  if (parent.has(key)) {
    Obj o(parent.raw(key), parent.sub(key));
    bc.order = o.integer("order", 0);
    if (o.has("delta")) {
      const Json& dv = o.raw("delta");
      if (!dv.is_array()) fail(o.sub("delta"), "expected an array");
      bc.delta.clear();
      for (const auto& e : dv) bc.delta.push_back(parse_complex(e, o.sub("delta")));
    } else if (bc.order == 1) {
      bc.delta = {1.0, 1.0};
    }
    if (o.has("data")) bc.data = parse_reals(o.raw("data"), o.sub("data"));
    bc.t_scaled = o.boolean("t_scaled", false);
    o.finish();
  }
  try {
    bc.validate(dim);
  } catch (const ValidationError& e) {
    fail(parent.sub(key), e.what());
  }
  Json deltas = Json::array();
  for (auto z : bc.delta) deltas.push_back(echo_complex(z));
  echo = Json{{"order", bc.order},
              {"delta", deltas},
              {"data", bc.data},
              {"t_scaled", bc.t_scaled}};
  return bc;
}

// depth of the truncated half-line under the decay rule, unless given
double resolve_depth(Obj& mesh, const std::string& key, double given,
                     const OperatorSpec& op, double re_floor) {
  if (given > 0.0) return given;
  if (mesh.has(key)) fail(mesh.sub(key), "expected a positive number");
  double delta = op.min_real_eig() + std::max(0.0, re_floor);
  if (!(delta > 0.0))
    fail(mesh.path(),
         "depth rule needs min eig(A) + max(0, Re lambda floor) > 0; give "
         "'" + key + "' explicitly");
  return default_depth(delta);
}

struct Options2D {
  bool allow_moving = false;
  bool require_moving = false;
  bool allow_operator = true;  // system bases get their operator elsewhere
  bool allow_rhs = true;
};

Problem1D parse_problem1d(const Json& j, const std::string& path,
                          std::optional<double> sweep_re_floor, Json& echo) {
  Obj o(j, path);
  Problem1D p;

  std::string kind = o.str("kind", "regularized");
  if (kind == "regularized")
    p.kind = Form1D::Regularized;
  else if (kind == "plain")
    p.kind = Form1D::Plain;
  else if (kind == "parametric")
    p.kind = Form1D::Parametric;
  else
    fail(o.sub("kind"), "expected regularized, plain or parametric");

  p.exponent = o.num("exponent", 1.5);
  p.p = o.num("p", 4.0);
  double basepoint = o.num("basepoint", 1.0);
  if (!(basepoint > 0.0)) fail(o.sub("basepoint"), "must be positive");

  Json op_echo = Json{{"scalar", 1.0}, {"dim", 1}};
  if (o.has("operator"))
    p.op = parse_operator(o.raw("operator"), o.sub("operator"), op_echo);

  Json norm_echo;
  p.enorm = parse_norm(o, p.op.dim(), norm_echo);

  p.lambda = o.has("lambda") ? parse_complex(o.raw("lambda"), o.sub("lambda"))
                             : std::complex<double>(1e3, 0.0);
  p.t = o.num("t", 1.0);

  Json bc_echo;
  p.bc = parse_bc(o, "bc", p.op.dim(), bc_echo);

  std::string rhs_src = o.str("rhs", "1");
  dsl::Expression rhs = parse_law(rhs_src, o.sub("rhs"), kVarsX);

  int n = 257;
  double depth = 0.0;
  double re_floor = sweep_re_floor.value_or(p.lambda.real());
  {
    Json mesh_j = o.has("mesh") ? o.raw("mesh") : Json::object();
    Obj mesh(mesh_j, o.sub("mesh"));
    n = mesh.integer("n", 257);
    depth = resolve_depth(mesh, "depth", mesh.num("depth", 0.0), p.op, re_floor);
    mesh.finish();
  }
  o.finish();

  p.grid = build_grid(TransformMap(p.exponent, basepoint), n, depth);
  p.rhs = field_from_x(p.grid, p.op.dim(), [&](double x, int e) {
    return rhs.evaluate({{"x", x}, {"m", double(e + 1)}});
  });
  p.validate();

  echo = Json{{"kind", kind},
              {"exponent", p.exponent},
              {"p", p.p},
              {"basepoint", basepoint},
              {"mesh", Json{{"n", n}, {"depth", depth}}},
              {"operator", op_echo},
              {"norm", norm_echo},
              {"lambda", echo_complex(p.lambda)},
              {"t", p.t},
              {"bc", bc_echo},
              {"rhs", rhs_src}};
  return p;
}

std::optional<CoeffBlock> parse_coeff(Obj& parent, const std::string& key,
                                      int dim, Json* echo) {
  if (!parent.has(key)) return std::nullopt;
  Obj o(parent.raw(key), parent.sub(key));
  CoeffBlock cb;
  cb.dim = dim;
  Json e = Json::object();
  if (o.has("entries")) {
    std::string src = o.str_req("entries");
    cb.entry_law = parse_law(src, o.sub("entries"), kVarsEntries);
    e["entries"] = src;
  } else {
    Json op_echo = Json{{"scalar", 1.0}, {"dim", 1}};
    if (o.has("operator"))
      cb.base = parse_operator(o.raw("operator"), o.sub("operator"), op_echo);
    else
      cb.base = OperatorSpec::scalar(1.0, dim);
    if (cb.base.dim() == 1 && dim > 1 &&
        cb.base.kind() == OperatorSpec::Kind::Scalar)
      cb.base = OperatorSpec::scalar(cb.base.scalar_value(), dim);
    op_echo["dim"] = cb.base.dim();
    e["operator"] = op_echo;
    if (o.has("scale")) {
      std::string src = o.str_req("scale");
      cb.scale = parse_law(src, o.sub("scale"), kVarsScale);
      e["scale"] = src;
    }
  }
  o.finish();
  try {
    cb.validate(dim);
  } catch (const ValidationError& err) {
    fail(parent.sub(key), err.what());
  }
  if (echo) *echo = e;
  return cb;
}

Problem2D parse_problem2d(const Json& j, const std::string& path,
                          const Options2D& opts,
                          std::optional<double> sweep_re_floor, Json& echo) {
  Obj o(j, path);
  Problem2D p;

  p.alpha = o.num("alpha", 1.4);
  p.beta = o.num("beta", p.alpha);
  p.p = o.num("p", 4.0);
  validate_exponent_window(p.alpha, p.p, "alpha");
  validate_exponent_window(p.beta, p.p, "beta");

  Json op_echo = Json{{"scalar", 1.0}, {"dim", 1}};
  if (o.has("operator")) {
    if (!opts.allow_operator)
      fail(o.sub("operator"), "not configurable here");
    p.op = parse_operator(o.raw("operator"), o.sub("operator"), op_echo);
  }

  Json norm_echo;
  p.enorm = parse_norm(o, p.op.dim(), norm_echo);

  p.lambda = o.has("lambda") ? parse_complex(o.raw("lambda"), o.sub("lambda"))
                             : std::complex<double>(1e3, 0.0);
  p.t1 = o.num("t1", 1.0);
  p.t2 = o.num("t2", 1.0);
  p.mu = o.num("mu", 0.25);
  double bound = o.num("coeff_bound_limit", 0.0);
  if (o.has("coeff_bound_limit")) {
    if (!(bound > 0.0)) fail(o.sub("coeff_bound_limit"), "must be positive");
    p.coeff_bound_limit = bound;
  }

  Json bcx_echo, bcy_echo;
  p.bcx = parse_bc(o, "bcx", p.op.dim(), bcx_echo);
  p.bcy = parse_bc(o, "bcy", p.op.dim(), bcy_echo);

  Json a1_echo, a2_echo;
  p.a1 = parse_coeff(o, "a1", p.op.dim(), &a1_echo);
  p.a2 = parse_coeff(o, "a2", p.op.dim(), &a2_echo);

  std::string rhs_src = o.str("rhs", "1");
  if (o.has("rhs") && !opts.allow_rhs)
    fail(o.sub("rhs"), "not configurable here");
  p.rhs_law = parse_law(rhs_src, o.sub("rhs"), kVarsXY);

  double basepoint_x = 1.0, basepoint_y = 1.0;
  Json moving_echo;
  if (o.has("moving")) {
    if (!opts.allow_moving)
      fail(o.sub("moving"), "only the moving subcommand takes moving domains");
    if (o.has("basepoint_x") || o.has("basepoint_y"))
      fail(o.sub("moving"), "moving problems take their endpoints from the laws");
    Obj m(o.raw("moving"), o.sub("moving"));
    MovingDomain md;
    std::string a_src = m.str_req("a");
    std::string b_src = m.str_req("b");
    md.a_of_s = parse_law(a_src, m.sub("a"), kVarsMoving);
    md.b_of_s = parse_law(b_src, m.sub("b"), kVarsMoving);
    md.s = m.num_req("s");
    m.finish();
    basepoint_x = md.a_of_s.evaluate({{"t", md.s}});
    basepoint_y = md.b_of_s.evaluate({{"t", md.s}});
    if (!(basepoint_x > 0.0) || !(basepoint_y > 0.0))
      fail(o.sub("moving"), "endpoint laws must be positive at s");
    p.moving = std::move(md);
    moving_echo = Json{{"a", a_src}, {"b", b_src}, {"s", p.moving->s}};
  } else {
    if (opts.require_moving)
      fail(path, "missing required key 'moving'");
    basepoint_x = o.num("basepoint_x", 1.0);
    basepoint_y = o.num("basepoint_y", 1.0);
    if (!(basepoint_x > 0.0) || !(basepoint_y > 0.0))
      fail(path, "basepoints must be positive");
  }

  int nx = 33, ny = 33;
  double depth_x = 0.0, depth_y = 0.0;
  double re_floor = sweep_re_floor.value_or(p.lambda.real());
  {
    Json mesh_j = o.has("mesh") ? o.raw("mesh") : Json::object();
    Obj mesh(mesh_j, o.sub("mesh"));
    nx = mesh.integer("nx", 33);
    ny = mesh.integer("ny", 33);
    depth_x =
        resolve_depth(mesh, "depth_x", mesh.num("depth_x", 0.0), p.op, re_floor);
    depth_y =
        resolve_depth(mesh, "depth_y", mesh.num("depth_y", 0.0), p.op, re_floor);
    mesh.finish();
  }
  o.finish();

  p.grids = build_grid2(TransformMap(p.alpha, basepoint_x), nx, depth_x,
                        TransformMap(p.beta, basepoint_y), ny, depth_y);
  if (!p.moving) {
    materialize_rhs(p);
    p.validate();
  }

  echo = Json{{"alpha", p.alpha}, {"beta", p.beta}, {"p", p.p}};
  if (opts.allow_operator) echo["operator"] = op_echo;
  echo["norm"] = norm_echo;
  echo["lambda"] = echo_complex(p.lambda);
  echo["t1"] = p.t1;
  echo["t2"] = p.t2;
  echo["mu"] = p.mu;
  if (o.has("coeff_bound_limit")) echo["coeff_bound_limit"] = bound;
  echo["bcx"] = bcx_echo;
  echo["bcy"] = bcy_echo;
  if (p.a1) echo["a1"] = a1_echo;
  if (p.a2) echo["a2"] = a2_echo;
  if (opts.allow_rhs) echo["rhs"] = rhs_src;
  if (p.moving) {
    echo["moving"] = moving_echo;
  } else {
    echo["basepoint_x"] = basepoint_x;
    echo["basepoint_y"] = basepoint_y;
  }
  echo["mesh"] = Json{{"nx", nx},
                      {"ny", ny},
                      {"depth_x", depth_x},
                      {"depth_y", depth_y}};
  return p;
}

int problem_dims(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  bool d1 = j.contains("exponent"), d2 = j.contains("alpha");
  if (d1 == d2)
    fail(path,
         "give either a one-dimensional grading 'exponent' or a "
         "two-dimensional grading 'alpha'");
  return d1 ? 1 : 2;
}

SectorSpec parse_sector(const Json& j, const std::string& path, Json& echo) {
  Obj o(j, path);
  SectorSpec s;
  s.phi = o.num("phi", 1.0471975511965976);  // pi/3
  if (!o.has("moduli")) fail(path, "missing required key 'moduli'");
  s.moduli = parse_reals(o.raw("moduli"), o.sub("moduli"));
  if (o.has("args"))
    s.args = parse_reals(o.raw("args"), o.sub("args"));
  else
    s.args = {0.0};
  o.finish();
  try {
    s.validate();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  echo = Json{{"phi", s.phi}, {"moduli", s.moduli}, {"args", s.args}};
  return s;
}

NonlinearConfig parse_nonlinear(const Json& j, const std::string& path,
                                Json& echo) {
  Obj o(j, path);
  NonlinearConfig nc;
  if (!o.has("base")) fail(path, "missing required key 'base'");
  Options2D opts;
  opts.allow_rhs = false;  // forcing comes from the state law
  Json base_echo;
  nc.spec.base = parse_problem2d(o.raw("base"), o.sub("base"), opts,
                                 std::nullopt, base_echo);

  std::string force_src = o.str_req("force");
  nc.spec.force =
      law_from_expression(parse_law(force_src, o.sub("force"), kVarsState));
  std::string g_src = o.str("g", "");
  if (!g_src.empty())
    nc.spec.g = law_from_expression(parse_law(g_src, o.sub("g"), kVarsState));

  nc.spec.tol = o.num("tol", 1e-12);
  nc.spec.max_iter = o.integer("max_iter", 30);
  if (o.has("ball_radius")) {
    nc.spec.ball_radius = o.num("ball_radius", 0.0);
    if (!(nc.spec.ball_radius > 0.0))
      fail(o.sub("ball_radius"), "must be positive");
  }
  nc.spec.shrink_retry = o.boolean("shrink_retry", false);
  nc.spec.max_shrink = o.integer("max_shrink", 4);

  Json probe_echo = Json{{"samples", 200}, {"radius", 1.0}};
  if (o.has("probe")) {
    Obj pr(o.raw("probe"), o.sub("probe"));
    nc.probe_samples = pr.integer("samples", 200);
    nc.probe_radius = pr.num("radius", 1.0);
    pr.finish();
    if (nc.probe_samples < 1) fail(o.sub("probe"), "samples must be >= 1");
    if (!(nc.probe_radius > 0.0)) fail(o.sub("probe"), "radius must be positive");
    probe_echo = Json{{"samples", nc.probe_samples}, {"radius", nc.probe_radius}};
  }
  o.finish();

  echo = Json{{"base", base_echo}, {"force", force_src}};
  if (!g_src.empty()) echo["g"] = g_src;
  echo["tol"] = nc.spec.tol;
  echo["max_iter"] = nc.spec.max_iter;
  if (std::isfinite(nc.spec.ball_radius))
    echo["ball_radius"] = nc.spec.ball_radius;
  echo["shrink_retry"] = nc.spec.shrink_retry;
  echo["max_shrink"] = nc.spec.max_shrink;
  echo["probe"] = probe_echo;
  return nc;
}

SystemConfig parse_system(const Json& j, const std::string& path, Json& echo) {
  Obj o(j, path);
  SystemConfig sc;
  if (!o.has("base")) fail(path, "missing required key 'base'");
  Options2D opts;
  opts.allow_operator = false;  // the diagonal law provides it
  opts.allow_rhs = false;       // the component rhs law provides it
  Json base_echo;
  sc.spec.base = parse_problem2d(o.raw("base"), o.sub("base"), opts,
                                 std::nullopt, base_echo);

  std::string d_src = o.str_req("d");
  sc.spec.d_law = parse_law(d_src, o.sub("d"), kVarsDiag);
  std::string a_src = o.str("a", "");
  if (!a_src.empty())
    sc.spec.a_law = parse_law(a_src, o.sub("a"), kVarsEntries);
  std::string b_src = o.str("b", "");
  if (!b_src.empty())
    sc.spec.b_law = parse_law(b_src, o.sub("b"), kVarsEntries);

  sc.spec.mu = o.num("mu", 0.25);
  sc.spec.n_comp = o.integer("n_comp", 8);
  sc.spec.q = o.num("q", 2.0);
  std::string rhs_src = o.str_req("rhs");
  sc.spec.rhs_law = parse_law(rhs_src, o.sub("rhs"), kVarsXY);
  sc.spec.rhs_support = o.integer("rhs_support", 0);
  if (o.has("n_list")) sc.n_list = parse_ints(o.raw("n_list"), o.sub("n_list"));
  o.finish();

  try {
    sc.spec.validate();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }

  echo = Json{{"base", base_echo}, {"d", d_src}};
  if (!a_src.empty()) echo["a"] = a_src;
  if (!b_src.empty()) echo["b"] = b_src;
  echo["mu"] = sc.spec.mu;
  echo["n_comp"] = sc.spec.n_comp;
  echo["q"] = sc.spec.q;
  echo["rhs"] = rhs_src;
  echo["rhs_support"] = sc.spec.rhs_support;
  if (!sc.n_list.empty()) echo["n_list"] = sc.n_list;
  return sc;
}

const std::set<std::string> kSubcommands = {
    "solve1d", "solve2d", "sweep-lambda", "sweep-t",
    "moving",  "nonlinear", "system",      "verify-all"};

}  // namespace

RunConfig parse_config(const Json& doc, const std::string& subcommand) {
  if (!kSubcommands.count(subcommand))
    throw ValidationError("unknown subcommand '" + subcommand + "'");
  Obj o(doc, "config");
  RunConfig cfg;
  cfg.subcommand = subcommand;

  std::string named = o.str("subcommand", subcommand);
  if (named != subcommand)
    fail("config.subcommand", "document says '" + named +
                                  "' but the command line says '" +
                                  subcommand + "'");

  int seed = o.integer("seed", 7);
  if (seed < 0) fail("config.seed", "must be nonnegative");
  cfg.seed = static_cast<unsigned>(seed);
  cfg.out_dir = o.str("out", ".");

  cfg.echo = Json{{"subcommand", subcommand},
                  {"seed", seed},
                  {"out", cfg.out_dir}};

  const bool wants_problem = subcommand != "verify-all";
  if (wants_problem && !o.has("problem"))
    fail("config", "missing required key 'problem'");

  if (subcommand == "solve1d") {
    Json pe;
    if (problem_dims(o.raw("problem"), "config.problem") != 1)
      fail("config.problem", "solve1d needs a one-dimensional problem");
    cfg.p1 = parse_problem1d(o.raw("problem"), "config.problem", std::nullopt, pe);
    cfg.echo["problem"] = pe;
  } else if (subcommand == "solve2d") {
    if (problem_dims(o.raw("problem"), "config.problem") != 2)
      fail("config.problem", "solve2d needs a two-dimensional problem");
    cfg.route = o.str("route", "direct");
    if (cfg.route != "direct" && cfg.route != "reduced")
      fail("config.route", "expected direct or reduced");
    Json pe;
    cfg.p2 = parse_problem2d(o.raw("problem"), "config.problem", Options2D{},
                             std::nullopt, pe);
    cfg.echo["route"] = cfg.route;
    cfg.echo["problem"] = pe;
  } else if (subcommand == "sweep-lambda") {
    if (!o.has("sector")) fail("config", "missing required key 'sector'");
    Json se;
    cfg.sector = parse_sector(o.raw("sector"), "config.sector", se);
    double re_floor = 0.0;
    bool first = true;
    for (auto z : cfg.sector->samples()) {
      re_floor = first ? z.real() : std::min(re_floor, z.real());
      first = false;
    }
    Json pe;
    if (problem_dims(o.raw("problem"), "config.problem") == 1)
      cfg.p1 = parse_problem1d(o.raw("problem"), "config.problem", re_floor, pe);
    else
      cfg.p2 = parse_problem2d(o.raw("problem"), "config.problem", Options2D{},
                               re_floor, pe);
    cfg.echo["problem"] = pe;
    cfg.echo["sector"] = se;
  } else if (subcommand == "sweep-t") {
    if (!o.has("t_values")) fail("config", "missing required key 't_values'");
    const Json& tv = o.raw("t_values");
    if (!tv.is_array() || tv.empty())
      fail("config.t_values", "expected a nonempty array");
    Json pe;
    if (problem_dims(o.raw("problem"), "config.problem") == 1) {
      cfg.p1 = parse_problem1d(o.raw("problem"), "config.problem",
                               std::nullopt, pe);
      cfg.t_values_1d = parse_reals(tv, "config.t_values");
      cfg.echo["t_values"] = cfg.t_values_1d;
    } else {
      cfg.p2 = parse_problem2d(o.raw("problem"), "config.problem", Options2D{},
                               std::nullopt, pe);
      Json te = Json::array();
      for (const auto& e : tv) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
            !e[1].is_number())
          fail("config.t_values", "expected [t1, t2] pairs");
        cfg.t_values_2d.emplace_back(e[0].get<double>(), e[1].get<double>());
        te.push_back(Json::array({e[0].get<double>(), e[1].get<double>()}));
      }
      cfg.echo["t_values"] = te;
    }
    cfg.echo["problem"] = pe;
  } else if (subcommand == "moving") {
    if (problem_dims(o.raw("problem"), "config.problem") != 2)
      fail("config.problem", "moving needs a two-dimensional problem");
    Options2D opts;
    opts.allow_moving = true;
    opts.require_moving = true;
    Json pe;
    cfg.p2 = parse_problem2d(o.raw("problem"), "config.problem", opts,
                             std::nullopt, pe);
    cfg.echo["problem"] = pe;
  } else if (subcommand == "nonlinear") {
    Json pe;
    cfg.nonlinear = parse_nonlinear(o.raw("problem"), "config.problem", pe);
    cfg.echo["problem"] = pe;
  } else if (subcommand == "system") {
    Json pe;
    cfg.system = parse_system(o.raw("problem"), "config.problem", pe);
    cfg.echo["problem"] = pe;
  }
  o.finish();
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " +
                          e.what());
  }
  return parse_config(doc, subcommand);
}

}  // namespace degen
