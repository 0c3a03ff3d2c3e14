// SPDX-License-Identifier: Apache-2.0
// bisph command-line front end. Every computation goes through the C API.
#include <bisph/bisph.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kInvalid = 1, kResolution = 2, kIo = 3 };

struct Failure {
  bisph_status status;
  std::string message;
};

int exit_code(bisph_status s) {
  switch (s) {
  case BISPH_OK: return kOk;
  case BISPH_RESOLUTION: return kResolution;
  case BISPH_IO: return kIo;
  default: return kInvalid;
  }
}

void check(bisph_status s) {
  if (s != BISPH_OK) throw Failure{s, bisph_last_error()};
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Rounds every float to 12 significant digits.
void round_floats(json& j) {
  if (j.is_number_float()) {
    double x = j.get<double>();
    if (std::isfinite(x)) j = std::stod(fmt12(x));
    return;
  }
  if (j.is_structured())
    for (auto& v : j) round_floats(v);
}

json take_json(char* text) {
  json j = json::parse(text);
  bisph_string_free(text);
  return j;
}

/// Typed parameter values per subcommand, for the run summary.
std::map<const CLI::App*, std::vector<std::pair<std::string, std::function<json()>>>> registry;

template <class T> std::string default_text(const T& v) {
  if constexpr (std::is_floating_point_v<T>) return fmt12(v);
  else if constexpr (std::is_same_v<T, std::string>) return v;
  else if constexpr (std::is_arithmetic_v<T>) return std::to_string(v);
  else {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : ",") + default_text(x);
    return out;
  }
}

template <class T>
CLI::Option* opt(CLI::App* app, const std::string& flag, T& var, const std::string& help) {
  CLI::Option* o = app->add_option(flag, var, help);
  if constexpr (!std::is_same_v<T, std::string>) {
    if constexpr (requires { var.begin(); }) o->delimiter(',');
  }
  std::string d = default_text(var);
  if (!d.empty()) o->default_str(d);
  registry[app].emplace_back(o->get_single_name(), [&var] { return json(var); });
  return o;
}

struct GridHandle {
  bisph_grid* p = nullptr;
  GridHandle() = default;
  GridHandle(const GridHandle&) = delete;
  GridHandle& operator=(const GridHandle&) = delete;
  ~GridHandle() { bisph_grid_free(p); }
};

struct FamilyHandle {
  bisph_family* p = nullptr;
  ~FamilyHandle() { bisph_family_free(p); }
};

struct GridArgs {
  int n = 2;
  int cells = 256;
  double half_width = 4.0;

  void add(CLI::App* app) {
    opt(app, "--n", n, "dimension of the ambient space (1, 2 or 3)");
    opt(app, "--grid", cells, "grid cells per axis (count)");
    opt(app, "--half-width", half_width,
        "box is [-w, w]^n (length units)");
  }

  bisph_geometry geometry() const {
    bisph_geometry g;
    check(bisph_geometry_centered(n, half_width, cells, &g));
    return g;
  }
};

/// "file:path" reads a raw grid, anything else is a function spec.
void load(const std::string& spec, const bisph_geometry& g, GridHandle& out) {
  if (spec.rfind("file:", 0) == 0)
    check(bisph_grid_read_raw(spec.substr(5).c_str(), &out.p));
  else
    check(bisph_grid_sample(spec.c_str(), &g, &out.p));
}

struct Context {
  fs::path out_dir = ".";
  json outputs = json::object();
  json pass = json::object();
  json result = json::object();
  std::string line;
  int exit = 0;

  std::string path(const std::string& name) {
    fs::create_directories(out_dir);
    fs::path p = out_dir / name;
    return p.string();
  }
};

struct Command {
  CLI::App* app = nullptr;
  std::function<void(Context&)> run;
};

// avg ------------------------------------------------------------------------

struct AvgArgs {
  GridArgs grid;
  std::string fn = "ball:rho=1";
  double radius = 1.0;
  int nodes = 512;
  double phase = 0.5;
  std::vector<double> at;
  std::string csv = "avg.csv";
};

void run_avg(const AvgArgs& a, Context& ctx) {
  auto g = a.grid.geometry();
  GridHandle f, out;
  load(a.fn, g, f);
  check(bisph_average(f.p, a.radius, a.nodes, a.phase, &out.p));
  const std::string csv = ctx.path(a.csv);
  check(bisph_grid_write_csv(out.p, csv.c_str()));
  ctx.outputs["csv"] = csv;
  ctx.line = "avg: wrote " + csv;
  if (!a.at.empty()) {
    if (static_cast<int>(a.at.size()) != a.grid.n)
      throw Failure{BISPH_INVALID_ARGUMENT, "--at needs one coordinate per dimension"};
    double v = 0.0;
    check(bisph_average_at(f.p, a.radius, a.nodes, a.phase, a.at.data(), &v));
    ctx.result["value_at"] = v;
    ctx.line += "; A_r f at point = " + fmt12(v);
  }
}

// maximal --------------------------------------------------------------------

struct MaximalArgs {
  GridArgs grid;
  std::string op = "lac";
  std::string f1 = "ball:rho=1";
  std::string f2;
  int nodes = 512;
  int spo = 16;
  double phase = 0.5;
  int depth = -1;
  std::string csv = "maximal.csv";
};

void run_maximal(const MaximalArgs& a, Context& ctx) {
  static const std::map<std::string, bisph_operator> ops = {
      {"lac", BISPH_OP_LACUNARY}, {"full", BISPH_OP_FULL}, {"local", BISPH_OP_LOCAL},
      {"sph", BISPH_OP_SPH},      {"hl", BISPH_OP_HL}};
  auto it = ops.find(a.op);
  if (it == ops.end())
    throw Failure{BISPH_PARSE, "unknown operator '" + a.op + "' (lac, full, local, sph, hl)"};
  auto g = a.grid.geometry();
  GridHandle f1, f2, out;
  load(a.f1, g, f1);
  if (!a.f2.empty()) load(a.f2, g, f2);
  bisph_maximal_options o{a.nodes, a.spo, a.phase, a.depth};
  check(bisph_maximal(it->second, f1.p, f2.p, &o, &out.p));
  const std::string csv = ctx.path(a.csv);
  check(bisph_grid_write_csv(out.p, csv.c_str()));
  const double* v = bisph_grid_values(out.p);
  double peak = 0.0;
  for (std::size_t i = 0; i < bisph_grid_size(out.p); ++i) peak = std::max(peak, v[i]);
  ctx.outputs["csv"] = csv;
  ctx.result["max_value"] = peak;
  ctx.line = "maximal " + a.op + ": max " + fmt12(peak) + ", wrote " + csv;
}

// sparse ---------------------------------------------------------------------

struct SparseArgs {
  GridArgs grid;
  std::string mode = "family";
  std::string f1 = "ball:rho=1";
  std::string f2 = "ball:rho=2";
  std::string h = "annulus:delta=0.25,radius=1";
  double r1 = 2.0, r2 = 2.0, t = 2.0;
  double eta = 0.5;
  int depth = -1;
  double cz_r = 1.0;
  double cz_c0 = 2.0;
  std::string csv = "family.csv";
};

void run_sparse(const SparseArgs& a, Context& ctx) {
  auto g = a.grid.geometry();
  if (a.mode == "cz") {
    GridHandle f, good, bad;
    load(a.f1, g, f);
    double threshold = 0.0;
    check(bisph_cz(f.p, a.cz_r, a.cz_c0, a.depth, &good.p, &bad.p, &threshold));
    const std::string gp = ctx.path("good.csv"), bp = ctx.path("bad.csv");
    check(bisph_grid_write_csv(good.p, gp.c_str()));
    check(bisph_grid_write_csv(bad.p, bp.c_str()));
    ctx.outputs["good"] = gp;
    ctx.outputs["bad"] = bp;
    ctx.result["threshold"] = threshold;
    double peak = 0.0;
    const double* v = bisph_grid_values(good.p);
    for (std::size_t i = 0; i < bisph_grid_size(good.p); ++i) peak = std::max(peak, v[i]);
    ctx.result["good_max"] = peak;
    ctx.pass["good_bounded"] = peak <= std::pow(2.0, a.grid.n / a.cz_r) * threshold * (1 + 1e-12);
    ctx.line = "sparse cz: threshold " + fmt12(threshold) + ", max of good part " + fmt12(peak);
    return;
  }
  if (a.mode != "family") throw Failure{BISPH_PARSE, "unknown mode '" + a.mode + "' (family, cz)"};
  GridHandle f1, f2, h;
  load(a.f1, g, f1);
  load(a.f2, g, f2);
  load(a.h, g, h);
  FamilyHandle fam;
  check(bisph_sparse_build(f1.p, f2.p, h.p, a.r1, a.r2, a.t, a.depth, &fam.p));
  int ok = 0;
  check(bisph_family_verify(fam.p, a.eta, &ok));
  double form = 0.0;
  check(bisph_sparse_form(fam.p, f1.p, f2.p, h.p, a.r1, a.r2, a.t, &form));
  const std::string csv = ctx.path(a.csv);
  check(bisph_family_write_csv(fam.p, csv.c_str()));
  ctx.outputs["csv"] = csv;
  ctx.result["cubes"] = bisph_family_size(fam.p);
  ctx.result["sparse_form"] = form;
  ctx.pass["sparse"] = ok == 1;
  ctx.line = "sparse: " + std::to_string(bisph_family_size(fam.p)) + " cubes, form " + fmt12(form) +
             (ok ? ", sparse" : ", NOT sparse");
}

// weights --------------------------------------------------------------------

struct WeightsArgs {
  std::string cls = "ap";
  int n = 2;
  double b1 = 1.0, b2 = 0.0;
  double p1 = 2.0, p2 = 2.0;
  std::vector<double> r;
  double s = 2.0;
  std::string family = "origin";
  int levels = 6;
  std::string csv = "weights.csv";
};

void run_weights(const WeightsArgs& a, Context& ctx) {
  bisph_weights_request q{};
  q.weight_class = a.cls.c_str();
  q.n = a.n;
  q.b1 = a.b1;
  q.b2 = a.b2;
  q.p1 = a.p1;
  q.p2 = a.p2;
  if (!a.r.empty()) {
    if (a.r.size() != 3) throw Failure{BISPH_INVALID_ARGUMENT, "--r needs three values r1,r2,r3"};
    for (int i = 0; i < 3; ++i) q.r[i] = a.r[static_cast<std::size_t>(i)];
    q.has_r = 1;
  }
  q.s = a.s;
  q.family = a.family.c_str();
  q.levels = a.levels;
  const std::string csv = ctx.path(a.csv);
  char* text = nullptr;
  check(bisph_weights(&q, csv.c_str(), &text));
  ctx.result = take_json(text);
  ctx.outputs["csv"] = csv;
  ctx.pass["stable"] = ctx.result["scan"]["stable"];
  ctx.line = "weights " + a.cls + ": characteristic " +
             fmt12(ctx.result["scan"]["value"].get<double>()) + ", growth " +
             fmt12(ctx.result["scan"]["growth"].get<double>()) +
             (ctx.result["scan"]["stable"].get<bool>() ? ", stable" : ", not stable");
}

// exponents ------------------------------------------------------------------

struct ExponentArgs {
  std::string kind = "lac";
  int n = 2;
  double r1 = 1.0 / 0.45, s1 = 1.0 / 0.65, r2 = 1.0 / 0.45, s2 = 1.0 / 0.65;
};

void run_exponents(const ExponentArgs& a, Context& ctx) {
  char* text = nullptr;
  check(bisph_exponents_report(a.kind.c_str(), a.n, a.r1, a.s1, a.r2, a.s2, &text));
  ctx.result = take_json(text);
  ctx.pass = ctx.result["pass"];
  std::ostringstream os;
  os << "exponents " << a.kind << " n=" << a.n << ": t = " << fmt12(ctx.result["t"].get<double>())
     << ", interior = " << (ctx.pass["interior"].get<bool>() ? "yes" : "no");
  for (const auto& c : ctx.result["necessary"])
    os << "; " << c["name"].get<std::string>() << ' ' << fmt12(c["lhs"].get<double>())
       << (c["strict"].get<bool>() ? " < " : " <= ") << fmt12(c["bound"].get<double>())
       << (c["holds"].get<bool>() ? " ok" : " FAILS");
  ctx.line = os.str();
  if (!ctx.pass["interior"].get<bool>()) ctx.exit = kInvalid;
}

// knapp ----------------------------------------------------------------------

struct KnappArgs {
  std::string which = "lac_annulus_ball";
  int n = 2;
  std::vector<double> deltas = {0.125, 0.0625, 0.03125, 0.015625};
  double r1 = 1.0 / 0.45, s1 = 1.0 / 0.65, r2 = 1.0 / 0.45, s2 = 1.0 / 0.65;
  int cells_per_delta = 4;
  int cells = 0;
  double c = 0.25, C = 1.0;
  int nodes = 0, spo = 0;
  std::string csv;
};

void run_knapp(const KnappArgs& a, Context& ctx) {
  bisph_knapp_options o{a.cells_per_delta, a.cells, a.c, a.C, a.nodes, a.spo};
  const std::string csv = ctx.path(a.csv.empty() ? a.which + ".csv" : a.csv);
  char* text = nullptr;
  check(bisph_knapp(a.which.c_str(), a.n, a.deltas.data(), a.deltas.size(), a.r1, a.s1, a.r2, a.s2,
                    &o, csv.c_str(), &text));
  ctx.result = take_json(text);
  ctx.outputs["csv"] = csv;
  ctx.pass = ctx.result["pass"];
  ctx.line = "knapp " + a.which + ": pairing slope " +
             fmt12(ctx.result["pairing_fit"]["slope"].get<double>()) + " (expected " +
             fmt12(ctx.result["expected_pairing_slope"].get<double>()) + "), sparse slope " +
             fmt12(ctx.result["sparse_fit"]["slope"].get<double>()) + " (expected " +
             fmt12(ctx.result["expected_sparse_slope"].get<double>()) + ")";
}

// radial ---------------------------------------------------------------------

struct RadialArgs {
  std::string op = "lac";
  int n = 2;
  double alpha = -0.9, beta = -0.9;
  std::vector<double> scales = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  int cells = 256, nodes = 512, spo = 8;
  double phase = 0.5;
  std::string profile;
  std::string csv = "radial.csv";
};

void run_radial(const RadialArgs& a, Context& ctx) {
  bisph_radial_options o{a.op.c_str(), a.cells, a.nodes, a.phase, a.spo,
                         a.profile.empty() ? nullptr : a.profile.c_str()};
  const std::string csv = ctx.path(a.csv);
  char* text = nullptr;
  check(bisph_radial(a.n, a.alpha, a.beta, a.scales.data(), a.scales.size(), &o, csv.c_str(), &text));
  ctx.result = take_json(text);
  ctx.outputs["csv"] = csv;
  ctx.pass = ctx.result["pass"];
  ctx.line = "radial " + a.op + ": trend slope " + fmt12(ctx.result["trend"]["slope"].get<double>()) +
             (ctx.result["in_range"].get<bool>() ? " (in range)" : " (outside the theorem range)");
}

// report ---------------------------------------------------------------------

struct ReportArgs {
  std::string what = "comparison";
  int n = 2;
  double delta = 2.0, epsilon = 1.0;
  std::vector<double> alphas = {0.5, 1.0, 1.5};
};

void run_report(const ReportArgs& a, Context& ctx) {
  char* text = nullptr;
  if (a.what == "comparison") {
    check(bisph_report(a.n, a.delta, a.epsilon, a.alphas.data(), a.alphas.size(), &text));
    ctx.result = take_json(text);
    ctx.pass = ctx.result["pass"];
    ctx.line = "report: theorem range " + ctx.result["theorem_range"]["text"].get<std::string>() +
               ", product hull " + ctx.result["product_hull"]["text"].get<std::string>() +
               ", difference " + ctx.result["difference"]["text"].get<std::string>();
  } else if (a.what == "probe" || a.what == "control") {
    check(bisph_probe(a.n, a.what == "control", &text));
    ctx.result = take_json(text);
    ctx.pass = ctx.result["pass"];
    std::string vals;
    for (const auto& v : ctx.result["values"]) vals += (vals.empty() ? "" : ", ") + fmt12(v.get<double>());
    ctx.line = "report " + a.what + ": values " + vals;
  } else {
    throw Failure{BISPH_PARSE, "unknown report '" + a.what + "' (comparison, probe, control)"};
  }
}

json option_values(const CLI::App* app) {
  json j = json::object();
  auto it = registry.find(app);
  if (it != registry.end())
    for (const auto& [name, get] : it->second) j[name] = get();
  return j;
}

std::string valid_keys(const CLI::App& app, const std::string& section) {
  std::string out;
  auto list = [&](const CLI::App* a, const std::string& prefix) {
    for (const CLI::Option* opt : a->get_options()) {
      std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "config") continue;
      out += (out.empty() ? "" : ", ") + prefix + name;
    }
  };
  list(&app, "");
  for (const CLI::App* sub : app.get_subcommands({}))
    if (section.empty() || sub->get_name() == section) list(sub, "[" + sub->get_name() + "] ");
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilinear spherical maximal operator laboratory"};
  app.set_config("--config", "", "key = value file with [subcommand] sections; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  std::string out_dir = ".";
  std::string summary;
  opt(&app, "--threads", threads, "worker threads (count; 0 = available cores)");
  opt(&app, "--out", out_dir, "output directory (path)");
  opt(&app, "--summary", summary, "run summary JSON (path; default <out>/<command>_summary.json)");

  std::vector<Command> commands;

  AvgArgs avg;
  {
    auto* s = app.add_subcommand("avg", "spherical average A_r f on a grid");
    avg.grid.add(s);
    opt(s, "--fn", avg.fn, "input function spec, or file:<raw grid>");
    opt(s, "--radius", avg.radius, "sphere radius (length units)");
    opt(s, "--nodes", avg.nodes, "quadrature resolution (nodes on S^1, rings on S^2)");
    opt(s, "--phase", avg.phase, "node offset (fraction of a node spacing)");
    opt(s, "--at", avg.at, "also evaluate at this point (length units, comma separated)");
    opt(s, "--csv", avg.csv, "output CSV name (file in --out)");
    commands.push_back({s, [&](Context& c) { run_avg(avg, c); }});
  }

  MaximalArgs mx;
  {
    auto* s = app.add_subcommand("maximal", "maximal operators: lac, full, local, sph, hl");
    mx.grid.add(s);
    opt(s, "--op", mx.op, "operator (lac, full, local, sph, hl)");
    opt(s, "--f1", mx.f1, "first input (function spec)");
    opt(s, "--f2", mx.f2, "second input (function spec; empty for the linear operator)");
    opt(s, "--nodes", mx.nodes, "quadrature resolution (count)");
    opt(s, "--spo", mx.spo, "radii per octave for full and local (count)");
    opt(s, "--phase", mx.phase, "node offset (fraction of a node spacing)");
    opt(s, "--depth", mx.depth, "dyadic depth for hl and local (levels; -1 = finest)");
    opt(s, "--csv", mx.csv, "output CSV name (file in --out)");
    commands.push_back({s, [&](Context& c) { run_maximal(mx, c); }});
  }

  SparseArgs sp;
  {
    auto* s = app.add_subcommand("sparse", "stopping-time sparse family or CZ decomposition");
    sp.grid.add(s);
    opt(s, "--mode", sp.mode, "family or cz");
    opt(s, "--f1", sp.f1, "first input (function spec); the CZ input");
    opt(s, "--f2", sp.f2, "second input (function spec)");
    opt(s, "--dual", sp.h, "dual function h (function spec)");
    opt(s, "--r1", sp.r1, "local exponent of f1 (dimensionless)");
    opt(s, "--r2", sp.r2, "local exponent of f2 (dimensionless)");
    opt(s, "--t", sp.t, "local exponent of h (dimensionless)");
    opt(s, "--eta", sp.eta, "sparseness fraction to verify (dimensionless)");
    opt(s, "--depth", sp.depth, "lattice depth (levels; -1 = finest)");
    opt(s, "--cz-r", sp.cz_r, "CZ average exponent (dimensionless)");
    opt(s, "--cz-c0", sp.cz_c0, "CZ stopping constant (dimensionless)");
    opt(s, "--csv", sp.csv, "family CSV name (file in --out)");
    commands.push_back({s, [&](Context& c) { run_sparse(sp, c); }});
  }

  WeightsArgs wt;
  {
    auto* s = app.add_subcommand("weights", "weight characteristics of power weights |x|^b");
    opt(s, "--class", wt.cls, "ap, rh, lerner, lmo, nieraeth, relation");
    opt(s, "--n", wt.n, "dimension (1, 2 or 3)");
    opt(s, "--b1", wt.b1, "exponent of the first weight (dimensionless)");
    opt(s, "--b2", wt.b2, "exponent of the second weight (dimensionless)");
    opt(s, "--p1", wt.p1, "first exponent; p for ap, s for rh (dimensionless)");
    opt(s, "--p2", wt.p2, "second exponent (dimensionless)");
    opt(s, "--r", wt.r, "auxiliary exponents r1,r2,r3 (dimensionless)");
    opt(s, "--s", wt.s, "source exponent of the Nieraeth class (dimensionless)");
    opt(s, "--family", wt.family, "cube family: origin, nested, dyadic");
    opt(s, "--levels", wt.levels, "refinement levels (count)");
    opt(s, "--csv", wt.csv, "scan CSV name (file in --out)");
    commands.push_back({s, [&](Context& c) { run_weights(wt, c); }});
  }

  ExponentArgs ex;
  {
    auto* s = app.add_subcommand("exponents", "t, region membership and necessary conditions");
    opt(s, "--kind", ex.kind, "lac or full");
    opt(s, "--n", ex.n, "dimension (>= 2)");
    opt(s, "--r1", ex.r1, "exponent r1 (dimensionless, > 1)");
    opt(s, "--s1", ex.s1, "exponent s1 (dimensionless, > 1)");
    opt(s, "--r2", ex.r2, "exponent r2 (dimensionless, > 1)");
    opt(s, "--s2", ex.s2, "exponent s2 (dimensionless, > 1)");
    commands.push_back({s, [&](Context& c) { run_exponents(ex, c); }});
  }

  KnappArgs kp;
  {
    auto* s = app.add_subcommand("knapp", "Knapp-example scaling run");
    opt(s, "--case", kp.which,
        "lac_annulus_ball, lac_ball_annulus, lac_mixed_1, lac_mixed_2, full_knapp_boxes, "
        "full_knapp_one_box");
    opt(s, "--n", kp.n, "dimension (2 or 3)");
    opt(s, "--deltas", kp.deltas, "strictly decreasing widths (length units)");
    opt(s, "--r1", kp.r1, "exponent r1 (dimensionless)");
    opt(s, "--s1", kp.s1, "exponent s1 (dimensionless)");
    opt(s, "--r2", kp.r2, "exponent r2 (dimensionless)");
    opt(s, "--s2", kp.s2, "exponent s2 (dimensionless)");
    opt(s, "--cells-per-delta", kp.cells_per_delta,
        "grid cells per delta when the grid follows delta (count)");
    opt(s, "--grid", kp.cells, "fixed cells per axis (count; 0 = follow delta)");
    opt(s, "--c", kp.c, "small-feature constant (dimensionless)");
    opt(s, "--C", kp.C, "thin-box constant (dimensionless)");
    opt(s, "--nodes", kp.nodes, "quadrature resolution (count; 0 = from delta)");
    opt(s, "--spo", kp.spo, "radii per octave, full cases (count; 0 = from delta)");
    opt(s, "--csv", kp.csv, "CSV name (file in --out; default <case>.csv)");
    commands.push_back({s, [&](Context& c) { run_knapp(kp, c); }});
  }

  RadialArgs rd;
  {
    auto* s = app.add_subcommand("radial", "power-weight boundedness trend on dilated inputs");
    opt(s, "--op", rd.op, "lac or full");
    opt(s, "--n", rd.n, "dimension (2 or 3)");
    opt(s, "--alpha", rd.alpha, "first weight exponent (dimensionless)");
    opt(s, "--beta", rd.beta, "second weight exponent (dimensionless)");
    opt(s, "--scales", rd.scales, "dilation scales (length units)");
    opt(s, "--grid", rd.cells, "cells per axis (count)");
    opt(s, "--nodes", rd.nodes, "quadrature resolution (count)");
    opt(s, "--spo", rd.spo, "radii per octave for full (count)");
    opt(s, "--phase", rd.phase, "node offset (fraction of a node spacing)");
    opt(s, "--profile", rd.profile, "unit-scale input spec (default annulus delta 1/8)");
    opt(s, "--csv", rd.csv, "CSV name (file in --out)");
    commands.push_back({s, [&](Context& c) { run_radial(rd, c); }});
  }

  ReportArgs rp;
  {
    auto* s = app.add_subcommand("report", "exponent-range comparison or unboundedness probe");
    opt(s, "--what", rp.what, "comparison, probe or control");
    opt(s, "--n", rp.n, "dimension (>= 2)");
    opt(s, "--delta", rp.delta, "p = n + delta offset (dimensionless, > 1)");
    opt(s, "--epsilon", rp.epsilon, "r_i = 2 + epsilon offset (dimensionless)");
    opt(s, "--alphas", rp.alphas, "alpha grid (dimensionless)");
    commands.push_back({s, [&](Context& c) { run_report(rp, c); }});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ConfigError& e) {
    std::string msg = e.what();
    std::string section;
    auto dot = msg.rfind('.');
    auto sp = msg.rfind(' ');
    if (dot != std::string::npos && sp != std::string::npos && dot > sp) section = msg.substr(sp + 1, dot - sp - 1);
    std::cerr << "error: " << msg << "\nvalid keys: " << valid_keys(app, section) << '\n';
    return kInvalid;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (c.app->parsed()) chosen = &c;
  if (!chosen) return kInvalid;

  const auto start = std::chrono::steady_clock::now();
  Context ctx;
  ctx.out_dir = out_dir;
  try {
    check(bisph_set_threads(threads));
    chosen->run(ctx);
  } catch (const Failure& f) {
    std::cerr << "error (" << bisph_status_name(f.status) << "): " << f.message << '\n';
    return exit_code(f.status);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error (io): " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json params = option_values(&app);
  params.update(option_values(chosen->app));
  json run;
  run["command"] = chosen->app->get_name();
  run["params"] = params;
  run["outputs"] = ctx.outputs;
  run["pass_flags"] = ctx.pass;
  run["result"] = ctx.result;
  run["wall_time_s"] = wall;
  round_floats(run);

  try {
    const std::string path =
        summary.empty() ? ctx.path(chosen->app->get_name() + "_summary.json") : summary;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << run.dump(2) << '\n';
    if (!f) throw std::runtime_error("failed writing " + path);
  } catch (const std::exception& e) {
    std::cerr << "error (io): " << e.what() << '\n';
    return kIo;
  }
  std::cout << ctx.line << '\n';
  return ctx.exit;
}
