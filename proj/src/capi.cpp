// SPDX-License-Identifier: Apache-2.0
#include "bisph/bisph.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bisph/dyadic.hpp"
#include "bisph/error.hpp"
#include "bisph/experiments.hpp"
#include "bisph/exponents.hpp"
#include "bisph/grid.hpp"
#include "bisph/parallel.hpp"
#include "bisph/spherical.hpp"
#include "bisph/weights.hpp"

struct bisph_grid {
  bisph::GridFunction f;
};

struct bisph_family {
  bisph::SparseFamily family;
};

namespace {

using json = nlohmann::ordered_json;

thread_local std::string g_last_error;

bisph_status status_of(bisph::ErrorKind kind) {
  using bisph::ErrorKind;
  switch (kind) {
  case ErrorKind::InvalidDimension: return BISPH_INVALID_DIMENSION;
  case ErrorKind::Domain: return BISPH_DOMAIN;
  case ErrorKind::UndefinedExponent: return BISPH_UNDEFINED_EXPONENT;
  case ErrorKind::ExponentOrder: return BISPH_EXPONENT_ORDER;
  case ErrorKind::Boundary: return BISPH_BOUNDARY;
  case ErrorKind::Resolution: return BISPH_RESOLUTION;
  case ErrorKind::Shape: return BISPH_SHAPE;
  case ErrorKind::Unsupported: return BISPH_UNSUPPORTED;
  case ErrorKind::Io: return BISPH_IO;
  case ErrorKind::Parse: return BISPH_PARSE;
  }
  return BISPH_INTERNAL;
}

template <class Fn>
bisph_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BISPH_OK;
  } catch (const bisph::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return BISPH_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BISPH_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BISPH_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return BISPH_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is null");
}

bisph::GridGeometry to_geometry(const bisph_geometry* g) {
  need(g, "geometry");
  bisph::GridGeometry out;
  out.dim = g->dim;
  out.side = g->side;
  out.cells = g->cells;
  for (int a = 0; a < 3; ++a) out.lower[static_cast<std::size_t>(a)] = g->lower[a];
  if (out.dim < 1 || out.dim > bisph::kMaxDim)
    bisph::fail(bisph::ErrorKind::InvalidDimension, "dimension must be 1, 2 or 3");
  if (!(out.side > 0.0) || out.cells < 1)
    bisph::fail(bisph::ErrorKind::Domain, "box side and cell count must be positive");
  return out;
}

void from_geometry(const bisph::GridGeometry& g, bisph_geometry* out) {
  out->dim = g.dim;
  out->side = g.side;
  out->cells = g.cells;
  for (int a = 0; a < 3; ++a) out->lower[a] = g.lower[static_cast<std::size_t>(a)];
}

bisph::Point to_point(int dim, const double* x) {
  bisph::Point p{};
  for (int a = 0; a < dim; ++a) p[static_cast<std::size_t>(a)] = x[a];
  return p;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const std::string& text, char** out) {
  need(out, "output");
  *out = dup_string(text);
}

std::ofstream open_csv(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bisph::fail(bisph::ErrorKind::Io, std::string("cannot open ") + path);
  return out;
}

void close_csv(std::ofstream& out, const char* path) {
  out.close();
  if (!out) bisph::fail(bisph::ErrorKind::Io, std::string("failed writing ") + path);
}

json scan_json(const bisph::CharacteristicScan& scan) {
  json j;
  j["value"] = scan.value();
  j["level_max"] = scan.level_max;
  j["last_change"] = scan.last_change();
  j["stable"] = scan.stable();
  j["growth"] = scan.growth();
  return j;
}

bisph::CubeFamily make_family(const std::string& name, int n, int levels) {
  using bisph::CubeFamily;
  if (levels < 2) bisph::fail(bisph::ErrorKind::Domain, "a cube family needs at least two levels");
  if (name == "origin") return CubeFamily::origin_approach(n, levels);
  if (name == "nested") return CubeFamily::nested_centered(n, 1 - levels, 0);
  if (name == "dyadic") {
    bisph::Cube root{n, {}, 2.0};
    for (int a = 0; a < n; ++a) root.lower[static_cast<std::size_t>(a)] = -1.0;
    return CubeFamily::dyadic_descendants(root, levels - 1);
  }
  bisph::fail(bisph::ErrorKind::Parse, "unknown cube family '" + name + "' (origin, nested, dyadic)");
}

json membership_json(const bisph_weights_request& q) {
  json j;
  const int n = q.n;
  j["a1_w1"] = bisph::a1_power_membership(q.b1, n);
  if (q.p1 > 1.0) j["ap_w1"] = bisph::ap_power_membership(q.b1, q.p1, n);
  if (q.p1 > 1.0) j["radial_closed_lower_w1"] =
      bisph::radial_family_membership(q.b1, q.p1, n, bisph::RadialFamily::closed_lower);
  if (n >= 3 && q.p1 > static_cast<double>(n) / (n - 1))
    j["radial_open_lower_w1"] =
        bisph::radial_family_membership(q.b1, q.p1, n, bisph::RadialFamily::open_lower);
  return j;
}

} // namespace

extern "C" {

const char* bisph_version(void) { return "0.1.0"; }

const char* bisph_status_name(bisph_status status) {
  switch (status) {
  case BISPH_OK: return "ok";
  case BISPH_INVALID_DIMENSION: return "invalid-dimension";
  case BISPH_DOMAIN: return "domain";
  case BISPH_UNDEFINED_EXPONENT: return "undefined-exponent";
  case BISPH_EXPONENT_ORDER: return "exponent-order";
  case BISPH_BOUNDARY: return "boundary";
  case BISPH_RESOLUTION: return "resolution";
  case BISPH_SHAPE: return "shape";
  case BISPH_UNSUPPORTED: return "unsupported";
  case BISPH_IO: return "io";
  case BISPH_PARSE: return "parse";
  case BISPH_INVALID_ARGUMENT: return "invalid-argument";
  case BISPH_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* bisph_last_error(void) { return g_last_error.c_str(); }

bisph_status bisph_set_threads(int threads) {
  if (threads < 0) {
    g_last_error = "thread count must not be negative";
    return BISPH_INVALID_ARGUMENT;
  }
  bisph::set_thread_count(threads);
  return BISPH_OK;
}

void bisph_string_free(char* text) { delete[] text; }

void bisph_maximal_options_default(bisph_maximal_options* out) {
  if (!out) return;
  out->nodes = 512;
  out->steps_per_octave = 16;
  out->phase = 0.5;
  out->max_depth = -1;
}

void bisph_knapp_options_default(bisph_knapp_options* out) {
  if (!out) return;
  bisph::KnappOptions o;
  out->cells_per_delta = o.cells_per_delta;
  out->fixed_cells = 0;
  out->c = o.c;
  out->C = o.C;
  out->nodes = 0;
  out->steps_per_octave = 0;
}

void bisph_radial_options_default(bisph_radial_options* out) {
  if (!out) return;
  bisph::RadialOptions o;
  out->op = "lac";
  out->cells = o.cells;
  out->nodes = o.nodes;
  out->phase = o.phase;
  out->steps_per_octave = o.steps_per_octave;
  out->profile = nullptr;
}

bisph_status bisph_geometry_centered(int dim, double half_width, int cells, bisph_geometry* out) {
  return guard([&] {
    need(out, "output");
    bisph_geometry g{dim, {0.0, 0.0, 0.0}, 2.0 * half_width, cells};
    for (int a = 0; a < 3; ++a) g.lower[a] = a < dim ? -half_width : 0.0;
    to_geometry(&g);
    *out = g;
  });
}

bisph_status bisph_grid_sample(const char* spec, const bisph_geometry* geometry, bisph_grid** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "output");
    auto g = to_geometry(geometry);
    *out = new bisph_grid{bisph::sample(bisph::TestFunctionSpec::parse(spec), g)};
  });
}

bisph_status bisph_grid_from_values(const bisph_geometry* geometry, const double* values,
                                    size_t count, bisph_grid** out) {
  return guard([&] {
    need(values, "values");
    need(out, "output");
    auto g = to_geometry(geometry);
    if (count != g.size()) bisph::fail(bisph::ErrorKind::Shape, "value count does not match the grid");
    *out = new bisph_grid{bisph::GridFunction(g, std::vector<double>(values, values + count))};
  });
}

bisph_status bisph_grid_read_raw(const char* path, bisph_grid** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output");
    *out = new bisph_grid{bisph::read_raw(path)};
  });
}

void bisph_grid_free(bisph_grid* grid) { delete grid; }

bisph_status bisph_grid_geometry(const bisph_grid* grid, bisph_geometry* out) {
  return guard([&] {
    need(grid, "grid");
    need(out, "output");
    from_geometry(grid->f.geometry(), out);
  });
}

size_t bisph_grid_size(const bisph_grid* grid) { return grid ? grid->f.size() : 0; }

const double* bisph_grid_values(const bisph_grid* grid) {
  return grid ? grid->f.values().data() : nullptr;
}

bisph_status bisph_grid_value_at(const bisph_grid* grid, const double* x, double* out) {
  return guard([&] {
    need(grid, "grid");
    need(x, "point");
    need(out, "output");
    std::size_t i = grid->f.locate(to_point(grid->f.dim(), x));
    if (i >= grid->f.size()) bisph::fail(bisph::ErrorKind::Domain, "point lies outside the grid box");
    *out = grid->f[i];
  });
}

bisph_status bisph_grid_write_csv(const bisph_grid* grid, const char* path) {
  return guard([&] {
    need(grid, "grid");
    need(path, "path");
    bisph::write_csv(grid->f, std::string(path));
  });
}

bisph_status bisph_grid_write_raw(const bisph_grid* grid, const char* path) {
  return guard([&] {
    need(grid, "grid");
    need(path, "path");
    bisph::write_raw(grid->f, path);
  });
}

bisph_status bisph_average(const bisph_grid* f, double radius, int nodes, double phase,
                           bisph_grid** out) {
  return guard([&] {
    need(f, "grid");
    need(out, "output");
    auto quad = bisph::sphere_quadrature(f->f.dim(), nodes, phase);
    *out = new bisph_grid{bisph::spherical_average(f->f, radius, quad)};
  });
}

bisph_status bisph_average_at(const bisph_grid* f, double radius, int nodes, double phase,
                              const double* x, double* out) {
  return guard([&] {
    need(f, "grid");
    need(x, "point");
    need(out, "output");
    auto quad = bisph::sphere_quadrature(f->f.dim(), nodes, phase);
    *out = bisph::spherical_average_at(f->f, radius, quad, to_point(f->f.dim(), x));
  });
}

bisph_status bisph_maximal(bisph_operator op, const bisph_grid* f1, const bisph_grid* f2,
                           const bisph_maximal_options* options, bisph_grid** out) {
  return guard([&] {
    need(f1, "f1");
    need(out, "output");
    bisph_maximal_options o;
    bisph_maximal_options_default(&o);
    if (options) o = *options;
    const auto& g1 = f1->f;
    const auto& geom = g1.geometry();
    switch (op) {
    case BISPH_OP_LACUNARY:
    case BISPH_OP_FULL: {
      auto kind = op == BISPH_OP_LACUNARY ? bisph::OperatorKind::lacunary : bisph::OperatorKind::full;
      auto radii = bisph::default_radii(kind, geom, o.steps_per_octave);
      auto quad = bisph::sphere_quadrature(g1.dim(), o.nodes, o.phase);
      *out = new bisph_grid{f2 ? bisph::bilinear_maximal(g1, f2->f, radii, quad)
                               : bisph::linear_maximal(g1, radii, quad)};
      return;
    }
    case BISPH_OP_LOCAL: {
      need(f2, "f2");
      auto lattice = bisph::DyadicLattice::for_grid(geom, o.max_depth);
      auto quad = bisph::sphere_quadrature(g1.dim(), o.nodes, o.phase);
      *out = new bisph_grid{bisph::local_maximal(g1, f2->f, lattice.root, lattice.origin,
                                                 o.steps_per_octave, quad)};
      return;
    }
    case BISPH_OP_SPH: {
      need(f2, "f2");
      auto radii = bisph::default_radii(bisph::OperatorKind::full, geom, o.steps_per_octave);
      auto quad = bisph::sphere_quadrature(4, o.nodes, o.phase);
      *out = new bisph_grid{bisph::m_sph(g1, f2->f, radii, quad)};
      return;
    }
    case BISPH_OP_HL: {
      auto lattice = bisph::DyadicLattice::for_grid(geom, o.max_depth);
      *out = new bisph_grid{f2 ? bisph::bilinear_hl(g1, f2->f, lattice)
                               : bisph::hl_maximal(g1, lattice)};
      return;
    }
    }
    bisph::fail(bisph::ErrorKind::Parse, "unknown operator");
  });
}

bisph_status bisph_sparse_build(const bisph_grid* f1, const bisph_grid* f2, const bisph_grid* h,
                                double r1, double r2, double t, int max_depth, bisph_family** out) {
  return guard([&] {
    need(f1, "f1");
    need(f2, "f2");
    need(h, "h");
    need(out, "output");
    auto lattice = bisph::DyadicLattice::for_grid(f1->f.geometry(), max_depth);
    *out = new bisph_family{bisph::build_sparse_family(f1->f, f2->f, h->f, lattice, r1, r2, t)};
  });
}

void bisph_family_free(bisph_family* family) { delete family; }

size_t bisph_family_size(const bisph_family* family) {
  return family ? family->family.cubes.size() : 0;
}

bisph_status bisph_family_verify(const bisph_family* family, double eta, int* ok) {
  return guard([&] {
    need(family, "family");
    need(ok, "output");
    *ok = bisph::verify_sparsity(family->family, eta) ? 1 : 0;
  });
}

bisph_status bisph_sparse_form(const bisph_family* family, const bisph_grid* f1,
                               const bisph_grid* f2, const bisph_grid* h, double r1, double r2,
                               double t, double* out) {
  return guard([&] {
    need(family, "family");
    need(f1, "f1");
    need(f2, "f2");
    need(h, "h");
    need(out, "output");
    *out = bisph::sparse_form(family->family, f1->f, f2->f, h->f, r1, r2, t);
  });
}

bisph_status bisph_family_write_csv(const bisph_family* family, const char* path) {
  return guard([&] {
    need(family, "family");
    need(path, "path");
    auto out = open_csv(path);
    bisph::write_family_csv(family->family, out);
    close_csv(out, path);
  });
}

bisph_status bisph_cz(const bisph_grid* f, double r, double c0, int max_depth, bisph_grid** good,
                      bisph_grid** bad, double* threshold) {
  return guard([&] {
    need(f, "grid");
    need(good, "good");
    need(bad, "bad");
    auto lattice = bisph::DyadicLattice::for_grid(f->f.geometry(), max_depth);
    auto cz = bisph::cz_decompose(f->f, lattice, r, c0);
    bisph::GridFunction sum(f->f.geometry());
    for (const auto& [level, part] : cz.bad_levels)
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part[i];
    *good = new bisph_grid{std::move(cz.good)};
    *bad = new bisph_grid{std::move(sum)};
    if (threshold) *threshold = cz.threshold;
  });
}

bisph_status bisph_exponents_report(const char* kind, int n, double r1, double s1, double r2,
                                    double s2, char** out) {
  return guard([&] {
    need(kind, "kind");
    auto region = bisph::parse_region_kind(kind);
    bisph::ExponentConfig cfg;
    cfg.n = n;
    cfg.r1 = r1;
    cfg.s1 = s1;
    cfg.r2 = r2;
    cfg.s2 = s2;
    for (double e : {r1, s1, r2, s2})
      if (!(e > 1.0)) bisph::fail(bisph::ErrorKind::ExponentOrder, "exponents must exceed 1");
    auto lac = bisph::region_polygon(bisph::RegionKind::lacunary, n);
    auto full = bisph::region_polygon(bisph::RegionKind::full, n);
    json j;
    j["kind"] = bisph::to_string(region);
    j["n"] = n;
    j["exponents"] = {{"r1", r1}, {"s1", s1}, {"r2", r2}, {"s2", s2}};
    j["t"] = cfg.t();
    j["inv_t"] = *cfg.inv_t();
    json pts = json::array();
    for (auto p : {cfg.point1(), cfg.point2()})
      pts.push_back({{"inv_r", p.inv_r}, {"inv_s", p.inv_s},
                     {"interior_lacunary", bisph::is_interior(p, lac)},
                     {"interior_full", bisph::is_interior(p, full)}});
    j["points"] = pts;
    auto rep = bisph::necessary_report(region, cfg);
    json conds = json::array();
    for (const auto& c : rep.conditions)
      conds.push_back({{"name", c.name}, {"lhs", c.lhs}, {"bound", c.bound}, {"strict", c.strict},
                       {"holds", c.holds}});
    j["necessary"] = conds;
    const auto& poly = region == bisph::RegionKind::lacunary ? lac : full;
    const bool interior = bisph::is_interior(cfg.point1(), poly) && bisph::is_interior(cfg.point2(), poly);
    j["pass"] = {{"interior", interior}, {"necessary", rep.all_hold()}};
    emit(j.dump(2), out);
  });
}

bisph_status bisph_weights(const bisph_weights_request* request, const char* csv_path, char** out) {
  return guard([&] {
    need(request, "request");
    need(request->weight_class, "weight class");
    const auto& q = *request;
    if (q.n < 1 || q.n > bisph::kMaxDim)
      bisph::fail(bisph::ErrorKind::InvalidDimension, "dimension must be 1, 2 or 3");
    const std::string cls = q.weight_class;
    auto family = make_family(q.family ? q.family : "origin", q.n, q.levels);
    auto w1 = bisph::WeightSpec::power(q.b1), w2 = bisph::WeightSpec::power(q.b2);
    std::optional<std::array<double, 3>> r;
    if (q.has_r) r = std::array<double, 3>{q.r[0], q.r[1], q.r[2]};

    json j;
    j["class"] = cls;
    j["n"] = q.n;
    j["family"] = family.name;
    j["levels"] = family.levels.size();
    bisph::CharacteristicScan scan;
    if (cls == "ap") {
      scan = bisph::ap_characteristic(w1, q.p1, family);
    } else if (cls == "rh") {
      scan = bisph::rh_characteristic(w1, q.p1, family);
    } else if (cls == "lerner" || cls == "lmo" || cls == "relation") {
      bisph::BilinearWeight bw{w1, w2, q.p1, q.p2, r};
      if (cls == "lerner") {
        scan = bisph::lerner_characteristic(bw, family);
      } else if (cls == "lmo") {
        scan = bisph::lmo_characteristic(bw, family);
      } else {
        if (!r) bisph::fail(bisph::ErrorKind::Domain, "relation check needs r1, r2, r3");
        auto params = bisph::lmo_params(q.p1, q.p2, (*r)[0], (*r)[1], (*r)[2]);
        auto rep = bisph::weightrelation_check(bw, params, family);
        json derived = json::array();
        for (const auto& d : rep.derived)
          derived.push_back({{"label", d.label}, {"exponent", d.exponent},
                             {"class_index", d.class_index}, {"member", d.member}});
        j["derived"] = derived;
        j["all_derived"] = rep.all_derived;
        j["agree"] = rep.agree;
        scan = rep.scan;
      }
    } else if (cls == "nieraeth") {
      if (!r) bisph::fail(bisph::ErrorKind::Domain, "Nieraeth class needs source exponents r1, r2");
      scan = bisph::nieraeth_characteristic(w1, w2, q.p1, q.p2, (*r)[0], (*r)[1], q.s, family);
    } else {
      bisph::fail(bisph::ErrorKind::Parse, "unknown weight class '" + cls +
                                               "' (ap, rh, lerner, lmo, nieraeth, relation)");
    }
    j["scan"] = scan_json(scan);
    j["membership"] = membership_json(q);
    if (csv_path) {
      auto f = open_csv(csv_path);
      bisph::write_scan_csv(scan, f);
      close_csv(f, csv_path);
    }
    emit(j.dump(2), out);
  });
}

bisph_status bisph_knapp(const char* knapp_case, int n, const double* deltas, size_t count,
                         double r1, double s1, double r2, double s2,
                         const bisph_knapp_options* options, const char* csv_path, char** out) {
  return guard([&] {
    need(knapp_case, "case");
    need(deltas, "deltas");
    auto c = bisph::parse_knapp_case(knapp_case);
    bisph::ExponentConfig cfg;
    cfg.n = n;
    cfg.r1 = r1;
    cfg.s1 = s1;
    cfg.r2 = r2;
    cfg.s2 = s2;
    bisph::KnappOptions o;
    if (options) {
      o.cells_per_delta = options->cells_per_delta;
      if (options->fixed_cells > 0) o.fixed_cells = options->fixed_cells;
      o.c = options->c;
      o.C = options->C;
      o.nodes = options->nodes;
      o.steps_per_octave = options->steps_per_octave;
    }
    auto run = bisph::knapp_run(c, n, std::vector<double>(deltas, deltas + count), cfg, o);
    if (csv_path) {
      auto f = open_csv(csv_path);
      bisph::write_scaling_csv(run, f);
      close_csv(f, csv_path);
    }
    emit(bisph::scaling_json(run), out);
  });
}

bisph_status bisph_radial(int n, double alpha, double beta, const double* scales, size_t count,
                          const bisph_radial_options* options, const char* csv_path, char** out) {
  return guard([&] {
    need(scales, "scales");
    bisph_radial_options ro;
    bisph_radial_options_default(&ro);
    if (options) ro = *options;
    bisph::RadialOptions o;
    o.kind = bisph::parse_operator_kind(ro.op ? ro.op : "lac");
    o.cells = ro.cells;
    o.nodes = ro.nodes;
    o.phase = ro.phase;
    o.steps_per_octave = ro.steps_per_octave;
    if (ro.profile) o.profile = bisph::TestFunctionSpec::parse(ro.profile);
    auto run = bisph::radial_run(n, alpha, beta, std::vector<double>(scales, scales + count), o);
    if (csv_path) {
      auto f = open_csv(csv_path);
      bisph::write_radial_csv(run, f);
      close_csv(f, csv_path);
    }
    emit(bisph::radial_json(run), out);
  });
}

bisph_status bisph_report(int n, double delta, double epsilon, const double* alphas, size_t count,
                          char** out) {
  return guard([&] {
    need(alphas, "alphas");
    auto rep = bisph::comparison_report(n, delta, epsilon, std::vector<double>(alphas, alphas + count));
    emit(bisph::comparison_json(rep), out);
  });
}

bisph_status bisph_probe(int n, int control, char** out) {
  return guard([&] {
    bisph::ProbeOptions o;
    o.control = control != 0;
    emit(bisph::probe_json(bisph::unboundedness_probe(n, o)), out);
  });
}

} // extern "C"
