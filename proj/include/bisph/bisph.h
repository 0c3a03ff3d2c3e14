/* SPDX-License-Identifier: Apache-2.0 */
#ifndef BISPH_BISPH_H
#define BISPH_BISPH_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(BISPH_BUILDING)
#    define BISPH_API __declspec(dllexport)
#  else
#    define BISPH_API __declspec(dllimport)
#  endif
#else
#  define BISPH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bisph_status {
  BISPH_OK = 0,
  BISPH_INVALID_DIMENSION = 1,
  BISPH_DOMAIN = 2,
  BISPH_UNDEFINED_EXPONENT = 3,
  BISPH_EXPONENT_ORDER = 4,
  BISPH_BOUNDARY = 5,
  BISPH_RESOLUTION = 6,
  BISPH_SHAPE = 7,
  BISPH_UNSUPPORTED = 8,
  BISPH_IO = 9,
  BISPH_PARSE = 10,
  BISPH_INVALID_ARGUMENT = 11,
  BISPH_INTERNAL = 12
} bisph_status;

typedef enum bisph_operator {
  BISPH_OP_LACUNARY = 0,
  BISPH_OP_FULL = 1,
  BISPH_OP_LOCAL = 2,
  BISPH_OP_SPH = 3,
  BISPH_OP_HL = 4
} bisph_operator;

typedef struct bisph_grid bisph_grid;
typedef struct bisph_family bisph_family;

/* Cell-centered grid over [lower, lower + side)^dim. */
typedef struct bisph_geometry {
  int dim;
  double lower[3];
  double side;
  int cells;
} bisph_geometry;

typedef struct bisph_maximal_options {
  int nodes;            /* quadrature resolution */
  int steps_per_octave; /* full and local radius density */
  double phase;         /* node offset in units of the node spacing */
  int max_depth;        /* dyadic depth for hl; -1 for the finest */
} bisph_maximal_options;

typedef struct bisph_knapp_options {
  int cells_per_delta;  /* grid follows delta when fixed_cells is 0 */
  int fixed_cells;
  double c;
  double C;
  int nodes;            /* 0 picks from delta */
  int steps_per_octave; /* 0 picks from delta */
} bisph_knapp_options;

typedef struct bisph_radial_options {
  const char* op;       /* "lac" or "full" */
  int cells;
  int nodes;
  double phase;
  int steps_per_octave;
  const char* profile;  /* unit-scale function spec, NULL for the default annulus */
} bisph_radial_options;

typedef struct bisph_weights_request {
  const char* weight_class; /* ap, rh, lerner, lmo, nieraeth, relation */
  int n;
  double b1, b2;  /* power weight exponents */
  double p1, p2;  /* ap uses p1 as p, rh uses p1 as s */
  double r[3];
  int has_r;
  double s;       /* nieraeth source exponent */
  const char* family; /* origin, nested, dyadic */
  int levels;
} bisph_weights_request;

BISPH_API const char* bisph_version(void);
BISPH_API const char* bisph_status_name(bisph_status status);
/* Message of the last failure on the calling thread. */
BISPH_API const char* bisph_last_error(void);
/* 0 restores the default thread count. */
BISPH_API bisph_status bisph_set_threads(int threads);
BISPH_API void bisph_string_free(char* text);

BISPH_API void bisph_maximal_options_default(bisph_maximal_options* out);
BISPH_API void bisph_knapp_options_default(bisph_knapp_options* out);
BISPH_API void bisph_radial_options_default(bisph_radial_options* out);

BISPH_API bisph_status bisph_geometry_centered(int dim, double half_width, int cells,
                                               bisph_geometry* out);

/* Grids */
BISPH_API bisph_status bisph_grid_sample(const char* spec, const bisph_geometry* geometry,
                                         bisph_grid** out);
BISPH_API bisph_status bisph_grid_from_values(const bisph_geometry* geometry, const double* values,
                                              size_t count, bisph_grid** out);
BISPH_API bisph_status bisph_grid_read_raw(const char* path, bisph_grid** out);
BISPH_API void bisph_grid_free(bisph_grid* grid);
BISPH_API bisph_status bisph_grid_geometry(const bisph_grid* grid, bisph_geometry* out);
BISPH_API size_t bisph_grid_size(const bisph_grid* grid);
BISPH_API const double* bisph_grid_values(const bisph_grid* grid);
/* Sample of the cell containing x. */
BISPH_API bisph_status bisph_grid_value_at(const bisph_grid* grid, const double* x, double* out);
BISPH_API bisph_status bisph_grid_write_csv(const bisph_grid* grid, const char* path);
BISPH_API bisph_status bisph_grid_write_raw(const bisph_grid* grid, const char* path);

/* Operators */
BISPH_API bisph_status bisph_average(const bisph_grid* f, double radius, int nodes, double phase,
                                     bisph_grid** out);
BISPH_API bisph_status bisph_average_at(const bisph_grid* f, double radius, int nodes,
                                        double phase, const double* x, double* out);
/* f2 may be NULL for the linear lacunary, full and dyadic maximal functions. */
BISPH_API bisph_status bisph_maximal(bisph_operator op, const bisph_grid* f1, const bisph_grid* f2,
                                     const bisph_maximal_options* options, bisph_grid** out);

/* Sparse families */
BISPH_API bisph_status bisph_sparse_build(const bisph_grid* f1, const bisph_grid* f2,
                                          const bisph_grid* h, double r1, double r2, double t,
                                          int max_depth, bisph_family** out);
BISPH_API void bisph_family_free(bisph_family* family);
BISPH_API size_t bisph_family_size(const bisph_family* family);
BISPH_API bisph_status bisph_family_verify(const bisph_family* family, double eta, int* ok);
BISPH_API bisph_status bisph_sparse_form(const bisph_family* family, const bisph_grid* f1,
                                         const bisph_grid* f2, const bisph_grid* h, double r1,
                                         double r2, double t, double* out);
BISPH_API bisph_status bisph_family_write_csv(const bisph_family* family, const char* path);
/* Calderon-Zygmund split; bad is the sum over all levels. */
BISPH_API bisph_status bisph_cz(const bisph_grid* f, double r, double c0, int max_depth,
                                bisph_grid** good, bisph_grid** bad, double* threshold);

/* JSON results; release with bisph_string_free. */
BISPH_API bisph_status bisph_exponents_report(const char* kind, int n, double r1, double s1,
                                              double r2, double s2, char** json);
BISPH_API bisph_status bisph_weights(const bisph_weights_request* request, const char* csv_path,
                                     char** json);
BISPH_API bisph_status bisph_knapp(const char* knapp_case, int n, const double* deltas,
                                   size_t count, double r1, double s1, double r2, double s2,
                                   const bisph_knapp_options* options, const char* csv_path,
                                   char** json);
BISPH_API bisph_status bisph_radial(int n, double alpha, double beta, const double* scales,
                                    size_t count, const bisph_radial_options* options,
                                    const char* csv_path, char** json);
BISPH_API bisph_status bisph_report(int n, double delta, double epsilon, const double* alphas,
                                    size_t count, char** json);
BISPH_API bisph_status bisph_probe(int n, int control, char** json);

#ifdef __cplusplus
}
#endif

#endif /* BISPH_BISPH_H */
