/*
 * hypsurf: length-spectrum functionals of pinched congruence surfaces.
 *
 * C interface. Every function returns an hs_status; on failure a
 * human-readable message is available from hs_last_error_message() on the
 * calling thread. Opaque handles are created by *_create / *_from_* calls and
 * released with the matching *_free. Exact integers are passed as decimal
 * strings.
 */
#ifndef HYPSURF_H
#define HYPSURF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HYPSURF_BUILDING)
#    define HS_API __declspec(dllexport)
#  else
#    define HS_API __declspec(dllimport)
#  endif
#else
#  define HS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hs_status {
  HS_OK = 0,
  HS_ERR_DOMAIN = 1,           /* argument outside the operation's domain */
  HS_ERR_NOT_HYPERBOLIC = 2,   /* |trace| <= 2 */
  HS_ERR_VALIDITY = 3,         /* short spectrum would be incomplete */
  HS_ERR_NUMERICS = 4,         /* quadrature or tail certification failed */
  HS_ERR_INTERNAL = 5,         /* broken invariant; a bug */
  HS_ERR_INVALID_ARGUMENT = 6, /* null pointer or undersized buffer */
  HS_ERR_NOT_FOUND = 7         /* search box held no hyperbolic element */
} hs_status;

#define HS_DECIMAL_CAPACITY 64

HS_API const char* hs_version(void);
HS_API const char* hs_status_name(hs_status status);
HS_API const char* hs_last_error_message(void);

/* ---- hyperbolic trigonometry ------------------------------------------- */

HS_API hs_status hs_length_from_trace(double abs_trace, double* out_length);
HS_API hs_status hs_collar_width(double length, double* out_width);
HS_API hs_status hs_collar_width_at_radius(double length, double radius, double* out_width);
HS_API hs_status hs_cylinder_volume(double length, double radius, double* out_volume);
HS_API hs_status hs_thin_part_upper_bound(uint64_t simple_count, double radius, double* out_bound);
HS_API hs_status hs_injrad_from_collar(double length, double lambda, double* out_radius);
HS_API hs_status hs_crossing_length_bound(double pinch_length, double* out_length);
HS_API hs_status hs_distortion_bound(double eps, double* out_bound);

/* ---- congruence subgroups ------------------------------------------------ */

typedef struct hs_matrix {
  int64_t a, b, c, d;
} hs_matrix;

typedef struct hs_surface_data {
  int64_t level;
  char index_d[HS_DECIMAL_CAPACITY];
  char genus[HS_DECIMAL_CAPACITY];
  char cusps[HS_DECIMAL_CAPACITY];
  double systole;
  double area;
} hs_surface_data;

HS_API hs_status hs_index_d(int64_t level, char* buffer, size_t capacity);
HS_API hs_status hs_surface_data_get(int64_t level, hs_surface_data* out);
/* HS_ERR_DOMAIN when det(m) != 1. */
HS_API hs_status hs_is_in_gamma(const hs_matrix* m, int64_t level, int* out_member);
HS_API hs_status hs_witness_matrix(int64_t level, hs_matrix* out);
/* workers = 0 uses the hardware concurrency. HS_ERR_NOT_FOUND if the box
 * holds no hyperbolic element. */
HS_API hs_status hs_min_hyperbolic_trace(int64_t level, int64_t entry_bound, unsigned workers,
                                         int64_t* out_abs_trace);
HS_API double hs_projected_candidates(int64_t level, int64_t entry_bound);

/* ---- pinched surfaces and convergence functionals ----------------------- */

typedef struct hs_certified {
  double value;
  double radius; /* guaranteed absolute error bound */
} hs_certified;

typedef struct hs_compacted_surface {
  int64_t level;
  double pinch_length;
  char pinched_count[HS_DECIMAL_CAPACITY];
  char genus[HS_DECIMAL_CAPACITY];
  double volume;
} hs_compacted_surface;

typedef struct hs_geodesic_class {
  double length;
  double primitive_length;
  uint64_t multiplicity;
} hs_geodesic_class;

/* Classes k * primitive_length for k = 1..count, all of the same multiplicity. */
typedef struct hs_pinched_spectrum {
  double primitive_length;
  uint64_t multiplicity;
  double count;
} hs_pinched_spectrum;

HS_API hs_status hs_compacted_surface_get(int64_t level, double pinch_length, hs_compacted_surface* out);
HS_API hs_status hs_other_geodesic_floor(int64_t level, double pinch_length, double* out_floor);
HS_API hs_status hs_validity_check(int64_t level, double pinch_length, double radius, int* out_valid);
HS_API hs_status hs_short_spectrum(int64_t level, double pinch_length, double radius, hs_pinched_spectrum* out);
/* Writes up to capacity classes; *out_count receives the full class count.
 * Pass buffer = NULL to query the count. */
HS_API hs_status hs_spectrum_materialize(const hs_pinched_spectrum* spectrum, hs_geodesic_class* buffer,
                                         size_t capacity, size_t* out_count);
HS_API hs_status hs_plancherel_sum_classes(const hs_geodesic_class* classes, size_t count, double radius,
                                           hs_certified* out);
HS_API hs_status hs_plancherel_sum_pinched(const hs_pinched_spectrum* spectrum, hs_certified* out);
HS_API hs_status hs_plancherel_normalized(int64_t level, double pinch_length, double radius, hs_certified* out);
HS_API hs_status hs_bs_ratio(int64_t level, double pinch_length, double radius, double* out_ratio);
HS_API hs_status hs_harmonic_sum(uint64_t n, double* out);
HS_API hs_status hs_sandwich_bounds(int64_t level, double pinch_length, double radius, double* out_lower,
                                    double* out_upper);

/* ---- schedules ---------------------------------------------------------- */

typedef struct hs_schedule hs_schedule;
typedef struct hs_report hs_report;

/* Parse a schedule JSON document; errors name the offending field. */
HS_API hs_status hs_schedule_from_json(const char* json_text, hs_schedule** out);
/* rule: "reciprocal", "exponential", "superexponential" or "explicit".
 * pinch_values is only read for "explicit". */
HS_API hs_status hs_schedule_create(const char* name, const int64_t* levels, size_t level_count, const char* rule,
                                    double scale, const double* pinch_values, size_t pinch_count,
                                    hs_schedule** out);
HS_API void hs_schedule_free(hs_schedule* schedule);
HS_API size_t hs_schedule_size(const hs_schedule* schedule);
HS_API const char* hs_schedule_name(const hs_schedule* schedule);
HS_API const char* hs_schedule_rule(const hs_schedule* schedule);
HS_API hs_status hs_schedule_level_at(const hs_schedule* schedule, size_t index, int64_t* out_level);
HS_API hs_status hs_schedule_pinch_at(const hs_schedule* schedule, size_t index, double* out_pinch);

typedef struct hs_schedule_row {
  size_t j; /* 1-based */
  int64_t level;
  double pinch_length;
  char pinched_count[HS_DECIMAL_CAPACITY];
  char genus[HS_DECIMAL_CAPACITY];
  double volume;
  int valid;
  double bs_ratio;
  hs_certified plancherel_sum;
  hs_certified plancherel_normalized;
  int has_bounds;
  double lower; /* sandwich lower bound / volume */
  double upper; /* sandwich upper bound / volume */
  const char* note; /* owned by the report */
} hs_schedule_row;

typedef struct hs_verdict {
  int bs_vanishing;
  const char* plancherel_expected; /* vanishing | bounded_away_from_zero | divergent | inconclusive */
  const char* plancherel_observed;
  double tail_loglog_slope;
  size_t decreasing_from; /* 0 when the series never settles into decrease */
  size_t valid_rows;
} hs_verdict;

HS_API hs_status hs_classify_schedule(const hs_schedule* schedule, double radius, size_t j_max, unsigned workers,
                                      hs_report** out);
HS_API size_t hs_report_row_count(const hs_report* report);
HS_API hs_status hs_report_row(const hs_report* report, size_t index, hs_schedule_row* out);
HS_API hs_status hs_report_verdict(const hs_report* report, hs_verdict* out);
HS_API void hs_report_free(hs_report* report);

/* ---- trace formula ------------------------------------------------------ */

typedef struct hs_test_function hs_test_function;
typedef double (*hs_profile_fn)(double u, void* user_data);

HS_API hs_status hs_bump_create(double support, double amplitude, hs_test_function** out);
/* fn must vanish on [support, inf); user_data must outlive the handle. */
HS_API hs_status hs_test_function_create(hs_profile_fn fn, void* user_data, double support,
                                         hs_test_function** out);
HS_API void hs_test_function_free(hs_test_function* phi);
HS_API hs_status hs_test_function_eval(const hs_test_function* phi, double u, double* out);
HS_API hs_status hs_g_support(const hs_test_function* phi, double* out_radius);
HS_API hs_status hs_g_transform(const hs_test_function* phi, double r, double* out);
HS_API hs_status hs_h_transform(const hs_test_function* phi, double r, double* out);
HS_API hs_status hs_g_extrema(const hs_test_function* phi, double radius, double* out_min, double* out_max);

typedef struct hs_plancherel_result {
  double value;
  double truncation;
  double tail_bound;
  int derivative_order;
  double derivative_norm;
  double quadrature_error;
} hs_plancherel_result;

/* tail_tol <= 0 selects the default 1e-10. */
HS_API hs_status hs_plancherel_integral(const hs_test_function* phi, double tail_tol, hs_plancherel_result* out);
HS_API hs_status hs_geometric_side_classes(const hs_geodesic_class* classes, size_t count,
                                           const hs_test_function* phi, double* out);
HS_API hs_status hs_geometric_side_pinched(const hs_pinched_spectrum* spectrum, const hs_test_function* phi,
                                           hs_certified* out);

typedef struct hs_vanishing_row {
  size_t j;
  int64_t level;
  double pinch_length;
  int valid;
  hs_certified value; /* geometric side / volume */
} hs_vanishing_row;

/* Writes min(capacity, rows) rows; *out_count receives the row count. */
HS_API hs_status hs_vanishing_series(const hs_schedule* schedule, const hs_test_function* phi, size_t j_max,
                                     unsigned workers, hs_vanishing_row* buffer, size_t capacity,
                                     size_t* out_count);

#ifdef __cplusplus
}
#endif

#endif /* HYPSURF_H */
