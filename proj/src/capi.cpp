#include "hypsurf/hypsurf.h"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "congruence.hpp"
#include "errors.hpp"
#include "hyperbolic.hpp"
#include "schedule_json.hpp"
#include "sequence.hpp"
#include "trace_formula.hpp"

struct hs_schedule {
  hypsurf::sequence::Schedule schedule;
};

struct hs_report {
  hypsurf::sequence::ScheduleReport report;
};

struct hs_test_function {
  hypsurf::trace::TransformProfile profile;
};

namespace {

using namespace hypsurf;

thread_local std::string last_error;

hs_status fail(hs_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
hs_status guarded(Body&& body) noexcept {
  try {
    last_error.clear();
    body();
    return HS_OK;
  } catch (const NotHyperbolic& e) {
    return fail(HS_ERR_NOT_HYPERBOLIC, e.what());
  } catch (const DomainError& e) {
    return fail(HS_ERR_DOMAIN, e.what());
  } catch (const ValidityError& e) {
    return fail(HS_ERR_VALIDITY, e.what());
  } catch (const NumericsError& e) {
    return fail(HS_ERR_NUMERICS, e.what());
  } catch (const InternalInvariantViolation& e) {
    return fail(HS_ERR_INTERNAL, e.what());
  } catch (const std::length_error& e) {
    return fail(HS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HS_ERR_INTERNAL, "unknown exception");
  }
}

#define HS_REQUIRE(ptr)                                                       \
  do {                                                                        \
    if ((ptr) == nullptr) return fail(HS_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

void copy_decimal(const congruence::BigInt& value, char (&out)[HS_DECIMAL_CAPACITY]) {
  const std::string s = value.str();
  if (s.size() >= HS_DECIMAL_CAPACITY) throw DomainError("integer does not fit the decimal buffer");
  std::memcpy(out, s.c_str(), s.size() + 1);
}

hs_certified to_c(const Certified& c) { return {c.value, c.radius}; }

sequence::PinchedSpectrum from_c(const hs_pinched_spectrum& s) {
  return {s.primitive_length, s.multiplicity, s.count};
}

std::span<const sequence::GeodesicClass> classes_view(const hs_geodesic_class* classes, size_t count) {
  static_assert(sizeof(hs_geodesic_class) == sizeof(sequence::GeodesicClass));
  static_assert(offsetof(hs_geodesic_class, multiplicity) == offsetof(sequence::GeodesicClass, multiplicity));
  return {reinterpret_cast<const sequence::GeodesicClass*>(classes), count};
}

}  // namespace

extern "C" {

const char* hs_version(void) { return "0.1.0"; }

const char* hs_status_name(hs_status status) {
  switch (status) {
    case HS_OK: return "ok";
    case HS_ERR_DOMAIN: return "domain_error";
    case HS_ERR_NOT_HYPERBOLIC: return "not_hyperbolic";
    case HS_ERR_VALIDITY: return "validity_error";
    case HS_ERR_NUMERICS: return "numerics_error";
    case HS_ERR_INTERNAL: return "internal_error";
    case HS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HS_ERR_NOT_FOUND: return "not_found";
  }
  return "unknown";
}

const char* hs_last_error_message(void) { return last_error.c_str(); }

// ---- hyperbolic trigonometry

hs_status hs_length_from_trace(double abs_trace, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::length_from_trace(abs_trace).value(); });
}

hs_status hs_collar_width(double length, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::collar_width(hyp::GeodesicLength(length)).value(); });
}

hs_status hs_collar_width_at_radius(double length, double radius, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::collar_width_at_radius(hyp::GeodesicLength(length), radius).value(); });
}

hs_status hs_cylinder_volume(double length, double radius, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::cylinder_volume(hyp::GeodesicLength(length), radius); });
}

hs_status hs_thin_part_upper_bound(uint64_t simple_count, double radius, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::thin_part_upper_bound(simple_count, radius); });
}

hs_status hs_injrad_from_collar(double length, double lambda, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::injrad_from_collar(hyp::GeodesicLength(length), lambda); });
}

hs_status hs_crossing_length_bound(double pinch_length, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::crossing_length_bound(hyp::GeodesicLength(pinch_length)).value(); });
}

hs_status hs_distortion_bound(double eps, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = hyp::distortion_bound(eps); });
}

// ---- congruence

hs_status hs_index_d(int64_t level, char* buffer, size_t capacity) {
  HS_REQUIRE(buffer);
  return guarded([&] {
    const std::string s = congruence::index_d(level).str();
    if (s.size() + 1 > capacity) throw std::length_error("buffer too small for index");
    std::memcpy(buffer, s.c_str(), s.size() + 1);
  });
}

hs_status hs_surface_data_get(int64_t level, hs_surface_data* out) {
  HS_REQUIRE(out);
  return guarded([&] {
    const auto data = congruence::surface_data(level);
    out->level = data.level;
    copy_decimal(data.index_d, out->index_d);
    copy_decimal(data.genus, out->genus);
    copy_decimal(data.cusps, out->cusps);
    out->systole = data.systole.value();
    out->area = data.area;
  });
}

hs_status hs_is_in_gamma(const hs_matrix* m, int64_t level, int* out) {
  HS_REQUIRE(m);
  HS_REQUIRE(out);
  return guarded([&] { *out = congruence::is_in_gamma({m->a, m->b, m->c, m->d}, level) ? 1 : 0; });
}

hs_status hs_witness_matrix(int64_t level, hs_matrix* out) {
  HS_REQUIRE(out);
  return guarded([&] {
    const auto w = congruence::witness_matrix(level);
    *out = {w.a(), w.b(), w.c(), w.d()};
  });
}

hs_status hs_min_hyperbolic_trace(int64_t level, int64_t entry_bound, unsigned workers, int64_t* out) {
  HS_REQUIRE(out);
  bool found = false;
  const hs_status status = guarded([&] {
    const auto best = congruence::min_hyperbolic_trace(level, entry_bound, workers);
    if (best) {
      *out = best->convert_to<int64_t>();
      found = true;
    }
  });
  if (status != HS_OK) return status;
  if (!found) return fail(HS_ERR_NOT_FOUND, "no hyperbolic element of Gamma(N) inside the search box");
  return HS_OK;
}

double hs_projected_candidates(int64_t level, int64_t entry_bound) {
  if (level < 1) return 0.0;
  return congruence::projected_candidates(level, entry_bound);
}

// ---- pinched surfaces

hs_status hs_compacted_surface_get(int64_t level, double pinch_length, hs_compacted_surface* out) {
  HS_REQUIRE(out);
  return guarded([&] {
    const auto s = sequence::compacted_surface(level, pinch_length);
    out->level = s.level;
    out->pinch_length = s.pinch_length;
    copy_decimal(s.pinched_count, out->pinched_count);
    copy_decimal(s.genus, out->genus);
    out->volume = s.volume;
  });
}

hs_status hs_other_geodesic_floor(int64_t level, double pinch_length, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = sequence::other_geodesic_floor(level, pinch_length); });
}

hs_status hs_validity_check(int64_t level, double pinch_length, double radius, int* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = sequence::validity_check(level, pinch_length, radius) ? 1 : 0; });
}

hs_status hs_short_spectrum(int64_t level, double pinch_length, double radius, hs_pinched_spectrum* out) {
  HS_REQUIRE(out);
  return guarded([&] {
    const auto s = sequence::short_spectrum(level, pinch_length, radius);
    *out = {s.primitive_length, s.multiplicity, s.count};
  });
}

hs_status hs_spectrum_materialize(const hs_pinched_spectrum* spectrum, hs_geodesic_class* buffer, size_t capacity,
                                  size_t* out_count) {
  HS_REQUIRE(spectrum);
  HS_REQUIRE(out_count);
  return guarded([&] {
    const auto classes = from_c(*spectrum).materialize();
    *out_count = classes.size();
    if (buffer == nullptr) return;
    if (capacity < classes.size()) throw std::length_error("buffer too small for the spectrum");
    for (size_t i = 0; i < classes.size(); ++i) {
      buffer[i] = {classes[i].length, classes[i].primitive_length, classes[i].multiplicity};
    }
  });
}

hs_status hs_plancherel_sum_classes(const hs_geodesic_class* classes, size_t count, double radius,
                                    hs_certified* out) {
  HS_REQUIRE(out);
  if (count > 0) HS_REQUIRE(classes);
  return guarded([&] { *out = to_c(sequence::plancherel_sum(classes_view(classes, count), radius)); });
}

hs_status hs_plancherel_sum_pinched(const hs_pinched_spectrum* spectrum, hs_certified* out) {
  HS_REQUIRE(spectrum);
  HS_REQUIRE(out);
  return guarded([&] { *out = to_c(sequence::plancherel_sum(from_c(*spectrum))); });
}

hs_status hs_plancherel_normalized(int64_t level, double pinch_length, double radius, hs_certified* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = to_c(sequence::plancherel_normalized(level, pinch_length, radius)); });
}

hs_status hs_bs_ratio(int64_t level, double pinch_length, double radius, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = sequence::bs_ratio(level, pinch_length, radius); });
}

hs_status hs_harmonic_sum(uint64_t n, double* out) {
  HS_REQUIRE(out);
  return guarded([&] { *out = sequence::harmonic_sum(n); });
}

hs_status hs_sandwich_bounds(int64_t level, double pinch_length, double radius, double* lower, double* upper) {
  HS_REQUIRE(lower);
  HS_REQUIRE(upper);
  return guarded([&] {
    const auto b = sequence::sandwich_bounds(level, pinch_length, radius);
    *lower = b.lower;
    *upper = b.upper;
  });
}

// ---- schedules

hs_status hs_schedule_from_json(const char* json_text, hs_schedule** out) {
  HS_REQUIRE(json_text);
  HS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new hs_schedule{sequence::parse_schedule_json(json_text)}; });
}

hs_status hs_schedule_create(const char* name, const int64_t* levels, size_t level_count, const char* rule,
                             double scale, const double* pinch_values, size_t pinch_count, hs_schedule** out) {
  HS_REQUIRE(name);
  HS_REQUIRE(rule);
  HS_REQUIRE(out);
  if (level_count > 0) HS_REQUIRE(levels);
  *out = nullptr;
  return guarded([&] {
    const auto parsed = sequence::pinch_rule_from_string(rule);
    if (!parsed) throw DomainError(std::string("unknown pinch rule '") + rule + "'");
    std::vector<double> values;
    if (*parsed == sequence::PinchRule::kExplicit) {
      if (pinch_count > 0 && pinch_values == nullptr) throw DomainError("pinch_values is null");
      values.assign(pinch_values, pinch_values + pinch_count);
    }
    *out = new hs_schedule{sequence::Schedule(name, std::vector<std::int64_t>(levels, levels + level_count), *parsed,
                                              scale, std::move(values))};
  });
}

void hs_schedule_free(hs_schedule* schedule) { delete schedule; }

size_t hs_schedule_size(const hs_schedule* schedule) { return schedule ? schedule->schedule.size() : 0; }

const char* hs_schedule_name(const hs_schedule* schedule) {
  return schedule ? schedule->schedule.name().c_str() : "";
}

const char* hs_schedule_rule(const hs_schedule* schedule) {
  return schedule ? sequence::to_string(schedule->schedule.rule()) : "";
}

hs_status hs_schedule_level_at(const hs_schedule* schedule, size_t index, int64_t* out) {
  HS_REQUIRE(schedule);
  HS_REQUIRE(out);
  if (index >= schedule->schedule.size()) return fail(HS_ERR_DOMAIN, "schedule index out of range");
  *out = schedule->schedule.levels()[index];
  return HS_OK;
}

hs_status hs_schedule_pinch_at(const hs_schedule* schedule, size_t index, double* out) {
  HS_REQUIRE(schedule);
  HS_REQUIRE(out);
  return guarded([&] { *out = schedule->schedule.pinch_at(index); });
}

hs_status hs_classify_schedule(const hs_schedule* schedule, double radius, size_t j_max, unsigned workers,
                               hs_report** out) {
  HS_REQUIRE(schedule);
  HS_REQUIRE(out);
  *out = nullptr;
  return guarded(
      [&] { *out = new hs_report{sequence::classify_schedule(schedule->schedule, radius, j_max, workers)}; });
}

size_t hs_report_row_count(const hs_report* report) { return report ? report->report.rows.size() : 0; }

hs_status hs_report_row(const hs_report* report, size_t index, hs_schedule_row* out) {
  HS_REQUIRE(report);
  HS_REQUIRE(out);
  if (index >= report->report.rows.size()) return fail(HS_ERR_DOMAIN, "report row index out of range");
  return guarded([&] {
    const auto& row = report->report.rows[index];
    *out = hs_schedule_row{};
    out->j = row.j;
    out->level = row.level;
    out->pinch_length = row.pinch_length;
    copy_decimal(row.pinched_count, out->pinched_count);
    copy_decimal(row.genus, out->genus);
    out->volume = row.volume;
    out->valid = row.valid ? 1 : 0;
    out->bs_ratio = row.bs_ratio;
    out->plancherel_sum = to_c(row.plancherel_sum);
    out->plancherel_normalized = to_c(row.plancherel_normalized);
    out->has_bounds = row.normalized_bounds ? 1 : 0;
    if (row.normalized_bounds) {
      out->lower = row.normalized_bounds->lower;
      out->upper = row.normalized_bounds->upper;
    }
    out->note = row.note.c_str();
  });
}

hs_status hs_report_verdict(const hs_report* report, hs_verdict* out) {
  HS_REQUIRE(report);
  HS_REQUIRE(out);
  const auto& v = report->report.verdict;
  out->bs_vanishing = v.bs_vanishing ? 1 : 0;
  out->plancherel_expected = sequence::to_string(v.plancherel_expected);
  out->plancherel_observed = sequence::to_string(v.plancherel_observed);
  out->tail_loglog_slope = v.tail_loglog_slope;
  out->decreasing_from = v.decreasing_from.value_or(0);
  out->valid_rows = v.valid_rows;
  return HS_OK;
}

void hs_report_free(hs_report* report) { delete report; }

// ---- trace formula

hs_status hs_bump_create(double support, double amplitude, hs_test_function** out) {
  HS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new hs_test_function{trace::TransformProfile(trace::bump(support, amplitude))}; });
}

hs_status hs_test_function_create(hs_profile_fn fn, void* user_data, double support, hs_test_function** out) {
  HS_REQUIRE(fn);
  HS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    trace::TestFunction phi([fn, user_data](double u) { return fn(u, user_data); }, support);
    phi.verify();
    *out = new hs_test_function{trace::TransformProfile(std::move(phi))};
  });
}

void hs_test_function_free(hs_test_function* phi) { delete phi; }

hs_status hs_test_function_eval(const hs_test_function* phi, double u, double* out) {
  HS_REQUIRE(phi);
  HS_REQUIRE(out);
  return guarded([&] { *out = phi->profile.phi()(u); });
}

hs_status hs_g_support(const hs_test_function* phi, double* out) {
  HS_REQUIRE(phi);
  HS_REQUIRE(out);
  *out = phi->profile.g_support();
  return HS_OK;
}

hs_status hs_g_transform(const hs_test_function* phi, double r, double* out) {
  HS_REQUIRE(phi);
  HS_REQUIRE(out);
  return guarded([&] { *out = trace::g_transform(phi->profile.phi(), r); });
}

hs_status hs_h_transform(const hs_test_function* phi, double r, double* out) {
  HS_REQUIRE(phi);
  HS_REQUIRE(out);
  return guarded([&] { *out = trace::h_transform(phi->profile, r); });
}

hs_status hs_g_extrema(const hs_test_function* phi, double radius, double* out_min, double* out_max) {
  HS_REQUIRE(phi);
  HS_REQUIRE(out_min);
  HS_REQUIRE(out_max);
  return guarded([&] {
    if (!(radius >= 0.0)) throw DomainError("radius must be nonnegative");
    *out_min = trace::g_minimum(phi->profile, radius);
    *out_max = trace::g_maximum(phi->profile, radius);
  });
}

hs_status hs_plancherel_integral(const hs_test_function* phi, double tail_tol, hs_plancherel_result* out) {
  HS_REQUIRE(phi);
  HS_REQUIRE(out);
  return guarded([&] {
    trace::PlancherelOptions opts;
    if (tail_tol > 0.0) opts.tail_tol = tail_tol;
    const auto r = trace::plancherel_integral(phi->profile, opts);
    *out = {r.value, r.truncation, r.tail_bound, r.derivative_order, r.derivative_norm, r.quadrature_error};
  });
}

hs_status hs_geometric_side_classes(const hs_geodesic_class* classes, size_t count, const hs_test_function* phi,
                                    double* out) {
  HS_REQUIRE(phi);
  HS_REQUIRE(out);
  if (count > 0) HS_REQUIRE(classes);
  return guarded([&] { *out = trace::geometric_side(classes_view(classes, count), phi->profile); });
}

hs_status hs_geometric_side_pinched(const hs_pinched_spectrum* spectrum, const hs_test_function* phi,
                                    hs_certified* out) {
  HS_REQUIRE(spectrum);
  HS_REQUIRE(phi);
  HS_REQUIRE(out);
  return guarded([&] { *out = to_c(trace::geometric_side(from_c(*spectrum), phi->profile)); });
}

hs_status hs_vanishing_series(const hs_schedule* schedule, const hs_test_function* phi, size_t j_max,
                              unsigned workers, hs_vanishing_row* buffer, size_t capacity, size_t* out_count) {
  HS_REQUIRE(schedule);
  HS_REQUIRE(phi);
  HS_REQUIRE(out_count);
  return guarded([&] {
    const auto rows = trace::vanishing_series(schedule->schedule, phi->profile, j_max, workers);
    *out_count = rows.size();
    if (buffer == nullptr) return;
    for (size_t i = 0; i < rows.size() && i < capacity; ++i) {
      buffer[i] = {rows[i].j, rows[i].level, rows[i].pinch_length, rows[i].valid ? 1 : 0, to_c(rows[i].value)};
    }
  });
}

}  // extern "C"
