#include "wgd/series.hpp"

#include "wgd/error.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace wgd {

Truncation Truncation::from_env() {
  Truncation t;
  if (const char* env = std::getenv("WGD_TRUNC_K")) {
    char* end = nullptr;
    long k = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && k >= 0 && k <= 400) t.max_degree = static_cast<int>(k);
  }
  return t;
}

Truncation Truncation::with_degree(int k) const {
  Truncation t = *this;
  t.max_degree = k;
  return t;
}

SeriesValue sum_series(const LayerFn& layer, const Truncation& trunc, SeriesShape shape, const std::string& what) {
  if (trunc.max_degree < 0) fail(ErrorKind::ParameterOutOfRange, what + ": truncation degree must be >= 0");
  if (!(trunc.tolerance > 0)) fail(ErrorKind::ParameterOutOfRange, what + ": tolerance must be positive");

  SeriesValue out;
  int small_run = 0;
  int grow_run = 0;
  double prev_mag = -1.0;
  double prev_prev_mag = -1.0;
  for (int k = 0; k <= trunc.max_degree; ++k) {
    std::optional<std::complex<double>> term = layer(k);
    if (!term) continue;
    if (!std::isfinite(term->real()) || !std::isfinite(term->imag())) {
      std::ostringstream os;
      os << what << ": layer " << k << " is not finite";
      fail(shape == SeriesShape::Alternating ? ErrorKind::AlternatingSeriesNotConverged
                                             : ErrorKind::DivergenceSuspected,
           os.str());
    }
    out.value += *term;
    double mag = std::abs(*term);
    out.terms_used = k + 1;
    out.last_layer_magnitude = mag;

    double threshold = trunc.policy == TailPolicy::Relative ? trunc.tolerance * std::abs(out.value) : trunc.tolerance;
    small_run = (mag <= threshold) ? small_run + 1 : 0;
    grow_run = (prev_mag >= 0 && mag > prev_mag && mag > threshold) ? grow_run + 1 : 0;

    bool shrinking = shape != SeriesShape::Alternating || (prev_mag >= 0 && prev_prev_mag >= 0 &&
                                                           mag <= prev_mag && prev_mag <= prev_prev_mag);
    if (small_run >= 3 && shrinking) {
      out.converged = true;
      return out;
    }
    if (2 * k > trunc.max_degree && grow_run >= 3) {
      std::ostringstream os;
      os << what << ": layer magnitude grew for three consecutive layers up to k = " << k << " (|layer| = " << mag
         << ")";
      fail(shape == SeriesShape::Alternating ? ErrorKind::AlternatingSeriesNotConverged
                                             : ErrorKind::DivergenceSuspected,
           os.str());
    }
    prev_prev_mag = prev_mag;
    prev_mag = mag;
  }
  std::ostringstream os;
  os << what << ": not converged after K = " << trunc.max_degree << " (last |layer| = " << out.last_layer_magnitude
     << ", |sum| = " << std::abs(out.value) << ")";
  fail(shape == SeriesShape::Alternating ? ErrorKind::AlternatingSeriesNotConverged : ErrorKind::TruncationExceeded,
       os.str());
}

}  // namespace wgd
