#ifndef GDO_CORE_CSV_HPP
#define GDO_CORE_CSV_HPP

#include <string>

#include "core/metrics.hpp"
#include "core/series.hpp"

namespace gdo {

// Series files: one comment header line `# tau0=<v> t0=<v> label=<v>`,
// a `t_s,value_s` column header, then one row per sample. Missing samples
// round-trip as `nan`.
void write_series_csv(const TimeErrorSeries& series, const std::string& path);
TimeErrorSeries read_series_csv(const std::string& path);

// Curve files: `tau_s,adev,tie_rms_s,mtie_s`, `nan` where a metric's
// length precondition removed the point.
void write_curves_csv(const StabilityCurves& curves, const std::string& path);

std::string format_double(double v);

} // namespace gdo

#endif
