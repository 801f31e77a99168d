#ifndef GDO_CORE_CALIBRATE_HPP
#define GDO_CORE_CALIBRATE_HPP

#include <string>

namespace gdo {

// Fits the tunable archetype parameters against the published
// characterization targets: holdover retrace by closed-form grid search
// over the checkpoint table, output jitters by short steady-state
// simulations, warm-up by cold-start simulations scored on usability
// time. Writes <out_dir>/<id>.cfg per fitted model ("model-F", "model-L"
// or "all") and returns a JSON report of fitted values and verification
// measurements.
std::string calibrate(const std::string& model, const std::string& out_dir);

} // namespace gdo

#endif
