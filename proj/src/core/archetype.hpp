#ifndef GDO_CORE_ARCHETYPE_HPP
#define GDO_CORE_ARCHETYPE_HPP

#include <array>
#include <string>
#include <vector>

#include "core/discipline.hpp"
#include "core/oscillator.hpp"

namespace gdo {

// One simulated device model: oscillator behavior plus controller tuning.
// The two built-in archetypes are calibration outputs fitted against the
// published characterization of the two bench devices; regenerate them
// with the `calibrate` command.
struct Archetype {
    std::string id;
    OscillatorParams osc;
    DisciplineParams discipline;
};

// Built-in archetypes "model-F" and "model-L". Any other id is treated as
// a path to an archetype config file by the resolver.
const std::vector<Archetype>& builtin_archetypes();

// Resolves an id against the built-ins, else loads the file at `id`.
// Throws InvalidArgument when neither works.
Archetype resolve_archetype(const std::string& id);

std::string archetype_to_json(const Archetype& a);
Archetype archetype_from_json(const std::string& text);
Archetype load_archetype_file(const std::string& path);
void save_archetype_file(const Archetype& a, const std::string& path);

// Published characterization values the calibration aims at. Holdover
// checkpoints are maximum 10 MHz time error in microseconds at the
// standard checkpoint times.
struct ModelTargets {
    double pps_pair_sigma = 0.0;          // s
    double pps_pair_mtie_30min = 0.0;     // s
    double tenmhz_pair_mtie_30min = 0.0;  // s
    std::array<double, 6> holdover_max_te_us{};
    double usability_lo_min = 0.0;
    double usability_hi_min = 0.0;
};

constexpr std::array<double, 6> kHoldoverCheckpointS = {900.0,   1800.0,  3600.0,
                                                        10800.0, 43200.0, 86400.0};

// nullptr when no targets are known for the id.
const ModelTargets* targets_for(const std::string& archetype_id);

} // namespace gdo

#endif
