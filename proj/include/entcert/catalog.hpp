// Functional catalog: resolves the built-in functionals, the tailored
// functional shipped as configuration, and each functional's canonical
// measurement settings.
#pragma once

#include <cmath>
#include <string>

#include "entcert/bell.hpp"
#include "entcert/io.hpp"
#include "entcert/seesaw.hpp"

namespace entcert {

// Loads the maximally-entangled-state-tailored functional from configuration
// and validates its declared bounds: the classical bound against exhaustive
// enumeration (1e-6) and the quantum bound against the see-saw oracle seeded
// from the canonical settings (1e-3).
inline BellFunctional tailored3(const std::string& data_dir = default_data_dir()) {
    BellFunctional f = load_functional(data_dir + "/functionals/tailored3.json");
    const double cl = classical_bound_bruteforce(f);
    if (std::abs(cl - f.classical_bound) > 1e-6)
        throw error("tailored3: declared classical bound " + std::to_string(f.classical_bound) +
                    " disagrees with brute-force value " + std::to_string(cl));
    const SettingsSpec spec = load_settings(data_dir + "/settings/tailored3_canonical.json");
    MeasurementSet canonical = spec.realize();
    // drop extra recorded settings (e.g. the computational input) so arities
    // match the functional
    for (std::size_t i = 0; i < canonical.ops.size(); ++i)
        canonical.ops[i].resize(static_cast<std::size_t>(
            f.inputs_per_party[i]));
    SeesawOptions opts;
    opts.restarts = 1;  // validation run: start from the canonical settings
    opts.max_iters = 60;
    const auto res = seesaw_max(f, f.quantum_bound.dims, opts, nullptr, &canonical);
    if (std::abs(res.value - f.quantum_bound.value) > 1e-3)
        throw error("tailored3: declared quantum bound " + std::to_string(f.quantum_bound.value) +
                    " disagrees with see-saw value " + std::to_string(res.value));
    return f;
}

inline BellFunctional functional_by_name(const std::string& name,
                                         const std::string& data_dir = default_data_dir()) {
    if (name == "cglmp3") return cglmp3();
    if (name == "mabk3") return mabk3();
    if (name == "tailored3") return tailored3(data_dir);
    // otherwise treat the name as a path to a functional config
    return load_functional(name);
}

// Canonical settings for a functional, as recorded in the data directory.
// These include every input the sweep records (the computational-basis input
// participates in F-hat but not in the Bell expression).
inline SettingsSpec canonical_settings(const std::string& functional_name,
                                       const std::string& data_dir = default_data_dir()) {
    if (functional_name == "cglmp3")
        return load_settings(data_dir + "/settings/cglmp3_canonical.json");
    if (functional_name == "tailored3")
        return load_settings(data_dir + "/settings/tailored3_canonical.json");
    if (functional_name == "mabk3") return ghz_xy_settings();
    throw error("canonical_settings: no canonical settings recorded for " + functional_name);
}

}  // namespace entcert
