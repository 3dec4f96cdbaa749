// Schema-versioned JSON file formats: correlations, count tables, functional
// coefficients, non-degeneracy profiles, measurement settings, and reports.
// Probabilities and counts are keyed by explicit input/outcome tuples.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entcert/bell.hpp"
#include "entcert/measurements.hpp"
#include "entcert/purity.hpp"
#include "entcert/types.hpp"

namespace entcert {

using json = nlohmann::ordered_json;

inline constexpr const char* kCorrelationSchema = "entcert/correlation-v1";
inline constexpr const char* kCountsSchema = "entcert/counts-v1";
inline constexpr const char* kFunctionalSchema = "entcert/functional-v1";
inline constexpr const char* kProfileSchema = "entcert/profile-v1";
inline constexpr const char* kSettingsSchema = "entcert/settings-v1";
inline constexpr const char* kReportSchema = "entcert/report-v1";

inline std::string default_data_dir() {
    if (const char* env = std::getenv("ENTCERT_DATA_DIR")) return env;
#ifdef ENTCERT_DEFAULT_DATA_DIR
    return ENTCERT_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex.
inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("file_digest: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

namespace detail {

inline json load_json(const std::string& path, const char* expected_schema) {
    std::ifstream in(path);
    if (!in) throw error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw error("malformed JSON in " + path + ": " + e.what());
    }
    if (!j.contains("schema") || !j["schema"].is_string())
        throw error(path + ": missing schema field");
    if (j["schema"].get<std::string>() != expected_schema)
        throw error(path + ": unsupported schema " + j["schema"].get<std::string>() +
                    " (expected " + expected_schema + ")");
    return j;
}

inline void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline std::vector<int> int_vec(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array())
        throw error(std::string("missing or non-array field: ") + field);
    return j[field].get<std::vector<int>>();
}

}  // namespace detail

// --- correlation files -----------------------------------------------------

inline json correlation_to_json(const Correlation& c) {
    json j;
    j["schema"] = kCorrelationSchema;
    j["dims"] = c.dim.dims;
    j["inputs_per_party"] = c.inputs_per_party;
    j["outcomes_per_party"] = c.outcomes_per_party;
    json entries = json::array();
    std::vector<int> xs(static_cast<std::size_t>(c.parties()), 0);
    do {
        std::vector<int> as(static_cast<std::size_t>(c.parties()), 0);
        do {
            json e;
            e["x"] = xs;
            e["a"] = as;
            e["p"] = c.p(xs, as);
            entries.push_back(std::move(e));
        } while (next_index(as, c.outcomes_per_party));
    } while (next_index(xs, c.inputs_per_party));
    j["entries"] = std::move(entries);
    return j;
}

inline void save_correlation(const Correlation& c, const std::string& path) {
    detail::save_json(correlation_to_json(c), path);
}

struct LoadedCorrelation {
    Correlation correlation;
    CorrelationWarnings warnings;
};

inline LoadedCorrelation load_correlation(const std::string& path, double norm_tol = 1e-6,
                                          double ns_warn = 1e-2) {
    const json j = detail::load_json(path, kCorrelationSchema);
    Correlation c(DimVector(detail::int_vec(j, "dims")), detail::int_vec(j, "inputs_per_party"),
                  detail::int_vec(j, "outcomes_per_party"));
    if (!j.contains("entries") || !j["entries"].is_array())
        throw error(path + ": missing entries array");
    for (const auto& e : j["entries"]) {
        const auto xs = e["x"].get<std::vector<int>>();
        const auto as = e["a"].get<std::vector<int>>();
        const double p = e["p"].get<double>();
        if (p < 0.0) throw error(path + ": negative probability at setting " +
                                 Correlation::tuple_str(xs));
        c.p(xs, as) = p;
    }
    LoadedCorrelation out{std::move(c), {}};
    out.warnings = out.correlation.validate(norm_tol, ns_warn);
    return out;
}

// --- count tables ------------------------------------------------------------

struct CountTable {
    DimVector dim;
    std::vector<int> inputs_per_party;
    std::vector<int> outcomes_per_party;
    std::vector<double> counts;  // nonnegative integers stored as doubles

    int parties() const { return dim.parties(); }

    double& n(const std::vector<int>& xs, const std::vector<int>& as) {
        return counts[static_cast<std::size_t>(offset(xs, as))];
    }
    double n(const std::vector<int>& xs, const std::vector<int>& as) const {
        return counts[static_cast<std::size_t>(offset(xs, as))];
    }
    int offset(const std::vector<int>& xs, const std::vector<int>& as) const {
        int oc = 1;
        for (int v : outcomes_per_party) oc *= v;
        return flat_index(xs, strides_for(inputs_per_party)) * oc +
               flat_index(as, strides_for(outcomes_per_party));
    }

    double setting_total(const std::vector<int>& xs) const {
        double t = 0.0;
        std::vector<int> as(static_cast<std::size_t>(parties()), 0);
        do {
            t += n(xs, as);
        } while (next_index(as, outcomes_per_party));
        return t;
    }

    void validate() const {
        for (double v : counts)
            if (v < 0.0 || v != std::floor(v))
                throw error("CountTable: counts must be nonnegative integers");
        std::vector<int> xs(static_cast<std::size_t>(parties()), 0);
        do {
            if (setting_total(xs) <= 0.0)
                throw error("CountTable: setting " + Correlation::tuple_str(xs) +
                            " has zero total counts");
        } while (next_index(xs, inputs_per_party));
    }

    // per-setting normalization
    Correlation normalize() const {
        Correlation c(dim, inputs_per_party, outcomes_per_party);
        std::vector<int> xs(static_cast<std::size_t>(parties()), 0);
        do {
            const double tot = setting_total(xs);
            std::vector<int> as(static_cast<std::size_t>(parties()), 0);
            do {
                c.p(xs, as) = n(xs, as) / tot;
            } while (next_index(as, outcomes_per_party));
        } while (next_index(xs, inputs_per_party));
        return c;
    }
};

inline json counts_to_json(const CountTable& t) {
    json j;
    j["schema"] = kCountsSchema;
    j["dims"] = t.dim.dims;
    j["inputs_per_party"] = t.inputs_per_party;
    j["outcomes_per_party"] = t.outcomes_per_party;
    json entries = json::array();
    std::vector<int> xs(static_cast<std::size_t>(t.parties()), 0);
    do {
        std::vector<int> as(static_cast<std::size_t>(t.parties()), 0);
        do {
            json e;
            e["x"] = xs;
            e["a"] = as;
            e["n"] = static_cast<std::int64_t>(t.n(xs, as));
            entries.push_back(std::move(e));
        } while (next_index(as, t.outcomes_per_party));
    } while (next_index(xs, t.inputs_per_party));
    j["entries"] = std::move(entries);
    return j;
}

inline void save_counts(const CountTable& t, const std::string& path) {
    detail::save_json(counts_to_json(t), path);
}

inline CountTable load_counts(const std::string& path) {
    const json j = detail::load_json(path, kCountsSchema);
    CountTable t;
    t.dim = DimVector(detail::int_vec(j, "dims"));
    if (t.dim.parties() < 2) throw error(path + ": counts need at least 2 parties");
    t.inputs_per_party = detail::int_vec(j, "inputs_per_party");
    t.outcomes_per_party = detail::int_vec(j, "outcomes_per_party");
    int nsettings = 1, noutcomes = 1;
    for (int v : t.inputs_per_party) nsettings *= v;
    for (int v : t.outcomes_per_party) noutcomes *= v;
    t.counts.assign(static_cast<std::size_t>(nsettings) * static_cast<std::size_t>(noutcomes), 0.0);
    for (const auto& e : j["entries"]) {
        const auto xs = e["x"].get<std::vector<int>>();
        const auto as = e["a"].get<std::vector<int>>();
        const double n = e["n"].get<double>();
        if (n < 0.0) throw error(path + ": negative count at setting " +
                                 Correlation::tuple_str(xs));
        t.n(xs, as) = n;
    }
    t.validate();
    return t;
}

// --- functional configuration ------------------------------------------------

inline json functional_to_json(const BellFunctional& f) {
    json j;
    j["schema"] = kFunctionalSchema;
    j["name"] = f.name;
    j["inputs_per_party"] = f.inputs_per_party;
    j["outcomes_per_party"] = f.outcomes_per_party;
    json coeffs = json::array();
    std::vector<int> xs(static_cast<std::size_t>(f.parties()), 0);
    do {
        std::vector<int> as(static_cast<std::size_t>(f.parties()), 0);
        do {
            const double v = f.c(xs, as);
            if (v != 0.0) {
                json e;
                e["x"] = xs;
                e["a"] = as;
                e["value"] = v;
                coeffs.push_back(std::move(e));
            }
        } while (next_index(as, f.outcomes_per_party));
    } while (next_index(xs, f.inputs_per_party));
    j["coefficients"] = std::move(coeffs);
    j["classical_bound"] = f.classical_bound;
    j["quantum_bound"] = {{"value", f.quantum_bound.value},
                          {"dims", f.quantum_bound.dims.dims},
                          {"provenance", f.quantum_bound.provenance}};
    j["normalization_note"] = f.normalization_note;
    return j;
}

inline void save_functional(const BellFunctional& f, const std::string& path) {
    detail::save_json(functional_to_json(f), path);
}

inline BellFunctional load_functional(const std::string& path) {
    const json j = detail::load_json(path, kFunctionalSchema);
    BellFunctional f;
    f.name = j["name"].get<std::string>();
    f.inputs_per_party = detail::int_vec(j, "inputs_per_party");
    f.outcomes_per_party = detail::int_vec(j, "outcomes_per_party");
    f.allocate();
    for (const auto& e : j["coefficients"]) {
        const auto xs = e["x"].get<std::vector<int>>();
        const auto as = e["a"].get<std::vector<int>>();
        f.c(xs, as) = e["value"].get<double>();
    }
    f.classical_bound = j["classical_bound"].get<double>();
    f.quantum_bound.value = j["quantum_bound"]["value"].get<double>();
    f.quantum_bound.dims = DimVector(j["quantum_bound"]["dims"].get<std::vector<int>>());
    f.quantum_bound.provenance = j["quantum_bound"]["provenance"].get<std::string>();
    f.normalization_note = j.value("normalization_note", std::string{});
    f.validate();
    return f;
}

// --- non-degeneracy profiles ---------------------------------------------------

inline json profile_to_json(const NondegeneracyProfile& p) {
    json j;
    j["schema"] = kProfileSchema;
    j["functional"] = p.functional;
    j["dims"] = p.dims.dims;
    j["c_q"] = p.c_q;
    json rows = json::array();
    for (const auto& r : p.rows) {
        json e;
        e["eps1"] = r.eps1;
        e["eps2"] = r.eps2;
        e["provenance"] = r.provenance;
        e["flagged"] = r.flagged;
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline void save_profile(const NondegeneracyProfile& p, const std::string& path) {
    detail::save_json(profile_to_json(p), path);
}

inline NondegeneracyProfile load_profile(const std::string& path) {
    const json j = detail::load_json(path, kProfileSchema);
    NondegeneracyProfile p;
    p.functional = j["functional"].get<std::string>();
    p.dims = DimVector(detail::int_vec(j, "dims"));
    p.c_q = j["c_q"].get<double>();
    for (const auto& e : j["rows"]) {
        ProfileRow r;
        r.eps1 = e["eps1"].get<double>();
        r.eps2 = e["eps2"].get<double>();
        r.provenance = e.value("provenance", std::string{});
        r.flagged = e.value("flagged", false);
        p.rows.push_back(std::move(r));
    }
    p.validate();
    return p;
}

// --- measurement settings -------------------------------------------------------

inline json settings_to_json(const SettingsSpec& s) {
    json j;
    j["schema"] = kSettingsSchema;
    j["name"] = s.name;
    j["dims"] = s.dim.dims;
    json parties = json::array();
    for (const auto& inputs : s.party_inputs) {
        json arr = json::array();
        for (const auto& spec : inputs) {
            json e;
            if (const auto* q = std::get_if<QutritPhaseSpec>(&spec)) {
                e["type"] = "qutrit_phases";
                e["alpha1"] = q->alpha1;
                e["alpha2"] = q->alpha2;
                e["conjugate_outcomes"] = q->conjugate_outcomes;
            } else if (const auto* p = std::get_if<PauliSpec>(&spec)) {
                e["type"] = "pauli";
                e["axis"] = (p->axis == PauliAxis::X) ? "X" : "Y";
            } else {
                e["type"] = "computational";
                e["dimension"] = std::get<ComputationalSpec>(spec).dimension;
            }
            arr.push_back(std::move(e));
        }
        parties.push_back(std::move(arr));
    }
    j["parties"] = std::move(parties);
    return j;
}

inline void save_settings(const SettingsSpec& s, const std::string& path) {
    detail::save_json(settings_to_json(s), path);
}

inline SettingsSpec load_settings(const std::string& path) {
    const json j = detail::load_json(path, kSettingsSchema);
    SettingsSpec s;
    s.name = j["name"].get<std::string>();
    s.dim = DimVector(detail::int_vec(j, "dims"));
    for (const auto& party : j["parties"]) {
        std::vector<InputSpec> inputs;
        for (const auto& e : party) {
            const std::string type = e["type"].get<std::string>();
            if (type == "qutrit_phases") {
                QutritPhaseSpec q;
                q.alpha1 = e["alpha1"].get<double>();
                q.alpha2 = e["alpha2"].get<double>();
                q.conjugate_outcomes = e.value("conjugate_outcomes", false);
                inputs.emplace_back(q);
            } else if (type == "pauli") {
                PauliSpec p;
                const std::string axis = e["axis"].get<std::string>();
                if (axis == "X")
                    p.axis = PauliAxis::X;
                else if (axis == "Y")
                    p.axis = PauliAxis::Y;
                else
                    throw error(path + ": unknown Pauli axis " + axis);
                inputs.emplace_back(p);
            } else if (type == "computational") {
                ComputationalSpec c;
                c.dimension = e["dimension"].get<int>();
                inputs.emplace_back(c);
            } else {
                throw error(path + ": unknown measurement type " + type);
            }
        }
        s.party_inputs.push_back(std::move(inputs));
    }
    if (s.party_inputs.size() != static_cast<std::size_t>(s.dim.parties()))
        throw error(path + ": party count mismatch between dims and parties");
    return s;
}

}  // namespace entcert
