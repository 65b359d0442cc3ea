#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "wco/estimators.hpp"
#include "wco/scenario.hpp"
#include "wco/version.hpp"

namespace wco {

using json = nlohmann::ordered_json;

inline json scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["u"] = sc.u.to_string();
    j["phi"] = sc.phi.to_string();
    j["p"] = sc.p.str();
    j["q"] = sc.q.str();
    return j;
}

inline json settings_to_json(const Settings& s) {
    json j;
    j["grid"] = s.grid;
    j["kernel_grid"] = s.kernel_grid;
    j["ring_k_min"] = s.ring.k_min;
    j["ring_k_max"] = s.ring.k_max;
    j["ring_angles"] = s.ring.angles;
    j["mphi_k_min"] = s.mphi_k_min;
    j["mphi_k_max"] = s.mphi_k_max;
    j["eps_k_min"] = s.eps_k_min;
    j["eps_k_max"] = s.eps_k_max;
    j["alpha"] = s.alpha;
    j["depth"] = s.depth;
    j["boundary_threshold"] = s.boundary_threshold;
    j["trunc_degree"] = s.trunc_degree;
    j["trunc_schedule"] = s.trunc_schedule;
    j["compact_threshold"] = s.compact_threshold;
    j["sharper_h2_comp_norm"] = s.sharper_h2_comp_norm;
    return j;
}

inline json bracket_to_json(const EssNormBracket& b) {
    json j;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["lower_const"] = b.lower_const;
    j["upper_const"] = b.upper_const;
    j["effective"] = {b.effective_lower(), b.effective_upper()};
    j["regime"] = b.regime;
    j["compact"] = b.compact;
    return j;
}

inline json carleson_to_json(const CarlesonCertificate& c) {
    json j;
    j["is_carleson"] = c.is_carleson;
    j["regime"] = c.regime;
    j["boundary_mass"] = c.boundary_mass;
    j["ratio_sup"] = c.ratio_sup_value;
    j["ratio_sup_refined"] = c.ratio_sup_refined;
    j["g_ls_norm"] = c.g_ls_norm;
    j["g_ls_norm_refined"] = c.g_ls_norm_refined;
    j["density_ls_norm"] = c.density_ls_norm;
    j["density_ls_norm_refined"] = c.density_ls_norm_refined;
    j["s"] = c.s;
    j["alpha"] = c.alpha;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline json diagnostics_to_json(const Diagnostics& d) {
    json j;
    if (!d.rings.empty()) {
        json rings = json::array();
        for (const auto& r : d.rings)
            rings.push_back({{"k", r.k},
                             {"radius", r.radius},
                             {"max_integral", r.max_integral},
                             {"grid", r.grid}});
        j["rings"] = rings;
    }
    auto eps_trace = [](const std::vector<EpsTracePoint>& tr) {
        json arr = json::array();
        for (const auto& t : tr)
            arr.push_back({{"k", t.k}, {"eps", t.eps}, {"value", t.value}});
        return arr;
    };
    if (!d.mphi.empty()) j["mphi"] = eps_trace(d.mphi);
    if (!d.extremal.empty()) j["extremal"] = eps_trace(d.extremal);
    auto n_trace = [](const std::vector<std::pair<std::size_t, double>>& tr) {
        json arr = json::array();
        for (const auto& [n, v] : tr) arr.push_back({{"N", n}, {"value", v}});
        return arr;
    };
    if (!d.trunc_upper.empty()) j["trunc_upper"] = n_trace(d.trunc_upper);
    if (!d.trunc_lower.empty()) j["trunc_lower"] = n_trace(d.trunc_lower);
    if (!d.power_norms.empty()) {
        json arr = json::array();
        for (const auto& [n, v] : d.power_norms)
            arr.push_back({{"n", n}, {"value", v}});
        j["power_norms"] = arr;
    }
    return j;
}

inline json report_to_json(const AnalysisReport& rep, const Scenario& sc,
                           const std::string& command) {
    json j;
    j["tool"] = {{"name", kToolName}, {"version", kVersion}};
    j["command"] = command;
    j["scenario"] = scenario_to_json(sc);
    j["regime"] = rep.regime;
    j["status"] = rep.status;
    if (!rep.status_detail.empty()) j["status_detail"] = rep.status_detail;
    j["bounded"] = rep.bounded;
    j["boundedness_sup"] = rep.boundedness_sup;
    if (rep.bracket) j["essnorm"] = bracket_to_json(*rep.bracket);
    if (rep.carleson) j["carleson"] = carleson_to_json(*rep.carleson);
    if (rep.trunc_upper) {
        j["truncation"] = {{"upper", rep.trunc_upper->estimate},
                           {"lower", rep.trunc_lower->estimate},
                           {"tail_bound", rep.trunc_tail}};
    }
    j["diagnostics"] = diagnostics_to_json(rep.diag);
    j["grid"] = settings_to_json(sc.settings);
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

/// CSV traces (ring radius -> value, eps -> value, N -> value) for plotting.
inline void report_to_csv(const AnalysisReport& rep, std::ostream& os) {
    os << "trace,index,param,value\n";
    for (const auto& r : rep.diag.rings)
        os << "ring," << r.k << ',' << r.radius << ',' << r.max_integral << '\n';
    for (const auto& t : rep.diag.mphi)
        os << "mphi," << t.k << ',' << t.eps << ',' << t.value << '\n';
    for (const auto& t : rep.diag.extremal)
        os << "extremal," << t.k << ',' << t.eps << ',' << t.value << '\n';
    for (const auto& [n, v] : rep.diag.trunc_upper)
        os << "trunc_upper," << n << ',' << n << ',' << v << '\n';
    for (const auto& [n, v] : rep.diag.trunc_lower)
        os << "trunc_lower," << n << ',' << n << ',' << v << '\n';
    for (const auto& [n, v] : rep.diag.power_norms)
        os << "power_norm," << n << ',' << n << ',' << v << '\n';
}

} // namespace wco
