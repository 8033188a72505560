#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fairqa/driver.hpp"
#include "fairqa/groundset.hpp"
#include "fairqa/io.hpp"
#include "fairqa/metrics.hpp"
#include "fairqa/model.hpp"
#include "fairqa/oracle.hpp"
#include "fairqa/perturb.hpp"

namespace fairqa {

enum class OracleChoice { None, Quasistatic, Schrodinger };

struct AnalysisOptions {
    OrderPolicy order = OrderPolicy::Auto;
    OracleChoice oracle = OracleChoice::None;
    OracleSettings oracle_settings;
    std::optional<double> tol;
    std::string driver_label = "custom";
};

/// One point of the pipeline model -> manifold -> graph -> metrics (-> oracle).
struct Analysis {
    IsingModel model;
    DriverSpec driver;
    AnalysisOptions options;
    GroundManifold manifold;
    SolutionGraph graph;
    FairnessReport report;
    std::optional<OracleResult> oracle;
    std::optional<std::pair<std::string, double>> sweep_point;
};

inline Analysis analyze(const IsingModel& model, const DriverSpec& V, const AnalysisOptions& opt = {},
                        std::optional<GroundManifold> manifold = std::nullopt) {
    if (V.num_spins() != model.num_spins())
        throw ConfigError("driver acts on " + std::to_string(V.num_spins()) + " spins, model has " +
                          std::to_string(model.num_spins()));
    Analysis a;
    a.model = model.is_template() ? model.substitute({}) : model;
    a.driver = V;
    a.options = opt;
    if (manifold) {
        a.manifold = std::move(*manifold);
    } else {
        EnumerateOptions eo;
        eo.tol = opt.tol;
        a.manifold = enumerate(a.model, eo);
    }
    a.graph = resolve(a.model, a.manifold, V, opt.order);
    a.report = predicted_probabilities(a.graph);
    if (opt.oracle == OracleChoice::Quasistatic) a.oracle = quasistatic(a.model, V, a.manifold, opt.oracle_settings);
    if (opt.oracle == OracleChoice::Schrodinger) a.oracle = adiabatic(a.model, V, a.manifold, opt.oracle_settings);
    return a;
}

struct SweepSpec {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;

    double value(int k) const { return steps == 1 ? start : start + (stop - start) * k / (steps - 1.0); }

    /// "name=start:stop:steps"
    static SweepSpec parse(const std::string& text) {
        SweepSpec s;
        const auto eq = text.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("sweep must look like name=start:stop:steps");
        s.name = text.substr(0, eq);
        std::istringstream in(text.substr(eq + 1));
        char c1 = 0, c2 = 0;
        if (!(in >> s.start >> c1 >> s.stop >> c2 >> s.steps) || c1 != ':' || c2 != ':' || !in.eof())
            throw ConfigError("sweep must look like name=start:stop:steps, got '" + text + "'");
        if (s.steps < 2) throw ConfigError("a sweep needs at least 2 steps");
        return s;
    }
};

/// One analysis per sweep value, run on a small worker pool; results are in
/// sweep order whatever the scheduling.
inline std::vector<Analysis> sweep(const IsingModel& model_template, const DriverSpec& V, const SweepSpec& spec,
                                   const AnalysisOptions& opt = {}, unsigned threads = 0) {
    if (!model_template.parameter_names().count(spec.name))
        throw ConfigError("sweep parameter '" + spec.name + "' does not appear in the model");
    std::vector<Analysis> out(static_cast<std::size_t>(spec.steps));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    auto work = [&] {
        for (int k = next++; k < spec.steps && !failed; k = next++) {
            try {
                const double v = spec.value(k);
                out[k] = analyze(model_template.substitute({{spec.name, v}}), V, opt);
                out[k].sweep_point = {spec.name, v};
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    unsigned workers = threads ? threads : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.steps));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline const char* to_string(OracleChoice c) {
    switch (c) {
    case OracleChoice::Quasistatic: return "quasistatic";
    case OracleChoice::Schrodinger: return "schrodinger";
    default: return "none";
    }
}

inline const char* to_string(OrderPolicy p) {
    switch (p) {
    case OrderPolicy::First: return "first";
    case OrderPolicy::Second: return "second";
    default: return "auto";
    }
}

namespace io {

inline json oracle_to_json(const OracleResult& r) {
    json j = {{"method", to_string(r.method)},
              {"probs", r.probs},
              {"normalized", r.normalized()},
              {"residual_mass", r.residual_mass}};
    if (r.method == OracleMethod::Quasistatic) {
        j["settings"] = {{"lambda", r.settings.lambda},
                         {"residual_tol", r.settings.residual_tol},
                         {"filter_degree", r.settings.filter_degree}};
        j["diagnostics"] = {{"bottom_eigenvalues", r.bottom_eigenvalues},
                            {"degeneracy", r.degeneracy},
                            {"max_residual", r.max_residual},
                            {"cycles", r.cycles}};
    } else {
        j["settings"] = {{"tau", r.settings.tau}, {"dt", r.settings.dt}, {"max_step_drift", r.settings.max_step_drift}};
        j["diagnostics"] = {{"max_norm_drift", r.max_norm_drift}, {"steps", r.steps}};
    }
    return j;
}

inline json report_to_json(const FairnessReport& r) {
    json states = json::array();
    for (const auto& s : r.states) {
        json js = {{"state", to_string(s.state, r.num_spins)},
                   {"component", s.component},
                   {"c_deg", s.degree},
                   {"c_eig", s.eigen},
                   {"c_eig_unit", s.eigen_unit},
                   {"p", s.p}};
        js["ef"] = s.ef ? json(*s.ef) : json(nullptr);
        js["ref"] = s.ref ? json(*s.ref) : json(nullptr);
        states.push_back(js);
    }
    json comps = json::array();
    for (const auto& c : r.components)
        comps.push_back({{"members", c.members}, {"lambda1", c.lambda1}, {"surviving", c.surviving}});
    return {{"order", to_string(r.order)},
            {"num_spins", r.num_spins},
            {"e0", r.e0},
            {"tol", r.tol},
            {"states", states},
            {"components", comps},
            {"tv_uniform", r.tv_uniform},
            {"cv_centrality", r.cv_centrality},
            {"survivor_rel_tol", r.survivor_rel_tol},
            {"tie_rule", r.tie_rule}};
}

inline FairnessReport report_from_json(const json& j) {
    FairnessReport r;
    const std::string order = detail::field(j, "order", "report").get<std::string>();
    if (order != "first" && order != "second") detail::schema_error("report.order", "must be first or second");
    r.order = order == "first" ? Order::First : Order::Second;
    r.num_spins = detail::as_int(detail::field(j, "num_spins", "report"), "report.num_spins");
    r.e0 = detail::as_number(detail::field(j, "e0", "report"), "report.e0");
    r.tol = detail::as_number(detail::field(j, "tol", "report"), "report.tol");
    r.tv_uniform = detail::as_number(detail::field(j, "tv_uniform", "report"), "report.tv_uniform");
    r.cv_centrality = detail::as_number(detail::field(j, "cv_centrality", "report"), "report.cv_centrality");
    r.survivor_rel_tol = detail::as_number(detail::field(j, "survivor_rel_tol", "report"), "report.survivor_rel_tol");
    r.tie_rule = detail::field(j, "tie_rule", "report").get<std::string>();
    for (const auto& js : detail::field(j, "states", "report")) {
        StateMetrics s;
        s.state = parse_spins(js.at("state").get<std::string>(), r.num_spins);
        s.component = js.at("component").get<int>();
        s.degree = js.at("c_deg").get<double>();
        s.eigen = js.at("c_eig").get<double>();
        s.eigen_unit = js.at("c_eig_unit").get<double>();
        s.p = js.at("p").get<double>();
        if (!js.at("ef").is_null()) s.ef = js.at("ef").get<double>();
        if (!js.at("ref").is_null()) s.ref = js.at("ref").get<double>();
        r.states.push_back(s);
    }
    for (const auto& jc : detail::field(j, "components", "report"))
        r.components.push_back(
            {jc.at("members").get<std::vector<int>>(), jc.at("lambda1").get<double>(), jc.at("surviving").get<bool>()});
    return r;
}

inline json analysis_to_json(const Analysis& a) {
    json j = report_to_json(a.report);
    j["settings"] = {{"driver", a.options.driver_label},
                     {"order_policy", to_string(a.options.order)},
                     {"tol", a.manifold.tol},
                     {"manifold_source", a.manifold.source == ManifoldSource::BruteForce ? "brute-force" : "provided"},
                     {"power_iteration_tol", PowerIterationOptions{}.tol},
                     {"survivor_rel_tol", a.report.survivor_rel_tol},
                     {"tie_rule", a.report.tie_rule},
                     {"oracle", to_string(a.options.oracle)}};
    if (a.sweep_point) j["sweep"] = {{"parameter", a.sweep_point->first}, {"value", a.sweep_point->second}};
    if (a.oracle) {
        j["oracle"] = oracle_to_json(*a.oracle);
        const auto q = a.oracle->normalized();
        j["oracle"]["tv_vs_predicted"] = total_variation(a.report.probabilities(), q);
        for (std::size_t i = 0; i < q.size(); ++i) j["states"][i]["oracle_p"] = q[i];
    }
    return j;
}

/// One row per ground state; with several analyses of a sweep the parameter
/// value leads each row.
inline std::string analyses_to_csv(const std::vector<Analysis>& all) {
    std::ostringstream os;
    const bool swept = !all.empty() && all.front().sweep_point.has_value();
    if (swept) os << all.front().sweep_point->first << ',';
    os << "state,component,c_deg,c_eig,c_eig_unit,ef,ref,p,oracle_p\n";
    auto num = [](double v) { return detail::format_number(v); };
    for (const auto& a : all) {
        const auto q = a.oracle ? a.oracle->normalized() : std::vector<double>{};
        for (std::size_t i = 0; i < a.report.states.size(); ++i) {
            const auto& s = a.report.states[i];
            if (swept) os << num(a.sweep_point->second) << ',';
            os << to_string(s.state, a.report.num_spins) << ',' << s.component << ',' << num(s.degree) << ','
               << num(s.eigen) << ',' << num(s.eigen_unit) << ',' << (s.ef ? num(*s.ef) : "") << ','
               << (s.ref ? num(*s.ref) : "") << ',' << num(s.p) << ',' << (q.empty() ? "" : num(q[i])) << '\n';
        }
    }
    return os.str();
}

} // namespace io
} // namespace fairqa
