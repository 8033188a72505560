#include <cstdio>
#include <iostream>
#include <map>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairqa/fairqa.hpp"

using namespace fairqa;
using io::json;

namespace {

/// "tf", "tf+pairs", "tf+pairs:0-1,2-3" or a driver JSON file.
DriverSpec parse_driver(const std::string& text, int n) {
    if (text == "tf") return DriverSpec::transverse_field(n);
    if (text == "tf+pairs") return DriverSpec::transverse_plus_pairs(n);
    const std::string prefix = "tf+pairs:";
    if (text.rfind(prefix, 0) == 0) {
        std::vector<std::pair<int, int>> pairs;
        std::string rest = text.substr(prefix.size());
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto end = std::min(rest.find(',', pos), rest.size());
            const std::string item = rest.substr(pos, end - pos);
            const auto dash = item.find('-');
            try {
                if (dash == std::string::npos) throw std::invalid_argument(item);
                pairs.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
            } catch (const std::exception&) {
                throw ConfigError("bad pair '" + item + "' in driver '" + text + "'");
            }
            for (int i : {pairs.back().first, pairs.back().second})
                if (i < 0 || i >= n) throw ConfigError("pair spin " + std::to_string(i) + " out of range");
            pos = end + 1;
        }
        return DriverSpec::transverse_field(n).with_pairs(pairs);
    }
    DriverSpec V = io::driver_from_json(io::read_json_file(text));
    if (V.num_spins() != n) throw ConfigError("driver file has " + std::to_string(V.num_spins()) + " spins, model has " + std::to_string(n));
    return V;
}

ParamMap parse_bindings(const std::vector<std::string>& items) {
    ParamMap out;
    for (const auto& it : items) {
        const auto eq = it.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects name=value, got '" + it + "'");
        try {
            std::size_t used = 0;
            const std::string v = it.substr(eq + 1);
            out[it.substr(0, eq)] = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
        } catch (const std::exception&) {
            throw ConfigError("--set value in '" + it + "' is not a number");
        }
    }
    return out;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        io::write_text_file(path, text);
}

struct PipelineArgs {
    std::string model;
    std::string driver = "tf";
    std::string order = "auto";
    std::string oracle = "none";
    double lambda = 1e-3;
    double tau = 500.0;
    double dt = 1e-2;
    std::optional<double> tol;
    std::vector<std::string> bindings;
    std::string sweep;
    std::string out;
    std::string csv;
    std::string dot;
};

void add_pipeline_options(CLI::App* cmd, PipelineArgs& a, bool with_oracle) {
    cmd->add_option("model", a.model, "model JSON file")->required();
    cmd->add_option("--driver", a.driver, "tf | tf+pairs | tf+pairs:i-j,... | driver JSON file");
    cmd->add_option("--order", a.order, "perturbation order")->check(CLI::IsMember({"auto", "first", "second"}));
    cmd->add_option("--tol", a.tol, "absolute degeneracy tolerance");
    cmd->add_option("--set", a.bindings, "parameter binding name=value");
    cmd->add_option("--out", a.out, "output file (default stdout)");
    if (!with_oracle) return;
    cmd->add_option("--oracle", a.oracle, "exact reference")->check(CLI::IsMember({"none", "quasistatic", "schrodinger"}));
    cmd->add_option("--lambda", a.lambda, "driver strength for the quasistatic oracle");
    cmd->add_option("--tau", a.tau, "annealing time for the Schrodinger oracle");
    cmd->add_option("--dt", a.dt, "RK4 step for the Schrodinger oracle");
    cmd->add_option("--csv", a.csv, "per-state CSV table");
    cmd->add_option("--dot", a.dot, "solution graph in DOT format");
}

AnalysisOptions options_from(const PipelineArgs& a, const std::string& driver_label) {
    AnalysisOptions o;
    o.order = a.order == "first" ? OrderPolicy::First : a.order == "second" ? OrderPolicy::Second : OrderPolicy::Auto;
    o.oracle = a.oracle == "quasistatic"   ? OracleChoice::Quasistatic
               : a.oracle == "schrodinger" ? OracleChoice::Schrodinger
                                           : OracleChoice::None;
    o.oracle_settings.lambda = a.lambda;
    o.oracle_settings.tau = a.tau;
    o.oracle_settings.dt = a.dt;
    o.tol = a.tol;
    o.driver_label = driver_label;
    return o;
}

IsingModel load_model(const PipelineArgs& a, bool keep_template) {
    IsingModel m = io::read_model(a.model);
    const ParamMap b = parse_bindings(a.bindings);
    if (keep_template) {
        ParamMap params = m.params();
        for (const auto& [k, v] : b) params[k] = v;
        std::vector<Term> terms(m.terms().begin(), m.terms().end());
        return IsingModel(m.num_spins(), std::move(terms), m.offset(), std::move(params));
    }
    return m.substitute(b);
}

int run_analyze(const PipelineArgs& a, bool require_sweep) {
    if (require_sweep && a.sweep.empty()) throw ConfigError("sweep needs --sweep name=start:stop:steps");
    const bool swept = !a.sweep.empty();
    const IsingModel model = load_model(a, swept);
    const DriverSpec V = parse_driver(a.driver, model.num_spins());
    const AnalysisOptions opt = options_from(a, a.driver);
    std::vector<Analysis> results;
    if (swept)
        results = sweep(model, V, SweepSpec::parse(a.sweep), opt);
    else
        results.push_back(analyze(model, V, opt));

    json out;
    if (swept) {
        out = json::array();
        for (const auto& r : results) out.push_back(io::analysis_to_json(r));
    } else {
        out = io::analysis_to_json(results.front());
    }
    emit(a.out, out.dump(2) + "\n");
    if (!a.csv.empty()) io::write_text_file(a.csv, io::analyses_to_csv(results));
    if (!a.dot.empty()) io::write_text_file(a.dot, io::export_dot(results.front().graph));
    return 0;
}

int run_verify(const PipelineArgs& a, double max_tv) {
    const IsingModel model = load_model(a, false);
    const DriverSpec V = parse_driver(a.driver, model.num_spins());
    AnalysisOptions opt = options_from(a, a.driver);
    opt.oracle = OracleChoice::None;
    const Analysis base = analyze(model, V, opt);
    const auto p = base.report.probabilities();
    const CrossValidation cv = cross_validate(base.model, V, base.manifold, p, opt.oracle_settings);
    json states = json::array();
    const auto q = cv.quasistatic.normalized();
    const auto s = cv.schrodinger.normalized();
    for (std::size_t i = 0; i < p.size(); ++i)
        states.push_back({{"state", to_string(base.manifold.states[i], model.num_spins())},
                          {"predicted", p[i]},
                          {"quasistatic", q[i]},
                          {"schrodinger", s[i]}});
    const double worst = std::max({cv.tv_predicted_quasistatic, cv.tv_predicted_schrodinger, cv.tv_quasistatic_schrodinger});
    json out = {{"order", to_string(base.graph.order)},
                {"states", states},
                {"tv", {{"predicted_vs_quasistatic", cv.tv_predicted_quasistatic},
                        {"predicted_vs_schrodinger", cv.tv_predicted_schrodinger},
                        {"quasistatic_vs_schrodinger", cv.tv_quasistatic_schrodinger}}},
                {"max_tv", max_tv},
                {"agree", worst <= max_tv},
                {"quasistatic", io::oracle_to_json(cv.quasistatic)},
                {"schrodinger", io::oracle_to_json(cv.schrodinger)}};
    emit(a.out, out.dump(2) + "\n");
    return 0;
}

int run_export_dot(const PipelineArgs& a) {
    const IsingModel model = load_model(a, false);
    const DriverSpec V = parse_driver(a.driver, model.num_spins());
    EnumerateOptions eo;
    eo.tol = a.tol;
    const GroundManifold m = enumerate(model, eo);
    const auto policy = options_from(a, a.driver).order;
    emit(a.out, io::export_dot(resolve(model, m, V, policy)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solution-graph analysis of fair sampling in quantum annealing"};
    app.require_subcommand(1);
    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "seed for every random component");

    PipelineArgs analyze_args, sweep_args, verify_args, dot_args;
    double max_tv = 0.02;
    auto* analyze_cmd = app.add_subcommand("analyze", "solution graph, centralities and predicted probabilities");
    add_pipeline_options(analyze_cmd, analyze_args, true);
    analyze_cmd->add_option("--sweep", analyze_args.sweep, "name=start:stop:steps");
    auto* sweep_cmd = app.add_subcommand("sweep", "analyze over a parameter range");
    add_pipeline_options(sweep_cmd, sweep_args, true);
    sweep_cmd->add_option("--sweep", sweep_args.sweep, "name=start:stop:steps")->required();
    auto* verify_cmd = app.add_subcommand("verify", "compare the prediction with both exact oracles");
    add_pipeline_options(verify_cmd, verify_args, true);
    verify_cmd->add_option("--max-tv", max_tv, "agreement threshold on total variation");
    auto* dot_cmd = app.add_subcommand("export-dot", "write the solution graph as DOT");
    add_pipeline_options(dot_cmd, dot_args, false);

    std::string embed_model, embed_file, embed_out;
    double chain_strength = 1.0;
    bool embed_template_flag = false;
    auto* embed_cmd = app.add_subcommand("embed", "minor-embed a model with ferromagnetic chains");
    embed_cmd->add_option("model", embed_model, "logical model JSON")->required();
    embed_cmd->add_option("embedding", embed_file, "embedding JSON")->required();
    embed_cmd->add_option("--chain-strength", chain_strength, "J_F > 0");
    embed_cmd->add_flag("--template", embed_template_flag, "keep the chain strength as parameter J_F");
    embed_cmd->add_option("--out", embed_out, "output file (default stdout)");

    std::string eltip_model, eltip_out;
    int eltip_spin = 0;
    auto* eltip_cmd = app.add_subcommand("eltip", "exchange local fields and interactions around a spin");
    eltip_cmd->add_option("model", eltip_model, "model JSON")->required();
    eltip_cmd->add_option("--spin", eltip_spin, "spin index (0-based)")->required();
    eltip_cmd->add_option("--out", eltip_out, "output file (default stdout)");

    int queens_n = 5;
    std::string queens_emit, queens_targets;
    bool list_solutions = false, triples = false;
    auto* queens_cmd = app.add_subcommand("nqueens", "N-Queens cost model and solution structure");
    queens_cmd->add_option("--n", queens_n, "board size");
    queens_cmd->add_option("--emit", queens_emit, "write the cost model JSON here");
    queens_cmd->add_option("--targets", queens_targets, "write the solutions as a target list here");
    queens_cmd->add_flag("--list-solutions", list_solutions, "print every solution grouped by family");
    queens_cmd->add_flag("--triples", triples, "print the (a,b,c) triple of each family");

    std::string sqa_model, sqa_targets, sqa_out;
    sqa::SqaConfig sqa_cfg;
    auto* sqa_cmd = app.add_subcommand("sqa", "path-integral Monte Carlo annealing");
    sqa_cmd->add_option("model", sqa_model, "model JSON")->required();
    sqa_cmd->add_option("--targets", sqa_targets, "target states JSON")->required();
    sqa_cmd->add_option("--sweeps", sqa_cfg.sweeps, "Monte Carlo sweeps per anneal");
    sqa_cmd->add_option("--samples", sqa_cfg.samples, "anneals per run");
    sqa_cmd->add_option("--runs", sqa_cfg.runs, "independent runs");
    sqa_cmd->add_option("--slices", sqa_cfg.trotter_slices, "Trotter slices");
    sqa_cmd->add_option("--beta", sqa_cfg.beta, "inverse temperature");
    sqa_cmd->add_option("--gamma-start", sqa_cfg.gamma_start, "initial transverse field");
    sqa_cmd->add_option("--gamma-end", sqa_cfg.gamma_end, "final transverse field");
    sqa_cmd->add_option("--threads", sqa_cfg.threads, "worker threads (0: all cores)");
    sqa_cmd->add_option("--out", sqa_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze_cmd) return run_analyze(analyze_args, false);
        if (*sweep_cmd) return run_analyze(sweep_args, true);
        if (*verify_cmd) return run_verify(verify_args, max_tv);
        if (*dot_cmd) return run_export_dot(dot_args);
        if (*embed_cmd) {
            const IsingModel m = io::read_model(embed_model);
            const Embedding e = io::embedding_from_json(io::read_json_file(embed_file));
            if (!(chain_strength > 0.0)) throw ConfigError("chain strength must be positive");
            const IsingModel phys = embed_template_flag ? embed_template(m, e, "J_F", chain_strength) : embed(m, e, chain_strength);
            emit(embed_out, io::model_to_json(phys).dump(2) + "\n");
            return 0;
        }
        if (*eltip_cmd) {
            emit(eltip_out, io::model_to_json(eltip(io::read_model(eltip_model), eltip_spin)).dump(2) + "\n");
            return 0;
        }
        if (*queens_cmd) {
            const auto sols = nqueens::enumerate_solutions(queens_n);
            const auto fams = nqueens::group_families(sols);
            if (!queens_emit.empty()) io::write_text_file(queens_emit, io::model_to_json(nqueens::build(queens_n).model).dump(2) + "\n");
            if (!queens_targets.empty()) {
                std::vector<SpinConfig> t;
                for (const auto& s : sols) t.push_back(nqueens::to_spins(s));
                std::sort(t.begin(), t.end());
                io::write_text_file(queens_targets, io::states_to_json(t, queens_n * queens_n).dump(2) + "\n");
            }
            json out = {{"n", queens_n}, {"solutions", sols.size()}, {"families", fams.size()}};
            if (list_solutions || triples) {
                json fj = json::array();
                for (const auto& f : fams) {
                    json entry = {{"fundamental", nqueens::to_string(f.fundamental)}, {"size", f.variants.size()}};
                    if (list_solutions) {
                        json vs = json::array();
                        for (const auto& v : f.variants) vs.push_back(nqueens::to_string(v));
                        entry["variants"] = vs;
                    }
                    if (triples) {
                        const auto t = nqueens::landscape_triple(f.fundamental);
                        entry["triple"] = {t.a, t.b, t.c};
                    }
                    fj.push_back(entry);
                }
                out["family_list"] = fj;
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*sqa_cmd) {
            const IsingModel m = io::read_model(sqa_model).substitute({});
            const auto targets = io::states_from_json(io::read_json_file(sqa_targets), m.num_spins());
            sqa_cfg.seed = seed;
            const auto tally = sqa::run_experiment(m, targets, sqa_cfg);
            emit(sqa_out, io::tally_to_json(tally, m.num_spins(), sqa_cfg).dump(2) + "\n");
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::Config);
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return static_cast<int>(ErrorKind::Capacity);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::Numerical);
    }
    return 0;
}
