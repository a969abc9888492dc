#include "tqf/cli.hpp"

#include "tqf/corpus.hpp"
#include "tqf/functionals.hpp"
#include "tqf/json_io.hpp"
#include "tqf/kernels.hpp"
#include "tqf/separation_lab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tqf {

namespace {

Tensor resolve_tensor(const std::string& source) {
    static const char* families[] = {"unit", "sp", "qgamma", "w", "ameL", "det", "unit2S"};
    auto colon = source.find(':');
    if (colon != std::string::npos) {
        std::string head = source.substr(0, colon);
        for (const char* f : families)
            if (head == f) return named_tensor(source);
    }
    Tensor t = load_tensor_json(source);
    if (t.is_zero()) throw std::invalid_argument("nonzero tensor required");
    return t;
}

std::vector<Bipartition> parse_order(const std::string& spec, int k) {
    std::vector<Bipartition> order;
    std::stringstream ss(spec);
    std::string term;
    while (std::getline(ss, term, ','))
        if (!term.empty()) order.push_back(Bipartition::from_string(term, k));
    return order;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write output file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

int cmd_info(const std::string& source) {
    Tensor t = resolve_tensor(source);
    std::cout << "shape:";
    for (int d : t.shape()) std::cout << " " << d;
    std::cout << "\nnorm: " << format_sig12(t.norm()) << "\n";
    if (t.order() <= 12) {
        std::cout << "bipartition  rank  entropy_bits\n";
        for (const auto& b : all_bipartitions(t.order()))
            std::cout << b.to_string() << "  " << flattening_rank(t, b) << "  "
                      << format_sig12(bipartition_entropy(t, b)) << "\n";
    }
    std::cout << "moment_residual: " << format_sig12(moment_map(t).residual) << "\n";
    return 0;
}

int cmd_verify(const std::string& id, std::uint64_t seed, const std::string& out_path) {
    std::vector<std::string> ids;
    if (id == "all") {
        ids = claim_ids();
    } else {
        auto all = claim_ids();
        if (std::find(all.begin(), all.end(), id) == all.end()) {
            std::ostringstream os;
            os << "unknown claim id '" << id << "'; valid ids:";
            for (const auto& s : all) os << " " << s;
            throw std::invalid_argument(os.str());
        }
        ids.push_back(id);
    }
    nlohmann::json verdicts = nlohmann::json::array();
    bool ok = true;
    for (const auto& cid : ids) {
        ClaimVerdict v = run_claim(cid, seed);
        verdicts.push_back(verdict_to_json(v));
        std::cout << (v.passed ? "PASS " : "FAIL ") << v.claim_id << " (" << v.runtime_ms
                  << " ms)";
        if (!v.notes.empty()) std::cout << "  [" << v.notes << "]";
        std::cout << "\n";
        if (v.deterministic && !v.passed) ok = false;
    }
    emit(verdicts, out_path);
    return ok ? 0 : 1;
}

int cmd_functional(const std::string& kind, const std::string& source, const std::string& theta_spec,
                   const SolverOptions& opts, const std::string& order_spec,
                   const std::string& out_path) {
    Tensor t = resolve_tensor(source);
    int k = t.order();
    nlohmann::json j;
    j["kind"] = kind;
    if (kind == "upper" || kind == "lower" || kind == "mtheta") {
        BipartitionDistribution theta = parse_distribution(theta_spec, k);
        if (kind == "mtheta") {
            double v = m_theta(t, theta);
            std::cout << "m_theta: " << format_sig12(v) << " bits\n";
            j["value_bits"] = v;
            j["value_f_scale"] = f_scale(v);
        } else if (kind == "upper") {
            UpperOptions uo = opts.upper(k);
            if (!order_spec.empty()) uo.order = parse_order(order_spec, k);
            if (!is_laminar(theta) && !uo.order)
                throw std::invalid_argument("non-laminar support requires --order");
            UpperReport r = upper_level(t, theta, uo);
            std::cout << "upper level-" << r.n << ": " << format_sig12(r.best_value_bits)
                      << " bits (m_theta " << format_sig12(r.m_theta_bits) << ", feasible "
                      << r.feasible_count << ")\n";
            j["n"] = r.n;
            j["value_bits"] = r.best_value_bits;
            j["value_f_scale"] = f_scale(r.best_value_bits);
            j["m_theta_bits"] = r.m_theta_bits;
            j["feasible_count"] = r.feasible_count;
            nlohmann::json tuple = nlohmann::json::object();
            for (const auto& [b, lam] : r.best_tuple) tuple[b.to_string()] = lam.parts;
            j["best_tuple"] = tuple;
        } else {
            ScalingReport r = lower_local(t, theta, opts.lower());
            std::cout << "lower (local): " << format_sig12(r.achieved_entropy) << " bits\n";
            j["value_bits"] = r.achieved_entropy;
            j["value_f_scale"] = f_scale(r.achieved_entropy);
            j["iterations"] = r.iterations;
            j["moment_residual"] = r.moment_residual;
            j["status"] = r.status == ScalingStatus::converged   ? "converged"
                          : r.status == ScalingStatus::max_iters ? "max_iters"
                                                                 : "collapsed";
        }
    } else if (kind == "capacity") {
        CapacityReport r = capacity(t, opts.cap());
        std::cout << "capacity: " << format_sig12(r.capacity) << "\n";
        j["capacity"] = r.capacity;
        j["semistable"] = r.semistable;
        j["converged"] = r.converged;
        j["moment_residual"] = r.moment_residual;
        j["iterations"] = r.iterations;
    } else if (kind == "detbound") {
        Bipartition b = Bipartition::from_string(theta_spec, k);
        double c = c_psi(t, b, opts.cap());
        double v = det_bound(t, b, opts.cap());
        std::cout << "det_bound(" << b.to_string() << "): " << format_sig12(v) << " bits\n";
        j["bipartition"] = b.to_string();
        j["c_psi"] = c;
        j["value_bits"] = v;
    } else {
        throw std::invalid_argument("unknown functional kind: " + kind);
    }
    emit(j, out_path);
    return 0;
}

int cmd_sweep(const std::string& spec_template, double start, double stop, int steps,
              const std::string& theta_spec, const std::string& quantities_csv,
              const SolverOptions& opts, const std::string& out_path) {
    if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
    std::vector<std::string> quantities;
    {
        std::stringstream ss(quantities_csv);
        std::string q;
        while (std::getline(ss, q, ','))
            if (!q.empty()) quantities.push_back(q);
    }
    if (quantities.empty()) throw std::invalid_argument("sweep: empty quantity list");
    auto mark = spec_template.find('?');
    if (mark == std::string::npos)
        throw std::invalid_argument("sweep: tensor spec must contain '?' for the swept parameter");

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out << "param";
    for (const auto& q : quantities) out << "," << q;
    out << "\n";

    for (int i = 0; i < steps; ++i) {
        double v = start + (stop - start) * i / (steps - 1);
        std::string spec = spec_template.substr(0, mark) + format_sig12(v) +
                           spec_template.substr(mark + 1);
        Tensor t = named_tensor(spec);
        int k = t.order();
        BipartitionDistribution theta = parse_distribution(theta_spec, k);
        Bipartition ab = Bipartition::from_string("AB", k);
        out << format_sig12(v);
        for (const auto& q : quantities) {
            double val;
            if (q == "H_theta")
                val = weighted_entropy(t, theta);
            else if (q == "m_theta")
                val = m_theta(t, theta);
            else if (q == "upper_n")
                val = upper_level(t, theta, opts.upper(k)).best_value_bits;
            else if (q == "lower")
                val = lower_local(t, theta, opts.lower()).achieved_entropy;
            else if (q == "detbound")
                val = det_bound(t, ab, opts.cap());
            else if (q == "c_psi")
                val = c_psi(t, ab, opts.cap());
            else if (q == "capacity")
                val = capacity(t, opts.cap()).capacity;
            else
                throw std::invalid_argument("sweep: unknown quantity " + q);
            out << "," << format_sig12(val);
        }
        out << "\n";
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    if (const char* env = std::getenv("TQF_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) kernels::set_max_threads(n);
    }

    CLI::App app{"upper and lower quantum functionals of complex tensors"};
    app.require_subcommand(1);

    std::string source, theta_spec, claim_id = "all", kind, order_spec, out_path;
    std::string quantities, spec_template;
    double start = 0.0, stop = 1.0;
    int steps = 2;
    SolverOptions opts;

    auto* info = app.add_subcommand("info", "shape, norm, ranks, entropies, moment residual");
    info->add_option("tensor", source, "tensor spec (e.g. sp:p=0.5) or JSON file")->required();

    auto* verify = app.add_subcommand("verify", "run scripted claim reproductions");
    verify->add_option("claim", claim_id, "claim id or 'all'");
    verify->add_option("--seed", opts.seed, "seed for sampled claims");
    verify->add_option("--out", out_path, "write verdict JSON to file");

    auto* func = app.add_subcommand("functional", "evaluate a functional");
    func->add_option("kind", kind, "upper|lower|mtheta|capacity|detbound")->required();
    func->add_option("tensor", source, "tensor spec or JSON file")->required();
    func->add_option("theta", theta_spec, "distribution spec (or side letters for detbound)");
    func->add_option("--n", opts.level_n, "Kronecker power level for 'upper'");
    func->add_option("--order", order_spec, "projector product order, e.g. AB,BC");
    func->add_option("--tol", opts.tol, "convergence tolerance");
    func->add_option("--seed", opts.seed, "seed for restarts");
    func->add_option("--restarts", opts.restarts, "random restarts for 'lower'");
    func->add_option("--out", out_path, "write report JSON to file");

    auto* sweep = app.add_subcommand("sweep", "sweep a family parameter to CSV");
    sweep->add_option("spec", spec_template, "tensor spec with '?', e.g. sp:p=?")->required();
    sweep->add_option("start", start)->required();
    sweep->add_option("stop", stop)->required();
    sweep->add_option("steps", steps)->required();
    sweep->add_option("--theta", theta_spec, "distribution spec")->required();
    sweep->add_option("--quantities", quantities,
                      "comma list of H_theta,m_theta,upper_n,lower,detbound,c_psi,capacity")
        ->required();
    sweep->add_option("--n", opts.level_n, "level for upper_n");
    sweep->add_option("--seed", opts.seed, "seed for 'lower' restarts");
    sweep->add_option("--restarts", opts.restarts, "random restarts for 'lower'");
    sweep->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
        if (info->parsed()) return cmd_info(source);
        if (verify->parsed()) return cmd_verify(claim_id, opts.seed, out_path);
        if (func->parsed())
            return cmd_functional(kind, source, theta_spec, opts, order_spec, out_path);
        if (sweep->parsed())
            return cmd_sweep(spec_template, start, stop, steps, theta_spec, quantities, opts,
                             out_path);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace tqf
