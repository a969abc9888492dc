#include "tqf/json_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace tqf {

nlohmann::json tensor_to_json(const Tensor& t) {
    nlohmann::json j;
    j["shape"] = t.shape();
    nlohmann::json entries = nlohmann::json::array();
    for (const cplx& z : t.data()) entries.push_back({z.real(), z.imag()});
    j["entries"] = std::move(entries);
    return j;
}

Tensor tensor_from_json(const nlohmann::json& j) {
    if (!j.contains("shape") || !j.contains("entries"))
        throw std::invalid_argument("tensor JSON requires \"shape\" and \"entries\"");
    std::vector<int> shape = j["shape"].get<std::vector<int>>();
    std::vector<cplx> data;
    for (const auto& e : j["entries"]) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("tensor JSON entries must be [re,im] pairs");
        data.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return Tensor(std::move(shape), std::move(data));
}

Tensor load_tensor_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tensor file: " + path);
    nlohmann::json j;
    in >> j;
    return tensor_from_json(j);
}

void save_tensor_json(const Tensor& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tensor file: " + path);
    out << tensor_to_json(t).dump();
}

LowerOptions SolverOptions::lower() const {
    LowerOptions o;
    o.grad_tol = tol;
    o.max_iters = max_iters;
    o.restarts = restarts;
    o.seed = seed;
    return o;
}

UpperOptions SolverOptions::upper(int k) const {
    UpperOptions o;
    o.level_n = level_n;
    if (!order.empty()) {
        std::vector<Bipartition> bs;
        for (const auto& s : order) bs.push_back(Bipartition::from_string(s, k));
        o.order = std::move(bs);
    }
    return o;
}

CapacityOptions SolverOptions::cap() const {
    CapacityOptions o;
    o.residual_tol = tol;
    o.max_iters = max_iters;
    return o;
}

nlohmann::json solver_options_to_json(const SolverOptions& o) {
    return nlohmann::json{{"tol", o.tol},         {"max_iters", o.max_iters},
                          {"restarts", o.restarts}, {"seed", o.seed},
                          {"level_n", o.level_n},   {"order", o.order}};
}

SolverOptions solver_options_from_json(const nlohmann::json& j) {
    SolverOptions o;
    if (j.contains("tol")) o.tol = j["tol"].get<double>();
    if (j.contains("max_iters")) o.max_iters = j["max_iters"].get<int>();
    if (j.contains("restarts")) o.restarts = j["restarts"].get<int>();
    if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("level_n")) o.level_n = j["level_n"].get<int>();
    if (j.contains("order")) o.order = j["order"].get<std::vector<std::string>>();
    return o;
}

std::string format_sig12(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

}  // namespace tqf
