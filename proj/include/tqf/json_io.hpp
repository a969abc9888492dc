#pragma once

#include "tqf/functionals.hpp"
#include "tqf/tensor.hpp"

#include <json.hpp>

#include <string>

namespace tqf {

/// Tensor wire format: {"shape":[d1,...,dk],"entries":[[re,im],...]} row-major.
nlohmann::json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& j);

Tensor load_tensor_json(const std::string& path);
void save_tensor_json(const Tensor& t, const std::string& path);

/// Shared solver options object: {tol, max_iters, restarts, seed, level_n, order}.
struct SolverOptions {
    double tol = 1e-8;
    int max_iters = 10000;
    int restarts = 8;
    std::uint64_t seed = 20240901;
    int level_n = 4;
    std::vector<std::string> order;  // bipartition letters, product order

    LowerOptions lower() const;
    UpperOptions upper(int k) const;
    CapacityOptions cap() const;
};

nlohmann::json solver_options_to_json(const SolverOptions& o);
SolverOptions solver_options_from_json(const nlohmann::json& j);

/// Shortest-round-trip decimal with 12 significant digits, locale-independent.
std::string format_sig12(double v);

}  // namespace tqf
