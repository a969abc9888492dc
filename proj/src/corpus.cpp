#include "tqf/corpus.hpp"

#include "tqf/partitions.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tqf {

Tensor unit_tensor(int n, int k) {
    if (n < 1 || k < 2) throw std::invalid_argument("unit_tensor: need n >= 1, k >= 2");
    Tensor t = Tensor::zeros(std::vector<int>(k, n));
    std::vector<int> idx(k);
    for (int i = 0; i < n; ++i) {
        std::fill(idx.begin(), idx.end(), i);
        t.at(idx) = 1.0;
    }
    return t;
}

Tensor unit2_on_subset(std::uint32_t side_mask, int k) {
    if (k < 2 || side_mask == 0 || side_mask >= (1u << k))
        throw std::invalid_argument("unit2_on_subset: need nonempty S within [k]");
    std::vector<int> shape(k, 1);
    for (int j = 0; j < k; ++j)
        if ((side_mask >> j) & 1u) shape[j] = 2;
    Tensor t = Tensor::zeros(shape);
    std::vector<int> idx(k, 0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < k; ++j) idx[j] = ((side_mask >> j) & 1u) ? i : 0;
        t.at(idx) = 1.0;
    }
    return t;
}

Tensor w_state(int k) {
    if (k < 2) throw std::invalid_argument("w_state: need k >= 2");
    Tensor t = Tensor::zeros(std::vector<int>(k, 2));
    std::vector<int> idx(k, 0);
    for (int i = 0; i < k; ++i) {
        idx[i] = 1;
        t.at(idx) = 1.0;
        idx[i] = 0;
    }
    return t;
}

Tensor s_p(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("s_p: p must be in [0,1]");
    Tensor t = Tensor::zeros({2, 2, 2, 2});
    double a = std::sqrt(p / 2.0), b = std::sqrt((1.0 - p) / 2.0);
    t.at({0, 0, 0, 0}) = a;
    t.at({1, 1, 1, 1}) = a;
    t.at({0, 1, 0, 1}) = b;
    t.at({1, 0, 1, 0}) = b;
    return t;
}

Tensor q_gamma(double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("q_gamma: gamma must be in [0,1]");
    const double r = 1.0 / std::sqrt(2.0);
    // Bell pairs on a 2x2 space: phi_pm = (e1e1 +- e2e2)/sqrt2, psi_pm = (e1e2 +- e2e1)/sqrt2
    auto pair_state = [&](int kind) {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
        switch (kind) {
            case 0: m(0, 0) = r; m(1, 1) = r; break;    // phi+
            case 1: m(0, 0) = r; m(1, 1) = -r; break;   // phi-
            case 2: m(0, 1) = r; m(1, 0) = r; break;    // psi+
            default: m(0, 1) = r; m(1, 0) = -r; break;  // psi-
        }
        return m;
    };
    Tensor t = Tensor::zeros({2, 2, 2, 2});
    auto accumulate_pair = [&](int kind, double coeff) {
        Eigen::Matrix2cd m = pair_state(kind);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d)
                        t.at({a, b, c, d}) += coeff * m(a, b) * m(c, d);
    };
    accumulate_pair(3, std::sqrt(1.0 - gamma));
    accumulate_pair(0, std::sqrt(gamma / 3.0));
    accumulate_pair(1, std::sqrt(gamma / 3.0));
    accumulate_pair(2, std::sqrt(gamma / 3.0));
    return t;
}

Tensor ame_L(int k) {
    if (k < 4) throw std::invalid_argument("ame_L: need k >= 4");
    std::vector<int> shape(k, 1);
    for (int j = 0; j < 4; ++j) shape[j] = 3;
    Tensor t = Tensor::zeros(shape);
    std::vector<int> idx(k, 0);
    for (int l = 1; l <= 3; ++l)
        for (int lp = 1; lp <= 3; ++lp) {
            // arithmetic mod 3 mapped into {1,2,3}, then 0-based indices
            int c = (l + lp - 1) % 3 + 1;
            int d = (l + 2 * lp - 1) % 3 + 1;
            idx[0] = l - 1;
            idx[1] = lp - 1;
            idx[2] = c - 1;
            idx[3] = d - 1;
            t.at(idx) = 1.0 / 3.0;
        }
    return t;
}

Tensor det_tensor(int k) {
    if (k < 2 || k > 6) throw std::invalid_argument("det_tensor: need 2 <= k <= 6");
    Tensor t = Tensor::zeros(std::vector<int>(k, k));
    for (const auto& perm : permutations(k)) {
        int inversions = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (perm[i] > perm[j]) ++inversions;
        t.at(perm) = (inversions % 2 == 0) ? 1.0 : -1.0;
    }
    return t;
}

Tensor embed(const Tensor& t, int k, const std::vector<int>& positions) {
    int l = t.order();
    if (l > k) throw std::invalid_argument("embed: tensor order exceeds target");
    if (static_cast<int>(positions.size()) != l)
        throw std::invalid_argument("embed: one position per tensor leg required");
    std::vector<bool> used(k, false);
    for (int p : positions) {
        if (p < 0 || p >= k || used[p]) throw std::invalid_argument("embed: invalid positions");
        used[p] = true;
    }
    std::vector<int> shape(k, 1);
    for (int i = 0; i < l; ++i) shape[positions[i]] = t.dim(i);
    Tensor out = Tensor::zeros(shape);
    std::vector<int> idx(t.order(), 0), odx(k, 0);
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        std::size_t rem = lin;
        for (int j = l - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(rem % t.dim(j));
            rem /= t.dim(j);
        }
        std::fill(odx.begin(), odx.end(), 0);
        for (int j = 0; j < l; ++j) odx[positions[j]] = idx[j];
        out.at(odx) = t.data()[lin];
    }
    return out;
}

Tensor embed_standard(const Tensor& t, int k) {
    std::vector<int> pos(t.order());
    std::iota(pos.begin(), pos.end(), 0);
    return embed(t, k, pos);
}

static std::map<std::string, std::string> parse_params(const std::string& s) {
    std::map<std::string, std::string> out;
    std::stringstream ss(s);
    std::string term;
    while (std::getline(ss, term, ',')) {
        auto eq = term.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("tensor spec parameter missing '=': " + term);
        out[term.substr(0, eq)] = term.substr(eq + 1);
    }
    return out;
}

Tensor named_tensor(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
    auto params = colon == std::string::npos ? std::map<std::string, std::string>{}
                                             : parse_params(spec.substr(colon + 1));
    auto geti = [&](const std::string& key, int dflt = -1) {
        auto it = params.find(key);
        if (it == params.end()) {
            if (dflt < 0) throw std::invalid_argument("tensor spec missing parameter " + key);
            return dflt;
        }
        try {
            return std::stoi(it->second);
        } catch (const std::exception&) {
            throw std::invalid_argument("tensor spec parameter " + key + " is not an integer: " +
                                        it->second);
        }
    };
    auto getd = [&](const std::string& key) {
        auto it = params.find(key);
        if (it == params.end()) throw std::invalid_argument("tensor spec missing parameter " + key);
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw std::invalid_argument("tensor spec parameter " + key + " is not a number: " +
                                        it->second);
        }
    };
    if (name == "unit") return unit_tensor(geti("n"), geti("k"));
    if (name == "sp") return s_p(getd("p"));
    if (name == "qgamma") return q_gamma(getd("g"));
    if (name == "w") return w_state(geti("k"));
    if (name == "ameL") return ame_L(geti("k"));
    if (name == "det") return det_tensor(geti("k"));
    if (name == "unit2S") {
        int k = geti("k");
        auto it = params.find("S");
        if (it == params.end()) throw std::invalid_argument("tensor spec missing parameter S");
        std::uint32_t mask = 0;
        for (char ch : it->second) {
            if (ch < 'A' || ch >= 'A' + k)
                throw std::invalid_argument("unit2S: party letter out of range");
            mask |= 1u << (ch - 'A');
        }
        return unit2_on_subset(mask, k);
    }
    throw std::invalid_argument("unknown tensor family: " + name);
}

}  // namespace tqf
