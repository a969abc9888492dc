#include "tqf/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tqf {

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] <= 0) throw std::invalid_argument("partition parts must be positive");
        if (i > 0 && parts[i] > parts[i - 1])
            throw std::invalid_argument("partition parts must be weakly decreasing");
    }
}

int Partition::n() const {
    return std::accumulate(parts.begin(), parts.end(), 0);
}

std::string Partition::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts[i]);
    }
    return s + ")";
}

static long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

CycleType::CycleType(std::vector<int> p) : parts(std::move(p)) {
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    int total = std::accumulate(parts.begin(), parts.end(), 0);
    // class size = n! / prod_j j^{m_j} m_j!
    std::map<int, int> mult;
    for (int x : parts) {
        if (x <= 0) throw std::invalid_argument("cycle lengths must be positive");
        mult[x]++;
    }
    long long denom = 1;
    for (auto [j, m] : mult) {
        for (int t = 0; t < m; ++t) denom *= j;
        denom *= factorial(m);
    }
    class_size = factorial(total) / denom;
}

int CycleType::n() const {
    return std::accumulate(parts.begin(), parts.end(), 0);
}

static void gen_partitions(int remaining, int max_part, int rows_left,
                           std::vector<int>& cur, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (rows_left == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        gen_partitions(remaining - p, p, rows_left - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Partition> enumerate_partitions(int n, int max_rows) {
    if (n < 1) throw std::invalid_argument("enumerate_partitions: n must be >= 1");
    std::vector<Partition> out;
    std::vector<int> cur;
    gen_partitions(n, n, max_rows > 0 ? max_rows : n, cur, out);
    return out;
}

std::vector<CycleType> conjugacy_classes(int n) {
    std::vector<CycleType> out;
    for (const auto& p : enumerate_partitions(n)) out.emplace_back(p.parts);
    return out;
}

// Border-strip removal on beta numbers. Returns (partition after removal, height)
// pairs for every removable strip of length t.
static std::vector<std::pair<Partition, int>> remove_border_strips(const Partition& lambda, int t) {
    int r = lambda.rows();
    std::vector<int> beta(r);
    for (int i = 0; i < r; ++i) beta[i] = lambda.parts[i] + (r - 1 - i);
    std::vector<std::pair<Partition, int>> out;
    for (int i = 0; i < r; ++i) {
        int b = beta[i];
        if (b < t) continue;
        int target = b - t;
        bool occupied = false;
        int jumped = 0;
        for (int j = 0; j < r; ++j) {
            if (j == i) continue;
            if (beta[j] == target) occupied = true;
            if (beta[j] > target && beta[j] < b) ++jumped;
        }
        if (occupied) continue;
        std::vector<int> nb = beta;
        nb[i] = target;
        std::sort(nb.begin(), nb.end(), std::greater<int>());
        std::vector<int> parts;
        int nr = static_cast<int>(nb.size());
        for (int j = 0; j < nr; ++j) {
            int part = nb[j] - (nr - 1 - j);
            if (part > 0) parts.push_back(part);
        }
        out.emplace_back(Partition(parts), jumped);
    }
    return out;
}

static long long mn_character(const Partition& lambda, const std::vector<int>& cycles, std::size_t pos);

static std::map<std::pair<std::vector<int>, std::vector<int>>, long long> g_char_cache;
static std::mutex g_char_mutex;

static long long mn_character(const Partition& lambda, const std::vector<int>& cycles, std::size_t pos) {
    if (pos == cycles.size()) return 1;  // empty diagram, empty cycle type
    int t = cycles[pos];
    long long sum = 0;
    for (const auto& [rest, height] : remove_border_strips(lambda, t)) {
        long long sign = (height % 2 == 0) ? 1 : -1;
        sum += sign * mn_character(rest, cycles, pos + 1);
    }
    return sum;
}

long long character(const Partition& lambda, const CycleType& c) {
    if (lambda.n() != c.n()) throw std::invalid_argument("character: |lambda| != |cycle type|");
    std::pair<std::vector<int>, std::vector<int>> key{lambda.parts, c.parts};
    {
        std::lock_guard<std::mutex> lock(g_char_mutex);
        auto it = g_char_cache.find(key);
        if (it != g_char_cache.end()) return it->second;
    }
    long long value = mn_character(lambda, c.parts, 0);
    {
        std::lock_guard<std::mutex> lock(g_char_mutex);
        g_char_cache.emplace(key, value);
    }
    return value;
}

long long irrep_dimension(const Partition& lambda) {
    int n = lambda.n();
    if (n == 0) return 1;
    std::vector<int> conj;  // conjugate partition
    for (int j = 0; j < lambda.parts[0]; ++j) {
        int col = 0;
        for (int p : lambda.parts)
            if (p > j) ++col;
        conj.push_back(col);
    }
    long long num = factorial(n);
    long long denom = 1;
    for (int i = 0; i < lambda.rows(); ++i)
        for (int j = 0; j < lambda.parts[i]; ++j)
            denom *= (lambda.parts[i] - j) + (conj[j] - i) - 1;
    return num / denom;
}

double diagram_entropy(const Partition& lambda) {
    double n = lambda.n();
    double h = 0.0;
    for (int p : lambda.parts) {
        double x = p / n;
        h -= x * std::log2(x);
    }
    return h;
}

bool row_bound_check(const Partition& nu, const Partition& mu, const Partition& lambda) {
    if (nu.n() != mu.n() || nu.n() != lambda.n())
        throw std::invalid_argument("row_bound_check: partition sizes differ");
    int rows = std::max(mu.rows(), lambda.rows());
    int cap = 0;
    for (int i = 0; i < rows; ++i) cap += std::min(mu.part(i), lambda.part(i));
    return nu.part(0) <= cap;
}

const std::vector<std::vector<int>>& permutations(int n) {
    static std::mutex mutex;
    static std::map<int, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> all;
    do {
        all.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return cache.emplace(n, std::move(all)).first->second;
}

std::vector<int> cycle_type_of(const std::vector<int>& perm) {
    int n = static_cast<int>(perm.size());
    std::vector<bool> seen(n, false);
    std::vector<int> type;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = perm[j];
            ++len;
        }
        type.push_back(len);
    }
    std::sort(type.begin(), type.end(), std::greater<int>());
    return type;
}

}  // namespace tqf
