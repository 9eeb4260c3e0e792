#include "tq/fano.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace tq {

namespace {

void check_query(const FanoQuery& q) {
    if (q.r < 1 || q.r > q.n || q.t < 0 || q.t > q.n - 2)
        throw PreconditionViolated("fano query needs 1 <= r <= n and 0 <= t <= n-2");
}

}  // namespace

bool fano_nonempty(const FanoQuery& q) {
    check_query(q);
    return 2 * q.t <= 2 * q.n - q.r - 2;
}

std::optional<long> fano_dim(const FanoQuery& q) {
    if (!fano_nonempty(q)) return std::nullopt;
    const long n = q.n, t = q.t, r = q.r;
    if (2 * t + 2 <= r && r <= 2 * n - 2 * t - 2) {
        long twice = (t + 1) * (2 * n - 4 - 3 * t);
        if (twice % 2 != 0) throw Error("closed-form Fano dimension is not an integer");
        return twice / 2;
    }
    if (r < 2 || r > 2 * n - 2 * t - 2) throw NotApplicable("fano dimension formula not applicable");
    if (t == 0) return n - 2;
    auto sub = fano_dim({n - 2, t - 1, r - 2});
    if (!sub) return std::nullopt;
    return n - 2 - t + *sub;
}

std::optional<long> fano_dim_through_point(const FanoQuery& q) {
    check_query(q);
    if (q.t < 1 || q.r < 2) throw PreconditionViolated("planes through a point need t >= 1 and r >= 2");
    return fano_dim({q.n - 2, q.t - 1, q.r - 2});
}

namespace {

struct PlaneCounter {
    u64 p;
    std::size_t n;
    std::size_t k;  // subspace dimension t+1
    std::vector<u64> b;  // n x n bilinear form mod p

    u64 bil(const std::vector<u64>& x, const std::vector<u64>& y) const {
        u64 s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            u64 row = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (y[j]) row = (row + b[i * n + j] * y[j]) % p;
            s = (s + x[i] * row) % p;
        }
        return s;
    }

    // Count isotropic subspaces with the given pivot columns.
    u64 count(const std::vector<std::size_t>& piv) const {
        std::vector<std::vector<u64>> rows;
        return extend(piv, rows);
    }

    u64 extend(const std::vector<std::size_t>& piv, std::vector<std::vector<u64>>& rows) const {
        const std::size_t j = rows.size();
        if (j == k) return 1;
        std::vector<std::size_t> free;
        for (std::size_t c = piv[j] + 1; c < n; ++c)
            if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back(c);
        std::vector<u64> base(n, 0);
        base[piv[j]] = 1;
        // linear conditions b(r_i, x) = 0 on the free entries: sum_f y_f b(r_i, e_f) = -b(r_i, e_pivot)
        const std::size_t m = free.size();
        std::vector<std::vector<u64>> sys;  // rows: coefficients | rhs
        for (const auto& r : rows) {
            std::vector<u64> eq(m + 1);
            std::vector<u64> e(n, 0);
            for (std::size_t f = 0; f < m; ++f) {
                std::fill(e.begin(), e.end(), 0);
                e[free[f]] = 1;
                eq[f] = bil(r, e);
            }
            eq[m] = (p - bil(r, base)) % p;
            sys.push_back(std::move(eq));
        }
        // row reduce mod p
        std::vector<std::size_t> pivcol;
        std::size_t rr = 0;
        for (std::size_t c = 0; c < m && rr < sys.size(); ++c) {
            std::size_t q = rr;
            while (q < sys.size() && sys[q][c] == 0) ++q;
            if (q == sys.size()) continue;
            std::swap(sys[q], sys[rr]);
            u64 inv = invmod(sys[rr][c], p);
            for (auto& v : sys[rr]) v = mulmod(v, inv, p);
            for (std::size_t i = 0; i < sys.size(); ++i) {
                if (i == rr || sys[i][c] == 0) continue;
                u64 f = sys[i][c];
                for (std::size_t x = 0; x <= m; ++x) sys[i][x] = (sys[i][x] + p - mulmod(f, sys[rr][x], p)) % p;
            }
            pivcol.push_back(c);
            ++rr;
        }
        for (std::size_t i = rr; i < sys.size(); ++i)
            if (sys[i][m] != 0) return 0;
        std::vector<std::size_t> params;
        for (std::size_t c = 0; c < m; ++c)
            if (std::find(pivcol.begin(), pivcol.end(), c) == pivcol.end()) params.push_back(c);
        std::vector<u64> y(m, 0), par(params.size(), 0);
        u64 total = 0;
        for (;;) {
            for (std::size_t a = 0; a < params.size(); ++a) y[params[a]] = par[a];
            for (std::size_t i = 0; i < rr; ++i) {
                u64 v = sys[i][m];
                for (std::size_t a = 0; a < params.size(); ++a)
                    v = (v + p - mulmod(sys[i][params[a]], par[a], p)) % p;
                y[pivcol[i]] = v;
            }
            std::vector<u64> x = base;
            for (std::size_t f = 0; f < m; ++f) x[free[f]] = y[f];
            if (bil(x, x) == 0) {
                rows.push_back(x);
                total += extend(piv, rows);
                rows.pop_back();
            }
            std::size_t a = 0;
            for (; a < params.size(); ++a) {
                if (++par[a] < p) break;
                par[a] = 0;
            }
            if (a == params.size()) break;
        }
        return total;
    }
};

}  // namespace

CountRecord count_planes_ff(const QuadForm& q, u64 p, long t, const CountOptions& opts) {
    const std::size_t n = q.n();
    if (p < 3 || !is_prime(p)) throw PreconditionViolated("plane counting needs an odd prime");
    if (t < 0 || static_cast<std::size_t>(t) + 1 > n) throw PreconditionViolated("plane dimension out of range");
    const std::size_t k = static_cast<std::size_t>(t) + 1;
    double cells = static_cast<double>(k * (n - k)) * std::log(static_cast<double>(p));
    if (cells > std::log(static_cast<double>(opts.max_cells)) + 1e-9) throw BudgetExceeded("plane enumeration exceeds budget");

    PlaneCounter pc{p, n, k, std::vector<u64>(n * n)};
    auto g = primitive_integer_gram2(q);
    Int pp(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pc.b[i * n + j] = mod_positive(g[i][j], pp).get_ui();

    std::vector<std::vector<std::size_t>> patterns;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    for (;;) {
        patterns.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }

    std::vector<u64> counts(patterns.size(), 0);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t idx; (idx = next.fetch_add(1)) < patterns.size();) counts[idx] = pc.count(patterns[idx]);
    };
    unsigned workers = std::max(1u, opts.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    CountRecord rec{p, t, 0};
    for (u64 c : counts) rec.count += c;
    return rec;
}

namespace {

void check_records(const std::vector<CountRecord>& records) {
    if (records.size() < 2) throw PreconditionViolated("degree fit needs at least two records");
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].count == 0) throw PreconditionViolated("degree fit needs positive counts");
        for (std::size_t j = 0; j < i; ++j)
            if (records[i].p == records[j].p) throw PreconditionViolated("degree fit needs distinct primes");
    }
}

}  // namespace

long fit_count_degree(const std::vector<CountRecord>& records) {
    check_records(records);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(records.size());
    for (const auto& r : records) {
        double x = std::log(static_cast<double>(r.p)), y = std::log(static_cast<double>(r.count));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return std::lround(slope);
}

long fit_count_degree_top2(const std::vector<CountRecord>& records) {
    check_records(records);
    auto sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const CountRecord& a, const CountRecord& b) { return a.p < b.p; });
    const auto& a = sorted[sorted.size() - 2];
    const auto& b = sorted.back();
    double slope = std::log(static_cast<double>(b.count) / static_cast<double>(a.count)) /
                   std::log(static_cast<double>(b.p) / static_cast<double>(a.p));
    return std::lround(slope);
}

}  // namespace tq
