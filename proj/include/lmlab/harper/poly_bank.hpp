#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "../arith/coefficients.hpp"
#include "../arith/primes.hpp"
#include "../errors.hpp"
#include "../lfunc/euler_maclaurin.hpp"
#include "../lfunc/nufft.hpp"
#include "schedule.hpp"

namespace lmlab {

namespace detail {

inline cplx weighted_lambda(std::uint64_t n, const std::vector<double>& k, const std::vector<SatakeSpec>& specs) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * lambda_pi(specs[i], n);
    return s;
}

// Lambda_x(n) with the convention Lambda_x(n) = 0 for n > x.
inline cplx smoothed_lambda_or_zero(double x, std::uint64_t n, const std::vector<double>& k,
                                    const std::vector<SatakeSpec>& specs) {
    const double dn = static_cast<double>(n);
    if (dn > x) return 0.0;
    const double lx = std::log(x), ln = std::log(dn);
    const cplx num = weighted_lambda(n, k, specs);
    if (num == 0.0) return 0.0;
    return num / ln * (std::log(x / dn) / (std::exp(ln / lx) * lx));
}

} // namespace detail

// Lambda_x(n) = (sum_j k_j Lambda_{pi_j}(n) / log n) log(x/n) / (n^{1/log x} log x), for 2 <= n <= x.
inline cplx smoothed_lambda(double x, std::uint64_t n, const std::vector<double>& k, const std::vector<SatakeSpec>& specs) {
    if (k.size() != specs.size()) throw DomainError("k and specs lengths differ");
    if (n < 2) throw DomainError("smoothed_lambda requires n >= 2");
    if (static_cast<double>(n) > x) throw DomainError("smoothed_lambda requires n <= x");
    return detail::smoothed_lambda_or_zero(x, n, k, specs);
}

// Coefficients c_n over n with log n; values are sum_n c_n n^{-s}.
struct PolyTable {
    std::vector<cplx> coef;
    std::vector<long double> log_n;

    std::size_t support() const { return coef.size(); }

    cplx operator()(cplx s) const {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < coef.size(); ++i)
            acc += coef[i] * std::exp(-s.real() * static_cast<double>(log_n[i])) * detail::unit_phase(s.imag() * log_n[i]);
        return acc;
    }

    // Values at sigma + i scale (t0 + j delta), j < count.
    std::vector<cplx> on_line(double sigma, double scale, long double t0, long double delta, std::size_t count) const {
        std::vector<cplx> c(coef.size());
        std::vector<long double> lam(coef.size());
        for (std::size_t i = 0; i < coef.size(); ++i) {
            c[i] = coef[i] * std::exp(-sigma * static_cast<double>(log_n[i]));
            lam[i] = scale * log_n[i];
        }
        std::vector<cplx> out(count, 0.0);
        detail::dirichlet_sum_grid(c, lam, t0, delta, count, out.data());
        return out;
    }
};

inline constexpr double default_term_budget = 1e7;

namespace detail {

// Number of n built from r primes with Omega(n) <= L: C(L + r, r).
inline double capped_support_size(std::size_t r, long L) {
    if (L < 0) return 0.0;
    return std::exp(std::lgamma(double(L + r) + 1.0) - std::lgamma(double(L) + 1.0) - std::lgamma(double(r) + 1.0));
}

// Depth-first enumeration of sum over n = prod p_i^{eta_i}, sum eta_i <= L, of prod w_i^{eta_i} / eta_i!.
inline PolyTable truncated_exponential_table(const std::vector<std::uint64_t>& primes, const std::vector<cplx>& w,
                                             long L, double budget, const char* what) {
    std::vector<std::uint64_t> ps;
    std::vector<cplx> ws;
    for (std::size_t i = 0; i < primes.size(); ++i)
        if (w[i] != 0.0) {
            ps.push_back(primes[i]);
            ws.push_back(w[i]);
        }
    const double need = capped_support_size(ps.size(), L);
    if (need > budget)
        throw ResourceError(std::string(what) + ": support of " + std::to_string(need) + " terms exceeds the budget",
                            budget, need);
    PolyTable t;
    t.coef.reserve(static_cast<std::size_t>(need));
    t.log_n.reserve(static_cast<std::size_t>(need));
    std::vector<long double> lp(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) lp[i] = std::log(static_cast<long double>(ps[i]));
    auto rec = [&](auto&& self, std::size_t i, cplx c, long double ln, long left) -> void {
        if (i == ps.size()) {
            t.coef.push_back(c);
            t.log_n.push_back(ln);
            return;
        }
        cplx term = c;
        for (long eta = 0; eta <= left; ++eta) {
            self(self, i + 1, term, ln + eta * lp[i], left - eta);
            term *= ws[i] / static_cast<double>(eta + 1);
        }
    };
    rec(rec, 0, 1.0, 0.0L, L);
    return t;
}

} // namespace detail

// P_{j,x}, N_{j,x} (via g_x) and M_x (via h_x) for a schedule. Tables are built on first use
// and immutable afterwards.
class PolyBank {
public:
    PolyBank(HarperSchedule schedule, std::vector<double> k, std::vector<SatakeSpec> specs,
             double budget = default_term_budget)
        : sched_(std::move(schedule)), k_(std::move(k)), specs_(std::move(specs)), budget_(budget) {
        if (k_.size() != specs_.size() || k_.empty()) throw DomainError("PolyBank: k and specs lengths differ");
        bound_ = 0.0;
        grc_ = true;
        for (std::size_t i = 0; i < k_.size(); ++i) {
            bound_ += std::fabs(k_[i]) * specs_[i].degree();
            grc_ = grc_ && specs_[i].grc_asserted();
        }
        const double lT = std::log(sched_.T);
        m_primes_ = lT >= 2.0 ? primes_below(static_cast<std::uint64_t>(std::floor(lT)) + 1) : std::vector<std::uint64_t>{};
        const double llt = std::log(lT);
        m_cap_ = lT > 1.0 ? static_cast<long>(std::floor(10.0 * llt * llt)) : 0;
    }

    const HarperSchedule& schedule() const { return sched_; }
    const std::vector<double>& k() const { return k_; }
    const std::vector<SatakeSpec>& specs() const { return specs_; }
    double weight_bound() const { return bound_; }

    // Primes of block j: T_{j-1} < p <= T_j.
    std::vector<std::uint64_t> block_primes(int j) const {
        check_j(j);
        const double lo = sched_.T_at(j - 1), hi = sched_.T_at(j);
        std::vector<std::uint64_t> out;
        if (hi < 2.0) return out;
        for (auto p : primes_below(static_cast<std::uint64_t>(std::floor(hi)) + 1))
            if (static_cast<double>(p) > lo && static_cast<double>(p) <= hi) out.push_back(p);
        return out;
    }

    std::vector<cplx> prime_weights(const std::vector<std::uint64_t>& ps, double x, int power) const {
        std::vector<cplx> w;
        for (auto p : ps) {
            std::uint64_t n = p;
            for (int i = 1; i < power; ++i) n *= p;
            const cplx v = detail::smoothed_lambda_or_zero(x, n, k_, specs_);
            if (grc_ && std::abs(v) > bound_ * (1 + 1e-12))
                throw DataError("smoothed weight exceeds sum k_j m_j at p = " + std::to_string(p));
            w.push_back(v);
        }
        return w;
    }

    const PolyTable& P(int j, double x) const {
        return cached('P', j, x, [&] {
            PolyTable t;
            const auto ps = block_primes(j);
            const auto w = prime_weights(ps, x, 1);
            for (std::size_t i = 0; i < ps.size(); ++i) {
                t.coef.push_back(w[i]);
                t.log_n.push_back(std::log(static_cast<long double>(ps[i])));
            }
            return t;
        });
    }

    // Omega(n) <= 10 K_j, primes of block j, g_x(p^eta) = Lambda_x(p)^eta / eta!.
    const PolyTable& N(int j, double x) const {
        return cached('N', j, x, [&] {
            const auto ps = block_primes(j);
            return detail::truncated_exponential_table(ps, prime_weights(ps, x, 1), n_cap(j), budget_, "N table");
        });
    }

    // Omega(n) <= 10 (log log T)^2, p <= log T, h_x(p^eta) = Lambda_x(p^2)^eta / eta!.
    const PolyTable& M(double x) const {
        return cached('M', 0, x, [&] {
            return detail::truncated_exponential_table(m_primes_, prime_weights(m_primes_, x, 2), m_cap_, budget_, "M table");
        });
    }

    long n_cap(int j) const { return static_cast<long>(std::floor(10.0 * sched_.K_at(j))); }
    long m_cap() const { return m_cap_; }

    cplx eval_P(int j, double x, double t) const { return P(j, x)(cplx(0.5, t)); }
    cplx eval_N(int j, double x, double t) const { return N(j, x)(cplx(0.5, t)); }
    cplx eval_M(double x, double t) const { return M(x)(cplx(1.0, 2.0 * t)); }

private:
    void check_j(int j) const {
        if (j < 1 || j > sched_.J) throw DomainError("block index " + std::to_string(j) + " outside 1..J");
    }

    template <class Build>
    const PolyTable& cached(char kind, int j, double x, Build&& build) const {
        if (kind != 'M') check_j(j);
        const auto key = std::make_tuple(kind, j, x);
        {
            std::lock_guard lock(mu_);
            auto it = tables_.find(key);
            if (it != tables_.end()) return *it->second;
        }
        auto t = std::make_unique<PolyTable>(build());
        std::lock_guard lock(mu_);
        auto [it, inserted] = tables_.emplace(key, std::move(t));
        return *it->second;
    }

    HarperSchedule sched_;
    std::vector<double> k_;
    std::vector<SatakeSpec> specs_;
    double budget_;
    double bound_ = 0.0;
    bool grc_ = true;
    std::vector<std::uint64_t> m_primes_;
    long m_cap_ = 0;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<char, int, double>, std::unique_ptr<PolyTable>> tables_;
};

} // namespace lmlab
