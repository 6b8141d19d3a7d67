#include "returnstat/returns.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "returnstat/errors.hpp"

namespace returnstat {

namespace {

bool matches_at(const std::vector<Symbol>& path, const Word& w, std::size_t offset) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (path[offset + i] != w[i]) return false;
    return true;
}

// All offsets i with path[i..i+n-1] == w, as a 0/1 table (KMP scan).
void occurrence_scan(const std::vector<Symbol>& path, const Word& w,
                     std::vector<std::uint8_t>& hit) {
    const auto& pat = w.symbols();
    const std::size_t n = pat.size();
    std::vector<std::size_t> fail(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t k = fail[i - 1];
        while (k > 0 && pat[i] != pat[k]) k = fail[k - 1];
        if (pat[i] == pat[k]) ++k;
        fail[i] = k;
    }
    std::fill(hit.begin(), hit.end(), 0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        while (k > 0 && path[i] != pat[k]) k = fail[k - 1];
        if (path[i] == pat[k]) ++k;
        if (k == n) {
            hit[i + 1 - n] = 1;
            k = fail[k - 1];
        }
    }
}

std::uint64_t count_from_path(const std::vector<Symbol>& path, const Word& w,
                              const ReturnSetup& setup, std::uint64_t trials,
                              std::vector<std::uint8_t>& hit_buffer) {
    const std::size_t L = path.size();
    const std::size_t n = w.size();
    std::uint64_t count = 0;
    const std::uint64_t probe_cost = trials * setup.d.size();
    if (probe_cost < L) {
        for (std::uint64_t k = 1; k <= trials; ++k) {
            bool all = true;
            for (int dj : setup.d) {
                std::size_t off = static_cast<std::size_t>(dj) * k;
                if (off + n > L || !matches_at(path, w, off)) {
                    all = false;
                    break;
                }
            }
            count += all;
        }
    } else {
        hit_buffer.assign(L, 0);
        occurrence_scan(path, w, hit_buffer);
        for (std::uint64_t k = 1; k <= trials; ++k) {
            bool all = true;
            for (int dj : setup.d) {
                std::size_t off = static_cast<std::size_t>(dj) * k;
                if (off + n > L || !hit_buffer[off]) {
                    all = false;
                    break;
                }
            }
            count += all;
        }
    }
    return count;
}

}  // namespace

std::uint64_t trials_count(const ShiftModel& model, const Word& w,
                           const ReturnSetup& setup) {
    double p = model.cylinder_prob(w);
    if (!(p > 0.0)) throw DomainError("zero-measure cylinder in trials_count");
    // the 1e-12 relative nudge keeps floor() from eating representation
    // error when t P^{-ell} is an exact integer in real arithmetic
    double n_real = setup.t * std::pow(p, -static_cast<double>(setup.ell()));
    n_real *= 1.0 + 1e-12;
    if (n_real < 1.0)
        throw DomainError("degenerate setup: t P[w]^{-ell} < 1 gives no trials");
    if (n_real > 9e15) throw CapacityError("trial count exceeds 2^53");
    return static_cast<std::uint64_t>(n_real);
}

double beta(const ShiftModel& model, const Word& block, std::size_t n) {
    if (!is_primitive(block))
        throw ParameterError("beta expects the minimal period block");
    if (n < block.size()) throw ParameterError("beta needs n >= |block|");
    double denom = model.cylinder_prob(periodic_extension(block, n));
    if (!(denom > 0.0)) throw DomainError("zero-measure cylinder in beta");
    double numer = model.cylinder_prob(periodic_extension(block, n + block.size()));
    return numer / denom;
}

double rho(const ShiftModel& model, const Word& w, const ReturnSetup& setup) {
    double pw = model.cylinder_prob(w);
    if (!(pw > 0.0)) throw DomainError("zero-measure cylinder in rho");
    const std::size_t r = period(w);
    const long long kap = kappa(static_cast<long long>(r), setup);
    Word block(std::vector<Symbol>(w.symbols().begin(),
                                   w.symbols().begin() + static_cast<long>(r)));
    double out = 1.0;
    for (int dj : setup.d) {
        std::size_t len = w.size() + static_cast<std::size_t>(dj) * kap;
        out *= model.cylinder_prob(periodic_extension(block, len)) / pw;
    }
    return out;
}

double predicted_rho(const ShiftModel& model, const Word& block,
                     const ReturnSetup& setup) {
    if (!model.has_closed_form_jacobian())
        throw UnsupportedError("model exposes no closed-form inverse Jacobian");
    if (!is_primitive(block))
        throw ParameterError("predicted_rho expects the minimal period block");
    const std::size_t r = block.size();
    double prod = 1.0;
    std::vector<Symbol> rot = block.symbols();
    for (std::size_t j = 0; j < r; ++j) {
        prod *= model.inverse_jacobian(Word(rot));
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
    double a = cluster_exponent(static_cast<long long>(r), setup).value();
    double value = std::pow(prod, a);
    if (!(value >= 0.0 && value < 1.0))
        throw DomainError("predicted rho fell outside [0,1)");
    return value;
}

ClusterStats cluster_stats(const ShiftModel& model, const Word& word, std::size_t n,
                           const ReturnSetup& setup) {
    Word ext = periodic_extension(word, n);
    const std::size_t r = period(ext);
    // the leading period block is primitive: a power structure would
    // shorten the overlap period of the extension
    Word block(std::vector<Symbol>(ext.symbols().begin(),
                                   ext.symbols().begin() + static_cast<long>(r)));
    ClusterStats out{
        .period_r = r,
        .kappa_value = kappa(static_cast<long long>(r), setup),
        .exponent_a = cluster_exponent(static_cast<long long>(r), setup),
        .cylinder_p = model.cylinder_prob(ext),
        .trials = trials_count(model, ext, setup),
        .beta_n = beta(model, block, n),
        .rho_n = rho(model, ext, setup),
        .rho_predicted = std::numeric_limits<double>::quiet_NaN(),
        .pa_t = std::numeric_limits<double>::quiet_NaN(),
        .pa_p = std::numeric_limits<double>::quiet_NaN(),
    };
    if (model.has_closed_form_jacobian()) {
        out.rho_predicted = predicted_rho(model, block, setup);
        out.pa_t = setup.t * (1.0 - out.rho_predicted);
        out.pa_p = out.rho_predicted;
    }
    return out;
}

CountSample simulate_count(const ShiftModel& model, const Word& w,
                           const ReturnSetup& setup, RngStream& rng) {
    const std::uint64_t trials = trials_count(model, w, setup);
    const std::size_t path_len =
        static_cast<std::size_t>(setup.d.back()) * trials + w.size();
    std::vector<Symbol> path(path_len);
    std::vector<std::uint8_t> hits;
    model.sample_path(path, rng);
    return {count_from_path(path, w, setup, trials, hits), path_len};
}

std::vector<std::uint64_t> simulate_many(const ShiftModel& model, const Word& w,
                                         const ReturnSetup& setup, std::uint64_t m,
                                         std::uint64_t master_seed, std::uint64_t salt,
                                         int workers) {
    if (m == 0) throw ParameterError("need at least one sample");
    const std::uint64_t trials = trials_count(model, w, setup);
    const std::size_t path_len =
        static_cast<std::size_t>(setup.d.back()) * trials + w.size();

    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = std::max(1, hw);
    workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), m));

    std::vector<std::uint64_t> out(m);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    const std::uint64_t chunk = (m + workers - 1) / workers;
    for (int wk = 0; wk < workers; ++wk) {
        const std::uint64_t begin = chunk * static_cast<std::uint64_t>(wk);
        const std::uint64_t end = std::min(m, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, wk, begin, end]() {
            try {
                std::vector<Symbol> path(path_len);
                std::vector<std::uint8_t> hits;
                for (std::uint64_t i = begin; i < end; ++i) {
                    RngStream stream = RngStream::derive(master_seed, salt, i);
                    model.sample_path(path, stream);
                    out[i] = count_from_path(path, w, setup, trials, hits);
                }
            } catch (...) {
                failures[wk] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    return out;
}

DistributionOnN exact_count_distribution(const ShiftModel& model, const Word& w,
                                         const ReturnSetup& setup) {
    if (model.countable_alphabet())
        throw CapacityError("exact enumeration needs a finite alphabet");
    const std::uint64_t trials = trials_count(model, w, setup);
    const std::size_t path_len =
        static_cast<std::size_t>(setup.d.back()) * trials + w.size();
    const double alphabet = model.alphabet_size();
    if (static_cast<double>(path_len) * std::log(alphabet) > std::log(1e7))
        throw CapacityError("path enumeration exceeds the 1e7 guard");

    const std::size_t n = w.size();
    std::vector<double> pmf(trials + 1, 0.0);
    std::vector<Symbol> path(path_len);
    std::vector<std::uint8_t> hits(path_len, 0);
    auto walker = model.prefix_walker();

    const Symbol lo = model.min_symbol();
    const Symbol hi = lo + model.alphabet_size();

    // DFS over paths; occurrence flags are settled as soon as an offset's
    // window is fully placed and unwound together with the walker.
    auto descend = [&](auto&& self, std::size_t depth, double prob) -> void {
        if (depth == path_len) {
            std::uint64_t count = 0;
            for (std::uint64_t k = 1; k <= trials; ++k) {
                bool all = true;
                for (int dj : setup.d) {
                    std::size_t off = static_cast<std::size_t>(dj) * k;
                    if (off + n > path_len || !hits[off]) {
                        all = false;
                        break;
                    }
                }
                count += all;
            }
            pmf[count] += prob;
            return;
        }
        for (Symbol a = lo; a < hi; ++a) {
            double p = walker->push(a);
            if (p > 0.0) {
                path[depth] = a;
                bool settled = depth + 1 >= n;
                if (settled) {
                    std::size_t off = depth + 1 - n;
                    hits[off] = matches_at(path, w, off) ? 1 : 0;
                }
                self(self, depth + 1, p);
            }
            walker->pop();
        }
    };
    descend(descend, 0, 1.0);

    long double total = 0.0L;
    for (double v : pmf) total += v;
    double tail = total < 1.0L ? static_cast<double>(1.0L - total) : 0.0;
    return DistributionOnN(std::move(pmf), tail, DistKind::generic);
}

}  // namespace returnstat
