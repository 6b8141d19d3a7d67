#include "returnstat/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace returnstat {

namespace {

constexpr double kMassBudgetTol = 1e-12;

void check_rate(double t) {
    if (!(t > 0.0)) throw ParameterError("rate t must be > 0");
}

void check_success(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw ParameterError("p must be in [0,1)");
}

// Remaining tail after keeping masses[0..size-1]; clamped long-double sum
// keeps the sum+tail==1 invariant exact to well below 1e-12.
double residual_tail(const std::vector<double>& masses) {
    long double s = 0.0L;
    for (double m : masses) s += m;
    long double tail = 1.0L - s;
    return tail > 0.0L ? static_cast<double>(tail) : 0.0;
}

}  // namespace

std::string to_string(DistKind kind) {
    switch (kind) {
        case DistKind::poisson: return "poisson";
        case DistKind::geometric: return "geometric";
        case DistKind::compound_poisson: return "compound_poisson";
        case DistKind::polya_aeppli: return "polya_aeppli";
        case DistKind::empirical: return "empirical";
        case DistKind::generic: return "generic";
    }
    throw ParameterError("unknown distribution kind");
}

DistKind dist_kind_from_string(const std::string& s) {
    if (s == "poisson") return DistKind::poisson;
    if (s == "geometric") return DistKind::geometric;
    if (s == "compound_poisson") return DistKind::compound_poisson;
    if (s == "polya_aeppli") return DistKind::polya_aeppli;
    if (s == "empirical") return DistKind::empirical;
    if (s == "generic") return DistKind::generic;
    throw ParameterError("unknown distribution kind: " + s);
}

DistributionOnN::DistributionOnN(std::vector<double> masses, double tail_mass,
                                 DistKind kind, std::map<std::string, double> params)
    : masses_(std::move(masses)),
      tail_mass_(tail_mass),
      kind_(kind),
      params_(std::move(params)) {
    if (masses_.empty()) throw ParameterError("distribution needs at least one mass");
    if (!(tail_mass_ >= 0.0))
        throw ParameterError("tail_mass must be nonnegative");
    long double sum = tail_mass_;
    for (double m : masses_) {
        if (!(m >= 0.0 && m <= 1.0))
            throw ParameterError("pmf mass outside [0,1]");
        sum += m;
    }
    if (std::fabs(static_cast<double>(sum - 1.0L)) > kMassBudgetTol)
        throw ParameterError("masses + tail_mass must sum to 1 within 1e-12");
}

DistributionOnN DistributionOnN::poisson(double t, double tol) {
    check_rate(t);
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
    std::vector<double> masses;
    long double cum = 0.0L;
    for (std::uint64_t k = 0; cum < 1.0L - tol; ++k) {
        masses.push_back(poisson_pmf(t, k));
        cum += masses.back();
        if (k > 100000) throw ParameterError("poisson truncation failed to converge");
    }
    double tail = residual_tail(masses);
    return DistributionOnN(std::move(masses), tail, DistKind::poisson, {{"t", t}});
}

DistributionOnN DistributionOnN::geometric(double p, double tol) {
    check_success(p);
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
    std::vector<double> masses{0.0};  // support is {1,2,...}
    long double cum = 0.0L;
    for (std::uint64_t k = 1; cum < 1.0L - tol; ++k) {
        masses.push_back(geometric_pmf(p, k));
        cum += masses.back();
        if (k > 1000000) break;
    }
    double tail = residual_tail(masses);
    return DistributionOnN(std::move(masses), tail, DistKind::geometric, {{"p", p}});
}

DistributionOnN DistributionOnN::polya_aeppli(double t, double p, double tol) {
    check_rate(t);
    check_success(p);
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
    std::vector<double> masses;
    long double cum = 0.0L;
    for (std::uint64_t k = 0; cum < 1.0L - tol; ++k) {
        masses.push_back(polya_aeppli_pmf(t, p, k));
        cum += masses.back();
        if (k > 1000000) break;
    }
    double tail = residual_tail(masses);
    return DistributionOnN(std::move(masses), tail, DistKind::polya_aeppli,
                           {{"t", t}, {"p", p}});
}

DistributionOnN DistributionOnN::compound_poisson(double t, const DistributionOnN& nu,
                                                  double tol) {
    check_rate(t);
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");

    // Poisson cut J: keep j-terms while the remaining tail exceeds tol/2.
    std::vector<double> pois;
    long double cum = 0.0L;
    for (std::uint64_t j = 0; cum < 1.0L - tol * 0.5; ++j) {
        pois.push_back(poisson_pmf(t, j));
        cum += pois.back();
    }

    const std::size_t kcap = nu.k_max() * pois.size() + 1;
    std::vector<double> masses(std::min<std::size_t>(kcap, 1 << 20), 0.0);
    std::vector<double> power{1.0};  // (nu*)^0 = delta_0
    for (std::size_t j = 0; j < pois.size(); ++j) {
        for (std::size_t k = 0; k < power.size() && k < masses.size(); ++k)
            masses[k] += pois[j] * power[k];
        if (j + 1 < pois.size()) {
            std::vector<double> next(std::min(power.size() + nu.k_max(), masses.size()),
                                     0.0);
            for (std::size_t a = 0; a < power.size(); ++a) {
                if (power[a] == 0.0) continue;
                for (std::size_t b = 0; b <= nu.k_max() && a + b < next.size(); ++b)
                    next[a + b] += power[a] * nu.mass(b);
            }
            power = std::move(next);
        }
    }
    while (masses.size() > 1 && masses.back() == 0.0) masses.pop_back();
    double tail = residual_tail(masses);
    return DistributionOnN(std::move(masses), tail, DistKind::compound_poisson,
                           {{"t", t}});
}

DistributionOnN DistributionOnN::point_mass(std::size_t k) {
    std::vector<double> masses(k + 1, 0.0);
    masses[k] = 1.0;
    return DistributionOnN(std::move(masses), 0.0, DistKind::generic);
}

double DistributionOnN::mean() const {
    double s = 0.0;
    for (std::size_t k = 1; k < masses_.size(); ++k) s += static_cast<double>(k) * masses_[k];
    return s;
}

double DistributionOnN::tail_from(std::size_t b) const {
    long double s = tail_mass_;
    for (std::size_t k = b; k < masses_.size(); ++k) s += masses_[k];
    return static_cast<double>(s);
}

nlohmann::json DistributionOnN::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind_);
    j["params"] = params_;
    j["masses"] = masses_;
    j["tail_mass"] = tail_mass_;
    return j;
}

DistributionOnN DistributionOnN::from_json(const nlohmann::json& j) {
    std::map<std::string, double> params;
    if (j.contains("params"))
        params = j.at("params").get<std::map<std::string, double>>();
    return DistributionOnN(j.at("masses").get<std::vector<double>>(),
                           j.at("tail_mass").get<double>(),
                           dist_kind_from_string(j.at("kind").get<std::string>()),
                           std::move(params));
}

double poisson_pmf(double t, std::uint64_t k) {
    check_rate(t);
    if (k <= 30) {
        double v = std::exp(-t);
        for (std::uint64_t i = 1; i <= k; ++i) v *= t / static_cast<double>(i);
        return v;
    }
    double kk = static_cast<double>(k);
    return std::exp(-t + kk * std::log(t) - std::lgamma(kk + 1.0));
}

double geometric_pmf(double p, std::uint64_t k) {
    check_success(p);
    if (k == 0) return 0.0;
    if (p == 0.0) return k == 1 ? 1.0 : 0.0;
    if (k <= 31) return (1.0 - p) * std::pow(p, static_cast<double>(k - 1));
    return (1.0 - p) * std::exp(static_cast<double>(k - 1) * std::log(p));
}

double polya_aeppli_pmf(double t, double p, std::uint64_t k) {
    check_rate(t);
    check_success(p);
    if (k == 0) return std::exp(-t);
    if (p == 0.0) return poisson_pmf(t, k);

    // All terms are positive; sum exp(log term - max) for stability at any k.
    const double log_t = std::log(t);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double kk = static_cast<double>(k);
    std::vector<double> logs;
    logs.reserve(k);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::uint64_t j = 1; j <= k; ++j) {
        double jj = static_cast<double>(j);
        double log_binom = std::lgamma(kk) - std::lgamma(jj) - std::lgamma(kk - jj + 1.0);
        double lg = -t + log_binom + jj * log_t - std::lgamma(jj + 1.0) +
                    (kk - jj) * log_p + jj * log_q;
        logs.push_back(lg);
        max_log = std::max(max_log, lg);
    }
    long double s = 0.0L;
    for (double lg : logs) s += std::exp(lg - max_log);
    return static_cast<double>(std::exp(max_log) * s);
}

double compound_poisson_pmf(double t, const DistributionOnN& nu, std::uint64_t k,
                            double tol) {
    check_rate(t);
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");

    // Convolution powers truncated at k: indices beyond k never reach {k}.
    std::vector<double> power(1, 1.0);
    long double total = 0.0L;
    long double pois_cum = 0.0L;
    for (std::uint64_t j = 0;; ++j) {
        double pj = poisson_pmf(t, j);
        pois_cum += pj;
        if (k < power.size()) total += pj * power[k];
        if (pois_cum >= 1.0L - tol) break;
        std::vector<double> next(std::min<std::size_t>(power.size() + nu.k_max(), k + 1),
                                 0.0);
        for (std::size_t a = 0; a < power.size(); ++a) {
            if (power[a] == 0.0) continue;
            for (std::size_t b = 0; b <= nu.k_max() && a + b < next.size(); ++b)
                next[a + b] += power[a] * nu.mass(b);
        }
        power = std::move(next);
    }
    return static_cast<double>(total);
}

DistributionOnN convolve(const DistributionOnN& mu, const DistributionOnN& nu) {
    std::vector<double> masses(mu.k_max() + nu.k_max() + 1, 0.0);
    for (std::size_t a = 0; a <= mu.k_max(); ++a) {
        if (mu.mass(a) == 0.0) continue;
        for (std::size_t b = 0; b <= nu.k_max(); ++b)
            masses[a + b] += mu.mass(a) * nu.mass(b);
    }
    double tail = mu.tail_mass() + nu.tail_mass() - mu.tail_mass() * nu.tail_mass();
    return DistributionOnN(std::move(masses), tail, DistKind::generic);
}

std::complex<double> characteristic_function(const DistributionOnN& dist, double x) {
    std::complex<double> s(0.0, 0.0);
    for (std::size_t k = 0; k <= dist.k_max(); ++k) {
        double kk = static_cast<double>(k);
        s += dist.mass(k) * std::complex<double>(std::cos(x * kk), std::sin(x * kk));
    }
    return s;
}

TotalVariation total_variation(const DistributionOnN& mu, const DistributionOnN& nu) {
    std::size_t kmax = std::max(mu.k_max(), nu.k_max());
    long double l1 = 0.0L;
    for (std::size_t k = 0; k <= kmax; ++k) l1 += std::fabs(mu.mass(k) - nu.mass(k));
    double value = 0.5 * static_cast<double>(l1) +
                   0.5 * std::fabs(mu.tail_mass() - nu.tail_mass());
    double unc = 0.5 * (mu.tail_mass() + nu.tail_mass());
    return {value, unc};
}

std::uint64_t sample_polya_aeppli(double t, double p, RngStream& rng) {
    check_rate(t);
    check_success(p);
    std::uint64_t w = sample_poisson(t, rng);
    std::uint64_t s = 0;
    for (std::uint64_t j = 0; j < w; ++j) s += sample_geometric(p, rng);
    return s;
}

DistributionOnN empirical_distribution(std::span<const std::uint64_t> samples) {
    if (samples.empty()) throw ParameterError("empirical law needs at least one sample");
    std::uint64_t kmax = *std::max_element(samples.begin(), samples.end());
    std::vector<double> masses(kmax + 1, 0.0);
    for (std::uint64_t s : samples) masses[s] += 1.0;
    double inv = 1.0 / static_cast<double>(samples.size());
    for (double& m : masses) m *= inv;
    return DistributionOnN(std::move(masses), 0.0, DistKind::empirical);
}

}  // namespace returnstat
