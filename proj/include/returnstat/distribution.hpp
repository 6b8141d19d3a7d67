#ifndef RETURNSTAT_DISTRIBUTION_HPP
#define RETURNSTAT_DISTRIBUTION_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "returnstat/errors.hpp"
#include "returnstat/rng.hpp"

#include <json.hpp>

namespace returnstat {

enum class DistKind {
    poisson,
    geometric,
    compound_poisson,
    polya_aeppli,
    empirical,
    generic,
};

std::string to_string(DistKind kind);
DistKind dist_kind_from_string(const std::string& s);

// A finitely truncated pmf on {0,1,...,k_max} plus the tracked mass beyond
// k_max. Immutable after construction; construction enforces
//   sum(masses) + tail_mass == 1 within 1e-12.
class DistributionOnN {
public:
    DistributionOnN(std::vector<double> masses, double tail_mass, DistKind kind,
                    std::map<std::string, double> params = {});

    // Exact families, truncated so that tail_mass <= tol.
    static DistributionOnN poisson(double t, double tol = 1e-14);
    static DistributionOnN geometric(double p, double tol = 1e-14);
    static DistributionOnN polya_aeppli(double t, double p, double tol = 1e-14);
    static DistributionOnN compound_poisson(double t, const DistributionOnN& nu,
                                            double tol = 1e-12);
    static DistributionOnN point_mass(std::size_t k);

    double mass(std::size_t k) const { return k < masses_.size() ? masses_[k] : 0.0; }
    std::size_t k_max() const { return masses_.size() - 1; }
    std::span<const double> masses() const { return masses_; }
    double tail_mass() const { return tail_mass_; }
    DistKind kind() const { return kind_; }
    const std::map<std::string, double>& params() const { return params_; }

    double mean() const;                       // over the truncated support
    double tail_from(std::size_t b) const;     // mass of [b, inf) incl. tail_mass

    nlohmann::json to_json() const;
    static DistributionOnN from_json(const nlohmann::json& j);

private:
    std::vector<double> masses_;
    double tail_mass_;
    DistKind kind_;
    std::map<std::string, double> params_;
};

// Pointwise pmfs. Evaluations with k > 30 run in log space.
double poisson_pmf(double t, std::uint64_t k);
double geometric_pmf(double p, std::uint64_t k);
double polya_aeppli_pmf(double t, double p, std::uint64_t k);

// CP(t,nu){k} = sum_{j>=0} Pois(t){j} (nu*)^j {k}, with (nu*)^0 = delta_0.
// The j-series is cut once the remaining Poisson tail drops below tol, so
// the absolute error is at most tol (plus nu's own truncation tails).
double compound_poisson_pmf(double t, const DistributionOnN& nu, std::uint64_t k,
                            double tol);

// Law of X+Y for independent X~mu, Y~nu.
DistributionOnN convolve(const DistributionOnN& mu, const DistributionOnN& nu);

std::complex<double> characteristic_function(const DistributionOnN& dist, double x);

struct TotalVariation {
    double value;        // half-L1 over the truncated supports + tail gap
    double uncertainty;  // (tail_mu + tail_nu)/2 bounds what truncation hides
};

TotalVariation total_variation(const DistributionOnN& mu, const DistributionOnN& nu);

std::uint64_t sample_polya_aeppli(double t, double p, RngStream& rng);

DistributionOnN empirical_distribution(std::span<const std::uint64_t> samples);

}  // namespace returnstat

#endif
