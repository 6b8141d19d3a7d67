#ifndef RETURNSTAT_RETURNS_HPP
#define RETURNSTAT_RETURNS_HPP

#include <cstdint>
#include <vector>

#include "returnstat/distribution.hpp"
#include "returnstat/shift_model.hpp"
#include "returnstat/words.hpp"

namespace returnstat {

// One realization of the multiple-return count S_N^A together with the
// number of symbols the sampler consumed.
struct CountSample {
    std::uint64_t value;
    std::size_t path_length;  // d_ell * N + n
};

// Derived cluster quantities for the n-cylinder around block^inf.
struct ClusterStats {
    std::size_t period_r;
    long long kappa_value;
    Rational exponent_a;
    double cylinder_p;
    std::uint64_t trials;
    double beta_n;
    double rho_n;
    double rho_predicted;  // NaN when no closed-form Jacobian exists
    double pa_t;           // t (1 - rho_predicted)
    double pa_p;           // rho_predicted
};

// N = floor(t P[w]^{-ell}); DomainError on zero measure or N = 0.
std::uint64_t trials_count(const ShiftModel& model, const Word& w,
                           const ReturnSetup& setup);

// beta_{omega,n} = P[w^{(n+r)/r}] / P[w^{n/r}] with r = |block|.
double beta(const ShiftModel& model, const Word& block, std::size_t n);

// rho_A for A = [w]: with r = period(w), R the leading r-block and
// kappa = kappa(r), the product over j of P[R^{(n+d_j kappa)/r}] / P[w].
double rho(const ShiftModel& model, const Word& w, const ReturnSetup& setup);

// The limit rho_omega = (prod_j J(T^j omega))^a from the closed-form
// inverse Jacobian; UnsupportedError if the model has none.
double predicted_rho(const ShiftModel& model, const Word& block,
                     const ReturnSetup& setup);

// Derived quantities for A_n = [word^{n/|word|}]; the minimal period block
// is recovered from the extension, so the word need not be primitive.
ClusterStats cluster_stats(const ShiftModel& model, const Word& word, std::size_t n,
                           const ReturnSetup& setup);

// One draw of S_N^A for A = [w].
CountSample simulate_count(const ShiftModel& model, const Word& w,
                           const ReturnSetup& setup, RngStream& rng);

// M independent draws; sample i uses the stream derived from
// (master_seed, salt, i), so the result is independent of worker count.
std::vector<std::uint64_t> simulate_many(const ShiftModel& model, const Word& w,
                                         const ReturnSetup& setup, std::uint64_t m,
                                         std::uint64_t master_seed, std::uint64_t salt,
                                         int workers = 0);

// Exact law of S_N^A by enumerating all |A|^{d_ell N + n} paths with their
// exact probabilities. CapacityError beyond 1e7 paths or for countable
// alphabets.
DistributionOnN exact_count_distribution(const ShiftModel& model, const Word& w,
                                         const ReturnSetup& setup);

}  // namespace returnstat

#endif
