#ifndef RETURNSTAT_MODELS_GAUSS_HPP
#define RETURNSTAT_MODELS_GAUSS_HPP

#include <gmpxx.h>

#include "returnstat/shift_model.hpp"

namespace returnstat {

// Exact continued-fraction convergents of a digit prefix. The cylinder of
// (a_1..a_n) is the interval between p_n/q_n and (p_n+p_{n-1})/(q_n+q_{n-1});
// its length is 1/(q_n(q_n+q_{n-1})) and p_n q_{n-1} - p_{n-1} q_n = +-1.
struct GaussConvergents {
    mpz_class p_prev{1}, p_cur{0}, q_prev{0}, q_cur{1};
    int depth = 0;

    void push(long digit);
    double y() const;  // q_{n-1}/q_n in [0,1]
};

// The Gauss map x -> 1/x (mod 1) with the Gauss measure
// mu(E) = (1/ln 2) \int_E dx/(1+x); symbols are the continued-fraction
// digits. Cylinder probabilities come from exact integer convergents;
// path sampling draws each digit from its exact conditional law up to
// exact_depth and afterwards from the interval-length kernel
// P(k|y) = (1+y)/((k+y)(k+1+y)), whose bias is below double precision
// once cylinders are that deep.
class GaussModel : public ShiftModel {
public:
    explicit GaussModel(int exact_depth = 40, int truncation = 64);

    std::string name() const override { return "gauss"; }
    bool countable_alphabet() const override { return true; }
    Symbol min_symbol() const override { return 1; }
    int alphabet_size() const override { return truncation_; }

    double cylinder_prob(const Word& w) const override;
    std::unique_ptr<PrefixWalker> prefix_walker() const override;
    void sample_path(std::span<Symbol> out, RngStream& rng) const override;

    bool has_closed_form_jacobian() const override { return true; }
    double inverse_jacobian(const Word& context) const override;

    MixingProfile mixing_profile() const override { return {5.0, -1}; }
    std::optional<double> gamma_bound() const override { return std::log(2.0); }
    std::size_t rho_burn_in() const override { return 20; }

    nlohmann::json describe() const override;

    // Measure of {x in [w] : digit_{n+1}(x) > bound}; prefix may be empty.
    double cylinder_tail_prob(const std::vector<Symbol>& prefix, long bound) const;

    // Theta(w^inf): the positive quadratic-irrational fixed point of the
    // Moebius map of the block w.
    double periodic_point_value(const Word& block) const;

private:
    int exact_depth_;
    int truncation_;
};

}  // namespace returnstat

#endif
