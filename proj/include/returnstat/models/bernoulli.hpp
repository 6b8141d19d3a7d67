#ifndef RETURNSTAT_MODELS_BERNOULLI_HPP
#define RETURNSTAT_MODELS_BERNOULLI_HPP

#include <vector>

#include "returnstat/shift_model.hpp"

namespace returnstat {

// i.i.d. coordinates. Either a finite symbol law, or the countable law
// p_a = (1-q) q^a on {0,1,2,...} carried analytically with a truncation
// bound only for enumeration-style consumers.
class BernoulliModel : public ShiftModel {
public:
    explicit BernoulliModel(std::vector<double> probs);
    static BernoulliModel geometric_tail(double q, int truncation = 64);

    std::string name() const override { return "bernoulli"; }
    bool countable_alphabet() const override { return countable_; }
    int alphabet_size() const override;

    double symbol_prob(Symbol a) const;

    double cylinder_prob(const Word& w) const override;
    std::unique_ptr<PrefixWalker> prefix_walker() const override;
    void sample_path(std::span<Symbol> out, RngStream& rng) const override;

    bool has_closed_form_jacobian() const override { return true; }
    double inverse_jacobian(const Word& context) const override;

    MixingProfile mixing_profile() const override { return {0.0, 0}; }
    std::optional<double> gamma_bound() const override;

    nlohmann::json describe() const override;

private:
    struct GeometricTailTag {};
    BernoulliModel(GeometricTailTag, double q, int truncation);

    bool countable_ = false;
    std::vector<double> probs_;      // finite case
    std::vector<double> cdf_;        // finite case sampling
    double q_ = 0.0;                 // countable case
    int truncation_ = 0;
    Symbol sample_symbol(RngStream& rng) const;
};

}  // namespace returnstat

#endif
