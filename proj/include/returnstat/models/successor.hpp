#ifndef RETURNSTAT_MODELS_SUCCESSOR_HPP
#define RETURNSTAT_MODELS_SUCCESSOR_HPP

#include <vector>

#include "returnstat/shift_model.hpp"

namespace returnstat {

// Binary factor of the i.i.d. base law p_a = 2^{-a} on {1,2,...}: the
// observed bit at j is 1 iff the (j+1)-th base symbol is the successor of
// the j-th. Cylinder probabilities use a forward dynamic program over the
// hidden base symbol, truncated at K with dropped mass <= (n+1) 2^{-K}.
class SuccessorModel : public ShiftModel {
public:
    explicit SuccessorModel(int truncation = 64);

    std::string name() const override { return "successor"; }
    int alphabet_size() const override { return 2; }

    double cylinder_prob(const Word& w) const override;
    std::unique_ptr<PrefixWalker> prefix_walker() const override;
    void sample_path(std::span<Symbol> out, RngStream& rng) const override;

    MixingProfile mixing_profile() const override { return {7.0, 1}; }
    std::optional<double> gamma_bound() const override;

    nlohmann::json describe() const override;

    int truncation() const { return truncation_; }
    double truncation_error_bound(std::size_t n) const;

private:
    int truncation_;
};

}  // namespace returnstat

#endif
