#ifndef RETURNSTAT_MODELS_GROUP_CONV_HPP
#define RETURNSTAT_MODELS_GROUP_CONV_HPP

#include <vector>

#include "returnstat/shift_model.hpp"

namespace returnstat {

// Window-sum image of an i.i.d. process on a finite abelian group
// G = Z_{m_1} x ... x Z_{m_c}: the observed process is
// (Phi w)_j = w_j + ... + w_{j+N-1}. Elements are mixed-radix encoded.
// Cylinder probabilities are exact sums over the |G|^{N-1} free leading
// base symbols, every later base symbol being forced by the observations.
class GroupConvModel : public ShiftModel {
public:
    GroupConvModel(std::vector<int> moduli, std::vector<double> probs, int window);

    std::string name() const override { return "group"; }
    int alphabet_size() const override { return group_size_; }

    double cylinder_prob(const Word& w) const override;
    std::unique_ptr<PrefixWalker> prefix_walker() const override;
    void sample_path(std::span<Symbol> out, RngStream& rng) const override;

    MixingProfile mixing_profile() const override;
    std::optional<double> gamma_bound() const override;

    nlohmann::json describe() const override;

    int window() const { return window_; }
    double base_prob(Symbol g) const { return probs_[g]; }
    Symbol add(Symbol a, Symbol b) const;
    Symbol subtract(Symbol a, Symbol b) const;
    Symbol scale(int m, Symbol g) const;

    bool has_strict_dominant() const { return strict_dominant_; }
    Symbol dominant() const { return dominant_; }
    Symbol runner_up() const { return runner_up_; }
    // s = (N-1) h + r, the Theorem-7 target symbol.
    Symbol target_symbol() const { return target_; }
    double lambda_min() const { return lambda_min_; }

    // All base N-words summing to target (the class called E in the
    // construction); size |G|^{N-1}.
    std::vector<std::vector<Symbol>> sum_words(Symbol target) const;

private:
    std::vector<int> moduli_;
    int group_size_;
    int window_;
    std::vector<double> probs_;
    std::vector<double> cdf_;
    long long free_count_;  // |G|^{N-1}
    bool strict_dominant_ = false;
    Symbol dominant_ = 0;
    Symbol runner_up_ = 0;
    Symbol target_ = 0;
    double lambda_min_ = 0.0;
};

}  // namespace returnstat

#endif
