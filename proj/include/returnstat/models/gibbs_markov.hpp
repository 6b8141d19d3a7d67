#ifndef RETURNSTAT_MODELS_GIBBS_MARKOV_HPP
#define RETURNSTAT_MODELS_GIBBS_MARKOV_HPP

#include <vector>

#include "returnstat/shift_model.hpp"

namespace returnstat {

// Gibbs measure of a range-2 potential phi(w0, w1) on a topologically
// mixing finite-type shift, realized as the explicit stationary Markov
// chain built from the Perron data of M_{ab} = e^{phi(a,b)} S_{ab}:
//   Q(a->b) = M_{ab} h_b / (lambda h_a),   pi_a ~ nu_a h_a,   P = log lambda.
class GibbsMarkovModel : public ShiftModel {
public:
    GibbsMarkovModel(std::vector<std::vector<int>> adjacency,
                     std::vector<std::vector<double>> potential);

    std::string name() const override { return "gibbs"; }
    int alphabet_size() const override { return size_; }

    bool admissible(const Word& w) const override;
    double cylinder_prob(const Word& w) const override;
    std::unique_ptr<PrefixWalker> prefix_walker() const override;
    void sample_path(std::span<Symbol> out, RngStream& rng) const override;

    bool has_closed_form_jacobian() const override { return true; }
    double inverse_jacobian(const Word& context) const override;

    MixingProfile mixing_profile() const override { return {psi0_, -1}; }
    std::optional<double> gamma_bound() const override;

    nlohmann::json describe() const override;

    double pressure() const { return pressure_; }
    double potential(Symbol a, Symbol b) const { return phi_[idx(a, b)]; }
    const std::vector<double>& right_eigenvector() const { return h_; }
    const std::vector<double>& left_eigenvector() const { return nu_; }
    const std::vector<double>& stationary() const { return pi_; }
    double transition(Symbol a, Symbol b) const { return q_[idx(a, b)]; }

private:
    std::size_t idx(Symbol a, Symbol b) const {
        return static_cast<std::size_t>(a) * size_ + static_cast<std::size_t>(b);
    }
    void solve_perron();
    void compute_psi0();

    int size_;
    std::vector<int> adj_;
    std::vector<double> phi_;
    double lambda_ = 0.0;
    double pressure_ = 0.0;
    std::vector<double> h_;   // right: M h = lambda h
    std::vector<double> nu_;  // left: nu M = lambda nu
    std::vector<double> pi_;
    std::vector<double> q_;
    std::vector<double> q_cdf_;
    std::vector<double> pi_cdf_;
    double psi0_ = 0.0;
};

}  // namespace returnstat

#endif
