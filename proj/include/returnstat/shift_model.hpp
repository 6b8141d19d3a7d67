#ifndef RETURNSTAT_SHIFT_MODEL_HPP
#define RETURNSTAT_SHIFT_MODEL_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>

#include "returnstat/rng.hpp"
#include "returnstat/words.hpp"

#include <json.hpp>

namespace returnstat {

// Incremental cylinder probability along a depth-first path enumeration.
// push(s) extends the prefix by one symbol and returns P[prefix].
class PrefixWalker {
public:
    virtual ~PrefixWalker() = default;
    virtual double push(Symbol s) = 0;
    virtual void pop() = 0;
    virtual std::size_t depth() const = 0;
};

struct MixingProfile {
    double psi0 = 0.0;  // bound on sup_m psi_m
    int exact_gap = 0;  // factorization exact for gaps >= this; -1 if never
};

// A stationary symbolic source with exact cylinder probabilities and
// stationary path sampling. Immutable after construction; sample_path is
// safe to call concurrently as long as each caller owns its RngStream.
class ShiftModel {
public:
    virtual ~ShiftModel() = default;

    virtual std::string name() const = 0;

    // Finite alphabets enumerate symbols min_symbol()..min_symbol()+size-1.
    // Countable alphabets report their truncation bound as the size.
    virtual bool countable_alphabet() const { return false; }
    virtual Symbol min_symbol() const { return 0; }
    virtual int alphabet_size() const = 0;

    // True iff [w] has positive measure (symbols valid, transitions allowed).
    virtual bool admissible(const Word& w) const;

    // Exact P[w]; 0 for inadmissible words (a structural zero, as opposed
    // to floating-point underflow of a positive measure).
    virtual double cylinder_prob(const Word& w) const = 0;

    virtual std::unique_ptr<PrefixWalker> prefix_walker() const = 0;

    // One stationary draw of (w_0, ..., w_{L-1}), L = out.size().
    virtual void sample_path(std::span<Symbol> out, RngStream& rng) const = 0;

    virtual bool has_closed_form_jacobian() const { return false; }

    // J = dP/dP∘T evaluated at the periodic point context^inf.
    virtual double inverse_jacobian(const Word& context) const;

    virtual MixingProfile mixing_profile() const { return {}; }

    // Known decay constant for P[w] <= e^{-Gamma n}, when available.
    virtual std::optional<double> gamma_bound() const { return std::nullopt; }

    // Cylinder length past which |rho_{A_n} - rho_limit| shrinks
    // monotonically; 1 for models whose beta_n is exactly constant.
    virtual std::size_t rho_burn_in() const { return 1; }

    // Derived construction data echoed into reports.
    virtual nlohmann::json describe() const = 0;
};

}  // namespace returnstat

#endif
