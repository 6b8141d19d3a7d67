#include "returnstat/shift_model.hpp"

#include "returnstat/errors.hpp"

namespace returnstat {

bool ShiftModel::admissible(const Word& w) const {
    for (Symbol s : w.symbols()) {
        if (s < min_symbol()) return false;
        if (!countable_alphabet() && s >= min_symbol() + alphabet_size()) return false;
    }
    return true;
}

double ShiftModel::inverse_jacobian(const Word&) const {
    throw UnsupportedError(name() + " has no closed-form inverse Jacobian");
}

}  // namespace returnstat
