#ifndef RETURNSTAT_MODEL_CONFIG_HPP
#define RETURNSTAT_MODEL_CONFIG_HPP

#include <memory>

#include "returnstat/shift_model.hpp"

#include <json.hpp>

namespace returnstat {

// Builds a model from a spec object {"model": "...", params...}. The five
// recognized kinds are bernoulli, gibbs, gauss, group and successor.
std::unique_ptr<ShiftModel> make_model(const nlohmann::json& spec);

}  // namespace returnstat

#endif
