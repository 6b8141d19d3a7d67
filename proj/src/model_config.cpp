#include "returnstat/model_config.hpp"

#include "returnstat/errors.hpp"
#include "returnstat/models/bernoulli.hpp"
#include "returnstat/models/gauss.hpp"
#include "returnstat/models/gibbs_markov.hpp"
#include "returnstat/models/group_conv.hpp"
#include "returnstat/models/successor.hpp"

namespace returnstat {

std::unique_ptr<ShiftModel> make_model(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("model"))
        throw ParameterError("model spec must be an object with a 'model' field");
    const std::string kind = spec.at("model").get<std::string>();

    if (kind == "bernoulli") {
        if (spec.contains("geometric_q")) {
            return std::make_unique<BernoulliModel>(BernoulliModel::geometric_tail(
                spec.at("geometric_q").get<double>(), spec.value("truncation", 64)));
        }
        return std::make_unique<BernoulliModel>(
            spec.at("probs").get<std::vector<double>>());
    }
    if (kind == "gibbs") {
        return std::make_unique<GibbsMarkovModel>(
            spec.at("adjacency").get<std::vector<std::vector<int>>>(),
            spec.at("potential").get<std::vector<std::vector<double>>>());
    }
    if (kind == "gauss") {
        return std::make_unique<GaussModel>(spec.value("exact_depth", 40),
                                            spec.value("truncation", 64));
    }
    if (kind == "group") {
        return std::make_unique<GroupConvModel>(
            spec.at("moduli").get<std::vector<int>>(),
            spec.at("probs").get<std::vector<double>>(), spec.at("window").get<int>());
    }
    if (kind == "successor") {
        return std::make_unique<SuccessorModel>(spec.value("truncation", 64));
    }
    throw ParameterError("unknown model kind: " + kind);
}

}  // namespace returnstat
