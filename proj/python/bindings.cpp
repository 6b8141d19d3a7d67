#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "returnstat/distribution.hpp"
#include "returnstat/errors.hpp"
#include "returnstat/experiments.hpp"
#include "returnstat/model_config.hpp"
#include "returnstat/returns.hpp"

namespace py = pybind11;
namespace rs = returnstat;
using nlohmann::json;

namespace {

// Thin ownership wrapper so python holds any of the five model kinds
// behind the common interface.
struct PyModel {
    std::unique_ptr<rs::ShiftModel> model;

    explicit PyModel(const std::string& spec_json)
        : model(rs::make_model(json::parse(spec_json))) {}

    double cylinder_prob(const std::vector<rs::Symbol>& w) const {
        return model->cylinder_prob(rs::Word(w));
    }
    std::vector<rs::Symbol> sample_path(std::size_t length, std::uint64_t seed) const {
        std::vector<rs::Symbol> out(length);
        rs::RngStream rng(rs::RngStream::mix(seed));
        model->sample_path(out, rng);
        return out;
    }
    double inverse_jacobian(const std::vector<rs::Symbol>& context) const {
        return model->inverse_jacobian(rs::Word(context));
    }
    std::string describe() const { return model->describe().dump(); }
};

rs::ReturnSetup make_setup(double t, const std::vector<int>& d) {
    return rs::ReturnSetup(t, d);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact cluster parameters and Monte Carlo return statistics "
              "for stationary shift models";

    py::register_exception<rs::ParameterError>(m, "ParameterError");
    py::register_exception<rs::DomainError>(m, "DomainError");
    py::register_exception<rs::CapacityError>(m, "CapacityError");
    py::register_exception<rs::UnsupportedError>(m, "UnsupportedError");

    m.def("poisson_pmf", &rs::poisson_pmf, py::arg("t"), py::arg("k"));
    m.def("geometric_pmf", &rs::geometric_pmf, py::arg("p"), py::arg("k"));
    m.def("polya_aeppli_pmf", &rs::polya_aeppli_pmf, py::arg("t"), py::arg("p"),
          py::arg("k"));
    m.def(
        "compound_poisson_geo_pmf",
        [](double t, double p, std::uint64_t k, double tol) {
            return rs::compound_poisson_pmf(t, rs::DistributionOnN::geometric(p), k, tol);
        },
        py::arg("t"), py::arg("p"), py::arg("k"), py::arg("tol") = 1e-12);
    m.def(
        "polya_aeppli_masses",
        [](double t, double p, double tol) {
            auto dist = rs::DistributionOnN::polya_aeppli(t, p, tol);
            return std::make_pair(
                std::vector<double>(dist.masses().begin(), dist.masses().end()),
                dist.tail_mass());
        },
        py::arg("t"), py::arg("p"), py::arg("tol") = 1e-14);
    m.def(
        "sample_polya_aeppli",
        [](double t, double p, std::uint64_t seed, std::size_t count) {
            std::vector<std::uint64_t> out(count);
            for (std::size_t i = 0; i < count; ++i) {
                rs::RngStream rng = rs::RngStream::derive(seed, i);
                out[i] = rs::sample_polya_aeppli(t, p, rng);
            }
            return out;
        },
        py::arg("t"), py::arg("p"), py::arg("seed"), py::arg("count") = 1);
    m.def(
        "total_variation",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            auto da = rs::DistributionOnN(a, std::max(0.0, 1.0 - std::accumulate(a.begin(), a.end(), 0.0)), rs::DistKind::generic);
            auto db = rs::DistributionOnN(b, std::max(0.0, 1.0 - std::accumulate(b.begin(), b.end(), 0.0)), rs::DistKind::generic);
            return rs::total_variation(da, db).value;
        },
        py::arg("masses_a"), py::arg("masses_b"));

    m.def(
        "period",
        [](const std::vector<rs::Symbol>& w) { return rs::period(rs::Word(w)); },
        py::arg("word"));
    m.def(
        "periodic_extension",
        [](const std::vector<rs::Symbol>& w, std::size_t n) {
            return rs::periodic_extension(rs::Word(w), n).symbols();
        },
        py::arg("word"), py::arg("n"));
    m.def(
        "kappa",
        [](long long r, double t, const std::vector<int>& d) {
            return rs::kappa(r, make_setup(t, d));
        },
        py::arg("r"), py::arg("t") = 1.0, py::arg("d") = std::vector<int>{1});
    m.def(
        "cluster_exponent",
        [](long long r, double t, const std::vector<int>& d) {
            auto a = rs::cluster_exponent(r, make_setup(t, d));
            return std::make_pair(a.num, a.den);
        },
        py::arg("r"), py::arg("t") = 1.0, py::arg("d") = std::vector<int>{1});

    py::class_<PyModel>(m, "Model")
        .def(py::init<const std::string&>(), py::arg("spec_json"))
        .def("cylinder_prob", &PyModel::cylinder_prob, py::arg("word"))
        .def("sample_path", &PyModel::sample_path, py::arg("length"), py::arg("seed"))
        .def("inverse_jacobian", &PyModel::inverse_jacobian, py::arg("context"))
        .def("describe_json", &PyModel::describe);

    m.def(
        "trials_count",
        [](const PyModel& model, const std::vector<rs::Symbol>& w, double t,
           const std::vector<int>& d) {
            return rs::trials_count(*model.model, rs::Word(w), make_setup(t, d));
        },
        py::arg("model"), py::arg("word"), py::arg("t"), py::arg("d"));
    m.def(
        "beta",
        [](const PyModel& model, const std::vector<rs::Symbol>& block, std::size_t n) {
            return rs::beta(*model.model, rs::Word(block), n);
        },
        py::arg("model"), py::arg("block"), py::arg("n"));
    m.def(
        "rho",
        [](const PyModel& model, const std::vector<rs::Symbol>& w, double t,
           const std::vector<int>& d) {
            return rs::rho(*model.model, rs::Word(w), make_setup(t, d));
        },
        py::arg("model"), py::arg("word"), py::arg("t"), py::arg("d"));
    m.def(
        "predicted_rho",
        [](const PyModel& model, const std::vector<rs::Symbol>& block, double t,
           const std::vector<int>& d) {
            return rs::predicted_rho(*model.model, rs::Word(block), make_setup(t, d));
        },
        py::arg("model"), py::arg("block"), py::arg("t"), py::arg("d"));
    m.def(
        "simulate_counts",
        [](const PyModel& model, const std::vector<rs::Symbol>& w, double t,
           const std::vector<int>& d, std::uint64_t m, std::uint64_t seed, int workers) {
            return rs::simulate_many(*model.model, rs::Word(w), make_setup(t, d), m,
                                     seed, 0, workers);
        },
        py::arg("model"), py::arg("word"), py::arg("t"), py::arg("d"), py::arg("m"),
        py::arg("seed"), py::arg("workers") = 0);
    m.def(
        "exact_count_masses",
        [](const PyModel& model, const std::vector<rs::Symbol>& w, double t,
           const std::vector<int>& d) {
            auto dist =
                rs::exact_count_distribution(*model.model, rs::Word(w), make_setup(t, d));
            return std::make_pair(
                std::vector<double>(dist.masses().begin(), dist.masses().end()),
                dist.tail_mass());
        },
        py::arg("model"), py::arg("word"), py::arg("t"), py::arg("d"));

    m.def(
        "convergence_experiment_json",
        [](const PyModel& model, const std::vector<rs::Symbol>& block, double t,
           const std::vector<int>& d, const std::vector<std::size_t>& n_list,
           std::uint64_t samples, std::uint64_t seed, int workers) {
            rs::ConvergenceOptions opts;
            opts.n_list = n_list;
            opts.samples = samples;
            opts.seed = seed;
            opts.workers = workers;
            return rs::convergence_experiment(*model.model, rs::Word(block),
                                              make_setup(t, d), opts)
                .to_json()
                .dump();
        },
        py::arg("model"), py::arg("block"), py::arg("t"), py::arg("d"),
        py::arg("n_list"), py::arg("samples"), py::arg("seed"), py::arg("workers") = 0);
    m.def(
        "tightness_json",
        [](const std::string& report_json) {
            auto report = rs::ExperimentReport::from_json(json::parse(report_json));
            return rs::tightness_diagnostic(report).to_json().dump();
        },
        py::arg("report_json"));
}
