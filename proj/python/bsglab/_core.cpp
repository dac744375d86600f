// Python bindings: a thin registration shim over the C++ core. Matrices
// cross the boundary as 2-d numpy arrays; experiment results as dicts.
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "bsglab/acceptance.hpp"
#include "bsglab/cavity.hpp"
#include "bsglab/config.hpp"
#include "bsglab/distributions.hpp"
#include "bsglab/experiments.hpp"
#include "bsglab/hopfield.hpp"
#include "bsglab/interpolation.hpp"
#include "bsglab/model.hpp"
#include "bsglab/sampler.hpp"

namespace py = pybind11;

namespace {

bsg::Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("disorder must be a 2-d array");
    bsg::Matrix m(int(arr.shape(0)), int(arr.shape(1)));
    std::memcpy(m.data().data(), arr.data(), sizeof(double) * arr.size());
    return m;
}

py::array_t<double> from_matrix(const bsg::Matrix& m) {
    py::array_t<double> arr({m.rows(), m.cols()});
    std::memcpy(arr.mutable_data(), m.data().data(), sizeof(double) * m.data().size());
    return arr;
}

py::dict gap_row_dict(const bsg::GapRow& r) {
    using namespace py::literals;
    return py::dict("n"_a = r.n, "k"_a = r.k, "beta"_a = r.beta, "m"_a = r.m, "gap"_a = r.gap,
                    "se"_a = r.se, "bound"_a = r.bound, "pass"_a = r.pass);
}

py::dict lp_row_dict(const bsg::LpRow& r) {
    using namespace py::literals;
    return py::dict("n"_a = r.n, "k"_a = r.k, "beta"_a = r.beta, "p"_a = r.p,
                    "moment"_a = r.moment, "se"_a = r.se, "bound_thm2"_a = r.bound_thm2,
                    "bound_thm2v2"_a = r.bound_thm2v2, "c2_residual"_a = r.c2_residual);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    using namespace py::literals;
    m.doc() = "bipartite spin-glass universality laboratory";
    m.attr("__version__") = bsg::kArtifactVersion;
    m.attr("DEFAULT_SEED") = bsg::kDefaultSeed;

    py::enum_<bsg::Ensemble>(m, "Ensemble")
        .value("bipartite", bsg::Ensemble::bipartite)
        .value("hopfield", bsg::Ensemble::hopfield);

    py::class_<bsg::SystemShape>(m, "SystemShape")
        .def(py::init([](int n, int k, double beta, bsg::Ensemble ensemble) {
                 bsg::SystemShape s{n, k, beta, ensemble};
                 s.validate();
                 return s;
             }),
             "n"_a, "k"_a, "beta"_a, "ensemble"_a = bsg::Ensemble::bipartite)
        .def_readwrite("n", &bsg::SystemShape::n)
        .def_readwrite("k", &bsg::SystemShape::k)
        .def_readwrite("beta", &bsg::SystemShape::beta)
        .def_readwrite("ensemble", &bsg::SystemShape::ensemble)
        .def_property_readonly("total", &bsg::SystemShape::total)
        .def_property_readonly("alpha", &bsg::SystemShape::alpha)
        .def_property_readonly("coupling", &bsg::SystemShape::coupling)
        .def("__repr__", [](const bsg::SystemShape& s) {
            return "SystemShape(n=" + std::to_string(s.n) + ", k=" + std::to_string(s.k) +
                   ", beta=" + bsg::format_double(s.beta) + ")";
        });

    py::class_<bsg::Noise>(m, "Noise")
        .def_static("gaussian", &bsg::Noise::gaussian)
        .def_static("rademacher", &bsg::Noise::rademacher)
        .def_static("uniform", &bsg::Noise::uniform)
        .def_static("three_point", &bsg::Noise::three_point)
        .def_static("parse", &bsg::Noise::parse, "spec"_a)
        .def("spec", &bsg::Noise::spec)
        .def("sample", &bsg::Noise::sample, "u"_a)
        .def("raw_moment", &bsg::Noise::raw_moment, "k"_a)
        .def("abs_moment", &bsg::Noise::abs_moment, "p"_a)
        .def("gaussian_match_order", &bsg::Noise::gaussian_match_order, "max_check"_a = 11)
        .def_property_readonly("discrete", &bsg::Noise::discrete)
        .def_property_readonly("bounded", &bsg::Noise::bounded)
        .def("__repr__", [](const bsg::Noise& n) { return "Noise('" + n.spec() + "')"; });

    m.def("sample_matrix",
          [](int rows, int cols, const bsg::Noise& noise, std::uint64_t seed,
             std::uint64_t stream) {
              return from_matrix(bsg::sample_matrix(rows, cols, noise, seed, stream));
          },
          "rows"_a, "cols"_a, "noise"_a, "seed"_a, "stream"_a = 0);

    m.def("log_z_exact",
          [](const bsg::SystemShape& s, const py::array_t<double>& xi) {
              return bsg::log_z_exact(s, to_matrix(xi));
          },
          "shape"_a, "xi"_a);
    m.def("log_z_traced",
          [](const bsg::SystemShape& s, const py::array_t<double>& xi) {
              return bsg::log_z_traced(s, to_matrix(xi));
          },
          "shape"_a, "xi"_a);
    m.def("pressure",
          [](const bsg::SystemShape& s, const py::array_t<double>& xi) {
              return bsg::pressure(s, to_matrix(xi));
          },
          "shape"_a, "xi"_a);
    m.def("quenched_pressure",
          [](const bsg::SystemShape& s, const bsg::Noise& noise, int n_samples,
             std::uint64_t seed) {
              bsg::MeanSe q = bsg::quenched_pressure(s, noise, n_samples, seed);
              return py::make_tuple(q.mean, q.se);
          },
          "shape"_a, "noise"_a, "n_samples"_a, "seed"_a);

    m.def("lemma_gap",
          [](const bsg::Noise& noise, const std::function<double(double)>& f,
             const std::function<double(double)>& fprime) {
              return bsg::lemma_gap(noise, f, fprime);
          },
          "noise"_a, "f"_a, "fprime"_a);
    m.def("lemma_bound", &bsg::lemma_bound, "noise"_a, "m"_a, "f_m_sup"_a);
    m.def("theorem1_bound", &bsg::theorem1_bound, "shape"_a, "noise"_a, "m"_a);
    m.def("derivative_norm_bound", &bsg::derivative_norm_bound, "shape"_a, "t"_a, "m"_a);

    m.def("universality_gap_experiment",
          [](const std::vector<bsg::SystemShape>& shapes, const bsg::Noise& noise, int mm,
             int n_samples, std::uint64_t seed) {
              bsg::GapExperiment exp =
                  bsg::universality_gap_experiment(shapes, noise, mm, n_samples, seed);
              py::list rows;
              for (const auto& r : exp.rows) rows.append(gap_row_dict(r));
              return py::dict("rows"_a = rows, "exponent"_a = exp.exponent);
          },
          "shapes"_a, "noise"_a, "m"_a, "n_samples"_a, "seed"_a);

    m.def("lp_fluctuation_experiment",
          [](const std::vector<bsg::SystemShape>& shapes, const bsg::Noise& noise, double p,
             int n_samples, std::uint64_t seed) {
              bsg::LpExperiment exp =
                  bsg::lp_fluctuation_experiment(shapes, noise, p, n_samples, seed);
              py::list rows;
              for (const auto& r : exp.rows) rows.append(lp_row_dict(r));
              return py::dict("rows"_a = rows, "exponent"_a = exp.exponent,
                              "c_fit_thm2"_a = exp.c_fit_thm2,
                              "c_fit_thm2v2"_a = exp.c_fit_thm2v2);
          },
          "shapes"_a, "noise"_a, "p"_a, "n_samples"_a, "seed"_a);

    m.def("exhaustive_martingale",
          [](const bsg::SystemShape& shape, const bsg::Noise& noise) {
              bsg::ExhaustiveMartingale ex = bsg::exhaustive_martingale(
                  shape, noise, bsg::entry_rowmajor_schedule(shape.n, shape.k));
              return py::dict("mean_log_z"_a = ex.mean_log_z,
                              "var_pressure"_a = ex.var_pressure,
                              "orthogonality_residual"_a = ex.orthogonality_residual,
                              "max_martingale_residual"_a = ex.max_martingale_residual,
                              "max_telescoping_residual"_a = ex.max_telescoping_residual,
                              "sup_abs_delta"_a = ex.sup_abs_delta);
          },
          "shape"_a, "noise"_a);

    m.def("hopfield_pressure",
          [](const bsg::SystemShape& s, const py::array_t<double>& xi) {
              return bsg::hopfield_pressure(s, to_matrix(xi));
          },
          "shape"_a, "xi"_a);
    m.def("uniform_gap_exhaustive",
          [](const bsg::SystemShape& shape) {
              bsg::HopfieldGapScan scan = bsg::uniform_gap_exhaustive(shape);
              return py::dict("mean_pressure"_a = scan.mean_pressure,
                              "max_gap"_a = scan.max_gap, "bound"_a = scan.bound,
                              "p2_norm"_a = scan.p_norm(2.0), "p8_norm"_a = scan.p_norm(8.0));
          },
          "shape"_a);
    m.def("comparison_inequality_check",
          [](const bsg::SystemShape& shape, int n_samples, std::uint64_t seed) {
              bsg::ComparisonRecord rec =
                  bsg::comparison_inequality_check(shape, n_samples, seed);
              return py::dict("gauss_mean"_a = rec.gauss_mean, "gauss_se"_a = rec.gauss_se,
                              "sign_mean"_a = rec.sign_mean, "sign_se"_a = rec.sign_se,
                              "diff"_a = rec.diff_mean, "diff_se"_a = rec.diff_se,
                              "pass"_a = rec.pass);
          },
          "shape"_a, "n_samples"_a, "seed"_a);

    py::class_<bsg::McConfig>(m, "McConfig")
        .def(py::init<>())
        .def_readwrite("sweeps", &bsg::McConfig::sweeps)
        .def_readwrite("burn_in", &bsg::McConfig::burn_in)
        .def_readwrite("beta_grid", &bsg::McConfig::beta_grid)
        .def_readwrite("seed", &bsg::McConfig::seed);

    m.def("pressure_thermodynamic_integration",
          [](const bsg::SystemShape& s, const py::array_t<double>& xi, const bsg::McConfig& mc) {
              bsg::MeanSe r = bsg::pressure_thermodynamic_integration(s, to_matrix(xi), mc);
              return py::make_tuple(r.mean, r.se);
          },
          "shape"_a, "xi"_a, "mc"_a);
    m.def("stationarity_residual",
          [](const bsg::SystemShape& s, const py::array_t<double>& xi, double beta) {
              return bsg::stationarity_residual(s, to_matrix(xi), beta);
          },
          "shape"_a, "xi"_a, "beta"_a);

    m.def("run_experiment_text",
          [](const std::string& config_text) {
              bsg::ExperimentRecord rec = bsg::run_experiment(bsg::Config::parse(config_text));
              return py::dict("experiment_id"_a = rec.experiment_id, "pass"_a = rec.pass,
                              "summary"_a = rec.summary, "csv"_a = rec.table.to_csv());
          },
          "config_text"_a);

    m.def("run_acceptance",
          [](std::uint64_t seed) {
              bsg::AcceptanceSummary summary = bsg::run_acceptance(seed);
              py::list results;
              for (const auto& r : summary.results)
                  results.append(py::dict("index"_a = r.index, "name"_a = r.name,
                                          "pass"_a = r.pass, "detail"_a = r.detail));
              return py::dict("results"_a = results, "all_pass"_a = summary.all_pass,
                              "text"_a = summary.text());
          },
          "seed"_a = bsg::kDefaultSeed);
}
