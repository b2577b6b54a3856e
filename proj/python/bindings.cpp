#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "entgauss/channel.hpp"
#include "entgauss/constellation.hpp"
#include "entgauss/distribution.hpp"
#include "entgauss/errors.hpp"
#include "entgauss/extremal.hpp"
#include "entgauss/solver.hpp"
#include "entgauss/theta.hpp"

namespace py = pybind11;

using namespace entgauss;

namespace {

Regime parse_regime(const std::string& r) {
    if (r == "small") return Regime::small;
    if (r == "large") return Regime::large;
    throw std::domain_error("regime must be 'small' or 'large'");
}

}  // namespace

PYBIND11_MODULE(_entgauss, m) {
    m.doc() =
        "Capacity-achieving input distributions of the entropy-constrained "
        "Gaussian channel: lattice theta potentials, the entropy solver, "
        "certified H(X|Y) quadrature and extremal verification.";

    py::register_exception<ConvergenceError>(m, "ConvergenceError",
                                             PyExc_RuntimeError);

    py::class_<theta::ThetaEval>(m, "ThetaEval")
        .def_readonly("lam", &theta::ThetaEval::lambda)
        .def_readonly("shift_a", &theta::ThetaEval::shift_a)
        .def_readonly("L", &theta::ThetaEval::L)
        .def_readonly("dL", &theta::ThetaEval::dL)
        .def_readonly("d2L", &theta::ThetaEval::d2L)
        .def_readonly("truncation_terms", &theta::ThetaEval::truncation_terms)
        .def_readonly("abs_error_bound", &theta::ThetaEval::abs_error_bound)
        .def("__repr__", [](const theta::ThetaEval& t) {
            std::ostringstream os;
            os << "ThetaEval(lam=" << t.lambda << ", a=" << t.shift_a
               << ", L=" << t.L << ", dL=" << t.dL << ")";
            return os.str();
        });

    m.def(
        "log_theta",
        [](double lam, double a, double tol) { return theta::log_theta(lam, a, tol); },
        py::arg("lam"), py::arg("shift_a") = 0.0, py::arg("tol") = 1e-12);
    m.def(
        "theta_sandwich",
        [](double lam, const std::string& regime) {
            const auto b = theta::theta_sandwich(lam, parse_regime(regime));
            return std::make_pair(b.lower, b.upper);
        },
        py::arg("lam"), py::arg("regime"));

    py::class_<DiscreteDistribution>(m, "DiscreteDistribution")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("atoms"),
             py::arg("probs"))
        .def_static("from_weights", &DiscreteDistribution::from_weights,
                    py::arg("atoms"), py::arg("weights"))
        .def_property_readonly("atoms", &DiscreteDistribution::atoms)
        .def_property_readonly("probs", &DiscreteDistribution::probs)
        .def("__len__", &DiscreteDistribution::size)
        .def("entropy", &DiscreteDistribution::entropy)
        .def("moments",
             [](const DiscreteDistribution& d) {
                 const auto m2 = d.moments();
                 return std::make_pair(m2.mean, m2.second_moment);
             })
        .def("min_distance", &DiscreteDistribution::min_distance)
        .def("sample", &DiscreteDistribution::sample, py::arg("n"), py::arg("seed"))
        .def("__repr__", [](const DiscreteDistribution& d) {
            std::ostringstream os;
            os << "DiscreteDistribution(" << d.size() << " atoms)";
            return os.str();
        });

    py::class_<DiscreteGaussianSpec>(m, "DiscreteGaussianSpec")
        .def(py::init([](double beta, double lam, double tail_eps) {
                 return DiscreteGaussianSpec{beta, lam, tail_eps};
             }),
             py::arg("beta"), py::arg("lam"), py::arg("tail_eps") = 1e-16)
        .def_readonly("beta", &DiscreteGaussianSpec::beta)
        .def_readonly("lam", &DiscreteGaussianSpec::lambda)
        .def_readonly("tail_eps", &DiscreteGaussianSpec::tail_eps);

    m.def("materialize", &materialize, py::arg("spec"));
    m.def("load_constellation", &load_constellation, py::arg("spec_or_path"));

    py::class_<solver::SolveResult>(m, "SolveResult")
        .def_readonly("h_target", &solver::SolveResult::h_target)
        .def_readonly("lambda_h", &solver::SolveResult::lambda_h)
        .def_readonly("d_h", &solver::SolveResult::d_h)
        .def_readonly("entropy_residual", &solver::SolveResult::entropy_residual)
        .def_readonly("variance_check", &solver::SolveResult::variance_check)
        .def_readonly("below_threshold", &solver::SolveResult::below_threshold)
        .def("__repr__", [](const solver::SolveResult& r) {
            std::ostringstream os;
            os << "SolveResult(h=" << r.h_target << ", lambda_h=" << r.lambda_h
               << ", d_h=" << r.d_h << ")";
            return os.str();
        });

    m.def("solve", &solver::solve, py::arg("h_nats"), py::arg("tol") = 1e-12);
    m.def("threshold_entropy", &solver::threshold_entropy);
    m.def(
        "d_h_approx",
        [](double h, const std::string& r) {
            return solver::d_h_approx(h, parse_regime(r));
        },
        py::arg("h_nats"), py::arg("regime"));
    m.def("gap_exponent", &solver::gap_exponent, py::arg("h_nats"));
    m.def(
        "gap_exponent_approx",
        [](double h, const std::string& r) {
            return solver::gap_exponent_approx(h, parse_regime(r));
        },
        py::arg("h_nats"), py::arg("regime"));
    m.def("lambert_w_minus1", &solver::lambert_w_minus1, py::arg("y"));
    m.def(
        "capacity_spec",
        [](const solver::SolveResult& r, double tail_eps) {
            return solver::capacity_spec(r, tail_eps);
        },
        py::arg("result"), py::arg("tail_eps") = 1e-16);

    py::class_<channel::ChannelEval>(m, "ChannelEval")
        .def_readonly("snr", &channel::ChannelEval::snr)
        .def_readonly("sigma", &channel::ChannelEval::sigma)
        .def_readonly("H_X", &channel::ChannelEval::H_X)
        .def_readonly("h_Y", &channel::ChannelEval::h_Y)
        .def_readonly("I_XY", &channel::ChannelEval::I_XY)
        .def_readonly("H_X_given_Y", &channel::ChannelEval::H_X_given_Y)
        .def_readonly("rel_error_bound", &channel::ChannelEval::rel_error_bound)
        .def_readonly("underflow", &channel::ChannelEval::underflow)
        .def("__repr__", [](const channel::ChannelEval& e) {
            std::ostringstream os;
            os << "ChannelEval(snr=" << e.snr << ", H_X_given_Y=" << e.H_X_given_Y
               << ")";
            return os.str();
        });

    m.def("conditional_entropy", &channel::conditional_entropy, py::arg("dist"),
          py::arg("snr"), py::arg("tol") = 1e-10);
    m.def(
        "conditional_entropy_mc",
        [](const DiscreteDistribution& d, double snr, std::size_t n,
           std::uint64_t seed) {
            const auto e = channel::conditional_entropy_mc(d, snr, n, seed);
            return std::make_pair(e.estimate, e.std_error);
        },
        py::arg("dist"), py::arg("snr"), py::arg("n"), py::arg("seed"));
    m.def("hxy_upper_bound", &channel::hxy_upper_bound, py::arg("dist"),
          py::arg("snr"));
    m.def("hxy_lower_bound", &channel::hxy_lower_bound, py::arg("dist"),
          py::arg("snr"), py::arg("delta"));
    m.def("differential_entropy_y", &channel::differential_entropy_y,
          py::arg("dist"), py::arg("snr"), py::arg("tol") = 1e-10);
    m.def("normal_q", &channel::normal_q, py::arg("z"));
    m.def("normal_r", &channel::normal_r, py::arg("z"));

    py::class_<channel::ExponentFit>(m, "ExponentFit")
        .def_readonly("snr_grid", &channel::ExponentFit::snr_grid)
        .def_readonly("scaled_log_values", &channel::ExponentFit::scaled_log_values)
        .def_readonly("fitted_limit", &channel::ExponentFit::fitted_limit)
        .def_readonly("predicted_limit", &channel::ExponentFit::predicted_limit);

    m.def("fit_exponent", &channel::fit_exponent, py::arg("dist"),
          py::arg("snr_grid"), py::arg("tol") = 1e-10);

    py::class_<extremal::SearchReport>(m, "SearchReport")
        .def_readonly("h_target", &extremal::SearchReport::h_target)
        .def_readonly("best_dmin_found", &extremal::SearchReport::best_dmin_found)
        .def_readonly("d_h_reference", &extremal::SearchReport::d_h_reference)
        .def_readonly("trials", &extremal::SearchReport::trials)
        .def_readonly("best_candidate", &extremal::SearchReport::best_candidate)
        .def_readonly("seed", &extremal::SearchReport::seed);

    m.def("dmin_search", &extremal::dmin_search, py::arg("h_nats"),
          py::arg("n_atoms"), py::arg("trials"), py::arg("seed"));
    m.def(
        "duality_check",
        [](double h) {
            const auto d = extremal::duality_check(h);
            return std::make_pair(d.var_h, d.product);
        },
        py::arg("h_nats"));

    py::class_<extremal::ShiftComparison>(m, "ShiftComparison")
        .def_readonly("var_a0", &extremal::ShiftComparison::var_a0)
        .def_readonly("var_a_half", &extremal::ShiftComparison::var_a_half)
        .def_readonly("half_shift_clamped",
                      &extremal::ShiftComparison::half_shift_clamped)
        .def_readonly("gap_log10", &extremal::ShiftComparison::gap_log10)
        .def_readonly("strict_inequality",
                      &extremal::ShiftComparison::strict_inequality);

    m.def("shift_comparison", &extremal::shift_comparison, py::arg("h_nats"));

    py::class_<extremal::TangentComparison>(m, "TangentComparison")
        .def_readonly("lambda_f", &extremal::TangentComparison::lambda_f)
        .def_readonly("lambda_g", &extremal::TangentComparison::lambda_g)
        .def_readonly("slope_f", &extremal::TangentComparison::slope_f)
        .def_readonly("slope_g", &extremal::TangentComparison::slope_g)
        .def_readonly("half_shift_clamped",
                      &extremal::TangentComparison::half_shift_clamped)
        .def_readonly("strict_inequality",
                      &extremal::TangentComparison::strict_inequality);

    m.def("tangent_lemma_check", &extremal::tangent_lemma_check, py::arg("h_nats"));
    m.def("aligned_tv_distance", &extremal::aligned_tv_distance,
          py::arg("candidate"), py::arg("reference"));
    m.def("project_to_constraints", &extremal::project_to_constraints,
          py::arg("dist"), py::arg("h_nats"));

    m.attr("__version__") = "0.1.0";
}
