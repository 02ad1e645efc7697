// pybind11 bindings for the uddmag core

#include "uddmag/bath.hpp"
#include "uddmag/coherence.hpp"
#include "uddmag/constants.hpp"
#include "uddmag/dephasing.hpp"
#include "uddmag/errors.hpp"
#include "uddmag/montecarlo.hpp"
#include "uddmag/sensitivity.hpp"
#include "uddmag/sequences.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace uddmag;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spin-qubit dephasing under Uhrig dynamic decoupling: bath model, "
              "pulse sequences, dephasing envelopes, coherence times, magnetometer "
              "sensitivity, and a Monte Carlo oracle";

    py::register_exception<regime_error>(m, "RegimeError", PyExc_RuntimeError);
    py::register_exception<resource_error>(m, "ResourceError", PyExc_RuntimeError);

    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init<>())
        .def_readwrite("gamma_e", &PhysicalConstants::gamma_e)
        .def_readwrite("gamma_c", &PhysicalConstants::gamma_c)
        .def_readwrite("mu0_over_4pi", &PhysicalConstants::mu0_over_4pi)
        .def_readwrite("hbar", &PhysicalConstants::hbar)
        .def_readwrite("mu_N", &PhysicalConstants::mu_N)
        .def_readwrite("g_c", &PhysicalConstants::g_c)
        .def_readwrite("n_carbon", &PhysicalConstants::n_carbon);
    m.def("default_constants", &default_constants,
          py::return_value_policy::reference);

    py::class_<NoiseEnvironment>(m, "NoiseEnvironment")
        .def(py::init(&make_environment), py::arg("sigma0"), py::arg("tau_c"),
             py::arg("sigma_model_exponent") = 1.0)
        .def_readonly("sigma0", &NoiseEnvironment::sigma0)
        .def_readonly("tau_c", &NoiseEnvironment::tau_c)
        .def_readonly("concentration", &NoiseEnvironment::concentration)
        .def_readonly("sigma_model_exponent", &NoiseEnvironment::sigma_model_exponent)
        .def("__repr__", [](const NoiseEnvironment& e) {
            std::ostringstream os;
            os << "NoiseEnvironment(sigma0=" << e.sigma0 << ", tau_c=" << e.tau_c << ")";
            return os.str();
        });
    m.def("bath_from_concentration", &bath_from_concentration, py::arg("fraction"),
          py::arg("constants") = default_constants());
    m.def("theta", &theta, py::arg("env"), py::arg("gamma"));
    m.def("sigma_taylor", &sigma_taylor, py::arg("env"), py::arg("j"));

    py::class_<PulseSequence>(m, "PulseSequence")
        .def(py::init(&make_sequence), py::arg("total_time"), py::arg("pulse_times"),
             py::arg("label") = "custom")
        .def_readonly("total_time", &PulseSequence::total_time)
        .def_readonly("pulse_times", &PulseSequence::pulse_times)
        .def_readonly("label", &PulseSequence::label)
        .def("__repr__", [](const PulseSequence& s) {
            std::ostringstream os;
            os << "PulseSequence(" << s.label << ", P=" << s.pulse_times.size() << ")";
            return os.str();
        });
    m.def("udd", &udd, py::arg("n"), py::arg("tau"));
    m.def("hahn", &hahn, py::arg("tau"));
    m.def("cdd", &cdd, py::arg("level"), py::arg("tau"), py::arg("max_level") = 20);
    m.def("moment_residual", &moment_residual, py::arg("seq"), py::arg("m"));
    m.def("lambda_factor", &lambda_factor, py::arg("seq"), py::arg("j"));
    m.def("suppression_order", &suppression_order, py::arg("seq"), py::arg("tol") = 1e-9);
    m.def("switching_function", &switching_function, py::arg("seq"), py::arg("t"));
    m.def("udd_identity_sum", &udd_identity_sum, py::arg("n"), py::arg("m"));
    m.def("verify_identity", &verify_identity, py::arg("n"), py::arg("m"));

    py::class_<SuppressionReport>(m, "SuppressionReport")
        .def_readonly("residuals", &SuppressionReport::residuals)
        .def_readonly("order", &SuppressionReport::order)
        .def_readonly("lambda_factors", &SuppressionReport::lambda);
    m.def("make_report", &make_report, py::arg("seq"), py::arg("tol") = 1e-9,
          py::arg("max_order") = 8);
    m.def("schedule_text", [](const PulseSequence& seq) {
        std::ostringstream os;
        write_schedule(os, seq);
        return os.str();
    });

    py::class_<DephasingModel::Rate>(m, "Rate")
        .def(py::init([](int order, double g) {
            return DephasingModel::Rate{order, g};
        }), py::arg("order"), py::arg("gamma_k"))
        .def_readonly("order", &DephasingModel::Rate::order)
        .def_readonly("gamma_k", &DephasingModel::Rate::gamma_k);
    py::class_<DephasingModel>(m, "DephasingModel")
        .def_readonly("rates", &DephasingModel::rates)
        .def_readonly("start_order", &DephasingModel::start_order)
        .def_readonly("truncation_order", &DephasingModel::truncation_order)
        .def_readonly("tau_c", &DephasingModel::tau_c);
    m.def("gamma_rate", &gamma_rate, py::arg("sigma_j"), py::arg("j"), py::arg("gamma"));
    m.def("free_induction_model", &free_induction_model, py::arg("env"), py::arg("gamma"),
          py::arg("truncation"));
    m.def("modified_model", &modified_model, py::arg("seq"), py::arg("env"),
          py::arg("gamma"), py::arg("truncation"));
    m.def("choose_truncation", &choose_truncation, py::arg("seq"), py::arg("env"),
          py::arg("gamma"), py::arg("t_max"));
    m.def("make_model", &make_model, py::arg("rates"), py::arg("tau_c"));
    m.def("decay_exponent", &decay_exponent, py::arg("model"), py::arg("t"));
    m.def("envelope", &envelope, py::arg("model"), py::arg("t"));
    m.def("leading_order_envelope", &leading_order_envelope, py::arg("model"),
          py::arg("t"));

    py::class_<CoherencePoint>(m, "CoherencePoint")
        .def_readonly("pulses", &CoherencePoint::pulses)
        .def_readonly("t2", &CoherencePoint::t2)
        .def_readonly("capped", &CoherencePoint::capped);
    m.def("coherence_time", &coherence_time, py::arg("model"));
    m.def("coherence_curve", &coherence_curve, py::arg("pulse_counts"), py::arg("env"),
          py::arg("gamma"));

    py::class_<MeasurementConfig>(m, "MeasurementConfig")
        .def(py::init<>())
        .def_readwrite("C", &MeasurementConfig::C)
        .def_readwrite("gamma", &MeasurementConfig::gamma)
        .def_readwrite("pulse_width", &MeasurementConfig::pulse_width)
        .def_readwrite("pulse_error", &MeasurementConfig::pulse_error)
        .def_readwrite("f_e", &MeasurementConfig::f_e);
    py::class_<SensitivityPoint>(m, "SensitivityPoint")
        .def_readonly("pulses", &SensitivityPoint::pulses)
        .def_readonly("tau", &SensitivityPoint::tau)
        .def_readonly("eta", &SensitivityPoint::eta)
        .def_readonly("mode", &SensitivityPoint::mode)
        .def_readonly("penalty", &SensitivityPoint::penalty);
    py::class_<OptimalTau>(m, "OptimalTau")
        .def_readonly("tau", &OptimalTau::tau)
        .def_readonly("eta", &OptimalTau::eta);
    m.def("eta_telegraph", &eta_telegraph, py::arg("n"), py::arg("tau"), py::arg("env"),
          py::arg("cfg"));
    m.def("optimal_tau", &optimal_tau, py::arg("n"), py::arg("env"), py::arg("cfg"));
    m.def("eta_upper_bound", &eta_upper_bound, py::arg("n"), py::arg("env"), py::arg("cfg"));
    m.def("eta_ac", &eta_ac, py::arg("n"), py::arg("tau"), py::arg("env"), py::arg("cfg"));
    m.def("gamma_ext", &gamma_ext, py::arg("sigma_ext"), py::arg("tau_ext"), py::arg("cfg"));
    m.def("eta_fluctuating", &eta_fluctuating, py::arg("n"), py::arg("tau"), py::arg("env"),
          py::arg("theta_ext"), py::arg("cfg"));
    m.def("pulse_penalty", &pulse_penalty, py::arg("n"), py::arg("env"), py::arg("cfg"));
    m.def("optimize_pulses", &optimize_pulses, py::arg("env"), py::arg("cfg"),
          py::arg("n_max"));

    py::enum_<NoiseKind>(m, "NoiseKind")
        .value("ou", NoiseKind::ou)
        .value("smooth_gaussian", NoiseKind::smooth_gaussian);
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("dt", &Trajectory::dt)
        .def_readonly("samples", &Trajectory::samples)
        .def_readonly("kind", &Trajectory::kind);
    py::class_<MCEstimate>(m, "MCEstimate")
        .def_readonly("times", &MCEstimate::times)
        .def_readonly("envelope", &MCEstimate::envelope)
        .def_readonly("stderrs", &MCEstimate::stderrs)
        .def_readonly("n_traj", &MCEstimate::n_traj)
        .def_readonly("seed", &MCEstimate::seed);
    py::class_<MCOptions>(m, "MCOptions")
        .def(py::init<>())
        .def_readwrite("dt", &MCOptions::dt)
        .def_readwrite("n_threads", &MCOptions::n_threads);
    m.def("sample_ou", &sample_ou, py::arg("env"), py::arg("dt"), py::arg("t_max"),
          py::arg("seed"));
    m.def("sample_smooth", &sample_smooth, py::arg("env"), py::arg("dt"), py::arg("t_max"),
          py::arg("seed"));
    m.def("phase_integral", &phase_integral, py::arg("seq"), py::arg("traj"), py::arg("t"));
    m.def("mc_envelope", &mc_envelope, py::arg("seq_family"), py::arg("env"),
          py::arg("kind"), py::arg("gamma"), py::arg("n_traj"), py::arg("t_grid"),
          py::arg("seed"), py::arg("opts") = MCOptions{});
    m.def("mc_fast_field_rate", &mc_fast_field_rate, py::arg("sigma_ext"),
          py::arg("tau_ext"), py::arg("seq"), py::arg("gamma"), py::arg("n_traj"),
          py::arg("seed"), py::arg("opts") = MCOptions{});

#ifdef VERSION_INFO
#define UDDMAG_STR2(x) #x
#define UDDMAG_STR(x) UDDMAG_STR2(x)
    m.attr("__version__") = UDDMAG_STR(VERSION_INFO);
#else
    m.attr("__version__") = "0.1.0";
#endif
}
