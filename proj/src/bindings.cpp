#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qkr/classical.hpp"
#include "qkr/config.hpp"
#include "qkr/io.hpp"
#include "qkr/scenarios.hpp"

namespace py = pybind11;
using namespace qkr;

namespace {

py::dict pop_to_dict(const PopulationDistribution& pop) {
    py::dict d;
    for (const auto& [j, p] : pop.entries) d[py::int_(j)] = p;
    return d;
}

PopulationDistribution pop_from_dict(const py::dict& d) {
    PopulationDistribution pop;
    for (const auto& item : d)
        pop.entries[item.first.cast<int>()] = item.second.cast<double>();
    return pop;
}

py::list trace_to_list(const EnergyTrace& trace) {
    py::list out;
    for (const auto& p : trace.points)
        out.append(py::make_tuple(p.pulse_index, p.time, p.energy, p.absorbed));
    return out;
}

py::dict result_to_dict(const ExperimentResult& result) {
    py::dict d;
    d["scenario"] = result.scenario;
    py::dict traces;
    for (const auto& [label, trace] : result.traces) traces[label.c_str()] = trace_to_list(trace);
    d["traces"] = traces;
    py::dict pops;
    for (const auto& lp : result.populations) pops[lp.label.c_str()] = pop_to_dict(lp.pop);
    d["populations"] = pops;
    if (!result.scan.columns.empty()) {
        py::dict scan;
        scan["columns"] = result.scan.columns;
        scan["rows"] = result.scan.rows;
        d["scan"] = scan;
    }
    py::dict metrics;
    for (const auto& [key, value] : result.metrics) metrics[key.c_str()] = value;
    d["metrics"] = metrics;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum kicked rotor: laser-kicked molecular rotation, dynamical "
              "localization and coherent control";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NumericalError>(m, "NumericalError");

    py::enum_<Parity>(m, "Parity")
        .value("EVEN_J", Parity::EvenJ)
        .value("ODD_J", Parity::OddJ)
        .value("BOTH", Parity::Both);

    py::class_<RotorBasis>(m, "RotorBasis")
        .def_property_readonly("j_max", &RotorBasis::j_max)
        .def_property_readonly("m", &RotorBasis::m)
        .def_property_readonly("parity", &RotorBasis::parity)
        .def_property_readonly("j_values", &RotorBasis::j_values)
        .def("__len__", &RotorBasis::size);

    py::class_<WavePacket>(m, "WavePacket")
        .def_property_readonly("basis", &WavePacket::basis)
        .def_property_readonly("amplitudes", &WavePacket::amplitudes)
        .def_static("pure", &WavePacket::pure, py::arg("basis"), py::arg("j0"));

    py::class_<PulseSpec>(m, "PulseSpec")
        .def(py::init([](double time, double strength, std::optional<double> fwhm) {
                 return PulseSpec{time, strength, fwhm};
             }),
             py::arg("time"), py::arg("strength"), py::arg("fwhm") = std::nullopt)
        .def_readonly("time", &PulseSpec::time)
        .def_readonly("strength", &PulseSpec::strength)
        .def_readonly("fwhm", &PulseSpec::fwhm);

    py::class_<PulseTrain>(m, "PulseTrain")
        .def(py::init<std::vector<PulseSpec>>())
        .def_static("periodic", &PulseTrain::periodic, py::arg("n"), py::arg("period"),
                    py::arg("strength"), py::arg("fwhm") = std::nullopt)
        .def_static("control_train", &PulseTrain::control_train, py::arg("n_pre"),
                    py::arg("period_pre"), py::arg("delay"), py::arg("n_loc"),
                    py::arg("period_loc"), py::arg("strength_pre"), py::arg("strength_loc"),
                    py::arg("fwhm") = std::nullopt)
        .def_property_readonly("pulses", &PulseTrain::pulses);

    m.def("build_basis", &build_basis, py::arg("j_max"), py::arg("parity"), py::arg("m"));
    m.def("cos2_matrix", &cos2_matrix);
    m.def("cos2_element", &cos2_element, py::arg("j_prime"), py::arg("j"), py::arg("m"));
    m.def("kick_matrix",
          [](const RotorBasis& basis, double strength) {
              return KickOperator(basis, strength).matrix();
          },
          py::arg("basis"), py::arg("strength"));
    m.def("free_phases", &free_phases, py::arg("basis"), py::arg("dt"));
    m.def(
        "propagate_train",
        [](const WavePacket& state, const PulseTrain& train, double leak_threshold,
           double finite_pulse_dt) {
            PropagationOptions opts{leak_threshold, finite_pulse_dt};
            const auto traj = propagate_train(state, train, opts);
            return py::make_tuple(traj.snapshots, traj.times);
        },
        py::arg("state"), py::arg("train"), py::arg("leak_threshold") = 1e-6,
        py::arg("finite_pulse_dt") = 0.0);
    m.def("propagate_finite_pulse", &propagate_finite_pulse, py::arg("state"),
          py::arg("pulse"), py::arg("dt"));
    m.def("resonance_distance",
          [](double period, int q_max) {
              const auto r = resonance_distance(period, q_max);
              return py::make_tuple(r.p, r.q, r.distance);
          },
          py::arg("period"), py::arg("q_max"));

    py::class_<MoleculeSpec>(m, "MoleculeSpec")
        .def_readonly("name", &MoleculeSpec::name)
        .def_readonly("B_cm", &MoleculeSpec::B_cm)
        .def_readonly("spin_weight_even", &MoleculeSpec::spin_weight_even)
        .def_readonly("spin_weight_odd", &MoleculeSpec::spin_weight_odd)
        .def("revival_period_s", &MoleculeSpec::revival_period_s);
    m.def("molecule_by_name", &molecule_by_name);

    py::class_<ThermalEnsemble>(m, "ThermalEnsemble")
        .def_property_readonly("members",
                               [](const ThermalEnsemble& e) {
                                   py::list out;
                                   for (const auto& mem : e.members)
                                       out.append(py::make_tuple(mem.weight, mem.j0, mem.m0));
                                   return out;
                               })
        .def_readonly("temperature_K", &ThermalEnsemble::temperature_K)
        .def("j_weights", &ThermalEnsemble::j_weights);
    m.def("boltzmann_ensemble", &boltzmann_ensemble, py::arg("molecule"),
          py::arg("temperature_K"), py::arg("weight_cutoff") = 1e-6);
    m.def("kick_strength_from_pulse", &kick_strength_from_pulse,
          py::arg("polarizability_anisotropy_A3"), py::arg("field_squared_time_integral_SI"));

    m.def("populations", [](const WavePacket& s) { return pop_to_dict(populations(s)); });
    m.def("rotational_energy",
          [](const py::dict& pop) { return rotational_energy(pop_from_dict(pop)); });
    m.def("raman_forward",
          [](const py::dict& pop, std::optional<double> floor) {
              py::dict out;
              for (const auto& [j, i] : raman_forward(pop_from_dict(pop), floor).intensities)
                  out[py::int_(j)] = i;
              return out;
          },
          py::arg("populations"), py::arg("noise_floor") = std::nullopt);
    m.def("retrieve_populations", [](const py::dict& intensities) {
        RamanSpectrum spec;
        for (const auto& item : intensities)
            spec.intensities[item.first.cast<int>()] = item.second.cast<double>();
        return pop_to_dict(retrieve_populations(spec));
    });
    m.def("degree_of_control", &degree_of_control, py::arg("e1"), py::arg("e2"));
    m.def("participation_ratio",
          [](const py::dict& pop) { return participation_ratio(pop_from_dict(pop)); });

    m.def(
        "classical_energy_trace",
        [](int size, double strength, double tau, int n_kicks, std::uint64_t seed,
           std::optional<std::string> molecule, double temperature_K, int threads) {
            const auto init = molecule ? ClassicalInitSpec::thermal(
                                             molecule_by_name(*molecule), temperature_K)
                                       : ClassicalInitSpec::zero();
            return trace_to_list(
                classical_energy_trace(size, init, strength, tau, n_kicks, seed, threads));
        },
        py::arg("size"), py::arg("strength"), py::arg("tau"), py::arg("n_kicks"),
        py::arg("seed") = 0, py::arg("molecule") = std::nullopt,
        py::arg("temperature_K") = 0.0, py::arg("threads") = 1);

    m.def("parse_config", &parse_config);
    m.def("parse_config_string", &parse_config_string);
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def("to_json", &config_to_json);

    m.def("run_control_experiment",
          [](const ExperimentConfig& c, int t) { return result_to_dict(run_control_experiment(c, t)); },
          py::arg("config"), py::arg("threads") = 1);
    m.def("scan_delay",
          [](const ExperimentConfig& c, int t) { return result_to_dict(scan_delay(c, t)); },
          py::arg("config"), py::arg("threads") = 1);
    m.def("scan_period_sensitivity",
          [](const ExperimentConfig& c, int t) { return result_to_dict(scan_period_sensitivity(c, t)); },
          py::arg("config"), py::arg("threads") = 1);
    m.def("quantum_classical_transition",
          [](const ExperimentConfig& c, int t) { return result_to_dict(quantum_classical_transition(c, t)); },
          py::arg("config"), py::arg("threads") = 1);
    m.def("resonance_map",
          [](const ExperimentConfig& c, int t) { return result_to_dict(resonance_map(c, t)); },
          py::arg("config"), py::arg("threads") = 1);
    m.def("run_classical",
          [](const ExperimentConfig& c, int t) { return result_to_dict(run_classical(c, t)); },
          py::arg("config"), py::arg("threads") = 1);
    m.def("write_results",
          [](const ExperimentConfig& c, const std::string& out_dir, const std::string& which,
             int threads) {
              ExperimentResult result;
              if (which == "simulate") result = run_control_experiment(c, threads);
              else if (which == "scan-delay") result = scan_delay(c, threads);
              else if (which == "scan-period") result = scan_period_sensitivity(c, threads);
              else if (which == "transition") result = quantum_classical_transition(c, threads);
              else if (which == "resonance-map") result = resonance_map(c, threads);
              else if (which == "classical") result = run_classical(c, threads);
              else throw ConfigError("unknown scenario '" + which + "'");
              return write_results(result, c, out_dir);
          },
          py::arg("config"), py::arg("out_dir"), py::arg("scenario"), py::arg("threads") = 1);

    m.attr("__version__") = QKR_VERSION;
}
