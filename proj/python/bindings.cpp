#include "nhlat/analysis.hpp"
#include "nhlat/errors.hpp"
#include "nhlat/lattice.hpp"
#include "nhlat/scenario.hpp"
#include "nhlat/sequences.hpp"
#include "nhlat/spectral.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace nhlat;

namespace {

py::object int128_to_py(Int128 v)
{
    const std::string s = to_string(v);
    return py::reinterpret_steal<py::object>(PyLong_FromString(s.c_str(), nullptr, 10));
}

py::list int128_list(const std::vector<Int128>& terms)
{
    py::list out;
    for (Int128 v : terms)
        out.append(int128_to_py(v));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Spectra, zero-mode searches, and diagnostics for gain/loss-modulated "
              "tight-binding chains";

    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<numerical_error>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<symmetry_error>(m, "SymmetryError", PyExc_RuntimeError);

    // --- sequences ---------------------------------------------------------
    py::class_<LucasParams>(m, "LucasParams")
        .def_readonly("p", &LucasParams::p)
        .def_readonly("q", &LucasParams::q)
        .def_readonly("discriminant", &LucasParams::discriminant)
        .def_readonly("root_a", &LucasParams::root_a)
        .def_readonly("root_b", &LucasParams::root_b)
        .def("repeated_root", &LucasParams::repeated_root)
        .def("__repr__", [](const LucasParams& p) {
            return "LucasParams(p=" + std::to_string(p.p) + ", q=" + std::to_string(p.q) + ")";
        });
    m.def("lucas_params", &lucas_params, py::arg("p"), py::arg("q"));

    py::class_<SequencePair>(m, "SequencePair")
        .def_readonly("params", &SequencePair::params)
        .def_property_readonly("u_terms",
                               [](const SequencePair& s) { return int128_list(s.u_terms); })
        .def_property_readonly("v_terms",
                               [](const SequencePair& s) { return int128_list(s.v_terms); });
    m.def("lucas_pair", &lucas_pair, py::arg("params"), py::arg("m_max"));
    m.def("closed_form_u", &closed_form_u, py::arg("params"), py::arg("m"));
    m.def("closed_form_v", &closed_form_v, py::arg("params"), py::arg("m"));

    // --- lattice -----------------------------------------------------------
    py::enum_<Region>(m, "Region")
        .value("system1", Region::system1)
        .value("reservoir", Region::reservoir)
        .value("system2", Region::system2);

    py::class_<LatticeGraph>(m, "LatticeGraph")
        .def(py::init<int, int>(), py::arg("n_sites"), py::arg("first_index") = 1)
        .def_property_readonly("n_sites", &LatticeGraph::size)
        .def_property_readonly("first_index", &LatticeGraph::first_index)
        .def_property_readonly("last_index", &LatticeGraph::last_index)
        .def("contains", &LatticeGraph::contains, py::arg("site"))
        .def("onsite", &LatticeGraph::onsite, py::arg("site"))
        .def("region", &LatticeGraph::region, py::arg("site"))
        .def("set_onsite", &LatticeGraph::set_onsite, py::arg("site"), py::arg("value"))
        .def("set_region", &LatticeGraph::set_region, py::arg("site"), py::arg("region"))
        .def("add_coupling", &LatticeGraph::add_coupling, py::arg("i"), py::arg("j"),
             py::arg("amplitude"))
        .def("has_coupling", &LatticeGraph::has_coupling, py::arg("i"), py::arg("j"))
        .def("coupling_amplitude", &LatticeGraph::coupling_amplitude, py::arg("i"), py::arg("j"))
        .def("neighbors", &LatticeGraph::neighbors, py::arg("site"))
        .def("sites", &LatticeGraph::sites)
        .def("sites_in", &LatticeGraph::sites_in, py::arg("region"))
        .def("to_matrix", &LatticeGraph::to_matrix)
        .def_property_readonly("couplings",
                               [](const LatticeGraph& g) {
                                   py::list out;
                                   for (const auto& c : g.couplings())
                                       out.append(py::make_tuple(c.a, c.b, c.amplitude));
                                   return out;
                               })
        .def("__repr__", [](const LatticeGraph& g) {
            return "LatticeGraph(sites " + std::to_string(g.first_index()) + ".." +
                   std::to_string(g.last_index()) + ", " +
                   std::to_string(g.couplings().size()) + " couplings)";
        });

    m.def("build_ssh", &build_ssh, py::arg("n_sites"), py::arg("t_a"), py::arg("t_b"),
          py::arg("kappa0"));
    m.def("build_reservoir", &build_reservoir, py::arg("n_sites"), py::arg("t"),
          py::arg("gamma"), py::arg("start_index"));
    m.def("join", &join, py::arg("a"), py::arg("b"), py::arg("site_a"), py::arg("site_b"),
          py::arg("t_prime"));
    m.def("build_lieb_tail", &build_lieb_tail, py::arg("n_sites") = 11, py::arg("t") = 1.0);
    m.def("build_three_site_tail", &build_three_site_tail, py::arg("t") = 1.0);
    m.def("add_uniform_shift", &add_uniform_shift, py::arg("graph"), py::arg("kappa"));
    m.def("mirror_reflect", &mirror_reflect, py::arg("graph"));

    py::enum_<PresetVariant>(m, "PresetVariant")
        .value("single_system_reservoir", PresetVariant::single_system_reservoir)
        .value("reservoir_lieb", PresetVariant::reservoir_lieb)
        .value("reservoir_three_site", PresetVariant::reservoir_three_site)
        .value("mirror_bridge", PresetVariant::mirror_bridge);

    py::class_<PresetParams>(m, "PresetParams")
        .def(py::init<>())
        .def_readwrite("t", &PresetParams::t)
        .def_readwrite("t_a", &PresetParams::t_a)
        .def_readwrite("t_b", &PresetParams::t_b)
        .def_readwrite("kappa0", &PresetParams::kappa0)
        .def_readwrite("gamma", &PresetParams::gamma)
        .def_readwrite("system_sites", &PresetParams::system_sites)
        .def_readwrite("reservoir_sites", &PresetParams::reservoir_sites);

    m.def("build_preset", &build_preset, py::arg("variant"), py::arg("params"),
          py::arg("t_prime"));
    m.def("preset_family", &preset_family, py::arg("variant"), py::arg("params"));

    // --- spectral ----------------------------------------------------------
    py::class_<Mode>(m, "Mode")
        .def_readonly("energy", &Mode::energy)
        .def_readonly("vector", &Mode::vector)
        .def_readonly("branch_id", &Mode::branch_id)
        .def("__repr__", [](const Mode& mo) {
            return "Mode(energy=" + std::to_string(mo.energy.real()) +
                   (mo.energy.imag() < 0 ? "-" : "+") +
                   std::to_string(std::abs(mo.energy.imag())) + "j)";
        });

    m.def("eigendecompose", &eigendecompose, py::arg("h"));
    m.def("eigenvalues_of", &eigenvalues_of, py::arg("h"));

    py::class_<NhphPairing>(m, "NhphPairing")
        .def_readonly("pairs", &NhphPairing::pairs)
        .def_readonly("zero_modes", &NhphPairing::zero_modes)
        .def_readonly("max_defect", &NhphPairing::max_defect);
    m.def("check_nhph",
          py::overload_cast<const std::vector<Mode>&, double>(&check_nhph),
          py::arg("modes"), py::arg("tol"));
    m.def("check_nhph_energies",
          py::overload_cast<const std::vector<std::complex<double>>&, double>(&check_nhph),
          py::arg("energies"), py::arg("tol"));

    py::enum_<EventType>(m, "EventType")
        .value("zero_crossing", EventType::zero_crossing)
        .value("exceptional_point", EventType::exceptional_point)
        .value("avoided_crossing", EventType::avoided_crossing);

    py::class_<SweepEvent>(m, "SweepEvent")
        .def_readonly("type", &SweepEvent::type)
        .def_readonly("t_prime", &SweepEvent::t_prime)
        .def_readonly("branch_a", &SweepEvent::branch_a)
        .def_readonly("branch_b", &SweepEvent::branch_b)
        .def_readonly("gap", &SweepEvent::gap)
        .def_readonly("overlap", &SweepEvent::overlap);

    py::class_<SweepOptions>(m, "SweepOptions")
        .def(py::init<>())
        .def_readwrite("tol_re", &SweepOptions::tol_re)
        .def_readwrite("overlap_floor", &SweepOptions::overlap_floor)
        .def_readwrite("ep_gap_tol", &SweepOptions::ep_gap_tol)
        .def_readwrite("ep_overlap_min", &SweepOptions::ep_overlap_min)
        .def_readwrite("approach_gap_max", &SweepOptions::approach_gap_max)
        .def_readwrite("detect_events", &SweepOptions::detect_events);

    py::class_<SweepTrajectory>(m, "SweepTrajectory")
        .def_readonly("grid", &SweepTrajectory::grid)
        .def_readonly("branches", &SweepTrajectory::branches)
        .def_readonly("events", &SweepTrajectory::events)
        .def_property_readonly("branch_count", &SweepTrajectory::branch_count);

    m.def("sweep", &sweep, py::arg("family"), py::arg("grid"),
          py::arg("options") = SweepOptions{});

    py::class_<ZeroModeResult>(m, "ZeroModeResult")
        .def_readonly("t_star", &ZeroModeResult::t_star)
        .def_readonly("mode", &ZeroModeResult::mode);
    m.def("find_zero_mode", &find_zero_mode, py::arg("family"), py::arg("lo"), py::arg("hi"),
          py::arg("tol_e") = 1e-8);

    py::class_<ApproachResult>(m, "ApproachResult")
        .def_readonly("type", &ApproachResult::type)
        .def_readonly("t_value", &ApproachResult::t_value)
        .def_readonly("gap", &ApproachResult::gap)
        .def_readonly("overlap", &ApproachResult::overlap);
    m.def("find_exceptional_point", &find_exceptional_point, py::arg("family"), py::arg("lo"),
          py::arg("hi"), py::arg("options") = SweepOptions{});

    py::enum_<Parity>(m, "Parity")
        .value("symmetric", Parity::symmetric)
        .value("antisymmetric", Parity::antisymmetric)
        .value("none", Parity::none);
    m.def("classify_parity", &classify_parity, py::arg("mode"), py::arg("lattice"));

    // --- analysis ----------------------------------------------------------
    m.def("alpha_from_gamma", &alpha_from_gamma, py::arg("gamma"), py::arg("t"));
    m.def("recurrence_residual", &recurrence_residual, py::arg("mode"),
          py::arg("reservoir_sites"), py::arg("alpha"));

    py::class_<LinearFit>(m, "LinearFit")
        .def_readonly("slope", &LinearFit::slope)
        .def_readonly("intercept", &LinearFit::intercept)
        .def_readonly("max_abs_residual", &LinearFit::max_abs_residual);
    m.def("linear_fit", &linear_fit, py::arg("mode"), py::arg("sites"));

    py::class_<IntensityStats>(m, "IntensityStats")
        .def_readonly("mean", &IntensityStats::mean)
        .def_readonly("relative_std", &IntensityStats::relative_std);
    py::class_<PhaseStats>(m, "PhaseStats")
        .def_readonly("circular_mean", &PhaseStats::circular_mean)
        .def_readonly("circular_spread", &PhaseStats::circular_spread);
    py::class_<ConstantIntensityMetrics>(m, "ConstantIntensityMetrics")
        .def_readonly("intensity", &ConstantIntensityMetrics::intensity)
        .def_readonly("phase_even", &ConstantIntensityMetrics::phase_even)
        .def_readonly("phase_odd", &ConstantIntensityMetrics::phase_odd)
        .def_readonly("neighbor_phase_diffs", &ConstantIntensityMetrics::neighbor_phase_diffs);
    m.def("constant_intensity_metrics", &constant_intensity_metrics, py::arg("mode"),
          py::arg("reservoir_sites"));

    m.def("edge_flux", &edge_flux, py::arg("mode"), py::arg("lattice"), py::arg("n"),
          py::arg("m"));
    m.def("continuity_check", &continuity_check, py::arg("mode"), py::arg("lattice"));
    m.def("edge_amplitude_ratio", &edge_amplitude_ratio, py::arg("mode"), py::arg("lattice"));

    py::class_<AnalysisReport::Flux>(m, "Flux")
        .def_readonly("from_site", &AnalysisReport::Flux::from)
        .def_readonly("to_site", &AnalysisReport::Flux::to)
        .def_readonly("value", &AnalysisReport::Flux::value);
    py::class_<AnalysisReport>(m, "AnalysisReport")
        .def_readonly("energy", &AnalysisReport::energy)
        .def_readonly("alpha", &AnalysisReport::alpha)
        .def_readonly("recurrence", &AnalysisReport::recurrence)
        .def_readonly("fit_even", &AnalysisReport::fit_even)
        .def_readonly("fit_odd", &AnalysisReport::fit_odd)
        .def_readonly("intensity", &AnalysisReport::intensity)
        .def_readonly("phase_even", &AnalysisReport::phase_even)
        .def_readonly("phase_odd", &AnalysisReport::phase_odd)
        .def_readonly("neighbor_phase_diffs", &AnalysisReport::neighbor_phase_diffs)
        .def_readonly("fluxes", &AnalysisReport::fluxes)
        .def_readonly("continuity_residuals", &AnalysisReport::continuity_residuals);
    m.def("analyze_mode", &analyze_mode, py::arg("mode"), py::arg("lattice"), py::arg("alpha"));

    // --- scenarios ----------------------------------------------------------
    py::class_<CheckLine>(m, "CheckLine")
        .def_readonly("id", &CheckLine::id)
        .def_readonly("passed", &CheckLine::pass)
        .def_readonly("detail", &CheckLine::detail);
    py::class_<ReproduceResult>(m, "ReproduceResult")
        .def_readonly("checks", &ReproduceResult::checks)
        .def("all_pass", &ReproduceResult::all_pass);
    m.def("run_reproduce", &run_reproduce, py::arg("figure"), py::arg("out_dir"));
    m.def("graph_to_config_json", &graph_to_config_json, py::arg("graph"));
}
