#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvbft/churn.hpp"
#include "cvbft/error.hpp"
#include "cvbft/experiments.hpp"
#include "cvbft/gossip.hpp"
#include "cvbft/quorum.hpp"
#include "cvbft/spatial.hpp"
#include "cvbft/stats.hpp"

namespace py = pybind11;
using namespace cvbft;

namespace {

Rng seeded(std::uint64_t seed) { return stream_rng(seed, 0); }

ChurnMeans means_from(std::pair<double, double> pair) { return {pair.first, pair.second}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic BFT consensus feasibility and latency toolkit";

    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<UnstableQueueError>(m, "UnstableQueueError", base.ptr());
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());
    py::register_exception<DegenerateVarianceError>(m, "DegenerateVarianceError", base.ptr());
    py::register_exception<MomentInfeasibleError>(m, "MomentInfeasibleError", base.ptr());
    py::register_exception<ScenarioDegenerateError>(m, "ScenarioDegenerateError", base.ptr());

    // spatial
    py::enum_<Role>(m, "Role")
        .value("Legitimate", Role::Legitimate)
        .value("Faulty", Role::Faulty);
    py::class_<Node>(m, "Node")
        .def_readonly("x", &Node::x_m)
        .def_readonly("y", &Node::y_m)
        .def_readonly("role", &Node::role);
    py::class_<NetworkSnapshot>(m, "NetworkSnapshot")
        .def_property_readonly("side_m", [](const NetworkSnapshot& s) { return s.region.side_m; })
        .def_readonly("nodes", &NetworkSnapshot::nodes)
        .def("counts", [](const NetworkSnapshot& s) {
            const auto c = snapshot_counts(s);
            return std::make_pair(c.total, c.faulty);
        });
    m.def(
        "sample_snapshot",
        [](double intensity, double fault_prob, double side_m, std::uint64_t seed) {
            auto rng = seeded(seed);
            return sample_snapshot(intensity, fault_prob, Region{side_m}, rng);
        },
        py::arg("intensity"), py::arg("fault_prob"), py::arg("side_m") = 1.0, py::arg("seed") = 0);

    // churn
    py::class_<ChurnDelta>(m, "ChurnDelta")
        .def_readonly("arrivals", &ChurnDelta::arrivals)
        .def_readonly("departures", &ChurnDelta::departures)
        .def_readonly("net", &ChurnDelta::net)
        .def("__repr__", [](const ChurnDelta& d) {
            return "ChurnDelta(arrivals=" + std::to_string(d.arrivals) +
                   ", departures=" + std::to_string(d.departures) + ", net=" + std::to_string(d.net) + ")";
        });
    m.def(
        "simulate_mm1_window",
        [](double arrival_rate_hz, double service_rate_hz, double window_s,
           std::optional<double> warmup_s, std::uint64_t seed) {
            auto config = ChurnConfig::with_default_warmup(arrival_rate_hz, service_rate_hz, window_s);
            if (warmup_s) config.warmup_s = *warmup_s;
            auto rng = seeded(seed);
            return simulate_mm1_window(config, rng);
        },
        py::arg("arrival_rate_hz"), py::arg("service_rate_hz"), py::arg("window_s"),
        py::arg("warmup_s") = py::none(), py::arg("seed") = 0);
    m.def(
        "sample_churn_delta",
        [](double arrival_mean, double departure_mean, std::uint64_t seed) {
            auto rng = seeded(seed);
            return sample_churn_delta(arrival_mean, departure_mean, rng);
        },
        py::arg("arrival_mean"), py::arg("departure_mean"), py::arg("seed") = 0);

    // quorum
    m.def(
        "required_nodes",
        [](std::int64_t faulty, std::int64_t delta_legit, std::int64_t delta_faulty) {
            return required_nodes({faulty, delta_legit, delta_faulty}).n_min;
        },
        py::arg("faulty"), py::arg("delta_legit") = 0, py::arg("delta_faulty") = 0);
    m.def("is_bft_feasible", &is_bft_feasible, py::arg("total"), py::arg("faulty"));
    m.def(
        "sample_required_nodes",
        [](double faulty_mean, std::pair<double, double> legit_churn,
           std::pair<double, double> faulty_churn, std::int64_t trials, std::uint64_t seed) {
            auto rng = seeded(seed);
            return n_min_values(sample_required_nodes(faulty_mean, means_from(legit_churn),
                                                      means_from(faulty_churn), trials, rng));
        },
        py::arg("faulty_mean"), py::arg("legit_churn") = std::make_pair(0.0, 0.0),
        py::arg("faulty_churn") = std::make_pair(0.0, 0.0), py::arg("trials") = 1000,
        py::arg("seed") = 0);
    m.def(
        "dispersion_diagnostic",
        [](const std::vector<std::int64_t>& samples) {
            const auto d = dispersion_diagnostic(samples);
            return py::make_tuple(d.mean, d.variance, d.index);
        },
        py::arg("samples"));

    // gossip
    py::class_<GossipParams>(m, "GossipParams")
        .def(py::init([](std::int64_t n_total, double fault_prob, double epsilon, std::int64_t max_slots) {
                 GossipParams p{n_total, fault_prob, epsilon, max_slots};
                 p.validate();
                 return p;
             }),
             py::arg("n_total"), py::arg("fault_prob"), py::arg("epsilon") = kDefaultEpsilon,
             py::arg("max_slots") = kDefaultMaxSlots)
        .def_readonly("n_total", &GossipParams::n_total)
        .def_readonly("fault_prob", &GossipParams::fault_prob)
        .def_readonly("epsilon", &GossipParams::epsilon)
        .def_readonly("max_slots", &GossipParams::max_slots);
    py::class_<GossipTrace>(m, "GossipTrace")
        .def_readonly("uninformed", &GossipTrace::uninformed)
        .def_property_readonly("informed", &GossipTrace::informed)
        .def_readonly("latency_slots", &GossipTrace::latency_slots);
    py::enum_<SenderPolicy>(m, "SenderPolicy")
        .value("AllCapable", SenderPolicy::AllCapable)
        .value("InformedOnly", SenderPolicy::InformedOnly);
    m.def("mean_field_trace", &mean_field_trace, py::arg("params"));
    m.def("latency_closed_form", &latency_closed_form, py::arg("params"));
    m.def(
        "agent_based_trace",
        [](const GossipParams& params, SenderPolicy policy, std::uint64_t seed) {
            auto rng = seeded(seed);
            return agent_based_trace(params, policy, rng);
        },
        py::arg("params"), py::arg("policy") = SenderPolicy::AllCapable, py::arg("seed") = 0);

    // experiments
    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("name", &Scenario::name)
        .def_readwrite("base_intensity", &Scenario::base_intensity)
        .def_readwrite("base_faulty", &Scenario::base_faulty)
        .def_property(
            "legit_churn",
            [](const Scenario& s) { return std::make_pair(s.legit_churn.arrival_mean, s.legit_churn.departure_mean); },
            [](Scenario& s, std::pair<double, double> v) { s.legit_churn = means_from(v); })
        .def_property(
            "faulty_churn",
            [](const Scenario& s) { return std::make_pair(s.faulty_churn.arrival_mean, s.faulty_churn.departure_mean); },
            [](Scenario& s, std::pair<double, double> v) { s.faulty_churn = means_from(v); })
        .def_readwrite("epsilon", &Scenario::epsilon)
        .def_readwrite("trials", &Scenario::trials)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("max_slots", &Scenario::max_slots)
        .def_readwrite("fixed_n", &Scenario::fixed_n);
    py::class_<ScenarioOutcome>(m, "ScenarioOutcome")
        .def_readonly("latencies", &ScenarioOutcome::latencies)
        .def_readonly("infeasible_trials", &ScenarioOutcome::infeasible_trials)
        .def_readonly("nonconvergent_trials", &ScenarioOutcome::nonconvergent_trials)
        .def_property_readonly("converged_trials", &ScenarioOutcome::converged_trials)
        .def_property_readonly("median_latency", &ScenarioOutcome::median_latency)
        .def_property_readonly("mean_latency", &ScenarioOutcome::mean_latency)
        .def_property_readonly("trial_log", [](const ScenarioOutcome& o) {
            py::list rows;
            for (const auto& r : o.per_trial_log) {
                py::object latency = r.status == TrialStatus::Converged ? py::cast(r.latency_slots) : py::none();
                rows.append(py::make_tuple(r.trial, r.n, r.f, r.delta_legit, r.delta_faulty, r.n_eff,
                                           r.f_eff, latency));
            }
            return rows;
        });
    m.def("run_latency_mc", &run_latency_mc, py::arg("scenario"), py::arg("workers") = 1u);
    m.def(
        "dissemination_curves",
        [](const std::vector<std::int64_t>& n_values, double fault_prob, double epsilon) {
            return dissemination_curves(n_values, fault_prob, epsilon);
        },
        py::arg("n_values"), py::arg("fault_prob"), py::arg("epsilon") = kDefaultEpsilon);
    py::enum_<SlotProfile>(m, "SlotProfile")
        .value("CV2X_50", SlotProfile::CV2X_50)
        .value("CV2X_100", SlotProfile::CV2X_100)
        .value("CV2X_200", SlotProfile::CV2X_200)
        .value("DSRC_100", SlotProfile::DSRC_100);
    m.def("slots_to_ms", &slots_to_ms, py::arg("latency_slots"), py::arg("profile"));

    // stats
    m.def(
        "min_max_scale",
        [](const std::vector<double>& samples) {
            auto s = min_max_scale(samples);
            return py::make_tuple(s.values, s.lower, s.upper);
        },
        py::arg("samples"));
    m.def(
        "fit_beta_mom",
        [](const std::vector<double>& scaled) {
            const auto s = fit_beta_mom(scaled);
            return std::make_pair(s.alpha, s.beta);
        },
        py::arg("scaled"));
    m.def("regularized_incomplete_beta", &regularized_incomplete_beta, py::arg("x"), py::arg("alpha"),
          py::arg("beta"));
    m.def(
        "ks_statistic",
        [](const std::vector<double>& scaled, double a, double b) { return ks_statistic(scaled, a, b); },
        py::arg("scaled"), py::arg("alpha"), py::arg("beta"));
    py::class_<BetaFit>(m, "BetaFit")
        .def_readonly("alpha", &BetaFit::alpha)
        .def_readonly("beta", &BetaFit::beta)
        .def_readonly("lower", &BetaFit::lower)
        .def_readonly("upper", &BetaFit::upper)
        .def_readonly("ks_stat", &BetaFit::ks_stat)
        .def_readonly("n_samples", &BetaFit::n_samples)
        .def("pdf", &BetaFit::pdf, py::arg("x"));
    m.def(
        "fit_beta", [](const std::vector<double>& samples) { return fit_beta(samples); },
        py::arg("samples"));
    m.def(
        "make_histogram",
        [](const std::vector<double>& samples, std::size_t bins) {
            auto h = make_histogram(samples, bins);
            return py::make_tuple(h.bin_edges, h.counts);
        },
        py::arg("samples"), py::arg("bins"));
}
