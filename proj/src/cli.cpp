#include "cvbft/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "cvbft/churn.hpp"
#include "cvbft/csv.hpp"
#include "cvbft/error.hpp"
#include "cvbft/experiments.hpp"
#include "cvbft/gossip.hpp"
#include "cvbft/quorum.hpp"
#include "cvbft/spatial.hpp"
#include "cvbft/stats.hpp"
#include "cvbft/svg.hpp"
#include "cvbft/validation.hpp"

namespace fs = std::filesystem;

namespace cvbft::cli {

namespace {

/// Raised for output problems; carries the flag that named the path.
class OutputError : public Error {
public:
    using Error::Error;
};

const CLI::Validator kProbability = CLI::Range(0.0, 1.0);

const CLI::Validator kOpenUnit{
    [](std::string& text) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(text, v) || !(v > 0.0 && v < 1.0)) {
            return "value " + text + " is not in the open interval (0, 1)";
        }
        return {};
    },
    "(0,1)"};

struct Common {
    std::string output_dir = ".";
    std::uint64_t seed = 1;
};

struct DropArgs {
    double intensity = 100.0;
    double fault_prob = 0.25;
    double side_m = 1.0;
    std::string out = "drop.svg";
};

struct CurvesArgs {
    std::vector<std::int64_t> n_values{5, 45, 85, 125};
    double fault_prob = 0.5;
    double epsilon = kDefaultEpsilon;
    std::string out = "curves.svg";
};

struct LatencyArgs {
    std::string name;
    double base_intensity = 25.0;
    std::int64_t faulty = 6;
    std::vector<double> legit_churn{0.0, 0.0};
    std::vector<double> faulty_churn{0.0, 0.0};
    double epsilon = kDefaultEpsilon;
    std::int64_t trials = 10'000;
    std::int64_t max_slots = kDefaultMaxSlots;
    std::int64_t fixed_n = -1;
    std::size_t bins = 0;
    unsigned threads = 1;
    std::string out = "latency.svg";
};

struct QuorumArgs {
    double faulty_mean = 25.0;
    double intensity = -1.0;
    double fault_prob = -1.0;
    std::vector<double> legit_churn{0.0, 0.0};
    std::vector<double> faulty_churn{0.0, 0.0};
    std::int64_t trials = 100'000;
    std::string out = "quorum.csv";
};

struct ChurnArgs {
    std::vector<double> legit{0.0, 0.0};
    std::vector<double> faulty{0.0, 0.0};
    bool mm1 = false;
    double arrival_rate = 4.0;
    double service_rate = 8.0;
    double window_s = 1.0;
    double warmup_s = -1.0;
    std::int64_t trials = 1'000;
    std::string out = "churn.csv";
};

struct ConvertArgs {
    std::vector<std::int64_t> slots{5};
    std::vector<std::string> profiles;
    std::string out;
};

fs::path resolve(const Common& common, const std::string& out) {
    const fs::path p{out};
    return p.is_absolute() ? p : fs::path{common.output_dir} / p;
}

/// Sibling path: `dir/stem + suffix`.
fs::path sibling(const fs::path& primary, const std::string& suffix) {
    return primary.parent_path() / (primary.stem().string() + suffix);
}

void write_file(const fs::path& path, const std::string& content, const std::string& flag) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw OutputError(flag + ": cannot write output file '" + path.string() + "'");
    }
    file << content;
    if (!file) {
        throw OutputError(flag + ": failed writing '" + path.string() + "'");
    }
}

template <typename Fn>
std::string render(Fn&& fn) {
    std::ostringstream s;
    fn(s);
    return s.str();
}

ChurnMeans to_means(const std::vector<double>& pair) { return {pair.at(0), pair.at(1)}; }

void add_churn_pair(CLI::App* app, const std::string& flag, std::vector<double>& target,
                    const std::string& help) {
    app->add_option(flag, target, help)
        ->expected(2)
        ->delimiter(',')
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

int run_drop(const Common& common, const DropArgs& a, std::ostream& out) {
    auto rng = stream_rng(common.seed, 0);
    const auto snapshot = sample_snapshot(a.intensity, a.fault_prob, Region{a.side_m}, rng);
    const auto counts = snapshot_counts(snapshot);

    const auto svg_path = resolve(common, a.out);
    const auto csv_path = sibling(svg_path, ".csv");
    write_file(csv_path, render([&](auto& s) { write_snapshot_csv(s, snapshot); }), "--out");

    svg::Chart chart("Node drop (intensity " + csv::format_double(a.intensity) + ", p_f " +
                         csv::format_double(a.fault_prob) + ")",
                     "x (m)", "y (m)", 600.0, 520.0);
    chart.set_x_range(0.0, a.side_m);
    chart.set_y_range(0.0, a.side_m);
    std::vector<double> lx, ly, fx, fy;
    for (const auto& node : snapshot.nodes) {
        auto& xs = node.role == Role::Faulty ? fx : lx;
        auto& ys = node.role == Role::Faulty ? fy : ly;
        xs.push_back(node.x_m);
        ys.push_back(node.y_m);
    }
    chart.add_points(lx, ly, "#000000", svg::Marker::Square, "legitimate");
    chart.add_points(fx, fy, "#2ca02c", svg::Marker::Circle, "faulty");
    write_file(svg_path, chart.render(), "--out");

    out << "nodes " << counts.total << ", faulty " << counts.faulty << "\n"
        << "wrote " << svg_path.string() << " and " << csv_path.string() << "\n";
    return 0;
}

int run_curves(const Common& common, const CurvesArgs& a, std::ostream& out) {
    const auto traces = dissemination_curves(a.n_values, a.fault_prob, a.epsilon);
    const auto svg_path = resolve(common, a.out);

    svg::Chart chart("Block dissemination (p_f " + csv::format_double(a.fault_prob) + ")",
                     "time slot t", "received fraction r_t");
    chart.set_y_range(0.0, 1.0);
    std::size_t longest = 1;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& trace = traces[i];
        const auto n = a.n_values[i];
        const auto csv_path = sibling(svg_path, "_N" + std::to_string(n) + ".csv");
        write_file(csv_path, render([&](auto& s) { write_trace_csv(s, trace); }), "--out");

        std::vector<double> ts(trace.uninformed.size());
        for (std::size_t t = 0; t < ts.size(); ++t) ts[t] = static_cast<double>(t);
        longest = std::max(longest, ts.size() - 1);
        chart.add_line(ts, trace.informed(), svg::palette(i), "N = " + std::to_string(n));

        out << "N=" << n << " latency_slots=";
        if (trace.latency_slots) {
            out << *trace.latency_slots;
        } else {
            out << "not-converged";
        }
        out << " csv=" << csv_path.string() << "\n";
    }
    chart.set_x_range(0.0, static_cast<double>(longest));
    write_file(svg_path, chart.render(), "--out");
    out << "wrote " << svg_path.string() << "\n";
    return 0;
}

int run_latency(const Common& common, const LatencyArgs& a, std::ostream& out, std::ostream& err) {
    const auto svg_path = resolve(common, a.out);
    Scenario s;
    s.name = a.name.empty() ? svg_path.stem().string() : a.name;
    s.base_intensity = a.base_intensity;
    s.base_faulty = a.faulty;
    s.legit_churn = to_means(a.legit_churn);
    s.faulty_churn = to_means(a.faulty_churn);
    s.epsilon = a.epsilon;
    s.trials = a.trials;
    s.seed = common.seed;
    s.max_slots = a.max_slots;
    if (a.fixed_n >= 0) {
        s.fixed_n = a.fixed_n;
    }
    const auto outcome = run_latency_mc(s, a.threads);

    const auto log_path = sibling(svg_path, "_trials.csv");
    const auto fit_path = sibling(svg_path, "_fit.csv");
    const auto summary_path = sibling(svg_path, "_summary.csv");
    write_file(log_path, render([&](auto& o) { write_trial_log_csv(o, outcome); }), "--out");
    write_file(summary_path, render([&](auto& o) {
                   write_summary_header(o);
                   write_summary_row(o, s.name, outcome);
               }),
               "--out");

    std::vector<double> samples(outcome.latencies.begin(), outcome.latencies.end());
    std::optional<BetaFit> fit;
    if (samples.size() >= 2) {
        try {
            fit = fit_beta(samples);
        } catch (const DegenerateVarianceError&) {
            err << "note: all converged latencies are equal; beta fit skipped\n";
        } catch (const MomentInfeasibleError&) {
            err << "note: latency moments admit no beta distribution; beta fit skipped\n";
        }
    } else {
        err << "note: fewer than two converged trials; beta fit skipped\n";
    }
    write_file(fit_path, render([&](auto& o) {
                   write_fit_header(o);
                   if (fit) {
                       write_fit_row(o, s.name, *fit);
                   } else {
                       o << s.name << ",,,,,," << samples.size() << '\n';
                   }
               }),
               "--out");

    svg::Chart chart("Consensus latency: " + s.name, "latency (slots)", "density");
    if (!samples.empty()) {
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        const std::size_t bins =
            a.bins > 0 ? a.bins
                       : static_cast<std::size_t>(std::clamp(*hi - *lo + 1.0, 1.0, 60.0));
        const auto hist = make_histogram(samples, bins);
        std::vector<double> density;
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
            const double width = hist.bin_edges[i + 1] - hist.bin_edges[i];
            density.push_back(static_cast<double>(hist.counts[i]) /
                              (static_cast<double>(samples.size()) * width));
        }
        chart.add_bars(hist.bin_edges, density, "#7f7f7f", "histogram");
        if (fit) {
            std::vector<double> xs, ys;
            constexpr int kPoints = 200;
            for (int i = 1; i < kPoints; ++i) {
                const double x = fit->lower + (fit->upper - fit->lower) * i / kPoints;
                xs.push_back(x);
                ys.push_back(fit->pdf(x));
            }
            chart.add_line(xs, ys, "#000000",
                           "beta(" + csv::format_double(std::round(fit->alpha * 100) / 100) + ", " +
                               csv::format_double(std::round(fit->beta * 100) / 100) + ")");
            chart.set_x_range(fit->lower, fit->upper);
        }
    }
    write_file(svg_path, chart.render(), "--out");

    out << render([&](auto& o) {
        write_summary_header(o);
        write_summary_row(o, s.name, outcome);
    });
    out << "wrote " << svg_path.string() << ", " << log_path.string() << ", "
        << fit_path.string() << ", " << summary_path.string() << "\n";
    return 0;
}

int run_quorum(const Common& common, const QuorumArgs& a, std::ostream& out) {
    double faulty_mean = a.faulty_mean;
    if (a.intensity >= 0.0 || a.fault_prob >= 0.0) {
        if (a.intensity < 0.0 || a.fault_prob < 0.0) {
            throw DomainError("--intensity and --fault-prob must be given together");
        }
        faulty_mean = a.fault_prob * a.intensity;
    }
    const auto legit = to_means(a.legit_churn);
    const auto faulty = to_means(a.faulty_churn);
    auto rng = stream_rng(common.seed, 0);
    const auto draws = sample_required_nodes(faulty_mean, legit, faulty, a.trials, rng);

    const auto csv_path = resolve(common, a.out);
    write_file(csv_path, render([&](auto& s) { write_quorum_csv(s, draws); }), "--out");

    const auto values = n_min_values(draws);
    std::vector<std::int64_t> shifted;
    shifted.reserve(values.size());
    for (auto v : values) shifted.push_back(v - 1);

    out << "faulty_mean " << csv::format_double(faulty_mean) << "\n"
        << "expected_n_min " << csv::format_double(expected_required_nodes(faulty_mean, legit, faulty))
        << "\n";
    if (values.size() >= 2) {
        const auto d = dispersion_diagnostic(values);
        const auto ds = dispersion_diagnostic(shifted);
        out << "statistic,mean,variance,index\n"
            << "n_min," << csv::format_double(d.mean) << ',' << csv::format_double(d.variance) << ','
            << csv::format_double(d.index) << "\n"
            << "n_min_minus_1," << csv::format_double(ds.mean) << ','
            << csv::format_double(ds.variance) << ',' << csv::format_double(ds.index) << "\n";
    }
    out << "wrote " << csv_path.string() << "\n";
    return 0;
}

int run_churn(const Common& common, const ChurnArgs& a, std::ostream& out) {
    std::vector<ChurnRecord> records;
    records.reserve(static_cast<std::size_t>(a.trials) * 2);
    std::optional<ChurnConfig> config;
    if (a.mm1) {
        config = a.warmup_s < 0.0
                     ? ChurnConfig::with_default_warmup(a.arrival_rate, a.service_rate, a.window_s)
                     : ChurnConfig{a.arrival_rate, a.service_rate, a.window_s, a.warmup_s};
        config->validate();
    }
    for (std::int64_t t = 0; t < a.trials; ++t) {
        auto rng = stream_rng(common.seed, static_cast<std::uint64_t>(t));
        for (auto pop : {Population::Legit, Population::Faulty}) {
            ChurnDelta delta;
            if (config) {
                delta = simulate_mm1_window(*config, rng);
            } else {
                delta = sample_churn_delta(to_means(pop == Population::Legit ? a.legit : a.faulty), rng);
            }
            records.push_back({t, pop, delta});
        }
    }
    const auto csv_path = resolve(common, a.out);
    write_file(csv_path, render([&](auto& s) { write_churn_csv(s, records); }), "--out");
    out << "wrote " << csv_path.string() << "\n";
    return 0;
}

int run_convert(const Common& common, const ConvertArgs& a, std::ostream& out) {
    std::vector<SlotProfile> profiles;
    if (a.profiles.empty()) {
        profiles.assign(kAllSlotProfiles.begin(), kAllSlotProfiles.end());
    }
    for (const auto& name : a.profiles) {
        profiles.push_back(parse_slot_profile(name));
    }
    const auto table = render([&](auto& s) {
        s << "profile,slots,ms\n";
        for (auto slots : a.slots) {
            for (auto p : profiles) {
                s << to_string(p) << ',' << slots << ',' << csv::format_double(slots_to_ms(slots, p))
                  << '\n';
            }
        }
    });
    if (a.out.empty()) {
        out << table;
    } else {
        const auto path = resolve(common, a.out);
        write_file(path, table, "--out");
        out << "wrote " << path.string() << "\n";
    }
    return 0;
}

int run_validate(const Common& common, std::ostream& out) {
    int failed = 0;
    run_invariant_suite(common.seed, [&](const CheckResult& r) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
        out.flush();
        failed += r.passed ? 0 : 1;
    });
    out << (failed == 0 ? "all invariants hold\n" : std::to_string(failed) + " invariant(s) failed\n");
    return failed == 0 ? 0 : 1;
}

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

bool names_option(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

/// Appends `--key value` for every `key=value` line of the file named by
/// `--config`, unless the flag is already on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (!path) {
        return args;
    }
    std::ifstream file(*path);
    if (!file) {
        throw Error("--config: cannot read '" + *path + "'");
    }
    std::vector<std::string> expanded = args;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        line = trim(line.substr(0, line.find_first_of("#;")));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("--config: line " + std::to_string(line_no) + " is not key=value");
        }
        const auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        const auto flag = "--" + key;
        if (key == "config" || names_option(args, flag)) continue;
        if (value == "true") {
            expanded.push_back(flag);
        } else if (value != "false") {
            expanded.push_back(flag);
            expanded.push_back(value);
        }
    }
    return expanded;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic BFT consensus feasibility and latency toolkit", "cvbft"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--output-dir", common.output_dir, "Directory for relative output paths")
        ->envname("CVBFT_OUTPUT_DIR")
        ->capture_default_str();

    // Consumed by expand_config before parsing; registered for --help and validation.
    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "Flat key=value file of option values; command-line flags override it");
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "Seed for every stochastic output")->capture_default_str();
        add_config(sub);
    };

    DropArgs drop;
    auto* drop_cmd = app.add_subcommand("drop", "Sample a PPP node drop (scatter SVG + CSV)");
    drop_cmd->add_option("--intensity", drop.intensity, "Expected nodes in the region")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    drop_cmd->add_option("--fault-prob", drop.fault_prob, "Per-node fault probability")
        ->check(kProbability)->capture_default_str();
    drop_cmd->add_option("--side", drop.side_m, "Region side length (m)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    drop_cmd->add_option("--out", drop.out, "Output SVG path")->capture_default_str();
    add_seed(drop_cmd);

    CurvesArgs curves;
    auto* curves_cmd = app.add_subcommand("curves", "Mean-field dissemination curves per N");
    curves_cmd->add_option("--n", curves.n_values, "Comma-separated node counts")
        ->delimiter(',')->check(CLI::PositiveNumber)->capture_default_str();
    curves_cmd->add_option("--fault-prob", curves.fault_prob, "Per-node fault probability")
        ->check(kProbability)->capture_default_str();
    curves_cmd->add_option("--epsilon", curves.epsilon, "Convergence threshold")
        ->check(kOpenUnit)->capture_default_str();
    curves_cmd->add_option("--out", curves.out, "Output SVG path")->capture_default_str();
    add_config(curves_cmd);

    LatencyArgs latency;
    auto* latency_cmd = app.add_subcommand("latency", "Monte Carlo latency distribution with beta fit");
    latency_cmd->add_option("--name", latency.name, "Scenario label (default: output stem)");
    latency_cmd->add_option("--base-intensity", latency.base_intensity, "Poisson mean of N")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    latency_cmd->add_option("--faulty", latency.faulty, "Baseline faulty count f")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    add_churn_pair(latency_cmd, "--legit-churn", latency.legit_churn,
                   "Legitimate arrival,departure means");
    add_churn_pair(latency_cmd, "--faulty-churn", latency.faulty_churn,
                   "Faulty arrival,departure means");
    latency_cmd->add_option("--epsilon", latency.epsilon, "Convergence threshold")
        ->check(kOpenUnit)->capture_default_str();
    latency_cmd->add_option("--trials", latency.trials, "Number of trials")
        ->check(CLI::PositiveNumber)->capture_default_str();
    latency_cmd->add_option("--max-slots", latency.max_slots, "Slot horizon")
        ->check(CLI::PositiveNumber)->capture_default_str();
    latency_cmd->add_option("--fixed-n", latency.fixed_n, "Use this N instead of a Poisson draw")
        ->check(CLI::NonNegativeNumber);
    latency_cmd->add_option("--bins", latency.bins, "Histogram bins (default: one per slot value)")
        ->check(CLI::PositiveNumber);
    latency_cmd->add_option("--threads", latency.threads, "Worker threads")
        ->check(CLI::Range(1u, 256u))->capture_default_str();
    latency_cmd->add_option("--out", latency.out, "Output SVG path")->capture_default_str();
    add_seed(latency_cmd);

    QuorumArgs quorum;
    auto* quorum_cmd = app.add_subcommand("quorum", "Sampled law of the required node count");
    auto* fm = quorum_cmd->add_option("--faulty-mean", quorum.faulty_mean, "Poisson mean of f")
                   ->check(CLI::NonNegativeNumber)->capture_default_str();
    auto* qi = quorum_cmd->add_option("--intensity", quorum.intensity, "Node intensity (with --fault-prob)")
                   ->check(CLI::NonNegativeNumber);
    quorum_cmd->add_option("--fault-prob", quorum.fault_prob, "Fault probability (with --intensity)")
        ->check(kProbability);
    qi->excludes(fm);
    add_churn_pair(quorum_cmd, "--legit-churn", quorum.legit_churn, "Legitimate arrival,departure means");
    add_churn_pair(quorum_cmd, "--faulty-churn", quorum.faulty_churn, "Faulty arrival,departure means");
    quorum_cmd->add_option("--trials", quorum.trials, "Number of draws")
        ->check(CLI::PositiveNumber)->capture_default_str();
    quorum_cmd->add_option("--out", quorum.out, "Output CSV path")->capture_default_str();
    add_seed(quorum_cmd);

    ChurnArgs churn;
    auto* churn_cmd = app.add_subcommand("churn", "Per-trial arrival/departure counts");
    add_churn_pair(churn_cmd, "--legit", churn.legit, "Legitimate arrival,departure means (count mode)");
    add_churn_pair(churn_cmd, "--faulty", churn.faulty, "Faulty arrival,departure means (count mode)");
    churn_cmd->add_flag("--mm1", churn.mm1, "Use the M/M/1 event simulation for both populations");
    churn_cmd->add_option("--arrival-rate", churn.arrival_rate, "M/M/1 arrival rate (1/s)")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    churn_cmd->add_option("--service-rate", churn.service_rate, "M/M/1 service rate (1/s)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    churn_cmd->add_option("--window", churn.window_s, "Observation window (s)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    churn_cmd->add_option("--warmup", churn.warmup_s, "Warm-up (s); default 100 / service rate")
        ->check(CLI::NonNegativeNumber);
    churn_cmd->add_option("--trials", churn.trials, "Number of trials")
        ->check(CLI::PositiveNumber)->capture_default_str();
    churn_cmd->add_option("--out", churn.out, "Output CSV path")->capture_default_str();
    add_seed(churn_cmd);

    ConvertArgs convert;
    auto* convert_cmd = app.add_subcommand("convert", "Convert slot counts to milliseconds");
    convert_cmd->add_option("--slots", convert.slots, "Comma-separated slot counts")
        ->delimiter(',')->check(CLI::NonNegativeNumber)->capture_default_str();
    convert_cmd->add_option("--profiles", convert.profiles,
                            "Comma-separated profiles: CV2X_50,CV2X_100,CV2X_200,DSRC_100")
        ->delimiter(',')
        ->check(CLI::IsMember({"CV2X_50", "CV2X_100", "CV2X_200", "DSRC_100"}));
    convert_cmd->add_option("--out", convert.out, "Optional output CSV path");
    add_config(convert_cmd);

    auto* validate_cmd = app.add_subcommand("validate", "Run the invariant suite");
    add_seed(validate_cmd);

    std::vector<std::string> argv_storage{"cvbft"};
    try {
        const auto expanded = expand_config(args);
        argv_storage.insert(argv_storage.end(), expanded.begin(), expanded.end());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
    }

    try {
        if (drop_cmd->parsed()) return run_drop(common, drop, out);
        if (curves_cmd->parsed()) return run_curves(common, curves, out);
        if (latency_cmd->parsed()) return run_latency(common, latency, out, err);
        if (quorum_cmd->parsed()) return run_quorum(common, quorum, out);
        if (churn_cmd->parsed()) return run_churn(common, churn, out);
        if (convert_cmd->parsed()) return run_convert(common, convert, out);
        if (validate_cmd->parsed()) return run_validate(common, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace cvbft::cli
