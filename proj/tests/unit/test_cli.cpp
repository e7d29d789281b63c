#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cvbft/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("cvbft_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = cvbft::cli::dispatch(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

}  // namespace

TEST_CASE("drop writes scatter SVG and CSV") {
    TempDir dir;
    const auto r = run({"--output-dir", dir.path.string(), "drop", "--intensity", "100",
                        "--fault-prob", "0.25", "--out", "fig1.svg"});
    REQUIRE(r.status == 0);
    CHECK(first_line(dir.path / "fig1.csv") == "x,y,role");
    CHECK(slurp(dir.path / "fig1.svg").find("<svg") != std::string::npos);
}

TEST_CASE("curves writes one CSV per N") {
    TempDir dir;
    const auto r = run({"--output-dir", dir.path.string(), "curves", "--n", "5,45,85,125",
                        "--fault-prob", "0.5", "--out", "fig3.svg"});
    REQUIRE(r.status == 0);
    for (int n : {5, 45, 85, 125}) {
        CHECK(first_line(dir.path / ("fig3_N" + std::to_string(n) + ".csv")) == "t,r,r_bar");
    }
    CHECK(r.out.find("N=5 latency_slots=7") != std::string::npos);
    CHECK(fs::exists(dir.path / "fig3.svg"));
}

TEST_CASE("latency outputs are byte-identical for equal seeds") {
    TempDir a;
    TempDir b;
    for (auto* dir : {&a, &b}) {
        const auto r = run({"--output-dir", dir->path.string(), "latency", "--base-intensity", "25",
                            "--faulty", "2", "--legit-churn", "1,1", "--faulty-churn", "2,1",
                            "--trials", "2000", "--seed", "7", "--threads", "2", "--out", "fig.svg"});
        REQUIRE(r.status == 0);
    }
    for (const char* name : {"fig_trials.csv", "fig_fit.csv", "fig_summary.csv", "fig.svg"}) {
        CAPTURE(name);
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    }
    CHECK(first_line(a.path / "fig_trials.csv") == "trial,N,f,delta_N,delta_f,N_eff,f_eff,latency_slots");
    CHECK(first_line(a.path / "fig_fit.csv") == "scenario,alpha,beta,lower,upper,ks_stat,n_samples");
    CHECK(first_line(a.path / "fig_summary.csv") ==
          "scenario,trials,converged,infeasible,nonconvergent,median_latency,mean_latency");
}

TEST_CASE("latency with a degenerate fit still succeeds") {
    TempDir dir;
    const auto r = run({"--output-dir", dir.path.string(), "latency", "--base-intensity", "25",
                        "--faulty", "18", "--legit-churn", "1,1", "--faulty-churn", "5,1",
                        "--trials", "500", "--seed", "7", "--out", "fig5c.svg"});
    REQUIRE(r.status == 0);
    CHECK(fs::exists(dir.path / "fig5c_trials.csv"));
    CHECK(fs::exists(dir.path / "fig5c_fit.csv"));
}

TEST_CASE("quorum and churn CSVs") {
    TempDir dir;
    auto r = run({"--output-dir", dir.path.string(), "quorum", "--intensity", "100", "--fault-prob",
                  "0.25", "--legit-churn", "3,1", "--faulty-churn", "2,1", "--trials", "1000",
                  "--out", "q.csv"});
    REQUIRE(r.status == 0);
    CHECK(first_line(dir.path / "q.csv") == "trial,f,delta_N,delta_f,n_min");
    CHECK(r.out.find("expected_n_min 75") != std::string::npos);

    r = run({"--output-dir", dir.path.string(), "churn", "--legit", "4,4", "--faulty", "1,2",
             "--trials", "10", "--out", "c.csv"});
    REQUIRE(r.status == 0);
    CHECK(first_line(dir.path / "c.csv") == "trial,population,arrivals,departures,net");

    r = run({"--output-dir", dir.path.string(), "churn", "--mm1", "--arrival-rate", "8",
             "--service-rate", "4", "--out", "c2.csv"});
    CHECK(r.status != 0);
}

TEST_CASE("convert prints milliseconds per profile") {
    const auto r = run({"convert", "--slots", "5", "--profiles", "CV2X_50,CV2X_100,CV2X_200,DSRC_100"});
    REQUIRE(r.status == 0);
    CHECK(r.out ==
          "profile,slots,ms\nCV2X_50,5,250\nCV2X_100,5,500\nCV2X_200,5,1000\nDSRC_100,5,500\n");
}

TEST_CASE("errors exit nonzero and name the flag") {
    auto r = run({"bogus"});
    CHECK(r.status != 0);

    r = run({"drop", "--fault-prob", "1.5"});
    CHECK(r.status != 0);
    CHECK(r.err.find("--fault-prob") != std::string::npos);

    r = run({"curves", "--epsilon", "2"});
    CHECK(r.status != 0);
    CHECK(r.err.find("--epsilon") != std::string::npos);

    r = run({"latency", "--legit-churn", "1,-1"});
    CHECK(r.status != 0);
    CHECK(r.err.find("--legit-churn") != std::string::npos);

    r = run({"drop", "--out", "/proc/definitely/not/writable.svg"});
    CHECK(r.status != 0);
    CHECK(r.err.find("--out") != std::string::npos);
}

TEST_CASE("config file supplies values and flags override") {
    TempDir dir;
    const auto cfg = dir.path / "scenario.ini";
    std::ofstream(cfg) << "base-intensity=25\nfaulty=2\ntrials=300\nseed=3\nout=from_config.svg\n";
    auto r = run({"--output-dir", dir.path.string(), "latency", "--config", cfg.string()});
    REQUIRE(r.status == 0);
    CHECK(fs::exists(dir.path / "from_config_trials.csv"));

    r = run({"--output-dir", dir.path.string(), "latency", "--config", cfg.string(), "--out",
             "flag.svg"});
    REQUIRE(r.status == 0);
    CHECK(fs::exists(dir.path / "flag_trials.csv"));
    // Same seed and scenario from the file: identical trial logs.
    CHECK(slurp(dir.path / "flag_trials.csv") == slurp(dir.path / "from_config_trials.csv"));
}
