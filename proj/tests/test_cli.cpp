// End-to-end checks of the grinprop binary: exit codes, file layout, CSV
// shape, a few physics spot values. argv[1] = binary, argv[2] = configs dir.
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

static int g_failures = 0;

#define CHECK(cond)                                                                  \
    do {                                                                             \
        if (!(cond)) {                                                               \
            ++g_failures;                                                            \
            std::cerr << "FAILED " << __FILE__ << ":" << __LINE__ << ": " << #cond   \
                      << "\n";                                                       \
        }                                                                            \
    } while (0)

#define CHECK_MSG(cond, msg)                                                         \
    do {                                                                             \
        if (!(cond)) {                                                               \
            ++g_failures;                                                            \
            std::cerr << "FAILED " << __FILE__ << ":" << __LINE__ << ": " << #cond   \
                      << "  [" << msg << "]\n";                                      \
        }                                                                            \
    } while (0)

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

static std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

static RunResult run(const std::string& cli, const std::string& args) {
    static int seq = 0;
    fs::path out = fs::path("cli_work") / ("stdout_" + std::to_string(seq) + ".txt");
    fs::path err = fs::path("cli_work") / ("stderr_" + std::to_string(seq) + ".txt");
    ++seq;
    std::string cmd = "\"" + cli + "\" " + args + " > " + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

static std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream f(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    return lines;
}

static std::vector<double> split_row(const std::string& line) {
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    return vals;
}

static int n_cols(const std::string& header) {
    return 1 + static_cast<int>(std::count(header.begin(), header.end(), ','));
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: test_cli <grinprop-binary> <configs-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string fig2 = (fs::path(argv[2]) / "fig2.cfg").string();
    fs::remove_all("cli_work");
    fs::create_directories("cli_work");

    {
        auto r = run(cli, "");
        CHECK(r.exit_code == 1);
        CHECK_MSG(r.err.find("subcommand") != std::string::npos, r.err);
    }
    {
        auto r = run(cli, "--help");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("scan") != std::string::npos);
        CHECK(r.out.find("find-cat") != std::string::npos);
        CHECK(r.out.find("purity-curve") != std::string::npos);
    }

    {
        auto r = run(cli, "scan --config \"" + fig2 +
                              "\" --set outputs.directory=cli_work/scan"
                              " --set scan.regime=exact --set scan.n_z=40 --set scan.z_max=1346.4");
        CHECK_MSG(r.exit_code == 0, r.err);
        fs::path csv = "cli_work/scan/fig2_scan_exact.csv";
        CHECK(fs::exists(csv));
        auto lines = read_lines(csv);
        CHECK(static_cast<int>(lines.size()) == 42);
        CHECK(lines[0].rfind("# source.a0=10", 0) == 0);
        CHECK(lines[0].find("scan.n_z=40") != std::string::npos);
        CHECK(lines[0].find("threads") == std::string::npos);
        CHECK(lines[1] == "z_um,sigma_x2,sigma_p2,sigma_xp,r_c_um,nu,up_h,up_sr,purity,entropy");
        auto row0 = split_row(lines[2]);
        CHECK(static_cast<int>(row0.size()) == 10);
        CHECK(row0[0] == 0.0);
        CHECK_MSG(std::abs(row0[1] - 25.0) < 1e-6, row0[1]);         // sigma_x2 = a0^2/4
        CHECK_MSG(std::abs(row0[4] - 10.0) < 1e-6, row0[4]);         // r_c = r0 at launch
        CHECK_MSG(std::abs(row0[8] - 0.5773502692) < 1e-8, row0[8]); // global purity
    }

    {
        auto r = run(cli, "scan --config \"" + fig2 +
                              "\" --set outputs.directory=cli_work/both"
                              " --set scan.regime=both --set scan.n_z=5 --set scan.z_max=100");
        CHECK_MSG(r.exit_code == 0, r.err);
        CHECK(fs::exists("cli_work/both/fig2_scan_exact.csv"));
        CHECK(fs::exists("cli_work/both/fig2_scan_paraxial.csv"));
    }

    {
        // identical bytes regardless of the worker count
        std::string base = "scan --config \"" + fig2 +
                           "\" --set scan.regime=exact --set scan.n_z=25 --set scan.z_max=1346.4";
        auto r1 = run(cli, base + " --set outputs.directory=cli_work/t1 --set scan.threads=1");
        auto r3 = run(cli, base + " --set outputs.directory=cli_work/t3 --set scan.threads=3");
        CHECK(r1.exit_code == 0);
        CHECK(r3.exit_code == 0);
        std::string a = slurp("cli_work/t1/fig2_scan_exact.csv");
        std::string b = slurp("cli_work/t3/fig2_scan_exact.csv");
        CHECK(!a.empty());
        // provenance lines differ in outputs.directory; the data must not
        std::string a_data = a.substr(a.find('\n') + 1);
        std::string b_data = b.substr(b.find('\n') + 1);
        CHECK(!a_data.empty());
        CHECK(a_data == b_data);
    }

    {
        auto r = run(cli, "profile --z 0 --config \"" + fig2 +
                              "\" --set outputs.directory=cli_work/prof");
        CHECK_MSG(r.exit_code == 0, r.err);
        auto lines = read_lines("cli_work/prof/fig2_profile.csv");
        CHECK(lines.size() > 100);
        CHECK(lines[0].find(" z=0") != std::string::npos);
        CHECK(lines[1] == "x_um,I_total,I_diagonal,I_cross");
        double peak = 0.0;
        for (size_t i = 2; i < lines.size(); ++i) {
            auto row = split_row(lines[i]);
            CHECK(static_cast<int>(row.size()) == 4);
            peak = std::max(peak, row[1]);
            if (row.size() == 4) CHECK(std::abs(row[1] - row[2] - row[3]) < 1e-9);
        }
        CHECK_MSG(std::abs(peak - 1.0) < 1e-3, peak);  // I(x0) = I0 at launch

        auto r2 = run(cli, "profile --z 0 --no-split --config \"" + fig2 +
                               "\" --set outputs.directory=cli_work/prof2");
        CHECK(r2.exit_code == 0);
        auto lines2 = read_lines("cli_work/prof2/fig2_profile.csv");
        CHECK(lines2[1] == "x_um,I_total");
        CHECK(n_cols(lines2[2]) == 2);
    }

    {
        auto r = run(cli, "mixture --z 50 --config \"" + fig2 +
                              "\" --set outputs.directory=cli_work/mix --set numerics.grid_points=512");
        CHECK_MSG(r.exit_code == 0, r.err);
        CHECK(fs::exists("cli_work/mix/fig2_mixture_pos.csv"));
        CHECK(fs::exists("cli_work/mix/fig2_mixture_neg.csv"));
        CHECK(fs::exists("cli_work/mix/fig2_mixture_overlay.csv"));
        CHECK(fs::exists("cli_work/mix/fig2_mixture_sum.csv"));
        CHECK(r.out.find("visibility_pos=") != std::string::npos);
        CHECK(r.out.find("visibility_sum=") != std::string::npos);
        auto overlay = read_lines("cli_work/mix/fig2_mixture_overlay.csv");
        CHECK(overlay[1] == "x_um,I_pos,I_neg");
        // mirror launches: the overlay is symmetric under x -> -x
        auto pos = read_lines("cli_work/mix/fig2_mixture_pos.csv");
        auto neg = read_lines("cli_work/mix/fig2_mixture_neg.csv");
        auto prow = split_row(pos[2 + 100]);
        size_t mirror = pos.size() - 1 - 100;
        auto nrow = split_row(neg[mirror]);
        CHECK_MSG(std::abs(prow[1] - nrow[1]) < 1e-9, prow[1] - nrow[1]);
    }

    {
        auto r = run(cli, "find-cat --config \"" + fig2 +
                              "\" --set source.a0=5.3523723484583132 --set source.r0=inf"
                              " --set source.x0=0 --set outputs.directory=cli_work/cat");
        CHECK_MSG(r.exit_code == 0, r.err);
        CHECK(r.out.find("found=0") != std::string::npos);
        CHECK(r.out.find("stationary") != std::string::npos);
        CHECK(r.out.find("z_rev_estimate_um=") != std::string::npos);
    }

    {
        auto r = run(cli, "purity-curve --ratio-min 1 --ratio-max 4 --count 3 --config \"" + fig2 +
                              "\" --set outputs.directory=cli_work/pur");
        CHECK_MSG(r.exit_code == 0, r.err);
        auto lines = read_lines("cli_work/pur/fig2_purity.csv");
        CHECK(lines[1] == "ratio,r0_um,purity_closed,purity_numeric,entropy");
        CHECK(static_cast<int>(lines.size()) == 5);
        auto first = split_row(lines[2]);
        auto last = split_row(lines[4]);
        CHECK(std::abs(first[0] - 1.0) < 1e-12);
        CHECK(std::abs(last[0] - 4.0) < 1e-12);
        for (size_t i = 2; i < lines.size(); ++i) {
            auto row = split_row(lines[i]);
            CHECK_MSG(std::abs(row[2] - row[3]) < 1e-8, row[2] - row[3]);
            CHECK(row[4] >= 0.0);
        }
        CHECK(first[2] < last[2]);  // purity grows with coherence
    }

    {
        auto r = run(cli, "scan --config \"" + fig2 + "\" --set source.bogus=1");
        CHECK(r.exit_code == 1);
        CHECK_MSG(r.err.find("unknown config key") != std::string::npos, r.err);
    }
    {
        auto r = run(cli, "scan --config \"" + fig2 +
                              "\" --set numerics.mode_count=25 --set outputs.directory=cli_work/guard");
        CHECK_MSG(r.exit_code == 2, r.err);
        CHECK_MSG(r.err.find("numerical guard") != std::string::npos, r.err);
    }
    {
        auto r = run(cli, "profile --config \"" + fig2 + "\"");
        CHECK(r.exit_code == 1);  // --z is required
    }
    {
        auto r = run(cli, "scan --config /nonexistent/nope.cfg");
        CHECK(r.exit_code == 1);
    }
    {
        auto r = run(cli, "scan --set scan.z_min=50 --set scan.z_max=10 --set outputs.directory=cli_work/bad");
        CHECK(r.exit_code == 1);
        CHECK_MSG(r.err.find("z_min") != std::string::npos, r.err);
    }

    if (g_failures == 0) {
        std::cout << "test_cli: all checks passed\n";
        return 0;
    }
    std::cerr << "test_cli: " << g_failures << " check(s) failed\n";
    return 1;
}
