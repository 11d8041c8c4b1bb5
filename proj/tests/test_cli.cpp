#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// CLE_CLI_PATH is injected by the build; every test drives the real binary.

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, bool keep_stderr = false) {
    const std::string cmd = std::string(CLE_CLI_PATH) + " " + args +
                            (keep_stderr ? " 2>&1" : " 2>/dev/null");
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = pclose(pipe);
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

size_t count_lines(const std::string& text) {
    size_t n = 0;
    for (char ch : text)
        if (ch == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("--help").out.find("simulate") != std::string::npos);
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("frobnicate").code == 1);
    CHECK(run_cli("simulate --side bogus --out /tmp/cle_cli_never.csv").code == 1);
    CHECK(run_cli("simulate --c 5 --out /tmp/cle_cli_never.csv").code == 1);
}

TEST_CASE("simulate writes a cloud csv and replays saved drivers") {
    const std::string csv1 = "/tmp/cle_cli_hull1.csv";
    const std::string csv2 = "/tmp/cle_cli_hull2.csv";
    const std::string bin = "/tmp/cle_cli_path.bin";

    const RunResult first = run_cli("simulate --a 2 --b 1 --c 0.5 --n 200 --horizon 1 "
                                    "--eps 0.01 --seed 3 --out " +
                                    csv1 + " --save-path " + bin);
    REQUIRE(first.code == 0);
    const std::string text = slurp(csv1);
    CHECK(text.rfind("#", 0) == 0);
    CHECK(text.find("# a = 2") != std::string::npos);
    CHECK(text.find("re,im,t_added,probe") != std::string::npos);

    // The saved file holds the driver only; cloud knobs are per-invocation.
    const RunResult second =
        run_cli("simulate --load-path " + bin + " --eps 0.01 --out " + csv2);
    REQUIRE(second.code == 0);
    CHECK(slurp(csv2) == text);

    std::remove(csv1.c_str());
    std::remove(csv2.c_str());
    std::remove(bin.c_str());
}

TEST_CASE("density subcommand") {
    const std::string csv = "/tmp/cle_cli_density.csv";
    const RunResult r =
        run_cli("density --a 5 --b 1 --c 0 --grid 256 --out " + csv);
    REQUIRE(r.code == 0);
    const std::string text = slurp(csv);
    CHECK(text.find("# method = c0_closed_form") != std::string::npos);
    CHECK(text.find("u,p") != std::string::npos);
    std::remove(csv.c_str());

    CHECK(run_cli("density --grid 15 --out /tmp/cle_cli_never.csv").code == 1);
}

TEST_CASE("phases subcommand emits a labelled json report") {
    const RunResult r = run_cli("phases --a 7 --b 1 --c 0");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"label\"") != std::string::npos);
    CHECK(r.out.find("swallowing") != std::string::npos);
    CHECK(r.out.find("\"one\"") != std::string::npos);

    const std::string file = "/tmp/cle_cli_phases.json";
    REQUIRE(run_cli("phases --a 2 --b 2 --c 0 --out " + file).code == 0);
    CHECK(slurp(file).find("thin") != std::string::npos);
    std::remove(file.c_str());
}

TEST_CASE("scan subcommand locates both boundary lines") {
    const std::string grid_csv = "/tmp/cle_cli_scan.csv";
    const std::string bound_csv = "/tmp/cle_cli_boundary.csv";
    const RunResult r = run_cli("scan --c 0 --a-range 0:12 --b-range 0:8 --res 0.25 --out " +
                                grid_csv + " --boundary-out " + bound_csv);
    REQUIRE(r.code == 0);

    const std::string grid = slurp(grid_csv);
    CHECK(grid.find("a,b,one,two,phase") != std::string::npos);
    CHECK(grid.find(",,invalid") != std::string::npos);
    CHECK(grid.find("thin") != std::string::npos);
    CHECK(grid.find("swallowing") != std::string::npos);
    CHECK(grid.find("hitting") != std::string::npos);

    std::istringstream in(slurp(bound_csv));
    std::string line;
    bool in_data = false;
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line == "curve,a,b") {
            in_data = true;
            continue;
        }
        if (!in_data || line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        REQUIRE(c1 != std::string::npos);
        REQUIRE(c2 != std::string::npos);
        const std::string curve = line.substr(0, c1);
        const double a = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double b = std::stod(line.substr(c2 + 1));
        const double expect = curve == "one" ? 4.0 : 8.0;
        CHECK(std::fabs(a - b - expect) < 0.05);
        ++rows;
    }
    CHECK(rows > 10);
    std::remove(grid_csv.c_str());
    std::remove(bound_csv.c_str());

    CHECK(run_cli("scan --a-range 5:1 --out /tmp/cle_cli_never.csv").code == 1);
}

TEST_CASE("verify drift reports pass and exits cleanly") {
    const std::string file = "/tmp/cle_cli_drift.json";
    const RunResult r = run_cli("verify drift --a 2 --b 2 --c 0 --paths 300 --t-end 1 "
                                "--h 0.002 --seed 6 --out " +
                                file);
    REQUIRE(r.code == 0);
    const std::string text = slurp(file);
    CHECK(text.find("\"check\": \"drift\"") != std::string::npos);
    CHECK(text.find("\"pass\": true") != std::string::npos);
    std::remove(file.c_str());
}

TEST_CASE("verify failure exits with the dedicated code") {
    // Demanding enclosures from every seed of a tiny, short hull cannot
    // succeed; the report must say fail and the process must exit 2.
    const RunResult r = run_cli(
        "verify disconnect --n 300 --horizon 0.3 --eps 0.02 --seeds 3 --seed 2 "
        "--min-fraction 1.0",
        true);
    CHECK(r.code == 2);
    CHECK(r.out.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("config file values apply and flags override") {
    const std::string cfg = "/tmp/cle_cli.cfg";
    const std::string out = "/tmp/cle_cli_cfg_density.csv";
    {
        std::ofstream f(cfg);
        f << "[density]\n"
          << "a = 5\n"
          << "b = 1\n"
          << "grid = 256\n"
          << "out = " << out << "\n";
    }
    REQUIRE(run_cli("--config " + cfg + " density").code == 0);
    // 256 + 1 grid rows, plus header lines.
    const std::string base = slurp(out);
    CHECK(count_lines(base) > 257);
    CHECK(count_lines(base) < 270);

    REQUIRE(run_cli("--config " + cfg + " density --grid 512").code == 0);
    CHECK(count_lines(slurp(out)) > 513);

    std::remove(cfg.c_str());
    std::remove(out.c_str());
}
