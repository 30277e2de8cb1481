#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dyadreg.h"

namespace {

std::string cli_path() {
    const char* p = std::getenv("DYADREG_CLI");
    REQUIRE_MESSAGE(p != nullptr, "DYADREG_CLI must point at the built binary");
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
        result.output.append(buf, got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string temp_dir() {
    static std::string dir = [] {
        char templ[] = "/tmp/dyadreg_cli_test_XXXXXX";
        REQUIRE(mkdtemp(templ) != nullptr);
        return std::string(templ);
    }();
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << body;
}

// Pulls a named numeric field out of the analyze --out CSV for one row.
double csv_field(const std::string& csv, int row, int col) {
    std::istringstream in(csv);
    std::string line;
    for (int i = 0; i <= row + 1; ++i) REQUIRE(std::getline(in, line));
    std::istringstream fields(line);
    std::string f;
    for (int i = 0; i <= col; ++i) REQUIRE(std::getline(fields, f, ','));
    return std::strtod(f.c_str(), nullptr);
}

} // namespace

TEST_CASE("analyze reproduces the library's own inference on an exported dataset") {
    std::string dir = temp_dir();
    std::string data_csv = dir + "/model_d25.csv";
    auto exported = run_cli("export --model D --g 25 --error unit-shock --seed 42 "
                            "--rep 3 --format dataset --out " + data_csv);
    REQUIRE(exported.exit_code == 0);

    std::string out_csv = dir + "/analyze_out.csv";
    auto analyzed = run_cli("analyze --data " + data_csv + " --out " + out_csv);
    REQUIRE(analyzed.exit_code == 0);
    CHECK(analyzed.output.find("N=300") != std::string::npos);
    CHECK(analyzed.output.find("kappa") != std::string::npos);

    // Library-level golden: the same simulated dataset analyzed in memory.
    dyadreg_dataset* data = nullptr;
    REQUIRE(dyadreg_simulate_dataset('D', 25, 1, 1.0, 42, 3, &data) == DYADREG_OK);
    dyadreg_analysis* an = nullptr;
    REQUIRE(dyadreg_analyze(data, DYADREG_PSD_CLAMP_EPS, 1e-7, &an) == DYADREG_OK);
    double beta, se, t, lo, hi;
    REQUIRE(dyadreg_analysis_coef(an, 1, &beta, &se) == DYADREG_OK);
    REQUIRE(dyadreg_analysis_tstat(an, 1, 0.0, &t) == DYADREG_OK);
    REQUIRE(dyadreg_analysis_ci(an, 1, 0.95, 0, 0.0, &lo, &hi) == DYADREG_OK);

    std::string csv = slurp(out_csv);
    // Columns: coef_index,name,beta_hat,se,t_stat,ci_normal_lo,ci_normal_hi,...
    CHECK(csv_field(csv, 1, 2) == beta);  // 17-digit round trip is exact
    CHECK(csv_field(csv, 1, 3) == se);
    CHECK(csv_field(csv, 1, 4) == t);
    CHECK(csv_field(csv, 1, 5) == lo);
    CHECK(csv_field(csv, 1, 6) == hi);

    dyadreg_analysis_free(an);
    dyadreg_dataset_free(data);
}

TEST_CASE("analyze on a matching graph equals an independent HC0 computation") {
    std::string dir = temp_dir();
    std::string path = dir + "/matching.csv";
    spit(path,
         "unit_g,unit_h,y,x\n"
         "1,2,0.2,0.1\n"
         "3,4,1.4,0.7\n"
         "5,6,-0.6,-0.4\n"
         "7,8,2.2,1.3\n");
    std::string out_csv = dir + "/matching_out.csv";
    auto r = run_cli("analyze --data " + path + " --out " + out_csv + " --psd none");
    REQUIRE(r.exit_code == 0);

    // Independent HC0 oracle with intercept, done longhand.
    std::vector<double> y = {0.2, 1.4, -0.6, 2.2};
    std::vector<double> x = {0.1, 0.7, -0.4, 1.3};
    double sxx[2][2] = {{4, 0}, {0, 0}}, sxy[2] = {0, 0};
    for (int i = 0; i < 4; ++i) {
        sxx[0][1] += x[static_cast<std::size_t>(i)];
        sxx[1][1] += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        sxy[0] += y[static_cast<std::size_t>(i)];
        sxy[1] += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    sxx[1][0] = sxx[0][1];
    double det = sxx[0][0] * sxx[1][1] - sxx[0][1] * sxx[1][0];
    double inv[2][2] = {{sxx[1][1] / det, -sxx[0][1] / det},
                        {-sxx[1][0] / det, sxx[0][0] / det}};
    double beta[2] = {inv[0][0] * sxy[0] + inv[0][1] * sxy[1],
                      inv[1][0] * sxy[0] + inv[1][1] * sxy[1]};
    double mid[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i < 4; ++i) {
        double u = y[static_cast<std::size_t>(i)] - beta[0] - beta[1] * x[static_cast<std::size_t>(i)];
        double xi[2] = {1.0, x[static_cast<std::size_t>(i)]};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) mid[a][b] += u * u * xi[a] * xi[b];
    }
    double v11 = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) v11 += inv[1][a] * mid[a][b] * inv[b][1];

    std::string csv = slurp(out_csv);
    CHECK(csv_field(csv, 1, 3) == doctest::Approx(std::sqrt(v11)).epsilon(1e-10));
}

TEST_CASE("analyze rejects duplicate dyads with the offending row number") {
    std::string dir = temp_dir();
    std::string path = dir + "/dup.csv";
    spit(path,
         "unit_g,unit_h,y,x\n"
         "1,2,0.5,0.1\n"
         "2,3,0.7,0.2\n"
         "2,1,0.9,0.3\n");
    auto r = run_cli("analyze --data " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("row 3") != std::string::npos);
    CHECK(r.output.find("duplicate") != std::string::npos);
}

TEST_CASE("analyze maps numeric failures onto the documented exit codes") {
    std::string dir = temp_dir();
    // Negative raw variance on a path graph; psd=none cannot report an SE.
    std::string neg = dir + "/negvar.csv";
    spit(neg,
         "unit_g,unit_h,y,x\n"
         "1,2,1,1\n"
         "2,3,-2,1\n"
         "3,4,1,1\n");
    auto r4 = run_cli("analyze --data " + neg + " --no-intercept --coef 0 --psd none");
    CHECK(r4.exit_code == 4);
    auto r0 = run_cli("analyze --data " + neg + " --no-intercept --coef 0 --psd clamp-eps");
    CHECK(r0.exit_code == 0);

    // Perfectly collinear regressors.
    std::string rank = dir + "/rank.csv";
    spit(rank,
         "unit_g,unit_h,y,x1,x2\n"
         "1,2,1,0.5,1.0\n"
         "2,3,2,0.25,0.5\n"
         "3,4,0,1.5,3.0\n");
    auto r3 = run_cli("analyze --data " + rank + " --no-intercept");
    CHECK(r3.exit_code == 3);
}

TEST_CASE("analyze accepts string unit labels") {
    std::string dir = temp_dir();
    std::string path = dir + "/labels.csv";
    spit(path,
         "unit_g,unit_h,y,x\n"
         "usa,chn,0.5,0.1\n"
         "chn,deu,0.8,0.9\n"
         "usa,deu,0.2,0.4\n");
    auto r = run_cli("analyze --data " + path + " --verbose");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("G=3") != std::string::npos);
    CHECK(r.output.find("usa") != std::string::npos);  // mapping echoed
}

TEST_CASE("simulate is byte-identical across reruns and worker counts") {
    std::string dir = temp_dir();
    std::string base = "simulate --table 1 --g 10,25 --reps 30 --seed 5 --quiet --out ";
    auto a = run_cli(base + dir + "/t1_a.csv --workers 1");
    auto b = run_cli(base + dir + "/t1_b.csv --workers 8");
    auto c = run_cli(base + dir + "/t1_c.csv --workers 8");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    REQUIRE(c.exit_code == 0);
    std::string s1 = slurp(dir + "/t1_a.csv");
    CHECK(s1 == slurp(dir + "/t1_b.csv"));
    CHECK(s1 == slurp(dir + "/t1_c.csv"));
    CHECK(s1.rfind("schema_version,", 0) == 0);
    CHECK(std::count(s1.begin(), s1.end(), '\n') == 13);  // header + 6 designs x 2 G
}

TEST_CASE("simulate with explicit design flags and both criticals") {
    auto r = run_cli("simulate --model B --error unit-shock --g 10 --reps 40 --seed 9 "
                     "--critical both --quiet");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.output);
    std::string header, row;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row));
    CHECK(row.find("B,unit-shock") != std::string::npos);
    CHECK(row.find("both") != std::string::npos);

    auto bad = run_cli("simulate --reps 10");
    CHECK(bad.exit_code == 2);
    auto bad2 = run_cli("simulate --model B --error two-group --g 10 --reps 5 --quiet");
    CHECK(bad2.exit_code == 2);
}

TEST_CASE("simulate renders the text layout with parenthesized SEs") {
    auto r = run_cli("simulate --model S --error iid --g 10,25 --reps 30 --seed 2 "
                     "--format text --quiet");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("Model S") != std::string::npos);
    CHECK(r.output.find("(") != std::string::npos);
    CHECK(r.output.find("G=25") != std::string::npos);
}

TEST_CASE("simulate --config drives the harness schema") {
    std::string dir = temp_dir();
    std::string cfg = dir + "/run.cfg";
    spit(cfg,
         "# tiny run\n"
         "model = S\n"
         "error = unit-shock\n"
         "g = 10\n"
         "reps = 25\n"
         "seed = 8\n"
         "criticals = both\n");
    auto r = run_cli("simulate --config " + cfg + " --quiet");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("S,unit-shock") != std::string::npos);

    spit(cfg, "model = S\ng = 10\nbogus = 1\n");
    CHECK(run_cli("simulate --config " + cfg + " --quiet").exit_code == 2);
}

TEST_CASE("simulate progress lines go to stderr once per cell") {
    auto r = run_cli("simulate --model D --error iid --g 10 --reps 20 --seed 1 "
                     "--out /dev/null");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("[1/1]") != std::string::npos);
}

TEST_CASE("diagnose on designs and files") {
    auto d25 = run_cli("diagnose --model D --g 25");
    REQUIRE(d25.exit_code == 0);
    CHECK(d25.output.find("dyads (N)            = 300") != std::string::npos);
    CHECK(d25.output.find("D_N= 46") != std::string::npos);
    CHECK(d25.output.find("kappa                = 25") != std::string::npos);
    CHECK(d25.output.find("warning") == std::string::npos);

    auto b25 = run_cli("diagnose --model B --g 25");
    REQUIRE(b25.exit_code == 0);
    CHECK(b25.output.find("warning") != std::string::npos);
    CHECK(b25.output.find("hub") != std::string::npos);

    // Janson ratio with explicit sigma.
    auto jr = run_cli("diagnose --model D --g 25 --sigma 10 --ell 3");
    REQUIRE(jr.exit_code == 0);
    CHECK(jr.output.find("janson ratio") != std::string::npos);
    CHECK(jr.output.find("8.594") != std::string::npos);

    // Matching graph from a CSV: edgeless overlap graph pins D_N at 1.
    std::string dir = temp_dir();
    std::string path = dir + "/matching2.csv";
    spit(path,
         "unit_g,unit_h,y,x\n"
         "1,2,0.1,0.5\n"
         "3,4,0.2,0.6\n");
    auto m = run_cli("diagnose --data " + path);
    REQUIRE(m.exit_code == 0);
    CHECK(m.output.find("D_N= 1") != std::string::npos);

    CHECK(run_cli("diagnose").exit_code == 2);
    CHECK(run_cli("diagnose --data /nonexistent.csv").exit_code == 2);
}

TEST_CASE("export edgelist round-trips through diagnose") {
    std::string dir = temp_dir();
    std::string edges = dir + "/s25.edges";
    auto ex = run_cli("export --model S --g 25 --format edgelist --out " + edges);
    REQUIRE(ex.exit_code == 0);

    auto direct = run_cli("diagnose --model S --g 25");
    auto from_file = run_cli("diagnose --data " + edges);
    REQUIRE(from_file.exit_code == 0);
    CHECK(direct.output == from_file.output);
}

TEST_CASE("export DOT output is structurally sound") {
    auto r = run_cli("export --model D --g 5 --format dot");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.rfind("graph ", 0) == 0);
    CHECK(std::count(r.output.begin(), r.output.end(), '{') == 1);
    CHECK(std::count(r.output.begin(), r.output.end(), '}') == 1);
    CHECK(std::count(r.output.begin(), r.output.end(), ';') == 10);  // C(5,2) edges
    CHECK(r.output.find("->") == std::string::npos);
}

TEST_CASE("export dataset requires an error spec") {
    CHECK(run_cli("export --model D --g 10 --format dataset").exit_code == 2);
    auto ok = run_cli("export --model D --g 10 --format dataset --error iid --seed 3");
    REQUIRE(ok.exit_code == 0);
    CHECK(ok.output.rfind("unit_g,unit_h,y,x\n", 0) == 0);
    CHECK(std::count(ok.output.begin(), ok.output.end(), '\n') == 46);  // header + 45
}
