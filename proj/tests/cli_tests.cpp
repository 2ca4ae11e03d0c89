// End-to-end tests of the command-line binary: exit codes, CSV schema and
// byte-level determinism.  The binary path comes in through CLI_BIN.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

int failures = 0;

#define CHECK_MSG(cond, msg)                                              \
    do {                                                                  \
        if (!(cond)) {                                                    \
            ++failures;                                                   \
            std::cerr << "FAIL (" << __LINE__ << "): " << msg << "\n";    \
        }                                                                 \
    } while (0)

int run(const std::string& args) {
    const std::string cmd =
        std::string(CLI_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const std::string tmp = "cli_test_out";
    (void)std::system(("mkdir -p " + tmp).c_str());

    // successful runs
    CHECK_MSG(run("rates --lambda 0.1 --omega0 1 --omega0r 1 --json") == 0,
              "rates should succeed");
    CHECK_MSG(run("--help") == 0, "--help exits 0");

    // configuration errors -> exit 2
    CHECK_MSG(run("rates --lambda -1 --omega0r 1") == 2,
              "negative coupling rejected");
    CHECK_MSG(run("evolve --scenario no-such-thing") == 2,
              "unknown scenario rejected");
    CHECK_MSG(run("evolve --model no-such-model") == 2,
              "unknown model rejected");
    CHECK_MSG(run("nonexistent-subcommand") == 2, "parse errors exit 2");
    CHECK_MSG(run("figure --n 7") == 2, "figure number out of range");
    CHECK_MSG(run("oracle-audit --modes 4") == 2,
              "too few modes rejected");
    CHECK_MSG(run("evolve --config /does/not/exist.json") == 2,
              "missing config file rejected");

    // numerical failure -> exit 3: the derived-generator inversion breaks
    // down once the propagator becomes numerically singular
    CHECK_MSG(run("evolve --model master --tmax-gamma 12 --samples 16 --out " +
                  tmp + "/junk.csv") == 3,
              "ill-conditioned generator inversion exits 3");

    // CSV schema and byte-level determinism
    const std::string args =
        "evolve --scenario superposed --p 0.5 --omega0r 1 --tmax-gamma 3 "
        "--samples 40 --out ";
    CHECK_MSG(run(args + tmp + "/a.csv") == 0, "evolve run 1");
    CHECK_MSG(run(args + tmp + "/b.csv") == 0, "evolve run 2");
    const std::string a = slurp(tmp + "/a.csv"), b = slurp(tmp + "/b.csv");
    CHECK_MSG(!a.empty(), "output CSV non-empty");
    CHECK_MSG(a == b, "repeated runs are byte-identical");
    CHECK_MSG(a.find('\r') == std::string::npos, "LF line endings only");
    const std::string header = a.substr(0, a.find('\n'));
    CHECK_MSG(header.rfind("gamma0_t,t,rho_oo,rho_mm,rho_pp,rho_ii,", 0) == 0,
              "header starts with the documented columns");
    CHECK_MSG(header.find("concurrence") != std::string::npos,
              "concurrence column present");
    // first data row starts at t = 0 with 17 significant digits
    const std::string row1 =
        a.substr(header.size() + 1,
                 a.find('\n', header.size() + 1) - header.size() - 1);
    CHECK_MSG(row1.rfind("0.0000000000000000e+00,0.0000000000000000e+00,", 0) ==
                  0,
              "first row at t = 0 in fixed scientific format");

    // JSON config file with flag override
    {
        std::ofstream cfg(tmp + "/cfg.json");
        cfg << R"({"lambda": 0.1, "omega0r": 1.0, "p": 0.5,)"
            << R"( "samples": 40, "tmax-gamma": 3.0,)"
            << R"( "scenario": "superposed", "out": ")" << tmp
            << R"(/c.csv"})";
    }
    CHECK_MSG(run("evolve --config " + tmp + "/cfg.json") == 0,
              "config-file run succeeds");
    CHECK_MSG(slurp(tmp + "/c.csv") == a,
              "config-file run matches the flag run");
    CHECK_MSG(run("evolve --config " + tmp + "/cfg.json --out " + tmp +
                  "/d.csv --samples 10") == 0,
              "flags override config");
    const std::string d = slurp(tmp + "/d.csv");
    CHECK_MSG(!d.empty() && d != a, "override changed the output");

    // markov model and decoherence subcommands produce output
    CHECK_MSG(run("evolve --model markov --tmax-gamma 2 --samples 10 --out " +
                  tmp + "/mk.csv") == 0,
              "markov model runs");
    CHECK_MSG(run("decohere --scenario fact-ground --p 0.5 --omega0r 0.5 "
                  "--tmax-gamma 2 --samples 10 --out " +
                  tmp + "/dec.csv") == 0,
              "decohere runs");
    CHECK_MSG(slurp(tmp + "/dec.csv")
                      .rfind("gamma0_t,t,coherence_q1,coherence_q2,", 0) == 0,
              "decoherence header");
    CHECK_MSG(run("compare-markov --p 1 --omega0r 0.5 --tmax-gamma 2 "
                  "--samples 10 --out " +
                  tmp + "/cm.csv") == 0,
              "compare-markov runs");

    if (failures == 0) {
        std::cout << "cli_tests: all checks passed\n";
        return 0;
    }
    std::cerr << "cli_tests: " << failures << " failures\n";
    return 1;
}
