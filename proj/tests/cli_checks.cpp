// End-to-end checks of the command line tool: report determinism, file
// round trips and the documented exit codes. Takes the binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << "\n";
    } else {
        std::cout << "ok: " << what << "\n";
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Runner {
    std::string bin;
    fs::path dir;

    int run(const std::string& args, const std::string& out_name) const {
        const fs::path out = dir / out_name;
        const std::string cmd = bin + " " + args + " > " + out.string() + " 2>/dev/null";
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    }
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_checks <path-to-opnorm>\n";
        return 2;
    }
    Runner r;
    r.bin = argv[1];
    r.dir = fs::temp_directory_path() / ("opnorm_cli_" + std::to_string(::getpid()));
    fs::create_directories(r.dir);

    // identity matrix input
    const fs::path ident = r.dir / "ident.mtx";
    {
        std::ofstream out(ident);
        out << "%%MatrixMarket matrix array real general\n3 3\n";
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) out << (i == j ? 1.0 : 0.0) << "\n";
    }

    // norm of the identity at inf->1 is the dimension
    int rc = r.run("norm --input " + ident.string() + " --p inf --q 1", "n1.json");
    expect(rc == 0, "norm exits 0");
    expect(slurp(r.dir / "n1.json").find("\"value\":3.0") != std::string::npos,
           "identity inf->1 norm is 3");
    expect(slurp(r.dir / "n1.json").find("\"method\":\"exact-enum\"") != std::string::npos,
           "enumeration engine reported");

    // Hadamard 2x2 from CSV: inf->1 norm 2
    const fs::path had = r.dir / "hadamard2.csv";
    {
        std::ofstream out(had);
        out << "1,1\n1,-1\n";
    }
    rc = r.run("norm --input " + had.string() + " --p inf --q 1", "n2.json");
    expect(rc == 0 && slurp(r.dir / "n2.json").find("\"value\":2.0") != std::string::npos,
           "hadamard2.csv inf->1 norm is 2");

    // byte-identical reports for identical seeded configs
    r.run("norm --input " + ident.string() + " --p 2.5 --q 1.5 --seed 42", "d1.json");
    r.run("norm --input " + ident.string() + " --p 2.5 --q 1.5 --seed 42", "d2.json");
    expect(slurp(r.dir / "d1.json") == slurp(r.dir / "d2.json"),
           "seeded norm reports are byte-identical");

    // malformed input names the offending line and exits 2
    const fs::path bad = r.dir / "bad.mtx";
    {
        std::ofstream out(bad);
        out << "definitely not a banner\n";
    }
    rc = r.run("norm --input " + bad.string() + " --p 2 --q 2", "bad.json");
    expect(rc == 2, "parse failure exits 2");

    // planted reduction: deterministic matrix bytes, certificate fields
    rc = r.run("reduce --plant 2,2,2,2 --seed 9 --output " + (r.dir / "a1.mtx").string(),
               "r1.json");
    expect(rc == 0, "reduce exits 0");
    rc = r.run("reduce --plant 2,2,2,2 --seed 9 --output " + (r.dir / "a2.mtx").string(),
               "r2.json");
    expect(slurp(r.dir / "a1.mtx") == slurp(r.dir / "a2.mtx"),
           "same seed gives byte-identical matrix files");
    expect(slurp(r.dir / "r1.json").find("completeness_residual") != std::string::npos,
           "certificate carries the completeness residual");

    // oversize reduction hits the resource cap exit code
    rc = r.run("reduce --plant 4,2,12,3 --seed 1 --output " + (r.dir / "big.mtx").string(),
               "big.json");
    expect(rc == 3, "oversize reduction exits 3");

    // stable embedding with q >= p is a domain error
    rc = r.run("embed stable --n 6 --p 1.2 --q 1.5 --seed 1", "es.json");
    expect(rc == 2, "stable embedding with q >= p exits 2");

    // kwise embed reports the exact-identity residual
    rc = r.run("embed kwise --n 8 --q-int 4 --trials 25 --seed 3", "ek.json");
    expect(rc == 0, "kwise embed exits 0");
    {
        const std::string rep = slurp(r.dir / "ek.json");
        const auto pos = rep.find("\"identity_residual\":");
        bool tiny = false;
        if (pos != std::string::npos) {
            const double v = std::atof(rep.c_str() + pos + 21);
            tiny = v >= 0.0 && v <= 1e-9;
        }
        expect(tiny, "kwise identity residual <= 1e-9");
    }

    // tensor product check on the identity
    rc = r.run("tensor --input " + ident.string() + " --b " + ident.string() +
                   " --p 1.5 --q 3",
               "t.json");
    expect(rc == 0 && slurp(r.dir / "t.json").find("\"rel_gap\":") != std::string::npos,
           "tensor product check reports a gap");

    // verify subcommand: a fast suite passes, unknown suites exit 2
    rc = r.run("verify gamma-values", "v.json");
    expect(rc == 0, "verify gamma-values exits 0");
    expect(slurp(r.dir / "v.json").find("[PASS] 1 gamma-values") != std::string::npos,
           "verify prints a PASS line");
    rc = r.run("verify no-such-suite", "v2.json");
    expect(rc == 2, "unknown suite exits 2");

    // bench emits timing records
    rc = r.run("bench --engine sign-enum --sizes 6,8", "b.json");
    expect(rc == 0 && slurp(r.dir / "b.json").find("\"millis\":") != std::string::npos,
           "bench reports timings");

    // seeded reports are identical across thread counts
    rc = std::system(("OPNORM_THREADS=1 " + r.bin + " embed stable --n 5 --p 1.5 --q 1.2 " +
                      "--seed 13 --trials 10 > " + (r.dir / "th1.json").string() +
                      " 2>/dev/null")
                         .c_str());
    rc = std::system(("OPNORM_THREADS=2 " + r.bin + " embed stable --n 5 --p 1.5 --q 1.2 " +
                      "--seed 13 --trials 10 > " + (r.dir / "th2.json").string() +
                      " 2>/dev/null")
                         .c_str());
    expect(!slurp(r.dir / "th1.json").empty() &&
               slurp(r.dir / "th1.json") == slurp(r.dir / "th2.json"),
           "reports are byte-identical across thread counts");

    fs::remove_all(r.dir);
    if (failures == 0) {
        std::cout << "cli checks passed\n";
        return 0;
    }
    std::cerr << failures << " cli check(s) failed\n";
    return 1;
}
