// Exercises the reproducibility contract: identical config and seed produce
// byte-identical outputs, independent of the worker count.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "missing output file: " << path << "\n";
        std::exit(1);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void run(const std::string& cmd) {
    int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    if (rc != 0) {
        std::cerr << "command failed (" << rc << "): " << cmd << "\n";
        std::exit(1);
    }
}

int failures = 0;

void compare(const std::string& a, const std::string& b, const std::string& what) {
    if (slurp(a) == slurp(b)) {
        std::printf("OK   %s\n", what.c_str());
    } else {
        std::printf("FAIL %s differs\n", what.c_str());
        ++failures;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_determinism <path-to-cli>\n";
        return 1;
    }
    std::string cli = argv[1];
    std::string base = "cli_determinism_runs";
    run("rm -rf " + base);

    std::string common = " --depth 6 --level 5 --grid 192 --max-iter 64 --seed 7 ";
    run(cli + " julia" + common + "--threads 1 --out " + base + "/j1");
    run(cli + " julia" + common + "--threads 1 --out " + base + "/j2");
    run(cli + " julia" + common + "--threads 8 --out " + base + "/j8");
    for (const char* f : {"julia.ppm", "julia_exits.csv", "domain.json", "config.json"}) {
        compare(base + "/j1/" + f, base + "/j2/" + f, std::string("julia rerun: ") + f);
        compare(base + "/j1/" + f, base + "/j8/" + f, std::string("julia threads 1 vs 8: ") + f);
    }

    run(cli + " renorm --depth 8 --seed 7 --out " + base + "/r1");
    run(cli + " renorm --depth 8 --seed 7 --out " + base + "/r2");
    for (const char* f : {"tower.json", "tower.csv"})
        compare(base + "/r1/" + f, base + "/r2/" + f, std::string("renorm rerun: ") + f);

    run(cli + " certify" + common + "--out " + base + "/c1");
    run(cli + " certify" + common + "--out " + base + "/c2");
    compare(base + "/c1/certificate.json", base + "/c2/certificate.json", "certify rerun");

    run(cli + " expansion" + common + "--out " + base + "/e1");
    run(cli + " expansion" + common + "--out " + base + "/e2");
    compare(base + "/e1/expansion.json", base + "/e2/expansion.json", "expansion rerun");

    if (failures == 0) std::printf("determinism: all comparisons byte-identical\n");
    return failures == 0 ? 0 : 1;
}
