// Runs the acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "fraclog/asymptotics.hpp"
#include "fraclog/special.hpp"
#include "fraclog/suite.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#ifndef FRACLOG_CLI_PATH
#error "FRACLOG_CLI_PATH must name the fraclog executable"
#endif

namespace {

namespace bm = boost::math;

// Closed form of the cutoff constant, from the Gamma function only.
double cutoff_constant_oracle(double s, int d) {
    const double h = 0.5 * d;
    return std::pow(2.0, 2.0 * s + d) * std::pow(bm::constants::pi<double>(), h) * bm::tgamma(s + h) / bm::tgamma(-s);
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

struct Extra {
    bool pass = true;
    std::string note;
    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!note.empty()) note += "; ";
        note += what + (ok ? "" : " FAILED");
    }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// Independent oracles and budgets layered over the library's own verdict.
Extra extra_checks(int id, double seconds) {
    Extra e;
    const double one_over_pi = bm::constants::one_div_pi<double>();
    switch (id) {
    case 1:
        e.check(seconds < 30.0, "runtime " + fmt(seconds) + " s < 30 s");
        break;
    case 3:
        e.check(seconds < 120.0, "runtime " + fmt(seconds) + " s < 120 s");
        break;
    case 5: {
        const double gap = std::fabs(fraclog::euler_split_check() + bm::constants::euler<double>());
        e.check(gap <= 1e-10, "split vs -gamma " + fmt(gap));
        break;
    }
    case 11: {
        const double gap = rel(fraclog::c_sd(0.5, 1), one_over_pi);
        e.check(gap <= 1e-12, "C_{1/2,1} vs 1/pi rel " + fmt(gap));
        break;
    }
    case 12: {
        const double oracle = cutoff_constant_oracle(0.5, 1);
        const double gap = std::fabs(fraclog::a_sd(0.5, 1).value - oracle);
        e.check(std::fabs(oracle + 2.0) <= 1e-14 && gap <= 1e-3, "A_{1/2,1} vs gamma oracle " + fmt(gap));
        break;
    }
    case 13:
        for (const auto& [s, d] : {std::pair{0.5, 1}, std::pair{0.5, 2}, std::pair{-0.25, 1}}) {
            const double gap = rel(fraclog::a_sd(s, d).value, cutoff_constant_oracle(s, d));
            e.check(gap <= 1e-4, "A(" + fmt(s) + "," + std::to_string(d) + ") vs gamma oracle rel " + fmt(gap));
        }
        break;
    case 14: {
        const std::vector<double> gaps{1e-2, 1e-3, 1e-4, 1e-5};
        const auto r = fraclog::blowup_fit_plog(1, fraclog::LatticePoint(std::vector<int>{1}), gaps);
        const double gap = rel(r.limit, one_over_pi);
        e.check(gap <= 1e-2, "limit vs 1/pi rel " + fmt(gap));
        e.check(r.discrepancy, "discrepancy flag raised");
        break;
    }
    case 15: {
        const double gap = rel(fraclog::a_sd(-0.25, 1).value, cutoff_constant_oracle(-0.25, 1));
        e.check(gap <= 1e-4, "A_{-1/4,1} vs gamma oracle rel " + fmt(gap));
        break;
    }
    default:
        break;
    }
    return e;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Two CLI runs with the same config must write identical bytes.
Extra determinism() {
    Extra e;
    const auto dir = std::filesystem::temp_directory_path() / ("fraclog_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
        const auto out = dir / ("suite_" + std::to_string(run) + ".json");
        const std::string cmd = std::string("\"") + FRACLOG_CLI_PATH + "\" suite --seed 20240601 --out \"" + out.string() + "\"";
        const int status = std::system(cmd.c_str());
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        e.check(code == 0 || code == 4, "run " + std::to_string(run + 1) + " exit " + std::to_string(code));
        outputs[run] = slurp(out);
    }
    e.check(!outputs[0].empty() && outputs[0] == outputs[1], std::to_string(outputs[0].size()) + " bytes identical");
    std::filesystem::remove_all(dir);
    return e;
}

}  // namespace

int main() {
    const fraclog::SuiteConfig config;
    bool all = true;
    for (int id = 1; id <= fraclog::suite_criterion_count; ++id) {
        const auto start = std::chrono::steady_clock::now();
        fraclog::CriterionOutcome outcome;
        std::string failure;
        try {
            outcome = fraclog::run_criterion(id, config);
        } catch (const std::exception& ex) {
            outcome.id = id;
            outcome.name = "criterion";
            failure = ex.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const Extra extra = extra_checks(id, seconds);
        const bool pass = failure.empty() && outcome.pass && extra.pass;
        all = all && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << id << ' ' << outcome.name << " (" << fmt(seconds) << " s)";
        if (!extra.note.empty()) std::cout << " [" << extra.note << ']';
        if (!failure.empty()) std::cout << " error: " << failure;
        std::cout << '\n';
        if (!outcome.pass) std::cout << "  details: " << outcome.details.dump() << '\n';
    }
    const Extra det = determinism();
    all = all && det.pass;
    std::cout << (det.pass ? "PASS " : "FAIL ") << "16 determinism [" << det.note << "]\n";
    std::cout << (all ? "all criteria passed" : "some criteria failed") << '\n';
    return all ? 0 : 1;
}
