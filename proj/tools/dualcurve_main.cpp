#include <iostream>
#include <string>

#include "dualcurve/runner.hpp"

namespace {

const char* kUsage =
    "usage: dualcurve <command> <config-file>\n"
    "\n"
    "commands:\n"
    "  curve-info   print curve certificate, constants and duality self-check\n"
    "  enumerate    list nonempty mu(q1,q2,p) sets up to a height cutoff (csv)\n"
    "  count        rational points near a curve in dyadic shells (csv)\n"
    "  sum          convergence series and case-split block ledger (json)\n"
    "  cover        tail cover of the approximable set and its s-cost (csv)\n"
    "  dimscan      empirical dimension-transition scan (csv)\n"
    "\n"
    "exit codes: 0 ok, 2 config error, 3 budget exceeded, 4 internal error\n"
    "worker count: set OMP_NUM_THREADS (results do not depend on it)\n";

} // namespace

int main(int argc, char** argv) {
    if (argc == 2 && (std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h")) {
        std::cout << kUsage;
        return 0;
    }
    if (argc != 3) {
        std::cerr << kUsage;
        return dualcurve::exit_config;
    }
    return dualcurve::run_command(argv[1], argv[2], std::cout, std::cerr);
}
