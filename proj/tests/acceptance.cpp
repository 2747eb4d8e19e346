// Acceptance criteria AC1 to AC12, one PASS or FAIL line each.
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "diffcech/acceptance.hpp"

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
    const auto results = diffcech::acceptance::run(seed, DIFFCECH_GOLDEN_DIR, [](const auto& r) {
        std::cout << diffcech::acceptance::result_line(r) << "  [" << std::fixed << std::setprecision(2) << r.seconds
                  << " s]" << std::endl;
    });
    const bool passed = diffcech::acceptance::all_passed(results);
    std::cout << (passed ? "all criteria passed" : "some criteria failed") << "\n";
    return passed ? 0 : 1;
}
