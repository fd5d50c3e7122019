#include <cstdlib>
#include <iostream>
#include <string>

#include "rosctl/acceptance.hpp"

int main(int argc, char** argv) {
    rosctl::acceptance::Options opt;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const auto results = rosctl::acceptance::run_all(opt, only, &std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
