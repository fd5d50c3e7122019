#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rosctl/io.hpp"

namespace rosctl::acceptance {

struct Options {
    std::uint64_t seed = 20240611;
    std::size_t workers = 0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    io::Json metrics;
    double seconds = 0.0;
};

std::vector<int> criterion_ids();
std::string criterion_name(int id);

CriterionResult run_criterion(int id, const Options& opt);
// Runs the given criteria (all when empty), printing one line per result to `live` if set.
std::vector<CriterionResult> run_all(const Options& opt, const std::vector<int>& only = {},
                                     std::ostream* live = nullptr);

std::string format_line(const CriterionResult& r);

}  // namespace rosctl::acceptance
