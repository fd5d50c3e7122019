#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "rosctl/cli.hpp"

using namespace rosctl;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    const int c = cli::run(args, o, e);
    return {c, o.str(), e.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("ergodic JSON output") {
    const auto r = run({"ergodic", "--b1", "1", "--b2", "1", "--q", "1", "--r", "1", "--h", "0.75", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "ergodic");
    CHECK(j["result"]["gain"].get<double>() == doctest::Approx(-4.64575).epsilon(1e-5));
    CHECK(j["result"]["cost"].get<double>() == doctest::Approx(2.1561).epsilon(1e-4));
}

TEST_CASE("simulate is byte-identical across runs") {
    const std::vector<std::string> args{"simulate", "--kind", "rosenblatt", "--h", "0.75", "--n",
                                        "256",      "--t",    "1",          "--paths", "10", "--seed", "42"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    const auto dir = std::filesystem::temp_directory_path() / "rosctl_cli_test";
    std::filesystem::create_directories(dir);
    const auto csv = (dir / "paths.csv").string();
    auto with_csv = args;
    with_csv.insert(with_csv.end(), {"--csv", csv});
    REQUIRE(run(with_csv).code == 0);
    const std::string first = slurp(csv), first_meta = slurp(csv + ".json");
    REQUIRE(run(with_csv).code == 0);
    CHECK(slurp(csv) == first);
    CHECK(slurp(csv + ".json") == first_meta);
    CHECK(first == a.out);
    const auto meta = nlohmann::json::parse(first_meta);
    CHECK(meta["seed"] == 42);
    CHECK(meta["config"]["h"] == 0.75);
    std::filesystem::remove_all(dir);
}

TEST_CASE("suboptimality sweep CSV") {
    const auto r = run({"suboptimality", "--h", "0.75", "--h-grid", "0.5:0.95:0.05"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "h_assumed,gain,true_cost,gap");
    double best = 1e300, arg = -1;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string f[4];
        for (auto& x : f) std::getline(row, x, ',');
        const double gap = std::stod(f[3]);
        CHECK(gap >= 0.0);
        if (gap < best) best = gap, arg = std::stod(f[0]);
        ++rows;
    }
    CHECK(rows == 10);
    CHECK(arg == doctest::Approx(0.75));
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"ergodic", "--h", "1.5"}).code == 2);
    CHECK(run({"ergodic", "--b1", "abc"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"variance-aware", "--b1", "1", "--bbar1", "0.5"}).code == 2);
    CHECK(run({"nash", "--n", "2", "--b2", "1,2,3"}).code == 2);
}

TEST_CASE("config file") {
    const auto dir = std::filesystem::temp_directory_path() / "rosctl_cli_cfg";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "c.toml";
    {
        std::ofstream f(cfg);
        f << "[zero-sum]\nb1 = -1\ns = 2\n";
    }
    const auto r = run({"--config", cfg.string(), "zero-sum", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["config"]["s"] == 2.0);
    std::filesystem::remove_all(dir);
}
