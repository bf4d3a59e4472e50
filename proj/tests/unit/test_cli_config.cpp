#include "../../tools/run_config.hpp"

#include "fraclog/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace fraclog;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

using Args = std::vector<std::string>;
const Args subcommands{"spectral", "kernel", "suite"};

}  // namespace

TEST_CASE("config file entries land after the subcommand, before user flags") {
    const std::string path = write_temp("fraclog_cfg_a.txt", "# comment\nmax_vertices = 12\nseed=7  # trailing\n\n");
    const Args merged = cli::merge_config({"fraclog", "--config", path, "suite", "--seed", "9"}, subcommands);
    CHECK(merged == Args{"fraclog", "suite", "--max-vertices", "12", "--seed", "7", "--seed", "9"});
    std::filesystem::remove(path);
}

TEST_CASE("subcommand may come from the config file") {
    const std::string path = write_temp("fraclog_cfg_b.txt", "command=kernel\nkind=wlog\n");
    const Args merged = cli::merge_config({"fraclog", "--config=" + path, "--kmax", "4"}, subcommands);
    CHECK(merged == Args{"fraclog", "kernel", "--kind", "wlog", "--kmax", "4"});
    std::filesystem::remove(path);
}

TEST_CASE("without --config argv is unchanged") {
    const Args argv{"fraclog", "kernel", "--d", "2"};
    CHECK(cli::merge_config(argv, subcommands) == argv);
}

TEST_CASE("malformed config lines report the line number") {
    const std::string path = write_temp("fraclog_cfg_c.txt", "seed=1\nnot a pair\n");
    try {
        cli::read_config_file(path);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(cli::read_config_file(path), InputError);
    CHECK_THROWS_AS(cli::merge_config({"fraclog", "--config"}, subcommands), InputError);
}

TEST_CASE("comma lists") {
    CHECK(cli::parse_double_list(" 0.2, 0.1 ,1e-2", "x") == std::vector<double>{0.2, 0.1, 0.01});
    CHECK(cli::parse_int_list("100,150", "k") == std::vector<int>{100, 150});
    CHECK_THROWS_AS(cli::parse_int_list("1,2x", "k"), InputError);
    CHECK_THROWS_AS(cli::parse_double_list("", "x"), InputError);
}
