#include "doctest.h"

#include <fstream>

#include "cli_support.hpp"

using namespace kpz::cli;

TEST_CASE("config: empty and comment-only files give no entries") {
    CHECK(parse_config("").empty());
    CHECK(parse_config("# only a comment\n\n   \n").empty());
}

TEST_CASE("config: key = value lines keep their line numbers") {
    const auto e = parse_config("# header\nq = 0.5\n\n  eps-inv=250  \r\nt = 1, 2\n");
    REQUIRE(e.size() == 3);
    CHECK(e[0].key == "q");
    CHECK(e[0].value == "0.5");
    CHECK(e[0].line == 2);
    CHECK(e[1].key == "eps-inv");
    CHECK(e[1].value == "250");
    CHECK(e[1].line == 4);
    CHECK(e[2].value == "1, 2");
}

TEST_CASE("config: malformed line is reported with its number") {
    try {
        parse_config("q = 0.5\nthis is not valid\n", "run.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("run.cfg:2:") == 0);
    }
    CHECK_THROWS_AS(parse_config("q =\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("= 3\n"), ConfigError);
}

TEST_CASE("config: repeated key is rejected") {
    CHECK_THROWS_AS(parse_config("q = 0.1\nq = 0.2\n"), ConfigError);
}

TEST_CASE("ranges and lists") {
    CHECK(parse_int_range("-2:2") == std::vector<std::int64_t>{-2, -1, 0, 1, 2});
    CHECK(parse_int_range("0:10:5") == std::vector<std::int64_t>{0, 5, 10});
    CHECK_THROWS(parse_int_range("3:1"));
    CHECK_THROWS(parse_int_range("0:4:0"));
    CHECK_THROWS(parse_int_range("7"));
    CHECK(parse_double_list("0.5,2") == std::vector<double>{0.5, 2.0});
    CHECK_THROWS(parse_double_list("1,,2"));
    CHECK(parse_int_list("3,-1") == std::vector<std::int64_t>{3, -1});
    CHECK_THROWS(parse_int_list("1.5"));
}

TEST_CASE("sha256 of a known string") {
    const auto path = std::filesystem::temp_directory_path() / "kpzlab_sha_test.txt";
    {
        std::ofstream f(path, std::ios::binary);
        f << "abc";
    }
    CHECK(sha256_file(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::filesystem::remove(path);
}
