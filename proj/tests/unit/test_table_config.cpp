#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "doctest.h"

#include "bsglab/config.hpp"
#include "bsglab/table.hpp"

using namespace bsg;

TEST_CASE("format_double is a lossless round trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5e17, -0.0, 6.02214076e23,
                     std::numeric_limits<double>::min()}) {
        std::string s = format_double(v);
        double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("table rows are arity-checked and typed") {
    Table t;
    t.columns = {"a", "b"};
    t.add_row({1.5, std::string("x")});
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
    CHECK(t.number_at(0, "a") == 1.5);
    CHECK(t.text_at(0, "b") == "x");
    CHECK(t.text_at(0, "a") == "1.5");  // doubles format on demand
    CHECK_THROWS_AS(t.number_at(0, "b"), std::invalid_argument);
    CHECK_THROWS_AS(t.number_at(0, "c"), std::invalid_argument);
    CHECK(t.column_index("b") == 1);
    CHECK(t.column_index("zz") == -1);
    CHECK(t.has_column("a"));
    CHECK_FALSE(t.has_column("zz"));
}

TEST_CASE("csv round trip preserves values, strings, and NaN") {
    Table t;
    t.columns = {"x", "label", "flag"};
    t.add_row({1.0 / 3.0, std::string("alpha"), cell_bool(true)});
    t.add_row({std::nan(""), std::string("beta"), cell_bool(false)});
    t.add_row({-1.25e-17, std::string("gamma_2"), cell_bool(true)});
    std::string csv = t.to_csv();
    Table back = Table::from_csv(csv);
    CHECK(back.same_as(t));
    CHECK(back.number_at(0, "x") == 1.0 / 3.0);
    CHECK(std::isnan(back.number_at(1, "x")));
    CHECK(back.text_at(1, "label") == "beta");
    CHECK(back.text_at(0, "flag") == "true");
}

TEST_CASE("cells that fully parse as numbers become numbers, others stay text") {
    Table back = Table::from_csv("v,w\n2.5,1.5x\ninf,nan\n");
    CHECK(back.number_at(0, "v") == 2.5);
    CHECK(back.text_at(0, "w") == "1.5x");  // trailing garbage keeps it textual
    CHECK(std::isinf(back.number_at(1, "v")));
    CHECK(std::isnan(back.number_at(1, "w")));
}

TEST_CASE("csv safety and malformed input") {
    Table t;
    t.columns = {"a"};
    t.add_row({std::string("has,comma")});
    CHECK_THROWS_AS(t.to_csv(), std::invalid_argument);
    CHECK_THROWS_AS(Table::from_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(Table::from_csv("a,b\n1\n"), std::invalid_argument);
    // carriage returns and blank lines are tolerated
    Table crlf = Table::from_csv("a,b\r\n1,2\r\n\r\n3,4\r\n");
    CHECK(crlf.rows.size() == 2);
    CHECK(crlf.number_at(1, "b") == 4.0);
}

TEST_CASE("table files round trip on disk") {
    Table t;
    t.columns = {"x"};
    t.add_row({3.25});
    auto path = std::filesystem::temp_directory_path() / "bsglab_table_test.csv";
    t.write_csv(path);
    Table back = Table::read_csv(path);
    CHECK(back.same_as(t));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Table::read_csv(path), std::runtime_error);
}

TEST_CASE("same_as distinguishes real differences") {
    Table a, b;
    a.columns = b.columns = {"x"};
    a.add_row({1.0});
    b.add_row({1.0});
    CHECK(a.same_as(b));
    b.rows[0][0] = 2.0;
    CHECK_FALSE(a.same_as(b));
    b.rows[0][0] = std::string("1");
    CHECK_FALSE(a.same_as(b));  // type mismatch counts as different
}

TEST_CASE("config parses flat keys, comments, and sections") {
    Config cfg = Config::parse(
        "# experiment configuration\n"
        "experiment = theorem1   # trailing comment\n"
        "beta = 0.5\n"
        "n_samples = 2000\n"
        "sizes = 8, 12, 16\n"
        "exact = true\n"
        "\n"
        "[mc]\n"
        "sweeps = 512\n");
    CHECK(cfg.get_string("experiment") == "theorem1");
    CHECK(cfg.get_real("beta") == 0.5);
    CHECK(cfg.get_int("n_samples") == 2000);
    CHECK(cfg.get_int("mc.sweeps") == 512);
    CHECK(cfg.get_bool("exact", false) == true);
    CHECK(cfg.get_int_list("sizes", "") == std::vector<int>{8, 12, 16});
    CHECK(cfg.get_real_list("betas", "0.1,0.2") == std::vector<double>{0.1, 0.2});
    CHECK(cfg.has("beta"));
    CHECK_FALSE(cfg.has("gamma"));
    // fallbacks engage only for missing keys
    CHECK(cfg.get_real("beta", 9.0) == 0.5);
    CHECK(cfg.get_real("missing", 9.0) == 9.0);
    CHECK(cfg.get_u64("seed", 77) == 77);
}

TEST_CASE("config diagnostics name the offending key or line") {
    CHECK_THROWS_WITH_AS(Config::parse("a = 1\na = 2\n"),
                         doctest::Contains("'a'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(Config::parse("justtext\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(Config::parse("= 3\n"), doctest::Contains("empty key"),
                         std::invalid_argument);
    Config cfg = Config::parse("beta = fast\n");
    CHECK_THROWS_WITH_AS(cfg.get_real("beta"), doctest::Contains("beta"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(cfg.get_string("missing"), doctest::Contains("missing"),
                         std::invalid_argument);
    CHECK_THROWS_AS(Config::parse_file("/nonexistent/path.cfg"), std::invalid_argument);
}

TEST_CASE("config file round trip") {
    auto path = std::filesystem::temp_directory_path() / "bsglab_config_test.cfg";
    {
        std::FILE* f = std::fopen(path.string().c_str(), "w");
        REQUIRE(f != nullptr);
        std::fputs("experiment = pressure\nn = 3\n", f);
        std::fclose(f);
    }
    Config cfg = Config::parse_file(path);
    CHECK(cfg.get_string("experiment") == "pressure");
    CHECK(cfg.get_int("n") == 3);
    std::filesystem::remove(path);
}
