#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "diffshape/csv.hpp"
#include "diffshape/format.hpp"

using namespace diffshape;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "diffshape_csv_test") {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("format_double is shortest round-trip text") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::stod(format_double(0.30000000000000004)) == 0.30000000000000004);
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("provenance comment layout") {
    CHECK(provenance_comment("00ff00ff00ff00ff", 42) == "# config_hash=00ff00ff00ff00ff seed=42");
}

TEST_CASE("training log format") {
    std::string text = training_log_csv({2.0, 1.5, 0.25}, "# c");
    CHECK(text ==
          "# c\n"
          "step,loss\n"
          "1,2\n"
          "2,1.5\n"
          "3,0.25\n");
}

TEST_CASE("distribution table format") {
    Constellation c = make_qam(4);
    ShapingDistribution d;
    d.probs = {0.5, 0.25, 0.25, 0.0};
    std::string text = distribution_csv(c, d, "# h");
    const std::string s = format_double(1.0 / std::sqrt(2.0));
    CHECK(text == "# h\nsymbol_index,i,q,probability\n"
                  "1,-" + s + ",-" + s + ",0.5\n"
                  "2,-" + s + "," + s + ",0.25\n"
                  "3," + s + ",-" + s + ",0.25\n"
                  "4," + s + "," + s + ",0\n");

    ShapingDistribution wrong;
    wrong.probs = {1.0};
    CHECK_THROWS_AS(distribution_csv(c, wrong, "#"), CsvError);
}

TEST_CASE("reconstruction and histogram tables") {
    SymbolBatch y(2, 2);
    y << 0.5, -1.5, 2.0, 0.0;
    std::string rec = reconstruction_csv(y, {3, 1}, "# p");
    CHECK(rec ==
          "# p\n"
          "i,q,symbol_index\n"
          "0.5,-1.5,3\n"
          "2,0,1\n");
    CHECK_THROWS_AS(reconstruction_csv(y, {1}, "#"), CsvError);

    Eigen::MatrixXi hist(2, 4);
    hist << 0, 3, 1, 0,
            2, 0, 0, 0;
    std::string h = histogram_csv(y, hist, "# v");
    CHECK(h ==
          "# v\n"
          "i,q,symbol_index,count\n"
          "0.5,-1.5,2,3\n"
          "0.5,-1.5,3,1\n"
          "2,0,1,2\n");
    Eigen::MatrixXi bad(1, 4);
    bad.setZero();
    CHECK_THROWS_AS(histogram_csv(y, bad, "#"), CsvError);
}

TEST_CASE("iq files read back with optional header and comments") {
    TempDir dir;
    write_text_file(dir.file("a.csv"), "# note\ni,q\n0.5,-0.25\n1,2\n\n-3,-4\n");
    SymbolBatch b = read_iq_csv(dir.file("a.csv"));
    REQUIRE(b.rows() == 3);
    CHECK(b(0, 0) == 0.5);
    CHECK(b(0, 1) == -0.25);
    CHECK(b(2, 0) == -3.0);

    write_text_file(dir.file("noheader.csv"), "1.5,2.5\n");
    SymbolBatch n = read_iq_csv(dir.file("noheader.csv"));
    REQUIRE(n.rows() == 1);
    CHECK(n(0, 0) == 1.5);
}

TEST_CASE("iq parse errors name the line") {
    TempDir dir;
    auto error_of = [](const std::string& path) {
        try {
            read_iq_csv(path);
        } catch (const CsvError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    write_text_file(dir.file("three.csv"), "1,2\n1,2,3\n");
    CHECK(error_of(dir.file("three.csv")).find("line 2") != std::string::npos);

    write_text_file(dir.file("word.csv"), "# x\n1,two\n");
    CHECK(error_of(dir.file("word.csv")).find("line 2") != std::string::npos);

    write_text_file(dir.file("one_field.csv"), "42\n");
    CHECK(error_of(dir.file("one_field.csv")).find("line 1") != std::string::npos);

    write_text_file(dir.file("empty.csv"), "");
    CHECK_THROWS_AS(read_iq_csv(dir.file("empty.csv")), CsvError);
    write_text_file(dir.file("only_comments.csv"), "# a\n# b\n");
    CHECK_THROWS_AS(read_iq_csv(dir.file("only_comments.csv")), CsvError);
    CHECK_THROWS_AS(read_iq_csv((dir.path / "missing.csv").string()), CsvError);
}

TEST_CASE("text files round trip bytes") {
    TempDir dir;
    const std::string payload = "line1\nline2\n\xE2\x82\xAC\n";
    write_text_file(dir.file("t.txt"), payload);
    CHECK(read_text_file(dir.file("t.txt")) == payload);
    CHECK_THROWS_AS(read_text_file((dir.path / "nope").string()), CsvError);
}
