#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "deblur/io.hpp"

using namespace deblur;
using namespace deblur::io;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("deblur_io_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(ReadVector, OnePerLine) {
    const std::string p = temp_path("simple.csv");
    write_text(p, "1.0\n2.5\n-3\n");
    EXPECT_EQ(read_vector_csv(p), (Vector{1.0, 2.5, -3.0}));
    std::remove(p.c_str());
}

TEST(ReadVector, EmptyFileGivesEmptyVector) {
    const std::string p = temp_path("empty.csv");
    write_text(p, "");
    EXPECT_TRUE(read_vector_csv(p).empty());
    std::remove(p.c_str());
}

TEST(ReadVector, WhitespaceSeparatedAndExponents) {
    std::istringstream in("  1e-3\t+2\n\n-4.5E+2   7\r\n");
    EXPECT_EQ(parse_vector(in), (Vector{1e-3, 2.0, -450.0, 7.0}));
}

TEST(ReadVector, BadTokenReportsLine) {
    std::istringstream in("1\n2\nthree\n");
    try {
        parse_vector(in);
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(ReadVector, MissingFileIsIoError) {
    EXPECT_THROW(read_vector_csv(temp_path("does_not_exist.csv")), IoError);
}

TEST(WriteTable, HeaderAndRows) {
    const std::string p = temp_path("table.csv");
    const std::vector<std::string> h{"a", "b"};
    const std::vector<std::vector<double>> rows{{1, 2}};
    write_table_csv(p, h, rows);
    EXPECT_EQ(read_text(p), "a,b\n1,2\n");
    std::remove(p.c_str());
}

TEST(WriteTable, RaggedRowsAndBadPathRejected) {
    const std::vector<std::string> h{"a", "b"};
    const std::vector<std::vector<double>> ragged{{1, 2}, {3}};
    EXPECT_THROW(write_table_csv(temp_path("ragged.csv"), h, ragged), InvalidArgument);
    const std::vector<std::vector<double>> ok{{1, 2}};
    EXPECT_THROW(write_table_csv("/nonexistent-dir/x.csv", h, ok), IoError);
}

TEST(WriteTable, RoundTripIsBitExact) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    const std::vector<std::string> h{"lambda", "residual_norm", "solution_norm"};
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 50; ++i) rows.push_back({std::ldexp(normal(rng), i - 25), normal(rng), 1.0 / (i + 3)});
    const std::string p = temp_path("roundtrip.csv");
    write_table_csv(p, h, rows);
    const Table t = read_table_csv(p);
    EXPECT_EQ(t.headers, h);
    EXPECT_EQ(t.rows, rows);
    std::remove(p.c_str());
}

TEST(WriteVector, RoundTripIsBitExact) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal;
    Vector v(1000);
    for (double& x : v) x = normal(rng) * std::exp(normal(rng) * 20);
    v.push_back(5e-324);
    v.push_back(-0.0);
    const std::string p = temp_path("vector.csv");
    write_vector_csv(p, v);
    const Vector back = read_vector_csv(p);
    ASSERT_EQ(back.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(std::memcmp(&back[i], &v[i], sizeof(double)), 0) << i;
    std::remove(p.c_str());
}

TEST(ParseTable, ColumnCountMismatch) {
    std::istringstream in("a,b\n1,2\n3\n");
    EXPECT_THROW(parse_table(in), IoError);
}

TEST(FormatDouble, SeventeenSignificantDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(parse_double(format_double(1.0 / 3.0), 1), 1.0 / 3.0);
}
