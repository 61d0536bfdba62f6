#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <phisig/report.hpp>

using namespace phisig;

TEST(FormatDouble, RoundTrips) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(1e6), "1000000");
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(0.0), "0");
    EXPECT_EQ(format_double(2.5e-7), "2.5e-07");
    EXPECT_EQ(format_double(3e20), "3e+20");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pick(-1e12, 1e12);
    for (int i = 0; i < 10000; ++i) {
        const double v = pick(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        const auto s = format_double(v);
        ASSERT_EQ(std::stod(s), v) << s;
        std::string mant;
        for (char c : s.substr(0, s.find('e')))
            if (c >= '0' && c <= '9')
                mant += c;
        mant.erase(0, mant.find_first_not_of('0'));
        if (s.find('e') == std::string::npos && s.find('.') == std::string::npos)
            mant.erase(mant.find_last_not_of('0') + 1);
        ASSERT_LE(mant.size(), 17u) << s;
    }
}

TEST(Cells, TextAndJson) {
    EXPECT_EQ(cell_text(Cell{}), "");
    EXPECT_EQ(cell_text(Cell{true}), "true");
    EXPECT_EQ(cell_text(Cell{Count{std::numeric_limits<std::uint64_t>::max()}}),
              "18446744073709551615");
    EXPECT_EQ(cell_json(Cell{Count{12}}), "12");
    EXPECT_EQ(cell_text(Cell{IntList{5, 8, 10}}), "5 8 10");
    EXPECT_TRUE(cell_json(Cell{std::numeric_limits<double>::infinity()}).is_null());
    EXPECT_EQ(cell_text(Cell{std::numeric_limits<double>::quiet_NaN()}), "");
}

TEST(Csv, QuotingRoundTrip) {
    EXPECT_EQ(csv_quote("plain"), "plain");
    EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    const std::vector<std::string> cells{"", "a,b", "line\nbreak", "q\"q", "crlf\r\n", "x"};
    std::ostringstream out;
    write_csv_line(out, cells);
    write_csv_line(out, {"1", "2"});
    const auto parsed = parse_csv(out.str());
    ASSERT_EQ(parsed.size(), 2u);
    EXPECT_EQ(parsed[0], cells);
    EXPECT_EQ(parsed[1], (std::vector<std::string>{"1", "2"}));
    EXPECT_THROW(parse_csv("\"open"), Error);
    EXPECT_EQ(parse_csv("a,b\r\nc,d"), (std::vector<std::vector<std::string>>{{"a", "b"}, {"c", "d"}}));
}

TEST(ReportModel, CsvDenormalizesTable) {
    Report r;
    r.kind = "demo";
    r.field("n", std::uint64_t{4}).field("name", std::string("a,b"));
    r.table_name = "rows";
    r.columns = {"i", "v"};
    r.add_row({std::uint64_t{1}, 0.25});
    r.add_row({std::uint64_t{2}, Cell{}});
    EXPECT_THROW(r.add_row({std::uint64_t{3}}), Error);

    std::ostringstream csv;
    write_csv(csv, r);
    EXPECT_EQ(csv.str(), "n,name,i,v\n4,\"a,b\",1,0.25\n4,\"a,b\",2,\n");

    const auto j = to_json(r, {"t", "1", nlohmann::ordered_json::object(), 10});
    EXPECT_EQ(j["report"], "demo");
    EXPECT_EQ(j["sieve_limit"], 10);
    EXPECT_EQ(j["rows"].size(), 2u);
    EXPECT_EQ(j["rows"][0]["v"], 0.25);
    EXPECT_TRUE(j["rows"][1]["v"].is_null());
}

TEST(ReportModel, EmptyTableStillCarriesFields) {
    Report r;
    r.kind = "demo";
    r.field("a", std::uint64_t{1});
    r.table_name = "rows";
    r.columns = {"i"};
    std::ostringstream csv;
    write_csv(csv, r);
    EXPECT_EQ(csv.str(), "a,i\n1,\n");
}
