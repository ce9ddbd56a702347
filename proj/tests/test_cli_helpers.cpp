#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/parallel.hpp"
#include "cli/sweep.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace rabitherm::cli;

TEST(Axis, BareValueListAndRange) {
    EXPECT_EQ(parse_axis("f", "0.5").values, std::vector<double>{0.5});
    EXPECT_EQ(parse_axis("f", "1,2,3").values, (std::vector<double>{1, 2, 3}));
    const auto lin = parse_axis("w", "0:1:5").values;
    ASSERT_EQ(lin.size(), 5u);
    EXPECT_DOUBLE_EQ(lin[1], 0.25);
    EXPECT_EQ(lin.back(), 1.0);
    const auto lg = parse_axis("w", "0.01:100:5:log").values;
    EXPECT_NEAR(lg[2], 1.0, 1e-15);
    EXPECT_EQ(lg.back(), 100.0);
}

TEST(Axis, Rejections) {
    EXPECT_THROW(parse_axis("w", "0:1:1"), std::invalid_argument);
    EXPECT_THROW(parse_axis("w", "0:1:2.5"), std::invalid_argument);
    EXPECT_THROW(parse_axis("w", "1:0:3"), std::invalid_argument);
    EXPECT_THROW(parse_axis("w", "0:1:3:lin"), std::invalid_argument);
    EXPECT_THROW(parse_axis("w", "0:1:3:log"), std::invalid_argument);
    EXPECT_THROW(parse_axis("w", "abc"), std::invalid_argument);
    EXPECT_THROW(parse_axis("w", "1,,2"), std::invalid_argument);
    EXPECT_THROW(parse_axis("w", "inf"), std::invalid_argument);
}

TEST(Spins, ParseList) {
    const auto spins = parse_spin_list("1/2,1,7/2");
    ASSERT_EQ(spins.size(), 3u);
    EXPECT_EQ(spins[2].two_s(), 7);
}

TEST(Grid, LastAxisFastest) {
    const Grid g({2, 3});
    EXPECT_EQ(g.size(), 6u);
    EXPECT_EQ(g.unravel(0), (std::vector<std::size_t>{0, 0}));
    EXPECT_EQ(g.unravel(1), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(g.unravel(3), (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(g.unravel(5), (std::vector<std::size_t>{1, 2}));
}

TEST(Output, ShortestRoundTripDoubles) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(format_double(NAN), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(Output, CsvAndJsonl) {
    std::ostringstream csv, jl;
    RecordSink a(csv, Format::Csv), b(jl, Format::Jsonl);
    for (int i = 0; i < 2; ++i) {
        Record r;
        r.add("index", i).add("x", 0.5 * i).add("tag", "t");
        a.write(r);
        b.write(r);
    }
    EXPECT_EQ(csv.str(), "index,x,tag\n0,0,t\n1,0.5,t\n");
    EXPECT_EQ(jl.str(), "{\"index\":0,\"x\":0.0,\"tag\":\"t\"}\n{\"index\":1,\"x\":0.5,\"tag\":\"t\"}\n");
    EXPECT_EQ(a.count(), 2u);
    Record bad;
    bad.add("other", 1);
    EXPECT_THROW(a.write(bad), std::logic_error);
}

TEST(Output, JsonNanIsNull) {
    std::ostringstream jl;
    RecordSink s(jl, Format::Jsonl);
    Record r;
    r.add("x", NAN);
    s.write(r);
    EXPECT_EQ(jl.str(), "{\"x\":null}\n");
    EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(Parallel, OrderIndependentOfThreads) {
    auto run = [](int threads) {
        std::ostringstream out;
        RecordSink sink(out, Format::Csv);
        run_ordered(
            5000, threads,
            [](std::size_t i) {
                std::vector<Record> recs;
                if (i % 7 != 3) {
                    Record r;
                    r.add("i", i).add("v", std::sin(static_cast<double>(i)));
                    recs.push_back(std::move(r));
                }
                return recs;
            },
            sink, 512);
        return out.str();
    };
    const std::string one = run(1);
    EXPECT_EQ(one, run(4));
    EXPECT_EQ(one, run(3));
}

TEST(Parallel, RethrowsLowestFailingIndex) {
    std::ostringstream out;
    RecordSink sink(out, Format::Csv);
    try {
        run_ordered(100, 4,
                    [](std::size_t i) -> std::vector<Record> {
                        if (i >= 40) throw std::runtime_error(std::to_string(i));
                        return {};
                    },
                    sink);
        FAIL() << "expected exception";
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "40");
    }
}

TEST(Config, ReadAndMerge) {
    const std::string path = ::testing::TempDir() + "rabitherm_cfg_test.ini";
    {
        std::ofstream out(path);
        out << "# comment\n; also comment\nbeta = 2\n--omega = \"0.5:1:3\"\nallow_boundary = true\nthreads=4\n";
    }
    const auto entries = read_config(path);
    ASSERT_EQ(entries.size(), 4u);
    EXPECT_EQ(entries[2].key, "allow-boundary");
    EXPECT_EQ(entries[1].value, "0.5:1:3");

    const std::vector<std::string> args{"prog", "quasitemp", "--threads", "1", "--config", path};
    EXPECT_EQ(find_config_path(args), path);
    const auto merged = merge_config(args, entries, {"allow-boundary"});
    const std::vector<std::string> expected{"prog",    "quasitemp", "--threads", "1",       "--config",
                                            path,      "--beta",    "2",         "--omega", "0.5:1:3",
                                            "--allow-boundary"};
    EXPECT_EQ(merged, expected);
    std::remove(path.c_str());
    EXPECT_THROW(read_config(path), std::invalid_argument);
}

TEST(Config, MalformedLine) {
    const std::string path = ::testing::TempDir() + "rabitherm_cfg_bad.ini";
    {
        std::ofstream out(path);
        out << "beta 2\n";
    }
    EXPECT_THROW(read_config(path), std::invalid_argument);
    std::remove(path.c_str());
}
