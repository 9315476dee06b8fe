#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ifsseq/error.hpp"
#include "ifsseq/io.hpp"
#include "support/oracles.hpp"

using namespace ifsseq;
namespace fs = std::filesystem;

namespace {

const char* kSpec = R"({"dim": 1, "domain": {"lo": [0], "hi": [1]},
  "maps": [{"A": [0.3333333333333333], "b": [0]}, {"A": [0.3333333333333333], "b": [0.6666666666666666]}]})";

std::string error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "ifsseq_test_io";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST(SpecFile, ParsesAndValidates)
{
    const Ifs s = io::parse_ifs(kSpec);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s.map(1).offset()[0], 2.0 / 3);
}

TEST(SpecFile, SyntaxErrorsReportTheLine)
{
    const std::string msg = error_of([] { io::parse_ifs("{\"dim\": 1,\n \"domain\": {,\n}", "bad.json"); });
    EXPECT_NE(msg.find("bad.json"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(SpecFile, FieldErrorsNameTheField)
{
    EXPECT_NE(error_of([] {
                  io::parse_ifs(R"({"dim": 1, "domain": {"lo": [0], "hi": [1]}, "maps": [{"A": [0.5], "b": [0]}, {"A": [0.5, 1], "b": [0]}]})");
              }).find("maps[1].A"),
              std::string::npos);
    EXPECT_NE(error_of([] { io::parse_ifs(R"({"dim": 0})"); }).find("dim"), std::string::npos);
    EXPECT_NE(error_of([] { io::parse_ifs(R"({"dim": 1, "domain": {"lo": [0]}, "maps": []})"); }).find("domain.hi"),
              std::string::npos);
    EXPECT_NE(error_of([] {
                  io::parse_ifs(R"({"dim": 1, "domain": {"lo": [0], "hi": [1]}, "maps": [{"A": ["x"], "b": [0]}]})");
              }).find("maps[0].A[0]"),
              std::string::npos);
    EXPECT_THROW(io::parse_ifs(R"({"dim": 1, "domain": {"lo": [0], "hi": [1]}, "maps": [{"A": [1.5], "b": [0]}]})"),
                 InvalidContraction);
}

TEST(SpecFileProperty, RoundTripIsBitExact)
{
    auto g = oracle::rng(81);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
        const Ifs s = oracle::random_ifs(g, d, 1 + static_cast<std::size_t>(trial % 4));
        EXPECT_EQ(io::parse_ifs(io::format_ifs(s)), s);
    }
    const fs::path p = scratch("round.json");
    const Ifs s = io::parse_ifs(kSpec);
    io::write_ifs_file(p, s);
    EXPECT_EQ(io::read_ifs_file(p), s);
}

TEST(SequenceFile, ObjectAndBareArray)
{
    const std::string bare = std::string("[") + kSpec + "," + kSpec + "]";
    EXPECT_EQ(io::parse_sequence(bare).size(), 2u);
    const std::string obj = std::string("{\"terms\": [") + kSpec + "]}";
    EXPECT_EQ(io::parse_sequence(obj).size(), 1u);
    const IfsSequence seq = io::parse_sequence(bare);
    EXPECT_EQ(io::parse_sequence(io::format_sequence(seq))[1], seq[1]);
    EXPECT_NE(error_of([&] {
                  io::parse_sequence(std::string("[") + kSpec + R"(, {"dim": 1, "domain": {"lo": [0], "hi": [1]}, "maps": [{"A": [0.5], "b": ["q"]}]}])");
              }).find("terms[1].maps[0].b[0]"),
              std::string::npos);
    EXPECT_THROW(io::parse_sequence(std::string("[") + kSpec +
                                    R"(, {"dim": 1, "domain": {"lo": [0], "hi": [1]}, "maps": [{"A": [0.5], "b": [0]}]}])"),
                 ArityMismatch);
}

TEST(PointsCsv, ParseAndFormat)
{
    const PointSet p = io::parse_points_csv("# header\n0.5,0.25\n\n0.125, 1\r\n", 1e-6);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p.dim(), 2u);
    EXPECT_EQ(io::format_points_csv(p), "0.125,1\n0.5,0.25\n");
    EXPECT_NE(error_of([] { io::parse_points_csv("1,2\n3\n", 1e-3, "pts.csv"); }).find("line 2"), std::string::npos);
    EXPECT_NE(error_of([] { io::parse_points_csv("1,abc\n", 1e-3); }).find("abc"), std::string::npos);
    EXPECT_THROW(io::parse_points_csv("# nothing\n", 1e-3), InputError);
}

TEST(PointsCsv, TwelveSignificantDigits)
{
    const PointSet p(1, 1e-15, std::vector<double>{1.0 / 3});
    EXPECT_EQ(io::format_points_csv(p), "0.333333333333\n");
}

TEST(Raster, PlainFormatsWithComments)
{
    const io::Raster a = io::parse_raster("P1\n# comment\n3 2\n1 0 1\n010\n");
    EXPECT_EQ(a.width, 3u);
    EXPECT_EQ(a.height, 2u);
    EXPECT_EQ(a.at(0, 0), 1);
    EXPECT_EQ(a.at(1, 1), 1);
    EXPECT_EQ(a.at(1, 2), 0);
    const io::Raster b = io::parse_raster("P2 2 1 # c\n 15\n 3 15\n");
    EXPECT_EQ(b.kind, io::Raster::Kind::Greymap);
    EXPECT_EQ(b.maxval, 15u);
    EXPECT_EQ(b.at(0, 1), 15);
}

TEST(Raster, BinaryFormats)
{
    std::string p4 = "P4\n10 2\n";
    p4 += static_cast<char>(0b10000000);
    p4 += static_cast<char>(0b01000000);
    p4 += static_cast<char>(0xFF);
    p4 += static_cast<char>(0xC0);
    const io::Raster a = io::parse_raster(p4);
    EXPECT_EQ(a.at(0, 0), 1);
    EXPECT_EQ(a.at(0, 9), 1);
    EXPECT_EQ(a.at(0, 8), 0);
    EXPECT_EQ(a.at(1, 9), 1);
    std::string p5 = "P5\n2 1\n65535\n";
    p5 += '\x01';
    p5 += '\x00';
    p5 += '\xff';
    p5 += '\xff';
    const io::Raster b = io::parse_raster(p5);
    EXPECT_EQ(b.at(0, 0), 256);
    EXPECT_EQ(b.at(0, 1), 65535);
}

TEST(Raster, RejectsUnsupportedAndTruncated)
{
    EXPECT_THROW(io::parse_raster("P3\n1 1\n255\n0 0 0\n"), InputError);
    EXPECT_THROW(io::parse_raster("P5\n2 2\n255\n\x01"), InputError);
    EXPECT_THROW(io::parse_raster("P2\n1 1\n10\n11\n"), InputError);
    EXPECT_THROW(io::parse_raster("hello"), InputError);
}

TEST(Raster, IngestionGeometryAndThresholds)
{
    const io::Raster grey = io::parse_raster("P2\n3 2\n255\n0 127 128\n255 0 0\n");
    const io::Ingested in = io::raster_to_points(grey);
    ASSERT_EQ(in.points.size(), 2u);
    // pitch 1/2; (row 0, col 2) -> (1, 0.5) and (row 1, col 0) -> (0, 0)
    EXPECT_DOUBLE_EQ(in.points.point(0)[0], 0.0);
    EXPECT_DOUBLE_EQ(in.points.point(0)[1], 0.0);
    EXPECT_DOUBLE_EQ(in.points.point(1)[0], 1.0);
    EXPECT_DOUBLE_EQ(in.points.point(1)[1], 0.5);
    EXPECT_DOUBLE_EQ(in.domain.hi()[1], 0.5);
    EXPECT_EQ(io::raster_to_points(grey, 100u).points.size(), 3u);
    EXPECT_THROW(io::raster_to_points(io::parse_raster("P1 2 2 0 0 0 0")), InputError);
    const io::Ingested row = io::raster_to_points(io::parse_raster("P1 5 1 1 0 0 0 1"));
    EXPECT_EQ(row.points.dim(), 1u);
    EXPECT_DOUBLE_EQ(row.points.point(1)[0], 1.0);
}

TEST(RasterProperty, IngestThenRenderReproducesTheMask)
{
    auto g = oracle::rng(82);
    for (int trial = 0; trial < 50; ++trial) {
        io::Raster r;
        r.width = 2 + static_cast<std::size_t>(oracle::uniform(g, 0, 40));
        r.height = trial % 5 == 0 ? 1 : 2 + static_cast<std::size_t>(oracle::uniform(g, 0, 40));
        r.value.resize(r.width * r.height);
        for (auto& v : r.value)
            v = oracle::uniform(g, 0, 1) < 0.3;
        r.value[0] = 1;
        const io::Ingested in = io::raster_to_points(r);
        const io::Raster back = io::points_to_raster(in.points, in.domain, in.points.resolution());
        EXPECT_EQ(back.width, r.width);
        EXPECT_EQ(back.height, r.height);
        EXPECT_EQ(back.value, r.value);
        EXPECT_EQ(io::parse_raster(io::format_pbm(back)).value, r.value);
        const io::Raster grey = io::parse_raster(io::format_pgm(back));
        EXPECT_EQ(io::raster_to_points(grey).points, in.points);
    }
}

TEST(AtomicWrite, ReplacesContent)
{
    const fs::path p = scratch("atomic.txt");
    io::write_file_atomic(p, "one");
    io::write_file_atomic(p, "two");
    EXPECT_EQ(io::read_file(p), "two");
    for (const auto& e : fs::directory_iterator(p.parent_path()))
        EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
    EXPECT_THROW(io::read_file(scratch("missing.txt")), InputError);
}
