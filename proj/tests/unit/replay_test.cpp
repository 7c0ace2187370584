#include <gtest/gtest.h>

#include <filesystem>
#include <cstdlib>
#include <sstream>

#include "dlstream/errors.hpp"
#include "dlstream/generators.hpp"
#include "dlstream/replay.hpp"

using namespace dls;

namespace {

StreamSection small_mixed() {
    StreamSection s;
    s.schema = Schema({{"a", AttributeKind::Numeric, 0}, {"b", AttributeKind::Nominal, 3}}, 2);
    s.events = {StreamEvent::instance(0, 0, FeatureVector{{0.1}, {2}}),
                StreamEvent::instance(1, 1, FeatureVector{{-1e-300}, {0}}),
                StreamEvent::oracle_label(1, 2, 0),
                StreamEvent::label(0, 3, 1),
                StreamEvent::instance(2, 3, FeatureVector{{123456789.125}, {1}}),
                StreamEvent::label(2, 3, 0)};
    canonical_sort(s.events);
    fit_time_bounds(s);
    return s;
}

std::string to_text(const StreamSection& s) {
    std::ostringstream out;
    write_replay(out, s);
    return out.str();
}

}  // namespace

TEST(Replay, DocumentedLayout) {
    const std::string text = to_text(small_mixed());
    EXPECT_EQ(text,
              "H,2,N:a,C3:b\n"
              "I,0,0,0.1,2\n"
              "I,1,1,-1e-300,0\n"
              "O,1,2,0\n"
              "L,0,3,1\n"
              "I,2,3,123456789.125,1\n"
              "L,2,3,0\n");
}

TEST(Replay, RoundTripIsExact) {
    const auto s = small_mixed();
    std::istringstream in(to_text(s));
    EXPECT_EQ(read_replay(in), s);
}

TEST(Replay, GeneratedStreamRoundTripsThroughAFile) {
    DriftSchedule sch{{{0, AgrawalConfig{1, 0.05}}, {50, AgrawalConfig{3, 0.05}}}, 120};
    const auto s = generate(sch, DelayPolicy::uniform(0, 7), 5);
    const auto path = std::filesystem::temp_directory_path() / "dlstream_replay_test.csv";
    write_replay_file(path, s);
    EXPECT_EQ(read_replay_file(path), s);
    std::filesystem::remove(path);
}

TEST(Replay, ErrorsNameTheLine) {
    auto expect_line = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            read_replay(in);
            FAIL() << "expected a protocol violation";
        } catch (const ProtocolViolation& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_line("H,2,N:a\nI,0,0,1.0\nL,0,0,x\n", "line 3");
    expect_line("H,2,N:a\nI,0,0\n", "line 2");
    expect_line("H,2,N:a\nL,0,0,1\n", "");
    expect_line("X,2\n", "line 1");
    expect_line("H,2,N:a\nI,0,0,1.0\nL,0,1,1\nL,0,2,1\n", "");
}

TEST(Replay, MissingFileIsNotFound) {
    EXPECT_THROW(read_replay_file("/nonexistent/dir/stream.csv"), NotFound);
}

TEST(Replay, FormatDoubleRoundTrips) {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e300, 5e-324, 123456.789}) {
        const std::string s = format_double(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    }
    EXPECT_EQ(format_double(0.25), "0.25");
}
