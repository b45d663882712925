#include <doctest.h>

#include "rrqa/calendar_date.hpp"
#include "rrqa/digest.hpp"
#include "rrqa/errors.hpp"
#include "rrqa/text.hpp"

#include "harness.hpp"

#include <filesystem>

using namespace rrqa;

TEST_CASE("calendar date parses and formats") {
    auto d = CalendarDate::parse("2024-06-15");
    CHECK(d.year() == 2024);
    CHECK(d.month() == 6);
    CHECK(d.day() == 15);
    CHECK(d.iso() == "2024-06-15");
    CHECK(d.month_year() == "June 2024");
    CHECK(d.anchor_clause() == "as of June 2024");
    CHECK(CalendarDate::parse("2024-02-29").iso() == "2024-02-29");
}

TEST_CASE("calendar date rejects bad input") {
    CHECK_THROWS_AS(CalendarDate::parse("2023-02-29"), ValidationError);
    CHECK_THROWS_AS(CalendarDate::parse("2024-13-01"), ValidationError);
    CHECK_THROWS_AS(CalendarDate::parse("June 2024"), ValidationError);
    CHECK_THROWS_AS(CalendarDate::parse("2024-6-1"), ValidationError);
    CHECK_THROWS_AS(CalendarDate(2024, 4, 31), ValidationError);
}

TEST_CASE("rfc3339 timestamps") {
    auto ts = rfc3339(std::chrono::system_clock::time_point{} + std::chrono::milliseconds(1500));
    CHECK(ts == "1970-01-01T00:00:01.500Z");
}

TEST_CASE("sha256 matches known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("text helpers") {
    CHECK(text::trim("  a b \n") == "a b");
    CHECK(text::to_lower("ABC def") == "abc def");
    CHECK(text::icontains("Query: AS OF June 2024", "june 2024"));
    CHECK_FALSE(text::icontains("abc", "abd"));
    CHECK(text::istarts_with("ANSWER: x", "answer:"));
    CHECK(text::strip_label("Refined Answer: Khaby Lame", "Refined Answer") == "Khaby Lame");
    CHECK(text::strip_label("  refined answer:  x ", "Refined Answer") == "x");
    CHECK(text::strip_label("no label here", "Answer") == "no label here");
    auto lines = text::split_lines("a\r\nb\nc");
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] == "b");
    CHECK(text::join({"x", "y", "z"}, ", ") == "x, y, z");
}

TEST_CASE("file helpers") {
    const auto dir = harness::scratch_dir("text");
    const auto path = dir + "/nested/deeper/out.txt";
    text::write_file_atomic(path, "hello");
    CHECK(text::read_file(path) == "hello");
    text::write_file_atomic(path, "again");
    CHECK(text::read_file(path) == "again");
    CHECK_THROWS_AS(text::read_file(dir + "/missing.txt"), FileNotFound);
    std::filesystem::remove_all(dir);
}

TEST_CASE("error hierarchy carries details") {
    try {
        throw RateLimited("slow down", "http://x", 3);
    } catch (const BackendError& e) {
        CHECK(e.endpoint() == "http://x");
        CHECK(e.attempts() == 3);
    }
    UnmatchedTrace u({"q9", "q7"});
    CHECK(u.ids().size() == 2);
    CHECK(std::string(u.what()).find("q9") != std::string::npos);
    CHECK(DuplicateDocId("d1").doc_id() == "d1");
    SchemaError s("bad rows", {2, 5});
    CHECK(s.lines() == std::vector<std::size_t>{2, 5});
}
