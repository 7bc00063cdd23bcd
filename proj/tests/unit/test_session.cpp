#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "readgen/session.hpp"

using namespace readgen;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("readgen-session-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Session, StripVolatileRemovesTimingFieldsRecursively) {
  const nlohmann::json in = {{"ts", "x"},
                             {"seq", 3},
                             {"nested", {{"elapsed_ms", 1.5}, {"keep", 1}}},
                             {"list", {{{"prep_ms", 2}, {"id", "c0"}}}},
                             {"seconds", 9}};
  const nlohmann::json want = {{"seq", 3}, {"nested", {{"keep", 1}}}, {"list", {{{"id", "c0"}}}}};
  EXPECT_EQ(strip_volatile(in), want);
}

TEST(Session, RecordsCarrySchemaSequenceAndType) {
  Session session;
  session.record("run-started", {{"subject", "X"}});
  session.record("run-finished", {{"aborted", false}});
  const auto records = session.records();
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0]["schema"], kSessionSchema);
  EXPECT_EQ(records[0]["seq"], 0);
  EXPECT_EQ(records[1]["seq"], 1);
  EXPECT_EQ(records[0]["type"], "run-started");
  EXPECT_EQ(records[0]["subject"], "X");
  EXPECT_TRUE(records[0]["ts"].is_string());
}

TEST(Session, EventsReachSubscribersInOrder) {
  Session session;
  std::vector<std::uint64_t> seen;
  session.subscribe([&](const nlohmann::json& e) {
    EXPECT_EQ(e["schema"], kEventSchema);
    seen.push_back(e["seq"].get<std::uint64_t>());
  });
  session.keep_progress_events = false;
  session.event("run-started", {});
  session.event("generation-progress", {{"generation", 1}});
  session.event("run-finished", {});
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(session.events().size(), 2u);
}

TEST(Session, FilesRoundTripThroughJsonl) {
  const auto dir = scratch("files");
  {
    Session session(dir);
    session.record("a", {{"value", 1}});
    session.event("b", {{"value", 2}});
    session.write_file("interactions/001/target.txt", "hello\n");
  }
  const auto records = read_jsonl(dir / "session.jsonl");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0]["value"], 1);
  const auto events = read_jsonl(dir / "events.jsonl");
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0]["type"], "b");
  std::ifstream in(dir / "interactions/001/target.txt");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, "hello\n");
  std::filesystem::remove_all(dir);
}

TEST(Session, MemoryOnlySessionWritesNothing) {
  Session session;
  EXPECT_FALSE(session.directory());
  EXPECT_NO_THROW(session.write_file("x.txt", "y"));
}

TEST(Session, ReadJsonlReportsBadLines) {
  const auto dir = scratch("bad");
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "log.jsonl");
    out << "{\"a\": 1}\n\n{broken\n";
  }
  try {
    read_jsonl(dir / "log.jsonl");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(read_jsonl(dir / "missing.jsonl"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(Session, TimestampIsIsoUtc) {
  const auto ts = timestamp_now();
  ASSERT_EQ(ts.size(), 24u);
  EXPECT_EQ(ts[10], 'T');
  EXPECT_EQ(ts.back(), 'Z');
}
