#include <doctest.h>

#include <random>

#include "castsize/csv.hpp"
#include "castsize/ingest.hpp"
#include "test_support.hpp"

using namespace castsize;

namespace {

template <typename F> ErrorCode code_of(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

bool same_events(const std::vector<DialogueEvent> &a, const std::vector<DialogueEvent> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].movie_id != b[i].movie_id || a[i].line_index != b[i].line_index ||
        a[i].speaker.display() != b[i].speaker.display() || a[i].text != b[i].text)
      return false;
  return true;
}

bool same_events(const std::vector<ConflictEvent> &a, const std::vector<ConflictEvent> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].movie_id != b[i].movie_id || a[i].timestamp != b[i].timestamp ||
        a[i].side_a.display() != b[i].side_a.display() ||
        a[i].side_b.display() != b[i].side_b.display() || a[i].outcome != b[i].outcome)
      return false;
  return true;
}

} // namespace

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("00:12:30") == 750);
  CHECK(parse_timestamp("1:02:03") == 3723);
  CHECK(parse_timestamp("12:30") == 750);
  CHECK(parse_timestamp("95") == 95);
  CHECK_FALSE(parse_timestamp("12:3"));
  CHECK_FALSE(parse_timestamp("12:61"));
  CHECK_FALSE(parse_timestamp("-5"));
  CHECK_FALSE(parse_timestamp("1:2:3:4"));
  CHECK_FALSE(parse_timestamp(""));
  CHECK(format_timestamp(3723) == "1:02:03");
}

TEST_CASE("conflict log: single row") {
  auto r = parse_conflict_log("movie,timestamp,side_a,side_b,outcome\n"
                              "IronMan,00:12:30,Iron Man,Iron Monger,A");
  REQUIRE(r.value.size() == 1);
  const auto &e = r.value[0];
  CHECK(e.movie_id == "IronMan");
  CHECK(e.timestamp == 750);
  CHECK(e.side_a.display() == "Iron Man");
  CHECK(e.side_b.display() == "Iron Monger");
  CHECK(e.outcome == Outcome::A);
  CHECK(r.report.ok());
}

TEST_CASE("conflict log: bad outcome is reported with its line") {
  auto r = parse_conflict_log("movie,timestamp,side_a,side_b,outcome\n"
                              "M,10,A,B,X\n");
  CHECK(r.value.empty());
  REQUIRE(r.report.errors.size() == 1);
  CHECK(r.report.errors[0].code == DiagCode::BadOutcome);
  CHECK(r.report.errors[0].line == 2);
  CHECK(r.report.stats.dropped == 1);
}

TEST_CASE("conflict log: time inversion warns but keeps both events") {
  auto r = parse_conflict_log("movie,timestamp,side_a,side_b,outcome\n"
                              "M,100,A,B,A\n"
                              "M,90,A,C,D\n");
  CHECK(r.value.size() == 2);
  CHECK(r.report.ok());
  REQUIRE(r.report.warnings.size() == 1);
  CHECK(r.report.warnings[0].code == DiagCode::NonMonotoneTime);
  CHECK(r.report.warnings[0].line == 3);
}

TEST_CASE("conflict log: comments, quoting and row diagnostics") {
  auto r = parse_conflict_log("# transcribed by hand\n"
                              "movie,timestamp,side_a,side_b,outcome\n"
                              "# first act\n"
                              "\"Avengers: Age of Ultron\",1:00:00,\"Stark, Tony\",Ultron,B\n"
                              "M,xx,A,B,A\n"
                              "M,5,Thor,THOR,A\n"
                              "M,5,A,B\n"
                              "M,6,,B,A\n");
  REQUIRE(r.value.size() == 1);
  CHECK(r.value[0].movie_id == "Avengers: Age of Ultron");
  CHECK(r.value[0].side_a.display() == "Stark, Tony");
  CHECK(r.report.has_error(DiagCode::BadTimestamp));
  CHECK(r.report.has_error(DiagCode::SelfConflict));
  CHECK(r.report.has_error(DiagCode::BadRow));
  CHECK(r.report.has_error(DiagCode::BadName));
  CHECK(r.report.stats.dropped == 4);
}

TEST_CASE("conflict log: header is required") {
  CHECK(code_of([] { parse_conflict_log("M,1,A,B,A\n"); }) == ErrorCode::MissingHeader);
  CHECK(code_of([] { parse_conflict_log(""); }) == ErrorCode::MissingHeader);
}

TEST_CASE("dialogue: colon grammar") {
  auto r = parse_dialogue("TONY: I am Iron Man.", DialogueFormat::colon, "IM");
  REQUIRE(r.value.size() == 1);
  CHECK(r.value[0].line_index == 0);
  CHECK(r.value[0].speaker.display() == "TONY");
  CHECK(r.value[0].text == "I am Iron Man.");
  CHECK(r.value[0].movie_id == "IM");

  auto r2 = parse_dialogue("[Tony walks in]\n"
                           "INT. LAB - NIGHT\n"
                           "PEPPER: Tony?\n"
                           "just narration without a speaker\n"
                           "TONY (V.O.): Here.\n"
                           "RHODEY:\n",
                           DialogueFormat::colon, "IM");
  REQUIRE(r2.value.size() == 2);
  CHECK(r2.value[0].speaker.display() == "PEPPER");
  CHECK(r2.value[1].speaker.display() == "TONY");
  CHECK(r2.value[1].line_index == 1);
  CHECK(r2.report.has_warning(DiagCode::EmptyUtterance));
}

TEST_CASE("dialogue: screenplay grammar") {
  SUBCASE("simple cue") {
    auto r = parse_dialogue("TONY\nI am Iron Man.\n\n", DialogueFormat::screenplay, "IM");
    REQUIRE(r.value.size() == 1);
    CHECK(r.value[0].line_index == 0);
    CHECK(r.value[0].speaker.display() == "TONY");
    CHECK(r.value[0].text == "I am Iron Man.");
  }
  SUBCASE("scene heading and parenthetical are skipped") {
    auto r = parse_dialogue("INT. LAB - NIGHT\nTONY\n(sighs)\nWe're done.\n",
                            DialogueFormat::screenplay, "IM");
    REQUIRE(r.value.size() == 1);
    CHECK(r.value[0].speaker.display() == "TONY");
    CHECK(r.value[0].text == "We're done.");
  }
  SUBCASE("multi-line speeches, action lines and extensions") {
    auto r = parse_dialogue("EXT. DESERT - DAY\n"
                            "A convoy rolls across the sand.\n"
                            "\n"
                            "        TONY (CONT'D)\n"
                            "    Is it cool if I say that?\n"
                            "    Is that too much?\n"
                            "\n"
                            "The soldiers laugh.\n"
                            "CUT TO:\n"
                            "\n"
                            "JIMMY\n"
                            "Sir?\n",
                            DialogueFormat::screenplay, "IM");
    REQUIRE(r.value.size() == 3);
    CHECK(r.value[0].speaker.display() == "TONY");
    CHECK(r.value[1].speaker.display() == "TONY");
    CHECK(r.value[1].text == "Is that too much?");
    CHECK(r.value[2].speaker.display() == "JIMMY");
    CHECK(r.value[2].line_index == 2);
  }
}

TEST_CASE("screenplay cue heuristic") {
  CHECK(is_screenplay_cue("TONY"));
  CHECK(is_screenplay_cue("NICK FURY (O.S.)"));
  CHECK(is_screenplay_cue("McCOY"));
  CHECK_FALSE(is_screenplay_cue("Tony walks in"));
  CHECK_FALSE(is_screenplay_cue("NO!"));
  CHECK_FALSE(is_screenplay_cue("CUT TO:"));
  CHECK_FALSE(is_screenplay_cue("INT. LAB - NIGHT"));
  CHECK_FALSE(is_screenplay_cue("(beat)"));
  CHECK_FALSE(is_screenplay_cue("1234"));
  CHECK_FALSE(is_screenplay_cue(std::string(41, 'A')));
}

TEST_CASE("dialogue: normalized CSV") {
  auto r = parse_dialogue("movie,line_index,speaker,text\n"
                          "IM,0,TONY,\"Yes, I am.\"\n"
                          "IM,1,PEPPER,\n"
                          "IM,1,TONY,again\n"
                          "IM,zz,TONY,bad\n",
                          DialogueFormat::normalized_csv);
  REQUIRE(r.value.size() == 2);
  CHECK(r.value[0].text == "Yes, I am.");
  CHECK_FALSE(r.value[1].text.has_value());
  CHECK(r.report.has_error(DiagCode::NonMonotoneIndex));
  CHECK(r.report.has_error(DiagCode::BadLineIndex));
}

TEST_CASE("dialogue format names") {
  CHECK(parse_dialogue_format("screenplay") == DialogueFormat::screenplay);
  CHECK(code_of([] { parse_dialogue_format("pdf"); }) == ErrorCode::UnknownFormat);
}

TEST_CASE("parse-emit round trip is exact") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> names{"Tony Stark", "Pepper", "O'Neil, Jr.", "\"Happy\" Hogan",
                                       "Nick  Fury"};
  const std::vector<std::string> texts{"Hi.", "Well, \"no\".", "a,b,c", "  padded  ", "ok"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string colon;
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    for (int i = 0; i < 20; ++i)
      colon += names[pick(rng)] + ": " + texts[pick(rng)] + "\n";
    auto parsed = parse_dialogue(colon, DialogueFormat::colon, "Movie, The");
    auto again = parse_dialogue(emit_dialogue_csv(parsed.value), DialogueFormat::normalized_csv);
    CHECK(again.report.ok());
    CHECK(same_events(parsed.value, again.value));

    std::string log(kConflictHeader);
    log += "\n";
    std::uniform_int_distribution<int> t(0, 9000);
    for (int i = 0; i < 20; ++i) {
      auto a = pick(rng), b = (a + 1 + pick(rng) % (names.size() - 1)) % names.size();
      log += "\"M, 2\"," + std::to_string(t(rng)) + "," + csv::escape(names[a]) + "," +
             csv::escape(names[b]) + ",D\n";
    }
    auto conflicts = parse_conflict_log(log);
    REQUIRE(conflicts.value.size() == 20);
    auto round = parse_conflict_log(emit_conflict_log(conflicts.value));
    CHECK(same_events(conflicts.value, round.value));
  }
}

TEST_CASE("alias table") {
  SUBCASE("two aliases plus the self-map") {
    auto r = parse_alias_table("canonical,alias\n"
                               "Natasha Romanoff,Black Widow\n"
                               "Natasha Romanoff,Natalie Rushman");
    CHECK(r.value.size() == 3);
    CHECK(r.value.lookup(CharacterId("black  widow"))->display() == "Natasha Romanoff");
    CHECK(r.value.lookup(CharacterId("Natasha Romanoff"))->display() == "Natasha Romanoff");
    CHECK_FALSE(r.value.lookup(CharacterId("Tony")));
  }
  SUBCASE("empty body") {
    CHECK(parse_alias_table("canonical,alias\n").value.empty());
    CHECK(parse_alias_table("").value.empty());
  }
  SUBCASE("conflicting rows") {
    CHECK(code_of([] { parse_alias_table("canonical,alias\nX,Y\nZ,Y\n"); }) ==
          ErrorCode::ConflictingAlias);
    // a canonical name may not also be someone else's alias
    CHECK(code_of([] { parse_alias_table("canonical,alias\nA,B\nB,C\n"); }) ==
          ErrorCode::ConflictingAlias);
  }
  SUBCASE("duplicates warn") {
    auto r = parse_alias_table("canonical,alias\nX,Y\nx,  y\n");
    CHECK(r.value.size() == 2);
    CHECK(r.report.has_warning(DiagCode::DuplicateRow));
  }
  SUBCASE("wrong header") {
    CHECK(code_of([] { parse_alias_table("name,alias\nX,Y\n"); }) == ErrorCode::MissingHeader);
  }
}

TEST_CASE("metadata") {
  const std::string iron_man =
      R"({"title":"Iron Man","movie_type":"origin","budget_musd":140,"box_office_musd":318.3,)"
      R"("imdb_rating":7.9,"release_date":"2008-05-02","runtime_min":126,"script_status":"incomplete"})";
  auto records = parse_metadata("[" + iron_man + "]");
  REQUIRE(records.size() == 1);
  const auto &r = records[0];
  CHECK(r.title == "Iron Man");
  CHECK(r.movie_id == "Iron Man");
  CHECK(r.movie_type == MovieType::origin);
  CHECK(r.budget_musd == 140);
  CHECK(r.box_office_musd == 318.3);
  CHECK(r.script_status == ScriptStatus::incomplete);
  CHECK(format_iso_date(r.release_date) == "2008-05-02");

  auto marvel = parse_metadata(
      R"([{"title":"Captain Marvel","movie_id":"CM","movie_type":"origin","budget_musd":152,)"
      R"("box_office_musd":null,"imdb_rating":null,"release_date":"2019-03-08","runtime_min":123,)"
      R"("script_status":"partial"}])");
  CHECK_FALSE(marvel[0].box_office_musd.has_value());
  CHECK_FALSE(marvel[0].imdb_rating.has_value());
  CHECK(marvel[0].movie_id == "CM");

  auto with = [&](const std::string &key, const std::string &value) {
    auto doc = nlohmann::json::parse(iron_man);
    doc[key] = nlohmann::json::parse(value);
    return "[" + doc.dump() + "]";
  };
  CHECK(code_of([&] { parse_metadata(with("movie_type", "\"comedy\"")); }) ==
        ErrorCode::UnknownMovieType);
  CHECK(code_of([&] { parse_metadata(with("budget_musd", "\"lots\"")); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([&] { parse_metadata(with("release_date", "\"May 2008\"")); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([&] { parse_metadata(with("imdb_rating", "11")); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { parse_metadata(with("runtime_min", "0")); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_metadata("{}"); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_metadata("[1"); }) == ErrorCode::SchemaError);
  try {
    parse_metadata("[" + iron_man + ", {\"title\":\"X\"}]");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("/1/movie_type") != std::string::npos);
  }
}

TEST_CASE("resolve_and_validate") {
  auto aliases = parse_alias_table("canonical,alias\n"
                                   "Natasha Romanoff,Black Widow\n"
                                   "Natasha Romanoff,Natalie Rushman\n")
                     .value;
  SUBCASE("aliases become canonical names") {
    std::vector<ConflictEvent> events{
        {"M", 10, CharacterId("Black Widow"), CharacterId("Loki"), Outcome::A},
        {"M", 20, CharacterId("natalie rushman"), CharacterId("Loki"), Outcome::B}};
    auto r = resolve_and_validate(events, aliases);
    CHECK(r.value[0].side_a.display() == "Natasha Romanoff");
    CHECK(r.value[1].side_a.display() == "Natasha Romanoff");
    CHECK(r.value[0].side_b.display() == "Loki");
    CHECK(r.report.stats.resolved_names == 2);
    CHECK(r.report.stats.unknown_names == 2);
    CHECK(r.value[1].timestamp == 20);
  }
  SUBCASE("empty table leaves events unchanged") {
    std::vector<DialogueEvent> events{{"M", 0, CharacterId("TONY"), "a"},
                                      {"M", 1, CharacterId("TONY"), "b"}};
    auto r = resolve_and_validate(events, AliasTable{});
    CHECK(same_events(r.value, events));
    CHECK(r.report.ok());
  }
  SUBCASE("a name seen once is flagged") {
    std::vector<DialogueEvent> events;
    for (std::size_t i = 0; i < 200; ++i)
      events.push_back({"M", i, CharacterId("Tony Stark"), std::nullopt});
    events.push_back({"M", 200, CharacterId("Tonu Stark"), std::nullopt});
    auto r = resolve_and_validate(events, aliases);
    REQUIRE(r.report.warnings.size() == 1);
    CHECK(r.report.warnings[0].code == DiagCode::LowFrequencyName);
    CHECK(r.report.warnings[0].message.find("Tonu Stark") != std::string::npos);
  }
  SUBCASE("time inversions and alias-induced self conflicts warn") {
    std::vector<ConflictEvent> events{
        {"M", 100, CharacterId("Black Widow"), CharacterId("Natalie Rushman"), Outcome::D},
        {"M", 50, CharacterId("A"), CharacterId("B"), Outcome::D}};
    auto r = resolve_and_validate(events, aliases);
    CHECK(r.report.has_warning(DiagCode::NonMonotoneTime));
    CHECK(r.report.has_warning(DiagCode::SelfConflict));
    CHECK(r.value.size() == 2);
  }
}

TEST_CASE("resolve_and_validate is idempotent and only renames") {
  std::mt19937_64 rng(3);
  auto aliases = parse_alias_table("canonical,alias\n"
                                   "Tony Stark,Iron Man\nTony Stark,TONY\n"
                                   "Steve Rogers,Captain America\nSteve Rogers,Cap\n")
                     .value;
  const std::vector<std::string> pool{"Iron Man", "TONY", "Tony Stark", "Cap", "Loki", "Thor",
                                      "Captain America"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> t(0, 500);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ConflictEvent> events;
    for (int i = 0; i < 30; ++i)
      events.push_back({"M", t(rng), CharacterId(pool[pick(rng)]), CharacterId(pool[pick(rng)]),
                        Outcome::D});
    auto once = resolve_and_validate(events, aliases);
    auto twice = resolve_and_validate(once.value, aliases);
    CHECK(same_events(once.value, twice.value));
    REQUIRE(once.value.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i)
      CHECK(once.value[i].timestamp == events[i].timestamp);
  }
}
