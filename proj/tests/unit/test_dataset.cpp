#include <sstream>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "ucp/dataset.hpp"
#include "ucp/error.hpp"
#include "ucp/stats.hpp"

using namespace ucp;

namespace {

const char* kHeader = "id,source,uaw,uucw,tcf,ef,e1,e2,e3,e4,e5,e6,e7,e8,effort\n";

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in, "t");
}

}  // namespace

TEST_CASE("compute_ucp") {
  CHECK(compute_ucp(10, 100, 1.0, 1.0) == 110);
  CHECK(compute_ucp(19, 375, 0.97, 0.96) == doctest::Approx(366.8928).epsilon(1e-12));
  CHECK_THROWS_AS(compute_ucp(0, 100, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(compute_ucp(10, 100, -1.0, 1.0), DomainError);
}

TEST_CASE("compute_pdr and compute_effort") {
  CHECK(compute_pdr(2000, 100) == 20);
  CHECK(compute_pdr(100, 100) == 1);
  CHECK(compute_pdr(9405, 369.8) == doctest::Approx(9405.0 / 369.8));
  CHECK(compute_pdr(9405, 369.8) == doctest::Approx(25.432).epsilon(1e-4));
  CHECK(compute_effort(20, 100) == 2000);
  CHECK(compute_effort(1, 366.8928) == 366.8928);
  CHECK(compute_effort(28, 50) == 1400);
  CHECK_THROWS_AS(compute_pdr(0, 10), DomainError);
  CHECK_THROWS_AS(compute_effort(1, 0), DomainError);
}

TEST_CASE("factor scores are validated") {
  CHECK_THROWS_AS(EnvironmentalAssessment({0, 1, 2, 3, 4, 5, 6, 0}), DomainError);
  CHECK_THROWS_AS(EnvironmentalAssessment({-1, 1, 2, 3, 4, 5, 0, 0}), DomainError);
  const EnvironmentalAssessment e({0, 1, 2, 3, 4, 5, 0, 1});
  CHECK(e.score(1) == 0);
  CHECK(e.score(6) == 5);
  CHECK(e.score(8) == 1);
}

TEST_CASE("project derives ucp and pdr") {
  const auto p = fixtures::project("a", 10, 90, 1.0, 1.0, {3, 3, 3, 3, 3, 3, 3, 3}, 2000);
  CHECK(p.ucp() == 100);
  CHECK(p.pdr() == 20);
  CHECK_THROWS_AS(fixtures::project("a", 10, 90, 1.0, 1.0, {3, 3, 3, 3, 3, 3, 3, 3}, 0), DomainError);
}

TEST_CASE("UCP and PDR round trip on synthetic projects") {
  const auto d = generate_synthetic(3, 500);
  for (const auto& p : d) {
    const double ucp = compute_ucp(p.uaw(), p.uucw(), p.tcf(), p.ef());
    CHECK(fixtures::close_rel(compute_pdr(p.effort(), ucp) * ucp, p.effort(), 1e-9));
  }
}

TEST_CASE("dataset rejects duplicate ids") {
  std::vector<Project> ps{fixtures::project("a", 1, 1, 1, 1, {}, 1), fixtures::project("a", 2, 2, 1, 1, {}, 1)};
  CHECK_THROWS_AS(Dataset("d", ps), Error);
}

TEST_CASE("read_dataset: well-formed file") {
  const auto d = parse(std::string(kHeader) + "p1,industrial,10,90,1,1,3,3,3,3,3,3,3,3,2000\n" +
                       "p2,educational,5,45,0.9,1.1,1,2,3,4,5,0,1,2,1000\n");
  REQUIRE(d.size() == 2);
  CHECK(d[0].id() == "p1");
  CHECK(d[0].pdr() == 20);
  CHECK(d[1].source() == Source::Educational);
  CHECK(d[1].env().score(5) == 5);
}

TEST_CASE("read_dataset: columns in any order") {
  const auto d = parse("effort,id,e8,e7,e6,e5,e4,e3,e2,e1,ef,tcf,uucw,uaw,source\n"
                       "2000,p1,1,2,3,3,3,3,3,4,1,1,90,10,synthetic\n");
  CHECK(d[0].ucp() == 100);
  CHECK(d[0].env().score(1) == 4);
  CHECK(d[0].env().score(8) == 1);
}

TEST_CASE("read_dataset: missing column is named") {
  try {
    parse("id,source,uaw,uucw,tcf,ef,e1,e2,e3,e4,e5,e6,e8,effort\np1,industrial,10,90,1,1,3,3,3,3,3,3,3,2000\n");
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.column() == "e7");
    CHECK(std::string(e.what()).find("e7") != std::string::npos);
  }
}

TEST_CASE("read_dataset: unknown and duplicate columns") {
  try {
    parse(std::string("id,source,uaw,uucw,tcf,ef,e1,e2,e3,e4,e5,e6,e7,e8,effort,extra\n"));
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.column() == "extra");
  }
  try {
    parse(std::string("id,source,uaw,uaw,uucw,tcf,ef,e1,e2,e3,e4,e5,e6,e7,e8,effort\n"));
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.column() == "uaw");
  }
}

TEST_CASE("read_dataset: row errors cite the line") {
  try {
    parse(std::string(kHeader) + "p1,industrial,10,90,1,1,3,3,3,3,3,3,3,3,2000\np2,industrial,10,90,1,1,3,3,3,3,3,3,3,3,0\n");
    FAIL("expected a row error");
  } catch (const RowError& e) {
    CHECK(e.row() == 3);
    CHECK(std::string(e.what()).find("positivity") != std::string::npos);
  }
  CHECK_THROWS_AS(parse(std::string(kHeader) + "p1,industrial,abc,90,1,1,3,3,3,3,3,3,3,3,2000\n"), RowError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + "p1,industrial,10,90,1,1,3,3,3,3,3,3,3,7,2000\n"), RowError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + "p1,industrial,10,90,1,1,3,3,3,3,3,3,3,2000\n"), RowError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + "p1,martian,10,90,1,1,3,3,3,3,3,3,3,3,2000\n"), RowError);
}

TEST_CASE("read_dataset: empty inputs") {
  CHECK_THROWS_AS(parse(""), Error);
  CHECK_THROWS_AS(parse(kHeader), Error);
}

TEST_CASE("write then read is bit-stable") {
  const auto d = generate_synthetic(11, 200);
  std::ostringstream first;
  write_dataset(d, first);
  const auto back = parse(first.str());
  std::ostringstream second;
  write_dataset(back, second);
  CHECK(first.str() == second.str());
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back[i].effort() == d[i].effort());
    CHECK(back[i].tcf() == d[i].tcf());
    CHECK(back[i].env() == d[i].env());
  }
}

TEST_CASE("generate_synthetic is a pure function of (seed, n)") {
  CHECK(generate_synthetic(1, 100) == generate_synthetic(1, 100));
  CHECK_FALSE(generate_synthetic(1, 100) == generate_synthetic(2, 100));
  CHECK_THROWS_AS(generate_synthetic(2, 5), DomainError);
}

TEST_CASE("generate_synthetic matches the PDR targets at scale") {
  const auto d = generate_synthetic(1, 10000);
  const auto m = stats::moments(d.pdrs());
  CHECK(std::abs(m.mean - 18.07) / 18.07 < 0.10);
  CHECK(std::abs(m.stdev - 4.5) / 4.5 < 0.10);
  CHECK(m.skewness > 0);
  // every factor uses several levels
  for (int f = 1; f <= 8; ++f) {
    const auto c = stats::level_counts(d, f);
    int occupied = 0;
    for (auto v : c) occupied += v > 0 ? 1 : 0;
    CHECK(occupied >= 4);
  }
  for (const auto& p : d) CHECK(p.ef() == doctest::Approx(conventional_ef(p.env())).epsilon(1e-3));
}
