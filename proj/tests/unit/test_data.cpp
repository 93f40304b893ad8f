#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "cardio/data.hpp"
#include "cardio/error.hpp"
#include "synthetic.hpp"

using namespace cardio;

namespace {

const char* kKaggleSample =
    "id;age;gender;height;weight;ap_hi;ap_lo;cholesterol;gluc;smoke;alco;active;cardio\n"
    "0;18393;2;168;62.0;110;80;1;1;0;0;1;0\n"
    "1;20228;1;156;85.0;140;90;3;1;0;0;1;1\n"
    "2;18857;1;165;64.0;130;70;3;1;0;0;0;1\n";

Dataset parse(const std::string& s, char delim = ';') {
  std::istringstream in(s);
  return read_csv(in, delim, "sample.csv");
}

}  // namespace

TEST_CASE("read_csv maps Kaggle column order by header name") {
  auto d = parse(kKaggleSample);
  REQUIRE(d.size() == 3);
  const auto& r = d.records[1];
  CHECK(r.age == 20228);
  CHECK(r.gender == 1);
  CHECK(r.height == 156);
  CHECK(r.weight == 85.0);
  CHECK(r.ap_hi == 140);
  CHECK(r.cholesterol == 3);
  CHECK(r.cardio == 1);
  CHECK(d.provenance.rows_loaded == 3);
  CHECK(d.class_counts() == std::array<std::size_t, 2>{1, 2});
}

TEST_CASE("read_csv accepts description order, a BOM, CRLF and other delimiters") {
  std::string s = "\xEF\xBB\xBF" "age,height,weight,gender,ap_hi,ap_lo,cholesterol,gluc,smoke,alco,active,cardio\r\n"
                  "18393,168,62.5,2,110,80,1,1,0,0,1,0\r\n";
  auto d = parse(s, ',');
  REQUIRE(d.size() == 1);
  CHECK(d.records[0].weight == 62.5);
  CHECK(d.records[0].gender == 2);
}

TEST_CASE("load errors carry line and row") {
  std::string bad = kKaggleSample;
  bad += "3;17623;2;169;82.0;150;100;1;1;0;0;1;x\n";
  try {
    parse(bad);
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(e.line() == 5);
    CHECK(e.row() == 4);
    CHECK(std::string(e.what()).find("sample.csv:5: row 4") == 0);
  }
  CHECK_THROWS_AS(parse("age;height\n1;2\n"), LoadError);
  CHECK_THROWS_AS(parse(std::string(kKaggleSample) + "9;1;1;1\n"), LoadError);
  // gender outside {1, 2}
  CHECK_THROWS_AS(parse(std::string(kKaggleSample) + "9;18000;3;160;60;120;80;1;1;0;0;1;0\n"),
                  LoadError);
  CHECK_THROWS_AS(load_csv("/nonexistent/cardio.csv"), LoadError);
}

TEST_CASE("validate reports the first domain violation") {
  PatientRecord r;
  r.age = 18000;
  r.height = 165;
  r.weight = 70;
  CHECK(validate(r).empty());
  r.cholesterol = 4;
  CHECK(validate(r).find("cholesterol") != std::string::npos);
}

TEST_CASE("write_csv then read_csv is the identity") {
  auto d = testing::make_cohort(300, 5);
  std::stringstream io;
  write_csv(d, io);
  auto back = read_csv(io, ';');
  CHECK(back.records == d.records);
}

TEST_CASE("deduplicate matches a quadratic first-occurrence oracle") {
  auto d = testing::make_cohort(400, 9);
  Rng rng(1);
  for (int i = 0; i < 150; ++i) d.records.push_back(d.records[uniform_index(rng, d.records.size())]);
  shuffle(std::span<PatientRecord>(d.records), rng);

  std::vector<PatientRecord> oracle;
  for (const auto& r : d.records)
    if (std::find(oracle.begin(), oracle.end(), r) == oracle.end()) oracle.push_back(r);

  auto out = deduplicate(d);
  CHECK(out.records == oracle);
  CHECK(out.provenance.duplicates_removed == d.size() - oracle.size());

  auto again = deduplicate(out);
  CHECK(again.records == out.records);
  CHECK(again.size() == out.size());
}

TEST_CASE("split_indices partitions deterministically") {
  for (std::size_t n : {2, 3, 10, 101, 1000}) {
    auto [train, test] = split_indices(n, 0.6, 42);
    CHECK(train.size() == n * 6 / 10);
    CHECK(train.size() + test.size() == n);
    std::set<std::size_t> all(train.begin(), train.end());
    all.insert(test.begin(), test.end());
    CHECK(all.size() == n);
    CHECK(split_indices(n, 0.6, 42).first == train);
  }
  CHECK(split_indices(1000, 0.6, 1).first != split_indices(1000, 0.6, 2).first);
  CHECK_THROWS(split_indices(1, 0.6, 1));
  CHECK_THROWS(split_indices(10, 1.0, 1));
}

TEST_CASE("stratified folds partition the data and balance classes") {
  auto d = testing::make_cohort(997, 4);
  const auto counts = d.class_counts();
  auto folds = stratified_folds(d, 10, 8);
  REQUIRE(folds.size() == 10);
  std::vector<int> hit(d.size(), 0);
  for (const auto& f : folds) {
    CHECK(f.size() >= d.size() / 10);
    CHECK(f.size() <= d.size() / 10 + 1);
    std::size_t pos = 0;
    for (auto i : f) {
      ++hit[i];
      pos += d.records[i].cardio;
    }
    const double expected = static_cast<double>(counts[1]) * f.size() / d.size();
    CHECK(std::abs(static_cast<double>(pos) - expected) <= 1.5);
  }
  CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  CHECK(stratified_folds(d, 10, 8) == folds);
  CHECK_THROWS(stratified_folds(d, 1, 8));
  CHECK_THROWS(stratified_folds(d.subset({0, 1, 2}), 5, 8));
}

TEST_CASE("fingerprint tracks content") {
  auto d = testing::make_cohort(50, 2);
  auto fp = fingerprint(d);
  CHECK(fingerprint(d) == fp);
  d.records[10].ap_hi += 1;
  CHECK(fingerprint(d) != fp);
}
