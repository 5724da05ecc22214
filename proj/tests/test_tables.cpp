#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "hydrolamb/tables.hpp"
#include "report.hpp"

using namespace hydrolamb;

namespace {
const std::vector<ReferenceRow>& refs() {
  static const auto r = read_references_file(HYDROLAMB_TEST_REFERENCES);
  return r;
}

std::size_t count(int id) {
  std::size_t n = 0;
  for (const auto& r : refs()) n += r.table_id == id;
  return n;
}
}  // namespace

TEST(References, FixtureShape) {
  EXPECT_EQ(count(1), 20u);
  EXPECT_EQ(count(2), 23u);
  EXPECT_EQ(count(3), 21u);
  std::set<std::string> keys;
  for (const auto& r : refs())
    if (r.table_id == 1) keys.insert(r.row_key);
  EXPECT_EQ(keys.size(), 13u);
}

TEST(References, ParserHandlesQuotedKeys) {
  std::istringstream in("# c\ntable_id,row_key,N,L,J,quantity,unit,value\n1,\"(2,1,1)\",2,1,,lamb_shift,MHz,4.09715\n");
  const auto r = read_references(in);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].row_key, "(2,1,1)");
  EXPECT_FALSE(r[0].J.has_value());
  EXPECT_EQ(r[0].value, 4.09715);
}

TEST(References, ParserRejectsMalformed) {
  std::istringstream no_header("1,\"(1,0,1)\",1,0,,lamb_shift,MHz,1\n");
  EXPECT_THROW(read_references(no_header), std::invalid_argument);
  std::istringstream bad_value("table_id,row_key,N,L,J,quantity,unit,value\n1,k,1,0,,lamb_shift,MHz,2x\n");
  EXPECT_THROW(read_references(bad_value), std::invalid_argument);
  std::istringstream open_quote("table_id,row_key,N,L,J,quantity,unit,value\n1,\"k,1,0,,q,u,1\n");
  EXPECT_THROW(read_references(open_quote), std::invalid_argument);
  EXPECT_THROW(read_references_file("/nonexistent.csv"), std::runtime_error);
}

TEST(GenerateTable, NonDipoleCoversAllRows) {
  const auto rows = generate_table(1, refs());
  ASSERT_EQ(rows.size(), 20u);
  std::set<std::pair<int, int>> states;
  std::set<std::string> keys;
  for (const auto& r : rows) {
    states.insert({r.N, r.L});
    keys.insert(r.row_key);
    EXPECT_TRUE(r.converged);
    EXPECT_TRUE(r.reference.has_value());
    if (*r.reference == 0.0) {
      EXPECT_FALSE(r.rel_dev.has_value());
      EXPECT_EQ(r.computed, 0.0);
    } else {
      EXPECT_TRUE(r.rel_dev.has_value());
    }
  }
  EXPECT_EQ(keys.size(), 13u);
  EXPECT_EQ(states.size(), 7u);
}

TEST(GenerateTable, SStateDipoleTable) {
  const auto rows = generate_table(2, refs());
  std::set<int> with_bethe, with_excitation;
  for (const auto& r : rows) {
    EXPECT_EQ(r.L, 0);
    if (r.quantity == "bethe_log") with_bethe.insert(r.N);
    if (r.quantity == "mean_excitation") with_excitation.insert(r.N);
    if (r.rel_dev) EXPECT_LT(std::abs(*r.rel_dev), 1e-3) << r.row_key << " " << r.quantity;
  }
  EXPECT_EQ(with_bethe, (std::set<int>{1, 2, 3, 4}));
  EXPECT_EQ(with_excitation, (std::set<int>{1, 2, 3, 4}));
}

TEST(GenerateTable, PStateDipoleTable) {
  const auto rows = generate_table(3, refs());
  std::set<std::pair<int, double>> shifts;
  for (const auto& r : rows) {
    EXPECT_EQ(r.L, 1);
    if (r.quantity == "lamb_shift") shifts.insert({r.N, *r.J});
  }
  std::set<std::pair<int, double>> expect;
  for (int N = 2; N <= 4; ++N) {
    expect.insert({N, 0.5});
    expect.insert({N, 1.5});
  }
  EXPECT_EQ(shifts, expect);
}

TEST(GenerateTable, RejectsUnknownId) {
  EXPECT_THROW(generate_table(4, refs()), std::invalid_argument);
  std::vector<ReferenceRow> bogus{{1, "k", 1, 0, {}, "mystery", "1", 1.0}};
  EXPECT_THROW(generate_table(1, bogus), std::invalid_argument);
}

TEST(Report, TwelveSignificantDigits) {
  using report::render;
  EXPECT_EQ(render(4.086179391234567), "4.08617939123");
  EXPECT_EQ(render(0.0), "0");
  EXPECT_EQ(render(-0.0), "0");
  EXPECT_EQ(render(626.0), "626");
  EXPECT_EQ(render(1.5e-20), report::number(1.5e-20).dump());
  for (double x : {7936.290041234, -12.88389312345, 3.49696511955233e-05, 1e300})
    EXPECT_EQ(render(x), report::number(x).dump());
}

TEST(Report, CsvEscape) {
  EXPECT_EQ(report::csv_escape("plain"), "plain");
  EXPECT_EQ(report::csv_escape("(1,0,1)"), "\"(1,0,1)\"");
  EXPECT_EQ(report::csv_escape("a\"b"), "\"a\"\"b\"");
}
