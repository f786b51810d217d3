#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ecp/io/table.hpp"

namespace {

using ecp::io::Table;

TEST(FormatDouble, RoundTripsExactly) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 20000) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(ecp::io::parse_double(ecp::io::format_double(v)), v);
    ++checked;
  }
  for (double v : {0.0, -0.0, 1.0, 0.1, -4.1666666666666663872e-5, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()})
    EXPECT_EQ(ecp::io::parse_double(ecp::io::format_double(v)), v);
}

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(ecp::io::format_double(0.1), "1.0000000000000001e-01");
  EXPECT_EQ(ecp::io::format_double(-2.5), "-2.5000000000000000e+00");
}

TEST(FormatDouble, NonFinite) {
  EXPECT_EQ(ecp::io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(ecp::io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(ecp::io::format_double(std::nan("")), "nan");
  EXPECT_TRUE(std::isinf(ecp::io::parse_double("inf")));
  EXPECT_TRUE(std::isnan(ecp::io::parse_double("nan")));
}

TEST(Parse, RejectsGarbage) {
  EXPECT_THROW(ecp::io::parse_double("1.0x"), ecp::config_error);
  EXPECT_THROW(ecp::io::parse_double(""), ecp::config_error);
  EXPECT_THROW(ecp::io::parse_integer("3.5"), ecp::config_error);
  EXPECT_EQ(ecp::io::parse_integer("-12"), -12);
}

Table sample() {
  Table t;
  t.metadata = {{"tool", "ecp-nanowire"}, {"param J", "0.3 (flag)"}};
  t.columns = {"R", "E_cp", "label"};
  t.rows = {{std::int64_t{1}, -4.1666666666666663872e-5, std::string("a")},
            {std::int64_t{2}, std::numeric_limits<double>::infinity(), std::string("b")}};
  return t;
}

TEST(Csv, LayoutAndReadBack) {
  std::stringstream out;
  ecp::io::write_csv(out, sample());
  EXPECT_EQ(out.str(),
            "# tool: ecp-nanowire\n# param J: 0.3 (flag)\nR,E_cp,label\n"
            "1,-4.1666666666666665e-05,a\n2,inf,b\n");
  const auto doc = ecp::io::read_csv(out);
  ASSERT_EQ(doc.metadata.size(), 2u);
  EXPECT_EQ(doc.metadata[1].key, "param J");
  EXPECT_EQ(doc.metadata[1].value, "0.3 (flag)");
  EXPECT_EQ(doc.columns, (std::vector<std::string>{"R", "E_cp", "label"}));
  ASSERT_EQ(doc.rows.size(), 2u);
  EXPECT_EQ(ecp::io::parse_double(doc.rows[0][doc.column_index("E_cp")]), -4.1666666666666663872e-5);
  EXPECT_THROW(doc.column_index("missing"), ecp::config_error);
}

TEST(Csv, RaggedRowsRejected) {
  std::istringstream in("a,b\n1,2\n3\n");
  EXPECT_THROW(ecp::io::read_csv(in), ecp::config_error);
}

TEST(Json, StructureAndNonFinite) {
  std::stringstream out;
  ecp::io::write_json(out, sample());
  const auto doc = nlohmann::json::parse(out.str());
  EXPECT_EQ(doc["metadata"][0]["key"], "tool");
  EXPECT_EQ(doc["columns"][1], "E_cp");
  EXPECT_EQ(doc["rows"][0][0], 1);
  EXPECT_EQ(doc["rows"][0][1].get<double>(), -4.1666666666666663872e-5);
  EXPECT_EQ(doc["rows"][1][1], "inf");
}

TEST(ForceSeries, ReadsGroupedCurves) {
  const auto sys3 = ecp::SymmetricSystem::from_detuning(2.0, 0.3, -1.0, 0.01, 50);
  const auto sys4 = ecp::SymmetricSystem::from_detuning(2.0, 0.4, -1.0, 0.01, 50);
  Table t;
  t.columns = {"J", "delta", "lambda", "R", "E_cp", "f", "abs_f"};
  for (const auto* sys : {&sys3, &sys4})
    for (const auto& p : ecp::force_curve(*sys, 1, 10).records)
      t.rows.push_back({sys->chain().J, sys->Delta(), sys->lambda(), std::int64_t{p.R}, p.energy, p.force,
                        std::abs(p.force)});
  std::stringstream csv;
  ecp::io::write_csv(csv, t);
  const auto series = ecp::io::read_force_series(csv);
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].J, 0.3);
  EXPECT_EQ(series[1].J, 0.4);
  EXPECT_EQ(series[0].curve, ecp::force_curve(sys3, 1, 10));
  EXPECT_EQ(series[1].curve, ecp::force_curve(sys4, 1, 10));
}

}  // namespace
