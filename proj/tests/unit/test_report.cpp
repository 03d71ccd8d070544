#include <gtest/gtest.h>

#include <cmath>

#include "padeval/corpus.hpp"
#include "padeval/error.hpp"
#include "padeval/report.hpp"
#include "padeval/text.hpp"
#include "published_results.hpp"
#include "temp_dir.hpp"

namespace padeval {
namespace {

using testing::TempDir;

MetricsReport sample_report() {
  ScorePartition p;
  p.bona_fide = {0.9, 0.8, 0.75, 0.6, 0.4};
  p.attacks[PaisKind::kPrint] = {0.1, 0.2, 0.5};
  p.attacks[PaisKind::kScreen] = {0.3, 0.05};
  p.attacks[PaisKind::kComposite] = {0.7, 0.0};
  return evaluate_partition(p, "r1");
}

TEST(FormatPercent, HalfUpTwoDecimals) {
  EXPECT_EQ(format_percent(0.40479), "40.48");
  EXPECT_EQ(format_percent(0.0), "0.00");
  EXPECT_EQ(format_percent(1.0), "100");
  EXPECT_EQ(format_percent(0.12345), "12.35");
  EXPECT_EQ(format_percent(0.1), "10.00");
  EXPECT_EQ(format_percent(0.99999), "100.00");
  EXPECT_THROW(format_percent(1.5), RenderError);
  EXPECT_THROW(format_percent(-0.01), RenderError);
}

TEST(RenderRankTable, TextAndCsv) {
  RankedTable t;
  t.rows.push_back({1, "dragons", 0.1134, 0.1321, 0.2439, 0.6104, av_rank(0.1321, 0.2439, 0.6104)});
  const auto r = render_rank_table(t);
  EXPECT_EQ(r.csv,
            "Rank,Team,EER,BPCER10,BPCER20,BPCER100,AVRank\n"
            "1,dragons,11.34,13.21,24.39,61.04,40.48\n");
  EXPECT_NE(r.text.find("dragons"), std::string::npos);
  EXPECT_NE(r.text.find("40.48"), std::string::npos);
}

TEST(RenderRankTable, Errors) {
  EXPECT_THROW(render_rank_table(RankedTable{}), RenderError);
  RankedTable t;
  t.rows.push_back({1, "", 0.1, 0.1, 0.1, 0.1, 0.1});
  EXPECT_THROW(render_rank_table(t), RenderError);
}

TEST(Probit, KnownValues) {
  EXPECT_EQ(probit(0.5), 0.0);
  EXPECT_NEAR(probit(normal_cdf(-2.0)), -2.0, 1e-12);
  EXPECT_NEAR(probit(0.975), 1.959963984540054, 1e-12);
}

TEST(DetCsv, ClampsBeforeQuantile) {
  const DetCurve c = {{0.0, 1.0, 0.0}, {0.5, 0.5, 0.25}, {kThresholdAboveMax, 0.0, 1.0}};
  const auto csv = det_csv(c, 4, 10);
  const auto rows = text::lines(csv);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "threshold,apcer,bpcer,apcer_probit,bpcer_probit");
  const auto first = text::split(rows[1], ',');
  double ap = 0, bp = 0;
  ASSERT_TRUE(text::parse_double(first[3], ap));
  ASSERT_TRUE(text::parse_double(first[4], bp));
  EXPECT_NEAR(ap, probit(1.0 - 1.0 / 20), 1e-12);
  EXPECT_NEAR(bp, probit(1.0 / 8), 1e-12);
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (const auto& f : text::split(rows[i], ',')) {
      double v = 0;
      ASSERT_TRUE(text::parse_double(f, v)) << rows[i];
      EXPECT_TRUE(std::isfinite(v));
    }
}

TEST(ExportDet, GlobalAndPerPais) {
  TempDir dir;
  const auto rep = sample_report();
  EXPECT_EQ(export_det(rep, DetScope::kGlobal, dir.path()).size(), 1u);
  EXPECT_TRUE(std::filesystem::exists(dir / "det_global.csv"));
  const auto files = export_det(rep, DetScope::kPais, dir.path());
  EXPECT_EQ(files.size(), 3u);
  for (const char* k : {"print", "screen", "composite"})
    EXPECT_TRUE(std::filesystem::exists(dir / (std::string("det_pais_") + k + ".csv"))) << k;
}

TEST(ExportDet, MissingScopeListsAvailable) {
  TempDir dir;
  try {
    export_det(sample_report(), DetScope::kCountry, dir.path());
    FAIL();
  } catch (const RenderError& e) {
    EXPECT_NE(std::string(e.what()).find("global"), std::string::npos) << e.what();
  }
}

TEST(ExportReport, RoundTripIsByteIdentical) {
  const auto rep = sample_report();
  const auto json = export_report(rep);
  const auto back = parse_report(json);
  EXPECT_EQ(back, rep);
  EXPECT_EQ(export_report(back), json);
}

TEST(ExportReport, EmptyBreakdownsOmitted) {
  const auto json = export_report(sample_report());
  EXPECT_EQ(json.find("per_country"), std::string::npos);
  EXPECT_EQ(json.find("null"), std::string::npos);
  EXPECT_NE(json.find("\"per_pais\""), std::string::npos);
}

TEST(ExportReport, AvRankSelfCheck) {
  auto rep = sample_report();
  rep.av_rank += 1e-6;
  EXPECT_THROW(export_report(rep), RenderError);
}

TEST(ParseReport, PartialReportComputesAvRank) {
  const auto r = parse_report(R"({"run_id": "x", "global": {"eer": 0.1,
      "bpcer_ap": {"10": {"bpcer": 0.2}, "20": {"bpcer": 0.3}, "100": {"bpcer": 0.4}}}})");
  EXPECT_DOUBLE_EQ(r.av_rank, 0.2 * 0.2 + 0.3 * 0.3 + 0.5 * 0.4);
  EXPECT_THROW(parse_report(R"({"global": {"eer": 0.1}})"), RenderError);
  EXPECT_THROW(parse_report("[]"), RenderError);
}

TEST(ReportFilename, FromRunId) {
  EXPECT_EQ(report_filename(sample_report()), "report_r1.json");
  EXPECT_EQ(report_filename(MetricsReport{}), "report.json");
}

TEST(PublishedTables, RecomputedAvRankWithinOneHundredth) {
  // Printed BPCERs are themselves rounded, so a recomputed value can land one
  // hundredth away from the printed AVRank.
  for (const auto& row : testing::published_rows()) {
    const double r = av_rank(row.b10 / 100, row.b20 / 100, row.b100 / 100);
    EXPECT_NEAR(r * 100, row.av_rank, 0.0101) << row.team;
  }
}

}  // namespace
}  // namespace padeval
