#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "anchoralign/edge_list.hpp"
#include "anchoralign/experiment.hpp"
#include "test_support.hpp"

namespace anchoralign {
namespace {

std::string sweep_csv(const std::vector<ExperimentSpec>& specs, unsigned workers) {
  std::ostringstream out;
  SweepOptions options;
  options.workers = workers;
  options.include_timing = false;
  run_sweep(specs, out, options);
  return out.str();
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(ParseSpecs, CorrelatedErForms) {
  const auto specs = parse_specs(R"({"base_seed": 9, "specs": [
    {"id": "a", "model": "correlated-er", "n": 64, "p": [0.25, 0, 0, 0.75], "h": 12,
     "variant": "naive", "trials": 3},
    {"model": "correlated-er", "n": 128, "p11": 0.3, "noise_exponent": 1.1, "h": "default",
     "robust": {"candidates_per_extreme": 10, "restarts": 2, "tie_break": "vertex-id", "use_p": false},
     "matching": {"max_rounds": 2, "refresh": 7, "residue_fallback": false}}
  ]})");
  ASSERT_EQ(specs.size(), 2U);
  EXPECT_EQ(specs[0].id, "a");
  EXPECT_EQ(specs[0].base_seed, 9U);
  EXPECT_EQ(*specs[0].h, 12U);
  EXPECT_EQ(specs[0].align.variant, Variant::naive);
  EXPECT_EQ(specs[0].trials, 3U);
  EXPECT_EQ(specs[1].id, "spec1");
  EXPECT_FALSE(specs[1].h.has_value());
  EXPECT_DOUBLE_EQ(specs[1].model.p11, 0.3);
  EXPECT_EQ(specs[1].align.robust.candidates_per_extreme, 10U);
  EXPECT_EQ(specs[1].align.robust.restarts, 2U);
  EXPECT_EQ(specs[1].align.robust.tie_break, TieBreak::vertex_id);
  EXPECT_FALSE(specs[1].anchors_know_p);
  EXPECT_EQ(specs[1].align.max_rounds, 2U);
  EXPECT_EQ(specs[1].align.refresh, 7U);
  EXPECT_FALSE(specs[1].align.residue_fallback);
  const ProbVector p = resolved_p(specs[1]);
  EXPECT_NEAR(p.p10(), std::pow(128.0, -1.1), 1e-15);
}

TEST(ParseSpecs, OtherModels) {
  const auto specs = parse_specs(R"([
    {"model": "subsampling", "n": 50, "r": 0.2, "s": 0.9},
    {"model": "subsampling", "n": 50, "r": 0.2, "sa": 0.9, "sb": 0.8},
    {"model": "perturbation", "n": 50, "r": 0.2, "delta": 0.01},
    {"model": "file+subsample", "path": "net.el", "s": 0.99}
  ])");
  EXPECT_EQ(specs[0].model.kind, ModelKind::subsampling);
  EXPECT_DOUBLE_EQ(specs[0].model.sb, 0.9);
  EXPECT_DOUBLE_EQ(specs[1].model.sb, 0.8);
  EXPECT_EQ(specs[2].model.kind, ModelKind::perturbation);
  EXPECT_EQ(specs[3].model.kind, ModelKind::file_subsample);
  const ProbVector q = resolved_p(specs[2]);
  EXPECT_EQ(q, ProbVector::from_perturbation(0.2, 0.01));
}

TEST(ParseSpecs, SchemaErrors) {
  const char* bad[] = {
      "[]",
      "{",
      R"([{"model": "correlated-er", "n": 10}])",
      R"([{"model": "correlated-er", "n": 10, "p": [1, 0, 0, 0], "noise_exponent": 1}])",
      R"([{"model": "correlated-er", "n": 10, "p": [1, 0, 0]}])",
      R"([{"model": "correlated-er", "n": 10, "p": [1, 0, 0, 0], "colour": 1}])",
      R"([{"model": "correlated-er", "n": 10, "p": [1, 0, 0, 0], "trials": 0}])",
      R"([{"model": "correlated-er", "n": 10, "p": [1, 0, 0, 0], "h": 0}])",
      R"([{"model": "correlated-er", "n": 10, "p": [1, 0, 0, 0], "variant": "fast"}])",
      R"([{"model": "subsampling", "n": 10, "r": 0.1, "s": 0.5, "sa": 0.5}])",
      R"([{"model": "perturbation", "n": 10, "r": 0.1}])",
      R"([{"model": "mystery", "n": 10}])",
      R"({"specs": [{"model": "perturbation", "n": 10, "r": 0.1, "delta": 0.1}], "base_seed": "x"})",
      R"([{"model": "correlated-er", "n": 10, "p": [1, 0, 0, 0], "robust": {"floor": 1}}])",
  };
  for (const char* text : bad) EXPECT_THROW(parse_specs(text), std::invalid_argument) << text;
}

TEST(Variant, NamesRoundTrip) {
  for (Variant v : {Variant::naive, Variant::consistent_iterative}) {
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  }
  EXPECT_THROW(parse_variant("other"), std::invalid_argument);
}

TEST(RunTrial, DeterministicAndBounded) {
  ExperimentSpec spec;
  spec.id = "det";
  spec.model.n = 200;
  spec.model.noise_exponent = 0.9;
  spec.trials = 2;
  spec.base_seed = 5;
  const TrialRecord a = run_trial(spec, 1);
  const TrialRecord b = run_trial(spec, 1);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.accuracy, b.accuracy);
  EXPECT_EQ(a.anchor_accuracy, b.anchor_accuracy);
  EXPECT_EQ(a.h, b.h);
  EXPECT_GE(a.accuracy, 0.0);
  EXPECT_LE(a.accuracy, 1.0);
  EXPECT_GE(a.total_ms, 0.0);
  EXPECT_NE(trial_seed(spec, 0), trial_seed(spec, 1));
  ExperimentSpec renamed = spec;
  renamed.id = "other";
  EXPECT_NE(trial_seed(spec, 0), trial_seed(renamed, 0));
}

TEST(RunTrial, NoiselessRecovery) {
  ExperimentSpec spec;
  spec.id = "zero-noise";
  spec.model.n = 1024;
  spec.model.p = ProbVector(0.25, 0, 0, 0.75);
  spec.align.variant = Variant::naive;
  spec.trials = 20;
  spec.base_seed = 31;
  int perfect = 0;
  for (std::size_t t = 0; t < spec.trials; ++t) perfect += run_trial(spec, t).accuracy == 1.0;
  EXPECT_GE(perfect, 19);
}

TEST(RunTrial, NoiselessFailuresStartInTheAnchorPhase) {
  ExperimentSpec spec;
  spec.id = "zero-noise";
  spec.model.n = 512;
  spec.model.p = ProbVector(0.25, 0, 0, 0.75);
  spec.align.variant = Variant::naive;
  spec.trials = 20;
  spec.base_seed = 31;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    const TrialRecord r = run_trial(spec, t);
    if (r.accuracy < 1.0) {
      EXPECT_LT(r.anchor_accuracy, 1.0) << "trial " << t;
      EXPECT_TRUE(r.anchor_degree_tie) << "trial " << t;
    }
  }
}

TEST(RunSweep, SingleTrialRowCount) {
  ExperimentSpec spec;
  spec.id = "one";
  spec.model.n = 64;
  spec.model.p = ProbVector(0.3, 0, 0, 0.7);
  const std::string csv = sweep_csv({spec}, 1);
  EXPECT_EQ(count_lines(csv), 3U);
  EXPECT_EQ(csv.rfind("spec_id,trial,seed,n,p11,p10,p01,p00,h,variant,anchor_acc,acc,", 0), 0U);
  EXPECT_NE(csv.find("\none,summary,"), std::string::npos);
  EXPECT_THROW(sweep_csv({}, 1), std::invalid_argument);
}

TEST(RunSweep, ByteIdenticalAcrossRunsAndWorkers) {
  const auto specs = parse_specs(R"({"base_seed": 4, "specs": [
    {"id": "x", "model": "correlated-er", "n": 128, "noise_exponent": 1.0, "trials": 4},
    {"id": "y", "model": "subsampling", "n": 128, "r": 0.3, "s": 0.95, "trials": 3, "variant": "naive"},
    {"id": "z", "model": "perturbation", "n": 96, "r": 0.3, "delta": 0.002, "trials": 3}
  ]})");
  const std::string serial = sweep_csv(specs, 1);
  EXPECT_EQ(serial, sweep_csv(specs, 1));
  EXPECT_EQ(serial, sweep_csv(specs, 3));
  EXPECT_EQ(serial, sweep_csv(specs, 8));
  EXPECT_EQ(count_lines(serial), 1U + 10U + 3U);
}

TEST(RunSweep, CsvRoundTrip) {
  ExperimentSpec spec;
  spec.id = "rt";
  spec.model.n = 64;
  spec.model.noise_exponent = 1.0;
  spec.trials = 3;
  const auto records = run_records(std::vector<ExperimentSpec>{spec});
  std::stringstream csv;
  write_csv(csv, records);
  const auto back = read_csv(csv);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].spec_id, records[i].spec_id);
    EXPECT_EQ(back[i].trial, records[i].trial);
    EXPECT_EQ(back[i].seed, records[i].seed);
    EXPECT_EQ(back[i].n, records[i].n);
    EXPECT_EQ(back[i].h, records[i].h);
    EXPECT_NEAR(back[i].accuracy, records[i].accuracy, 5e-7);
  }
}

TEST(RunSweep, MeanAccuracyRisesWithN) {
  // Fig. 2 trend at noise exponents 1.0 to 1.2 over log2 n = 7..10.
  for (double exponent : {1.0, 1.1, 1.2}) {
    std::vector<ExperimentSpec> specs;
    for (int k = 7; k <= 10; ++k) {
      ExperimentSpec s;
      s.id = "fig2-" + std::to_string(k);
      s.model.n = std::size_t{1} << k;
      s.model.noise_exponent = exponent;
      s.trials = 20;
      s.base_seed = 7;
      specs.push_back(s);
    }
    SweepOptions options;
    options.include_timing = false;
    const auto records = run_records(specs, options);
    std::vector<double> mean(4, 0.0);
    for (const TrialRecord& r : records) {
      mean[static_cast<std::size_t>(std::log2(static_cast<double>(r.n))) - 7] += r.accuracy / 20.0;
    }
    EXPECT_GT(mean[3], mean[0]) << "exponent " << exponent;
    if (exponent >= 1.2) {
      for (std::size_t i = 1; i < 4; ++i) EXPECT_GE(mean[i], mean[i - 1]) << "exponent " << exponent;
    }
  }
}

TEST(FileModel, SubsamplesLoadedGraph) {
  const auto dir = std::filesystem::temp_directory_path() / "anchoralign_file_model";
  std::filesystem::create_directories(dir);
  const auto path = dir / "net.el";
  write_edge_list(testing::random_graph(120, 0.2, 3), path);
  ExperimentSpec spec;
  spec.id = "file";
  spec.model.kind = ModelKind::file_subsample;
  spec.model.path = path;
  spec.model.s = 1.0;
  spec.h = 12;
  spec.trials = 2;
  const TrialRecord r = run_trial(spec, 0);
  EXPECT_EQ(r.n, read_edge_list(path).graph.size());
  EXPECT_GT(r.accuracy, 0.9);
  std::filesystem::remove_all(dir);
}

TEST(SubsampleReal, ForcedCases) {
  const Graph g = testing::random_graph(30, 0.3, 8);
  const CorrelatedPair all = subsample_real(g, 1.0, 2);
  EXPECT_EQ(all.ga, g);
  EXPECT_EQ(all.gb, g);
  EXPECT_EQ(all.truth, Alignment::identity(30));
  const CorrelatedPair none = subsample_real(g, 0.0, 2);
  EXPECT_EQ(none.ga.edge_count() + none.gb.edge_count(), 0U);
}

TrialRecord timed(std::size_t n, double ms) {
  TrialRecord r;
  r.n = n;
  r.total_ms = ms;
  return r;
}

TEST(TimingReport, ExactScalingGivesEqualFactors) {
  std::vector<TrialRecord> records;
  for (std::size_t n : {256U, 512U, 1024U}) {
    const double ms = 0.5 * static_cast<double>(n * n) * std::log2(static_cast<double>(n)) / 1e6;
    records.push_back(timed(n, ms));
    records.push_back(timed(n, ms));
  }
  const TimingReport r = timing_report(records);
  ASSERT_EQ(r.rows.size(), 3U);
  for (const TimingRow& row : r.rows) {
    EXPECT_NEAR(row.scale, 0.5, 1e-12);
    EXPECT_EQ(row.runs, 2U);
  }
  EXPECT_NEAR(r.spread, 1.0, 1e-12);
}

TEST(TimingReport, ConstantTimeFactorsFall) {
  const TimingReport r = timing_report(std::vector<TrialRecord>{timed(64, 5), timed(128, 5), timed(256, 5)});
  EXPECT_GT(r.rows[0].scale, r.rows[1].scale);
  EXPECT_GT(r.rows[1].scale, r.rows[2].scale);
  EXPECT_GT(r.spread, 1.0);
  std::ostringstream out;
  write_timing(out, r);
  EXPECT_NE(out.str().find("spread"), std::string::npos);
}

TEST(TimingReport, NeedsThreeSizes) {
  EXPECT_THROW(timing_report(std::vector<TrialRecord>{timed(64, 1), timed(128, 1)}),
               std::invalid_argument);
}

TEST(Median, EvenAndOdd) {
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median({4, 1, 3, 2}), 2.5);
}

}  // namespace
}  // namespace anchoralign
