#pragma once

// Monte Carlo experiment specs, trial execution, CSV sweeps and run-time
// scaling reports.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anchoralign/edge_list.hpp"
#include "anchoralign/full_align.hpp"
#include "anchoralign/models.hpp"

namespace anchoralign {

enum class ModelKind { correlated_er, subsampling, perturbation, file_subsample };

struct ModelSpec {
  ModelKind kind = ModelKind::correlated_er;
  std::size_t n = 0;
  /// correlated_er: either an explicit vector or p11 with a noise exponent,
  /// giving p10 = p01 = n^-exponent.
  std::optional<ProbVector> p;
  double p11 = 0.25;
  std::optional<double> noise_exponent;
  /// subsampling: parent density and keep rates; perturbation: r and delta.
  double r = 0.0;
  double sa = 0.0;
  double sb = 0.0;
  double delta = 0.0;
  /// file_subsample: edge list and keep rate for both copies.
  std::filesystem::path path;
  double s = 0.0;
  /// Parsed file, shared between trials; loaded on demand when empty.
  std::shared_ptr<const LabeledGraph> loaded;
};

struct ExperimentSpec {
  std::string id;
  ModelSpec model;
  /// Unset means the default anchor count for (n, p).
  std::optional<std::size_t> h;
  AlignConfig align;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  /// Hand the generating distribution to the robust anchor phase when its
  /// density threshold is not set explicitly.
  bool anchors_know_p = true;
};

/// Throws std::invalid_argument when the spec is inconsistent.
void validate(const ExperimentSpec& spec);

std::string_view variant_name(Variant v);
/// Accepts "naive" and "consistent-iterative".
Variant parse_variant(std::string_view name);

/// Reads the JSON experiment schema (an array of specs, or an object with a
/// "specs" array and optional top-level "base_seed"). Throws
/// std::invalid_argument on schema errors.
std::vector<ExperimentSpec> parse_specs(std::string_view json_text);
std::vector<ExperimentSpec> load_specs(const std::filesystem::path& path);

struct TrialRecord {
  std::string spec_id;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  ProbVector p{0.0, 0.0, 0.0, 1.0};
  std::size_t h = 0;
  Variant variant = Variant::naive;
  double anchor_accuracy = 0.0;
  double accuracy = 0.0;
  double total_ms = 0.0;
  double anchor_ms = 0.0;
  double match_ms = 0.0;
  /// Some gap among the top h + 1 degrees of G_a is zero.
  bool anchor_degree_tie = false;
};

/// Seed of one trial: derived from the base seed, the spec id and the trial
/// index only.
std::uint64_t trial_seed(const ExperimentSpec& spec, std::size_t trial);

/// The edge-class distribution a spec's pairs are drawn from (estimated from
/// the edge density for file models).
ProbVector resolved_p(const ExperimentSpec& spec);

/// Samples (or loads and subsamples) a pair, scrambles G_b, aligns and scores
/// the result. Deterministic apart from the timing fields.
TrialRecord run_trial(const ExperimentSpec& spec, std::size_t trial);

/// Each edge of g kept in each copy independently with probability s.
CorrelatedPair subsample_real(const Graph& g, double s, std::uint64_t seed);

struct SweepOptions {
  /// Concurrent trials; 0 uses the hardware concurrency.
  unsigned workers = 1;
  /// When false the time columns are written as 0 so output is byte-stable.
  bool include_timing = true;
};

/// All (spec, trial) records in spec order, then trial order.
std::vector<TrialRecord> run_records(std::span<const ExperimentSpec> specs,
                                     const SweepOptions& options = {});

/// Header, one row per trial and one "summary" row per spec carrying the mean
/// and median accuracy in the trailing acc_mean and acc_median columns.
void write_csv(std::ostream& out, std::span<const TrialRecord> records, bool include_timing = true);

/// run_records followed by write_csv. Throws std::invalid_argument on an
/// empty spec list.
void run_sweep(std::span<const ExperimentSpec> specs, std::ostream& out,
               const SweepOptions& options = {});

/// Parses CSV produced by write_csv back into records (summary rows skipped).
std::vector<TrialRecord> read_csv(std::istream& in);

double median(std::vector<double> values);

struct TimingRow {
  std::size_t n = 0;
  std::size_t runs = 0;
  double mean_ms = 0.0;
  /// mean_ms * 1e6 / (n^2 log2 n): nanoseconds per unit of n^2 log2 n.
  double scale = 0.0;
};

struct TimingReport {
  std::vector<TimingRow> rows;
  /// max(scale) / min(scale).
  double spread = 0.0;
};

/// Throws std::invalid_argument when fewer than three distinct n are present.
TimingReport timing_report(std::span<const TrialRecord> records);
void write_timing(std::ostream& out, const TimingReport& report);

}  // namespace anchoralign
