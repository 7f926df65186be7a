#include "anchoralign/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "anchoralign/anchors.hpp"
#include "anchoralign/bounds.hpp"
#include "anchoralign/rng.hpp"

namespace anchoralign {

namespace {

using Json = nlohmann::json;

constexpr const char* kCsvHeader =
    "spec_id,trial,seed,n,p11,p10,p01,p00,h,variant,anchor_acc,acc,t_total_ms,t_anchor_ms,"
    "t_match_ms,acc_mean,acc_median";

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

std::string prob(double x) { return fmt("%.10g", x); }
std::string ratio(double x) { return fmt("%.6f", x); }
std::string millis(double x) { return fmt("%.3f", x); }

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw std::invalid_argument("spec " + where + ": " + what);
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) schema_error(where, "unknown key '" + key + "'");
  }
}

double get_number(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number()) schema_error(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    schema_error(where, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool get_bool(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_boolean()) schema_error(where, std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

TieBreak parse_tie_break(const Json& v, const std::string& where) {
  const std::string name = v.is_string() ? v.get<std::string>() : "";
  if (name == "vertex-id") return TieBreak::vertex_id;
  if (name == "neighbor-degree-sum") return TieBreak::neighbor_degree_sum;
  schema_error(where, "tie_break must be \"vertex-id\" or \"neighbor-degree-sum\"");
}

void parse_robust(const Json& obj, ExperimentSpec& spec, const std::string& where) {
  check_keys(obj,
             {"candidates_per_extreme", "prune_floor", "density_threshold", "min_degree_ratio",
              "max_iters", "restarts", "tie_break", "use_p"},
             where);
  RobustConfig& r = spec.align.robust;
  if (obj.contains("candidates_per_extreme")) {
    r.candidates_per_extreme = get_count(obj, "candidates_per_extreme", where);
  }
  if (obj.contains("prune_floor")) r.prune_floor = get_count(obj, "prune_floor", where);
  if (obj.contains("density_threshold")) {
    r.density_threshold = get_number(obj, "density_threshold", where);
  }
  if (obj.contains("min_degree_ratio")) r.min_degree_ratio = get_number(obj, "min_degree_ratio", where);
  if (obj.contains("max_iters")) r.max_iters = get_count(obj, "max_iters", where);
  if (obj.contains("restarts")) r.restarts = get_count(obj, "restarts", where);
  if (obj.contains("tie_break")) r.tie_break = parse_tie_break(obj["tie_break"], where);
  if (obj.contains("use_p")) spec.anchors_know_p = get_bool(obj, "use_p", where);
}

void parse_matching(const Json& obj, AlignConfig& cfg, const std::string& where) {
  check_keys(obj, {"max_rounds", "refresh", "residue_fallback", "tie_break"}, where);
  if (obj.contains("max_rounds")) cfg.max_rounds = get_count(obj, "max_rounds", where);
  if (obj.contains("refresh")) cfg.refresh = get_count(obj, "refresh", where);
  if (obj.contains("residue_fallback")) cfg.residue_fallback = get_bool(obj, "residue_fallback", where);
  if (obj.contains("tie_break")) cfg.tie_break = parse_tie_break(obj["tie_break"], where);
}

ExperimentSpec parse_spec(const Json& obj, std::size_t index, std::uint64_t default_seed) {
  std::string where = "#" + std::to_string(index);
  check_keys(obj,
             {"id", "model", "n", "p", "p11", "noise_exponent", "r", "sa", "sb", "s", "delta",
              "path", "h", "variant", "trials", "base_seed", "robust", "matching"},
             where);
  ExperimentSpec spec;
  spec.base_seed = default_seed;
  spec.id = "spec" + std::to_string(index);
  if (obj.contains("id")) {
    if (!obj["id"].is_string()) schema_error(where, "'id' must be a string");
    spec.id = obj["id"].get<std::string>();
    where = "'" + spec.id + "'";
  }
  if (!obj.contains("model") || !obj["model"].is_string()) schema_error(where, "'model' is required");
  const std::string model = obj["model"].get<std::string>();
  ModelSpec& m = spec.model;
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
      if (obj.contains(key)) schema_error(where, std::string("'") + key + "' does not apply to model " + model);
    }
  };
  auto need = [&](const char* key) {
    if (!obj.contains(key)) schema_error(where, std::string("model ") + model + " needs '" + key + "'");
  };
  if (model == "correlated-er") {
    m.kind = ModelKind::correlated_er;
    need("n");
    forbid({"r", "sa", "sb", "s", "delta", "path"});
    const bool explicit_p = obj.contains("p");
    const bool exponent = obj.contains("noise_exponent");
    if (explicit_p == exponent) {
      schema_error(where, "give exactly one of 'p' and 'noise_exponent'");
    }
    if (explicit_p) {
      if (obj.contains("p11")) schema_error(where, "'p11' conflicts with 'p'");
      const Json& p = obj["p"];
      if (!p.is_array() || p.size() != 4 || !std::all_of(p.begin(), p.end(), [](const Json& x) { return x.is_number(); })) {
        schema_error(where, "'p' must be an array of four numbers");
      }
      m.p = ProbVector(p[0].get<double>(), p[1].get<double>(), p[2].get<double>(), p[3].get<double>());
    } else {
      m.noise_exponent = get_number(obj, "noise_exponent", where);
      if (obj.contains("p11")) m.p11 = get_number(obj, "p11", where);
    }
  } else if (model == "subsampling") {
    m.kind = ModelKind::subsampling;
    need("n");
    need("r");
    forbid({"p", "p11", "noise_exponent", "delta", "path"});
    m.r = get_number(obj, "r", where);
    if (obj.contains("s")) {
      if (obj.contains("sa") || obj.contains("sb")) schema_error(where, "'s' conflicts with 'sa'/'sb'");
      m.sa = m.sb = get_number(obj, "s", where);
    } else {
      need("sa");
      need("sb");
      m.sa = get_number(obj, "sa", where);
      m.sb = get_number(obj, "sb", where);
    }
  } else if (model == "perturbation") {
    m.kind = ModelKind::perturbation;
    need("n");
    need("r");
    need("delta");
    forbid({"p", "p11", "noise_exponent", "sa", "sb", "s", "path"});
    m.r = get_number(obj, "r", where);
    m.delta = get_number(obj, "delta", where);
  } else if (model == "file+subsample") {
    m.kind = ModelKind::file_subsample;
    need("path");
    need("s");
    forbid({"n", "p", "p11", "noise_exponent", "r", "sa", "sb", "delta"});
    if (!obj["path"].is_string()) schema_error(where, "'path' must be a string");
    m.path = obj["path"].get<std::string>();
    m.s = get_number(obj, "s", where);
  } else {
    schema_error(where, "unknown model '" + model + "'");
  }
  if (obj.contains("n")) m.n = get_count(obj, "n", where);

  if (obj.contains("h")) {
    const Json& h = obj["h"];
    if (h.is_string() && h.get<std::string>() == "default") {
      spec.h.reset();
    } else if (h.is_number_unsigned()) {
      spec.h = h.get<std::size_t>();
    } else {
      schema_error(where, "'h' must be a positive integer or \"default\"");
    }
  }
  if (obj.contains("variant")) {
    if (!obj["variant"].is_string()) schema_error(where, "'variant' must be a string");
    try {
      spec.align.variant = parse_variant(obj["variant"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      schema_error(where, e.what());
    }
  }
  if (obj.contains("trials")) spec.trials = get_count(obj, "trials", where);
  if (obj.contains("base_seed")) spec.base_seed = obj["base_seed"].get<std::uint64_t>();
  if (obj.contains("robust")) parse_robust(obj["robust"], spec, where + " robust");
  if (obj.contains("matching")) parse_matching(obj["matching"], spec.align, where + " matching");
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    schema_error(where, e.what());
  }
  return spec;
}

const Graph& loaded_graph(const ExperimentSpec& spec, std::shared_ptr<const LabeledGraph>& holder) {
  holder = spec.model.loaded;
  if (!holder) holder = std::make_shared<const LabeledGraph>(read_edge_list(spec.model.path));
  return holder->graph;
}

ProbVector file_model_p(const Graph& g, double s) {
  const double n = static_cast<double>(g.size());
  const double r = n < 2 ? 0.0 : static_cast<double>(g.edge_count()) / (0.5 * n * (n - 1.0));
  return ProbVector::from_subsampling(r, s, s);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string_view variant_name(Variant v) {
  return v == Variant::naive ? "naive" : "consistent-iterative";
}

Variant parse_variant(std::string_view name) {
  if (name == "naive") return Variant::naive;
  if (name == "consistent-iterative") return Variant::consistent_iterative;
  throw std::invalid_argument("unknown variant '" + std::string(name) +
                              "' (expected naive or consistent-iterative)");
}

void validate(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");
  const ModelSpec& m = spec.model;
  if (m.kind != ModelKind::file_subsample && m.n < 2) {
    throw std::invalid_argument("n must be at least 2");
  }
  if (m.kind == ModelKind::correlated_er && m.p.has_value() == m.noise_exponent.has_value()) {
    throw std::invalid_argument("correlated-er needs exactly one of p and noise_exponent");
  }
  if (m.kind == ModelKind::file_subsample && m.path.empty() && !m.loaded) {
    throw std::invalid_argument("file model needs a path");
  }
  if (spec.h && *spec.h == 0) throw std::invalid_argument("h must be positive");
}

std::vector<ExperimentSpec> parse_specs(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text.begin(), json_text.end());
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  std::uint64_t seed = 0;
  const Json* list = &doc;
  if (doc.is_object()) {
    check_keys(doc, {"specs", "base_seed"}, "file");
    if (!doc.contains("specs")) throw std::invalid_argument("spec file: missing 'specs'");
    if (doc.contains("base_seed")) {
      if (!doc["base_seed"].is_number_unsigned()) {
        throw std::invalid_argument("spec file: 'base_seed' must be a non-negative integer");
      }
      seed = doc["base_seed"].get<std::uint64_t>();
    }
    list = &doc["specs"];
  }
  if (!list->is_array() || list->empty()) {
    throw std::invalid_argument("spec file: expected a non-empty array of specs");
  }
  std::vector<ExperimentSpec> specs;
  try {
    for (std::size_t i = 0; i < list->size(); ++i) specs.push_back(parse_spec((*list)[i], i, seed));
  } catch (const Json::exception& e) {
    // Wrongly typed values surface as library type errors.
    throw std::invalid_argument(std::string("spec file: ") + e.what());
  }
  return specs;
}

std::vector<ExperimentSpec> load_specs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_specs(buffer.str());
}

std::uint64_t trial_seed(const ExperimentSpec& spec, std::size_t trial) {
  return derive_seed(spec.base_seed, {stable_hash(spec.id), static_cast<std::uint64_t>(trial)});
}

ProbVector resolved_p(const ExperimentSpec& spec) {
  const ModelSpec& m = spec.model;
  switch (m.kind) {
    case ModelKind::correlated_er:
      if (m.p) return *m.p;
      return ProbVector::from_noise_exponent(static_cast<double>(m.n), m.p11, *m.noise_exponent);
    case ModelKind::subsampling:
      return ProbVector::from_subsampling(m.r, m.sa, m.sb);
    case ModelKind::perturbation:
      return ProbVector::from_perturbation(m.r, m.delta);
    case ModelKind::file_subsample: {
      std::shared_ptr<const LabeledGraph> holder;
      return file_model_p(loaded_graph(spec, holder), m.s);
    }
  }
  throw std::logic_error("unhandled model kind");
}

CorrelatedPair subsample_real(const Graph& g, double s, std::uint64_t seed) {
  return subsample_graph(g, s, seed);
}

TrialRecord run_trial(const ExperimentSpec& spec, std::size_t trial) {
  validate(spec);
  const ModelSpec& m = spec.model;
  TrialRecord rec;
  rec.spec_id = spec.id;
  rec.trial = trial;
  rec.seed = trial_seed(spec, trial);
  rec.variant = spec.align.variant;
  const std::uint64_t sample_seed = derive_seed(rec.seed, {1});
  const std::uint64_t scramble_seed = derive_seed(rec.seed, {2});

  CorrelatedPair pair;
  switch (m.kind) {
    case ModelKind::correlated_er:
      rec.p = resolved_p(spec);
      pair = sample_correlated_er(m.n, rec.p, sample_seed);
      break;
    case ModelKind::subsampling:
      rec.p = resolved_p(spec);
      pair = sample_subsampling(m.n, m.r, m.sa, m.sb, sample_seed);
      break;
    case ModelKind::perturbation:
      rec.p = resolved_p(spec);
      pair = sample_perturbation(m.n, m.r, m.delta, sample_seed);
      break;
    case ModelKind::file_subsample: {
      std::shared_ptr<const LabeledGraph> holder;
      const Graph& g = loaded_graph(spec, holder);
      rec.p = file_model_p(g, m.s);
      pair = subsample_real(g, m.s, sample_seed);
      break;
    }
  }
  pair = scramble(pair, scramble_seed);
  rec.n = pair.ga.size();
  rec.h = spec.h ? *spec.h : default_anchor_count(rec.n, rec.p);
  if (rec.h > rec.n) throw std::invalid_argument("h exceeds n for spec " + spec.id);

  AlignConfig cfg = spec.align;
  if (spec.anchors_know_p && !cfg.robust.p && cfg.robust.density_threshold <= 0.0) {
    cfg.robust.p = rec.p;
  }
  cfg.robust.seed = derive_seed(rec.seed, {3});
  const auto start = std::chrono::steady_clock::now();
  const AlignResult result = full_align(pair.ga, pair.gb, rec.h, cfg);
  rec.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  rec.anchor_ms = result.anchor_ms;
  rec.match_ms = result.match_ms;
  rec.accuracy = result.alignment.accuracy(pair.truth);
  const std::size_t anchors = result.anchors.matched_count();
  rec.anchor_accuracy = anchors == 0 ? 0.0
                                     : static_cast<double>(result.anchors.agreements(pair.truth)) /
                                           static_cast<double>(anchors);
  if (rec.h < rec.n) rec.anchor_degree_tie = separation_report(pair.ga, rec.h).min_gap == 0;
  return rec;
}

std::vector<TrialRecord> run_records(std::span<const ExperimentSpec> specs,
                                     const SweepOptions& options) {
  if (specs.empty()) throw std::invalid_argument("sweep needs at least one spec");
  std::vector<ExperimentSpec> prepared(specs.begin(), specs.end());
  for (ExperimentSpec& spec : prepared) {
    validate(spec);
    if (spec.model.kind == ModelKind::file_subsample && !spec.model.loaded) {
      spec.model.loaded = std::make_shared<const LabeledGraph>(read_edge_list(spec.model.path));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t s = 0; s < prepared.size(); ++s) {
    for (std::size_t t = 0; t < prepared[s].trials; ++t) cells.emplace_back(s, t);
  }
  unsigned workers = options.workers == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                          : options.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells.size()));
  if (workers > 1) {
    // Parallelism goes to whole trials; each alignment then runs serially.
    for (ExperimentSpec& spec : prepared) {
      if (spec.align.threads == 0) spec.align.threads = spec.align.robust.threads = 1;
    }
  }

  std::vector<TrialRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size() && !failed; i = next++) {
      try {
        records[i] = run_trial(prepared[cells[i].first], cells[i].second);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (!options.include_timing) {
    for (TrialRecord& r : records) r.total_ms = r.anchor_ms = r.match_ms = 0.0;
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

void write_csv(std::ostream& out, std::span<const TrialRecord> records, bool include_timing) {
  out << kCsvHeader << '\n';
  auto time = [&](double ms) { return millis(include_timing ? ms : 0.0); };
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].spec_id == records[begin].spec_id) ++end;
    std::vector<double> accs;
    double total = 0.0;
    double anchor = 0.0;
    double match = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const TrialRecord& r = records[i];
      out << r.spec_id << ',' << r.trial << ',' << r.seed << ',' << r.n << ',' << prob(r.p.p11())
          << ',' << prob(r.p.p10()) << ',' << prob(r.p.p01()) << ',' << prob(r.p.p00()) << ','
          << r.h << ',' << variant_name(r.variant) << ',' << ratio(r.anchor_accuracy) << ','
          << ratio(r.accuracy) << ',' << time(r.total_ms) << ',' << time(r.anchor_ms) << ','
          << time(r.match_ms) << ",,\n";
      accs.push_back(r.accuracy);
      total += r.total_ms;
      anchor += r.anchor_ms;
      match += r.match_ms;
    }
    const TrialRecord& first = records[begin];
    const double count = static_cast<double>(end - begin);
    double mean = 0.0;
    for (double a : accs) mean += a;
    mean /= count;
    out << first.spec_id << ",summary,," << first.n << ',' << prob(first.p.p11()) << ','
        << prob(first.p.p10()) << ',' << prob(first.p.p01()) << ',' << prob(first.p.p00()) << ','
        << first.h << ',' << variant_name(first.variant) << ",,," << time(total / count) << ','
        << time(anchor / count) << ',' << time(match / count) << ',' << ratio(mean) << ','
        << ratio(median(accs)) << '\n';
    begin = end;
  }
}

void run_sweep(std::span<const ExperimentSpec> specs, std::ostream& out,
               const SweepOptions& options) {
  const std::vector<TrialRecord> records = run_records(specs, options);
  write_csv(out, records, options.include_timing);
}

std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
  std::vector<TrialRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != 17) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected 17 columns");
    }
    if (cells[1] == "summary") continue;
    try {
      TrialRecord r;
      r.spec_id = cells[0];
      r.trial = std::stoull(cells[1]);
      r.seed = std::stoull(cells[2]);
      r.n = std::stoull(cells[3]);
      r.p = ProbVector(std::stod(cells[4]), std::stod(cells[5]), std::stod(cells[6]),
                       1.0 - std::stod(cells[4]) - std::stod(cells[5]) - std::stod(cells[6]));
      r.h = std::stoull(cells[8]);
      r.variant = parse_variant(cells[9]);
      r.anchor_accuracy = std::stod(cells[10]);
      r.accuracy = std::stod(cells[11]);
      r.total_ms = std::stod(cells[12]);
      r.anchor_ms = std::stod(cells[13]);
      r.match_ms = std::stod(cells[14]);
      out.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

TimingReport timing_report(std::span<const TrialRecord> records) {
  std::map<std::size_t, std::pair<double, std::size_t>> by_n;
  for (const TrialRecord& r : records) {
    auto& [sum, count] = by_n[r.n];
    sum += r.total_ms;
    ++count;
  }
  if (by_n.size() < 3) {
    throw std::invalid_argument("timing report needs at least 3 distinct n, got " +
                                std::to_string(by_n.size()));
  }
  TimingReport report;
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto& [n, acc] : by_n) {
    TimingRow row;
    row.n = n;
    row.runs = acc.second;
    row.mean_ms = acc.first / static_cast<double>(acc.second);
    const double nd = static_cast<double>(n);
    row.scale = row.mean_ms * 1e6 / (nd * nd * std::log2(nd));
    lo = std::min(lo, row.scale);
    hi = std::max(hi, row.scale);
    report.rows.push_back(row);
  }
  report.spread = lo > 0.0 ? hi / lo : INFINITY;
  return report;
}

void write_timing(std::ostream& out, const TimingReport& report) {
  out << "n,runs,mean_ms,ns_per_n2log2n\n";
  for (const TimingRow& row : report.rows) {
    out << row.n << ',' << row.runs << ',' << millis(row.mean_ms) << ',' << fmt("%.6g", row.scale)
        << '\n';
  }
  out << "spread," << fmt("%.4f", report.spread) << '\n';
}

}  // namespace anchoralign
