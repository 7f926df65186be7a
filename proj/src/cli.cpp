#include "anchoralign/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "anchoralign/bounds.hpp"
#include "anchoralign/edge_list.hpp"
#include "anchoralign/experiment.hpp"
#include "anchoralign/full_align.hpp"
#include "anchoralign/models.hpp"

namespace anchoralign {

namespace {

// Usage problems detected after CLI11 parsing; reported with exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x, const char* pattern = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

ProbVector parse_p(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  for (std::string cell; std::getline(in, cell, ',');) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      throw UsageError("--p: '" + cell + "' is not a number");
    }
  }
  if (parts.size() != 4) throw UsageError("--p expects four comma-separated probabilities");
  try {
    return ProbVector(parts[0], parts[1], parts[2], parts[3]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--p: ") + e.what());
  }
}

Graph padded(const Graph& g, std::size_t n) {
  if (g.size() == n) return g;
  const auto edges = g.edges();
  return Graph(n, edges);
}

struct GenerateArgs {
  std::string model = "correlated-er";
  std::size_t n = 0;
  std::string p;
  double p11 = 0.25;
  double noise_exponent = -1.0;
  double r = 0.0, sa = 1.0, sb = 1.0, delta = 0.0;
  std::uint64_t seed = 1;
  bool no_scramble = false;
  std::string out_a, out_b, truth;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  CorrelatedPair pair;
  if (a.model == "correlated-er") {
    ProbVector p{0.0, 0.0, 0.0, 1.0};
    if (!a.p.empty() == (a.noise_exponent >= 0.0)) {
      throw UsageError("correlated-er needs exactly one of --p and --noise-exponent");
    }
    p = a.p.empty() ? ProbVector::from_noise_exponent(static_cast<double>(a.n), a.p11, a.noise_exponent)
                    : parse_p(a.p);
    pair = sample_correlated_er(a.n, p, a.seed);
  } else if (a.model == "subsampling") {
    pair = sample_subsampling(a.n, a.r, a.sa, a.sb, a.seed);
  } else if (a.model == "perturbation") {
    pair = sample_perturbation(a.n, a.r, a.delta, a.seed);
  } else {
    throw UsageError("--model must be correlated-er, subsampling or perturbation");
  }
  if (!a.no_scramble) pair = scramble(pair, a.seed ^ 0x5bd1e995ULL);
  write_edge_list(pair.ga, std::filesystem::path(a.out_a));
  write_edge_list(pair.gb, std::filesystem::path(a.out_b));
  std::ofstream truth(a.truth);
  if (!truth) throw std::runtime_error("cannot open " + a.truth + " for writing");
  for (Vertex b = 0; b < pair.truth.size(); ++b) truth << b << ' ' << pair.truth[b] << '\n';
  out << "wrote " << a.n << " vertices: " << pair.ga.edge_count() << " edges in G_a, "
      << pair.gb.edge_count() << " edges in G_b\n";
  return 0;
}

struct AlignArgs {
  std::string ga, gb, truth, out_path, p;
  std::size_t h = 0;
  std::string variant = "consistent-iterative";
};

int cmd_align(const AlignArgs& a, std::ostream& out) {
  const LabeledGraph la = read_edge_list(std::filesystem::path(a.ga));
  const LabeledGraph lb = read_edge_list(std::filesystem::path(a.gb));
  const std::size_t n = std::max(la.graph.size(), lb.graph.size());
  const Graph ga = padded(la.graph, n);
  const Graph gb = padded(lb.graph, n);

  AlignConfig cfg;
  try {
    cfg.variant = parse_variant(a.variant);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--variant: ") + e.what());
  }
  std::size_t h = a.h;
  std::optional<ProbVector> p;
  if (!a.p.empty()) p = parse_p(a.p);
  if (p) cfg.robust.p = p;
  if (h == 0) {
    // Without a model, assume the noiseless model at G_a's edge density.
    const double nd = static_cast<double>(n);
    const double density = n < 2 ? 0.0 : static_cast<double>(ga.edge_count()) / (0.5 * nd * (nd - 1.0));
    const ProbVector guess = p ? *p : ProbVector(density, 0.0, 0.0, 1.0 - density);
    h = rho(guess) > 0.0 ? default_anchor_count(n, guess) : std::min<std::size_t>(8, n);
  }
  if (h > n) throw UsageError("--h exceeds the vertex count " + std::to_string(n));
  const AlignResult result = full_align(ga, gb, h, cfg);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.out_path.empty()) {
    file.open(a.out_path);
    if (!file) throw std::runtime_error("cannot open " + a.out_path + " for writing");
    sink = &file;
  }
  for (Vertex b = 0; b < lb.graph.size(); ++b) {
    const Vertex image = result.alignment[b];
    if (image != kUnmatched && image < la.labels.size()) {
      *sink << lb.labels[b] << ' ' << la.labels[image] << '\n';
    }
  }
  if (!a.truth.empty()) {
    std::unordered_map<std::string, Vertex> id_a;
    std::unordered_map<std::string, Vertex> id_b;
    for (Vertex v = 0; v < la.labels.size(); ++v) id_a.emplace(la.labels[v], v);
    for (Vertex v = 0; v < lb.labels.size(); ++v) id_b.emplace(lb.labels[v], v);
    std::ifstream in(a.truth);
    if (!in) throw std::runtime_error("cannot open truth file " + a.truth);
    std::size_t total = 0;
    std::size_t correct = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream fields(line);
      std::string b, av, extra;
      if (!(fields >> b)) continue;
      if (!(fields >> av) || (fields >> extra)) {
        throw std::runtime_error("truth file line " + std::to_string(line_no) + ": expected \"v_b v_a\"");
      }
      ++total;
      const auto ib = id_b.find(b);
      const auto ia = id_a.find(av);
      if (ib != id_b.end() && ia != id_a.end() && result.alignment[ib->second] == ia->second) ++correct;
    }
    const double acc = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    out << "accuracy " << num(acc, "%.3f") << " (" << correct << "/" << total << ")\n";
  }
  return 0;
}

struct SweepArgs {
  std::string spec, out_path;
  unsigned workers = 1;
  bool no_timing = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<ExperimentSpec> specs;
  try {
    specs = load_specs(a.spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SweepOptions options;
  options.workers = a.workers;
  options.include_timing = !a.no_timing;
  if (a.out_path.empty()) {
    run_sweep(specs, out, options);
  } else {
    std::ofstream file(a.out_path);
    if (!file) throw std::runtime_error("cannot open " + a.out_path + " for writing");
    run_sweep(specs, file, options);
  }
  return 0;
}

struct BoundsArgs {
  std::size_t n = 0;
  std::string p;
  std::size_t h = 0;
  double eta = std::log(20.0);
  double k = 0.0;
  double slack = 0.0;
  double c1 = 1.0, c2 = 1.0;
};

void print_check(std::ostream& out, const char* name, const RegionCheck& c) {
  out << name << ' ' << num(c.value) << " limit " << num(c.limit) << ' '
      << (c.pass ? "pass" : "fail") << '\n';
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.n < 2) throw UsageError("--n must be at least 2");
  const ProbVector p = parse_p(a.p);
  const double nd = static_cast<double>(a.n);
  const SignatureDrift q = signature_drift(p);
  const double r = rho(p);
  out << "n " << a.n << '\n';
  out << "p " << num(p.p11()) << ',' << num(p.p10()) << ',' << num(p.p01()) << ',' << num(p.p00())
      << '\n';
  out << "q0 " << num(q.q0) << "\nq1 " << num(q.q1) << "\nrho " << num(r) << '\n';
  std::size_t h = a.h;
  if (r > 0.0) {
    out << "h_threshold " << h_threshold(nd, p, a.slack) << " (slack " << num(a.slack) << ")\n";
    const std::size_t def = default_anchor_count(a.n, p);
    out << "default_h " << def << '\n';
    if (h == 0) h = def;
  } else {
    out << "h_threshold none (rho <= 0)\n";
  }
  if (h > 0) out << "h " << h << "\nmisalignment_bound " << num(misalignment_bound(p, h)) << '\n';
  if (p.edge_a() > 0.0 && p.nonedge_a() > 0.0) {
    const double d_u = nd * p.edge_a();
    const double dbar_v = nd * p.nonedge_a();
    const PhiEps pe = phi_eps(p, d_u, dbar_v);
    out << "phi " << num(pe.phi) << " (d_u " << num(d_u) << ", dbar_v " << num(dbar_v) << ")\n";
    out << "eps " << num(pe.eps) << '\n';
    if (pe.eps < 1.0) {
      out << "min_gap " << num(min_gap_for_tail(p, d_u, dbar_v, a.k, a.eta)) << " (k " << num(a.k)
          << ", eta " << num(a.eta) << ")\n";
    }
  }
  out << "max_degree_bound " << num(max_degree_bound(nd, p.edge_a(), 0.1)) << " (eps 0.1)\n";
  const TheoremRegionReport t = theorem_region_check(a.n, p, h, a.c1, a.c2);
  print_check(out, "edge_density", t.edge_density);
  print_check(out, "noise_level", t.noise_level);
  print_check(out, "anchor_condition", t.anchor_condition);
  if (p.p01() > 0.0 && p.p11() > 0.0) {
    const RegionPoint pt = RegionPoint::from(nd, p);
    out << "region " << region_name(fig1_region(pt)) << " (x " << num(pt.x) << ", y " << num(pt.y)
        << ")\n";
  } else {
    out << "region undefined (p01 or p11 is zero)\n";
  }
  return 0;
}

struct RegionArgs {
  double x = NAN, y = NAN;
  std::size_t n = 0;
  std::string p;
  bool grid = false;
  double step = 0.1;
};

int cmd_region(const RegionArgs& a, std::ostream& out) {
  if (a.grid) {
    if (!(a.step > 0.0)) throw UsageError("--step must be positive");
    out << "x,y,region\n";
    const int nx = static_cast<int>(std::round(3.0 / a.step));
    const int ny = static_cast<int>(std::round(1.2 / a.step));
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        const RegionPoint pt{-3.0 + i * a.step, -1.2 + j * a.step};
        out << num(pt.x, "%.4f") << ',' << num(pt.y, "%.4f") << ',' << region_name(fig1_region(pt))
            << '\n';
      }
    }
    return 0;
  }
  RegionPoint pt{a.x, a.y};
  if (!a.p.empty()) {
    if (a.n < 2) throw UsageError("--p needs --n >= 2");
    pt = RegionPoint::from(static_cast<double>(a.n), parse_p(a.p));
  } else if (std::isnan(a.x) || std::isnan(a.y)) {
    throw UsageError("give --x and --y, --n and --p, or --grid");
  }
  out << region_name(fig1_region(pt)) << " (x " << num(pt.x) << ", y " << num(pt.y) << ")\n";
  return 0;
}

struct TimingArgs {
  std::string csv;
  std::vector<int> log2_sizes{11, 12, 13};
  std::size_t trials = 3;
  double p11 = 0.25;
  double noise_exponent = 1.1;
  std::uint64_t seed = 1;
  std::string variant = "consistent-iterative";
};

int cmd_timing(const TimingArgs& a, std::ostream& out) {
  std::vector<TrialRecord> records;
  if (!a.csv.empty()) {
    std::ifstream in(a.csv);
    if (!in) throw std::runtime_error("cannot open " + a.csv);
    records = read_csv(in);
  } else {
    std::vector<ExperimentSpec> specs;
    for (int k : a.log2_sizes) {
      if (k < 3 || k > 20) throw UsageError("--sizes entries must be log2 n in [3, 20]");
      ExperimentSpec spec;
      spec.id = "timing-" + std::to_string(k);
      spec.model.n = std::size_t{1} << k;
      spec.model.p11 = a.p11;
      spec.model.noise_exponent = a.noise_exponent;
      spec.trials = a.trials;
      spec.base_seed = a.seed;
      spec.align.variant = parse_variant(a.variant);
      specs.push_back(spec);
    }
    records = run_records(specs);
  }
  try {
    write_timing(out, timing_report(records));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seedless alignment of correlated graphs"};
  app.name("anchoralign");
  app.require_subcommand(1);
  // "--h" is the anchor count, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Sample a correlated pair and write it out");
  generate->add_option("--model", gen.model, "correlated-er | subsampling | perturbation");
  generate->add_option("--n", gen.n, "Vertex count")->required()->check(CLI::Range(1, 1 << 20));
  generate->add_option("--p", gen.p, "p11,p10,p01,p00");
  generate->add_option("--p11", gen.p11, "p11 when --noise-exponent is used");
  generate->add_option("--noise-exponent", gen.noise_exponent, "p10 = p01 = n^-exponent");
  generate->add_option("--r", gen.r, "Parent/base edge probability");
  generate->add_option("--sa", gen.sa, "Keep rate for G_a (subsampling)");
  generate->add_option("--sb", gen.sb, "Keep rate for G_b (subsampling)");
  generate->add_option("--delta", gen.delta, "Flip rate (perturbation)");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_flag("--no-scramble", gen.no_scramble, "Keep G_b's labels equal to G_a's");
  generate->add_option("--out-a", gen.out_a, "Edge list for G_a")->required();
  generate->add_option("--out-b", gen.out_b, "Edge list for G_b")->required();
  generate->add_option("--truth", gen.truth, "Truth file, lines \"v_b v_a\"")->required();

  AlignArgs al;
  CLI::App* align = app.add_subcommand("align", "Align two edge lists");
  align->add_option("--ga", al.ga, "Edge list of G_a")->required();
  align->add_option("--gb", al.gb, "Edge list of G_b")->required();
  align->add_option("--h", al.h, "Anchor count (default from the model)")->check(CLI::PositiveNumber);
  align->add_option("--variant", al.variant, "naive | consistent-iterative");
  align->add_option("--p", al.p, "Model p11,p10,p01,p00 if known");
  align->add_option("--truth", al.truth, "Truth file to score against");
  align->add_option("--out", al.out_path, "Write the alignment here instead of stdout");

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a JSON experiment spec and write CSV");
  sweep->add_option("--spec", sw.spec, "JSON spec file")->required();
  sweep->add_option("--out", sw.out_path, "CSV output (default stdout)");
  sweep->add_option("--workers", sw.workers, "Concurrent trials (0 = all cores)");
  sweep->add_flag("--no-timing", sw.no_timing, "Write zero time columns");

  BoundsArgs bd;
  CLI::App* bounds = app.add_subcommand("bounds", "Print the analytical bounds for (n, p)");
  bounds->add_option("--n", bd.n, "Vertex count")->required();
  bounds->add_option("--p", bd.p, "p11,p10,p01,p00")->required();
  bounds->add_option("--h", bd.h, "Anchor count (default from rho)");
  bounds->add_option("--eta", bd.eta, "Tail exponent for the degree-gap bound")->check(CLI::PositiveNumber);
  bounds->add_option("--k", bd.k, "Required degree separation in G_b");
  bounds->add_option("--slack", bd.slack, "Additive slack in the anchor-count threshold");
  bounds->add_option("--c1", bd.c1, "Constant of the edge-density condition");
  bounds->add_option("--c2", bd.c2, "Constant of the noise condition");

  RegionArgs rg;
  CLI::App* region = app.add_subcommand("region", "Classify a point of the achievability plane");
  region->add_option("--x", rg.x, "log p01 / log n");
  region->add_option("--y", rg.y, "log p11 / log n");
  region->add_option("--n", rg.n, "Vertex count, with --p");
  region->add_option("--p", rg.p, "p11,p10,p01,p00, with --n");
  region->add_flag("--grid", rg.grid, "Classify a grid over x in [-3,0], y in [-1.2,0]");
  region->add_option("--step", rg.step, "Grid step");

  TimingArgs tm;
  CLI::App* timing = app.add_subcommand("timing", "Run-time scaling against n^2 log2 n");
  timing->add_option("--csv", tm.csv, "Use records from a sweep CSV instead of running");
  timing->add_option("--sizes", tm.log2_sizes, "log2 n values")->delimiter(',');
  timing->add_option("--trials", tm.trials, "Trials per size")->check(CLI::PositiveNumber);
  timing->add_option("--p11", tm.p11, "p11");
  timing->add_option("--noise-exponent", tm.noise_exponent, "p10 = p01 = n^-exponent");
  timing->add_option("--seed", tm.seed, "Base seed");
  timing->add_option("--variant", tm.variant, "naive | consistent-iterative");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (align->parsed()) return cmd_align(al, out);
    if (sweep->parsed()) return cmd_sweep(sw, out);
    if (bounds->parsed()) return cmd_bounds(bd, out);
    if (region->parsed()) return cmd_region(rg, out);
    if (timing->parsed()) return cmd_timing(tm, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace anchoralign
