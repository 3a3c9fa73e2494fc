// Batch front door: manifests in, reports out.  Exit codes: 0 all good,
// 1 a selected assertion failed, 2 manifest/gate/usage error.
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "varexp/decomp.hpp"
#include "varexp/lp_analysis.hpp"
#include "varexp/manifest.hpp"
#include "varexp/modular.hpp"
#include "varexp/report.hpp"
#include "varexp/runner.hpp"

using namespace varexp;
using nlohmann::ordered_json;

namespace {

struct GateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emitError(const std::string& where, const std::string& what) {
  ordered_json e;
  e["error"] = what;
  e["context"] = where;
  std::printf("%s\n", e.dump().c_str());
}

int threadBudget() {
  const char* env = std::getenv("VAREXP_THREADS");
  if (!env) return 1;
  int t = std::atoi(env);
  return t < 1 ? 1 : t;
}

struct CommonOpts {
  std::string manifestPath;
  std::string outOverride;
  std::string goldenPath;
  std::uint64_t seed = 0;
  bool seedSet = false;
  bool plots = false;
};

RunManifest loadFor(const CommonOpts& o) {
  RunManifest m = load_manifest(o.manifestPath);
  if (!o.outOverride.empty()) m.outDir = o.outOverride;
  if (o.seedSet) m.seed = o.seed;
  std::filesystem::create_directories(m.outDir);
  return m;
}

AdmissiblePair defaultPair() {
  return AdmissiblePair::make(PairProfile::CosineBump);
}

GridFunction loadInput(const RunManifest& m) {
  if (m.input.empty())
    throw GateError("manifest has no 'input' function to work on");
  GridFunction f = load_grid_function(m.input);
  if (!(f.grid == m.grid))
    throw GateError("input grid does not match the manifest grid");
  return f;
}

// ------------------------------------------------------------------ norm
int cmdNorm(const CommonOpts& o) {
  RunManifest m = loadFor(o);
  GridFunction f = loadInput(m);
  AdmissiblePair pair = defaultPair();

  SuiteReport rep{"norm", {}};
  NormResult lp = luxemburg_norm(f, m.p);
  rep.add("lp-norm", "Luxemburg norm of the input", lp.value, 0.0, true);
  NormModularReport nm = norm_modular_bounds(f, m.p);
  rep.add("lp-modular", "semimodular at the input", nm.modular, 0.0, true);
  rep.add("lp-sandwich", "norm inside the modular sandwich", nm.norm,
          nm.upper, nm.pass);

  FunctionSequence blocks = lp_blocks(f, pair, m.Jmax);
  NormResult mixed = m.space == 'F' ? norm_Lp_lq(blocks, m.p, m.q)
                                    : norm_lq_Lp(blocks, m.p, m.q);
  rep.add("mixed-norm",
          m.space == 'F' ? "L_p(l_q) of the resolution blocks"
                         : "l_q(L_p) of the resolution blocks",
          mixed.value, 0.0, true);
  NormResult space = m.space == 'F' ? tl_norm(f, m.p, m.q, m.w, pair)
                                    : besov_norm(f, m.p, m.q, m.w, pair);
  rep.add("space-norm", m.space == 'F' ? "F-space norm" : "B-space norm",
          space.value, 0.0, true);

  write_text_atomic(m.outDir + "/norm.csv", suite_csv(rep));
  write_text_atomic(m.outDir + "/norm.json",
                    suite_json(rep, m.hash, m.seed).dump(2) + "\n");
  std::printf("norm: %zu rows -> %s\n", rep.rows.size(), m.outDir.c_str());
  return rep.pass() ? 0 : 1;
}

// ------------------------------------------------------------- decompose
int cmdDecompose(const CommonOpts& o) {
  RunManifest m = loadFor(o);
  GridFunction f = loadInput(m);
  ReproducingSystem sys = make_reproducing_system(m.grid, m.Jmax, m.K, m.L);
  AnalyzeResult res = analyze(f, sys, true);

  save_coeffs(m.outDir + "/coeffs.csv", res.lambda);

  NormResult seq = seq_norm_b(res.lambda, m.grid, m.p, m.q, m.w);

  // reconstruction error vs the cut level, sup over the interior the
  // compact windows reach without boundary truncation
  double margin = m.grid.A - sys.sigma;
  double fmax = f.absMax();
  std::vector<std::pair<double, double>> curve;
  std::string conv = "jcut,residual\n";
  for (int jcut = 0; jcut <= m.Jmax; ++jcut) {
    AnalyzeResult part = res;
    part.atoms.clear();
    for (const Atom& a : res.atoms)
      if (a.cube.j <= jcut) part.atoms.push_back(a);
    GridFunction rec = synthesize(part, m.grid);
    double sup = 0.0;
    for (std::int64_t i = 0; i < m.grid.size(); ++i) {
      auto x = m.grid.point(i);
      if (std::abs(x[0]) <= margin && std::abs(x[1]) <= margin)
        sup = std::max(sup, std::abs(f.v[i] - rec.v[i]));
    }
    double rel = fmax > 0.0 ? sup / fmax : 0.0;
    curve.emplace_back(jcut, rel);
    conv += std::to_string(jcut) + "," + fmt17(rel) + "\n";
  }
  write_text_atomic(m.outDir + "/convergence.csv", conv);

  ordered_json j;
  j["manifest_fnv1a"] = m.hash;
  j["seed"] = m.seed;
  j["atoms"] = res.atoms.size();
  j["dropped"] = res.dropped;
  j["clipped"] = res.clipped;
  j["rescaled"] = res.rescaled;
  j["flagged"] = res.flagged;
  j["worst_deriv"] = res.worstDeriv;
  j["worst_moment"] = res.worstMoment;
  j["seq_norm_b"] = seq.value;
  j["residual_at_jmax"] = curve.back().second;
  write_text_atomic(m.outDir + "/decompose.json", j.dump(2) + "\n");

  if (o.plots) {
    PlotSeries s{"sup residual / ||f||_inf", curve};
    write_text_atomic(m.outDir + "/convergence.svg",
                      svg_line_plot("reconstruction error vs cut level",
                                    "jcut", "relative residual", {s}, true));
  }
  std::printf("decompose: %zu atoms, %d flagged -> %s\n", res.atoms.size(),
              res.flagged, m.outDir.c_str());
  return res.flagged == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- verify
int cmdVerify(const CommonOpts& o) {
  RunManifest m = loadFor(o);
  if (m.suites.empty()) {
    std::printf("verify: no suites selected\n");
    return 0;
  }
  for (const auto& name : m.suites) {
    const auto& known = suite_names();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw GateError("unknown suite '" + name + "'");
  }

  GoldenValues gv = o.goldenPath.empty() ? calibrate_golden(m.seed)
                                         : load_golden(o.goldenPath);

  std::vector<SuiteReport> reports(m.suites.size());
  std::vector<std::string> errors(m.suites.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= m.suites.size()) return;
      try {
        reports[i] = run_suite(m.suites[i], m.seed, &gv);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  int nThreads = std::min<int>(threadBudget(), (int)m.suites.size());
  if (nThreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nThreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  int failures = 0;
  for (std::size_t i = 0; i < m.suites.size(); ++i) {
    if (!errors[i].empty()) throw GateError(m.suites[i] + ": " + errors[i]);
    const SuiteReport& r = reports[i];
    write_text_atomic(m.outDir + "/verify-" + r.suite + ".csv", suite_csv(r));
    write_text_atomic(m.outDir + "/verify-" + r.suite + ".json",
                      suite_json(r, m.hash, m.seed).dump(2) + "\n");
    std::printf("%-24s %s (%d/%zu rows)\n", r.suite.c_str(),
                r.pass() ? "pass" : "FAIL", r.failures(), r.rows.size());
    failures += r.failures();
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-exponent function space workbench"};
  app.require_subcommand(1);

  CommonOpts o;
  auto addCommon = [&](CLI::App* c, bool golden) {
    c->add_option("--manifest", o.manifestPath, "run manifest (JSON)")
        ->required();
    c->add_option("--out", o.outOverride, "override the output directory");
    c->add_option("--seed", o.seed, "override the manifest seed")
        ->each([&](const std::string&) { o.seedSet = true; });
    if (golden)
      c->add_option("--golden", o.goldenPath,
                    "calibration file (default: calibrate in place)");
  };
  CLI::App* norm = app.add_subcommand("norm", "function-space norms of an input");
  addCommon(norm, false);
  CLI::App* dec =
      app.add_subcommand("decompose", "atomic analysis / synthesis round trip");
  addCommon(dec, false);
  dec->add_flag("--plots", o.plots, "emit SVG plots");
  CLI::App* ver = app.add_subcommand("verify", "run report suites");
  addCommon(ver, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm->parsed()) return cmdNorm(o);
    if (dec->parsed()) return cmdDecompose(o);
    return cmdVerify(o);
  } catch (const std::exception& e) {
    emitError(app.get_subcommands().front()->get_name(), e.what());
    return 2;
  }
}
