#include "persuasion/cli.h"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "persuasion/constructions.h"
#include "persuasion/error.h"
#include "persuasion/harness.h"
#include "persuasion/json_io.h"
#include "persuasion/orders.h"
#include "persuasion/payoffs.h"
#include "persuasion/solver.h"

namespace persuasion {
namespace {

struct Options {
  int grid = 401;
  double tol = 1e-8;
  bool tol_given = false;
  uint64_t seed = 1;
  std::string out;
  std::string csv;
  std::vector<std::string> files;
  std::string lower;  // optional G0
  int probes = 8;
  double mu = -1.0;
  std::string kind;
  int count = 10;
  int threads = 0;
};

Payoff LoadPayoff(const std::string& path) { return PayoffFromJson(ReadJsonFile(path)); }

Distribution LoadDistribution(const std::string& path) {
  return DistributionFromJson(ReadJsonFile(path));
}

std::unique_ptr<Distribution> LoadLower(const Options& o) {
  if (o.lower.empty()) return nullptr;
  return std::make_unique<Distribution>(LoadDistribution(o.lower));
}

void MaybeWrite(const Options& o, const Json& j) {
  if (!o.out.empty()) WriteJsonFile(o.out, j);
}

std::ofstream OpenCsv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::kParseError, "cannot write " + path);
  f.precision(17);
  return f;
}

double Density(const Distribution& f, double m) {
  double d = 0.0;
  for (const UniformPiece& u : f.uniforms()) {
    if (m >= u.from && m <= u.to) d += u.w / (u.to - u.from);
  }
  return d;
}

int Verdict(bool pass) { return pass ? kExitPass : kExitFail; }

int RunSolve(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const Distribution f0 = LoadDistribution(o.files[1]);
  const std::unique_ptr<Distribution> g0 = LoadLower(o);
  const GridSpec grid(o.grid);
  const SolveReport r = Solve(u, f0, grid, g0.get(), true);
  bool pass = std::abs(r.gap) <= o.tol;
  if (!g0) pass = pass && r.slackness.pass;
  out << "value " << r.value << "\n"
      << "dual " << r.dual_value << " gap " << r.gap << "\n";
  if (!g0) out << "slackness " << (r.slackness.pass ? "pass" : "fail") << "\n";
  out << "optimizer support points " << r.optimizer.atoms().size() << "\n";
  MaybeWrite(o, ToJson(r));
  if (!o.csv.empty()) {
    std::ofstream f = OpenCsv(o.csv);
    const IntegratedCdf c0 = IntegrateCdf(f0), cf = IntegrateCdf(r.optimizer);
    f << "x,F0cdf,Fcdf,C_F0,C_F,u,p\n";
    for (int i = 0; i < grid.n(); ++i) {
      const double x = grid.point(i);
      f << x << "," << f0.Cdf(x) << "," << r.optimizer.Cdf(x) << "," << c0(x) << ","
        << cf(x) << "," << r.u_grid[i] << ","
        << (r.prices.values.empty() ? 0.0 : r.prices.values[i]) << "\n";
    }
  }
  return Verdict(pass);
}

int RunCheckOlc(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const Payoff v = LoadPayoff(o.files[1]);
  const OlcVerdict r = IsOrdinallyLessConvex(u, v, GridSpec(o.grid));
  const Json j = ToJson(r);
  if (r.holds) {
    out << "u is ordinally less convex than v on the " << o.grid << "-point grid\n";
  } else {
    out << "fails; witness " << j["witness"].dump() << "\n";
  }
  MaybeWrite(o, j);
  return Verdict(r.holds);
}

int RunCheckCrater(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const CraterVerdict r = CheckCrater(u);
  const Json j = ToJson(r);
  if (r.holds) {
    out << "crater property holds\n";
  } else {
    out << "crater property fails; witness " << j["witness"].dump() << "\n";
  }
  MaybeWrite(o, j);
  return Verdict(r.holds);
}

int RunCheckRegular(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const RegularityReport r = CheckRegular(u);
  out << (r.regular ? "regular" : "not regular: " + r.reason) << "\n";
  MaybeWrite(o, ToJson(r));
  return Verdict(r.regular);
}

int RunCompare(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const Payoff v = LoadPayoff(o.files[1]);
  const Distribution f0 = LoadDistribution(o.files[2]);
  const std::unique_ptr<Distribution> g0 = LoadLower(o);
  const GridSpec grid(o.grid);
  const ArgmaxProbe pu = ProbeArgmax(u, f0, grid, g0.get(), o.probes, 2 * o.seed + 1);
  const ArgmaxProbe pv = ProbeArgmax(v, f0, grid, g0.get(), o.probes, 2 * o.seed + 2);
  const WsoVerdict w = WsoCompare(u, pu, v, pv, f0, grid, g0.get(), o.tol);
  out << "u-argmax lower than v-argmax: " << (w.lower ? "yes" : "no")
      << (w.strictly_lower ? " (strictly)" : "") << "\n"
      << "u-argmax strictly higher: " << (w.strictly_higher ? "yes" : "no") << "\n"
      << "values u " << w.u_value << " v " << w.v_value << "\n";
  Json j = ToJson(w);
  j["u_probe_values"] = Json::array();
  j["v_probe_values"] = Json::array();
  for (const Distribution& m : pu.members) j["u_probe_values"].push_back(u.Expectation(m));
  for (const Distribution& m : pv.members) j["v_probe_values"].push_back(v.Expectation(m));
  MaybeWrite(o, j);
  return Verdict(w.lower);
}

int RunChordCounterexample(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const Payoff v = LoadPayoff(o.files[1]);
  const GridSpec grid(o.grid);
  const OlcVerdict olc = IsOrdinallyLessConvex(u, v, grid);
  if (olc.holds) {
    out << "u is ordinally less convex than v; no counterexample\n";
    MaybeWrite(o, ToJson(olc));
    return kExitFail;
  }
  const ChordCounterexample cx = BuildChordCounterexample(u, v, *olc.witness, grid);
  const ArgmaxProbe pu = ProbeArgmax(u, cx.prior, grid, nullptr, o.probes, 2 * o.seed + 1);
  const ArgmaxProbe pv = ProbeArgmax(v, cx.prior, grid, nullptr, o.probes, 2 * o.seed + 2);
  const WsoVerdict w = WsoCompare(u, pu, v, pv, cx.prior, grid, nullptr, o.tol);
  out << "two-point prior on " << cx.witness.x << ", " << cx.witness.z << " with weight "
      << cx.weight << " at " << cx.witness.x << " (" << ChordCaseName(cx.kase) << ")\n"
      << "u-argmax strictly higher than v-argmax: " << (w.strictly_higher ? "yes" : "no")
      << "\n";
  Json j = ToJson(cx);
  j["comparison"] = ToJson(w);
  MaybeWrite(o, j);
  return Verdict(w.strictly_higher);
}

int RunCraterCounterexample(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const GridSpec grid(o.grid);
  const CraterVerdict crater = CheckCrater(u);
  if (crater.holds) {
    out << "crater property holds; no counterexample\n";
    MaybeWrite(o, ToJson(crater));
    return kExitFail;
  }
  const CraterCounterexample cx = BuildCraterCounterexample(u, grid);
  const NecessityCheck nc = VerifyNecessity(cx, grid, o.tol_given ? o.tol : 1e-6);
  out << CraterCaseName(cx.kase) << " at X = " << cx.X << "\n"
      << "u-optimizers: C_F(X) in [" << nc.min_cf << ", " << nc.max_cf << "], C_F0(X) = "
      << nc.target << "\n"
      << "v-optimizer drop " << nc.v_drop << "\n"
      << "necessity check " << (nc.pass ? "pass" : "fail") << "\n";
  Json j = ToJson(cx);
  j["necessity"] = ToJson(nc);
  MaybeWrite(o, j);
  if (!o.csv.empty()) {
    std::ofstream f = OpenCsv(o.csv);
    f << "m,u,v,p,F0_density,F_cdf\n";
    for (int i = 0; i < grid.n(); ++i) {
      const double m = grid.point(i);
      f << m << "," << cx.u.Eval(m) << "," << cx.v.Eval(m) << "," << cx.P(m) << ","
        << Density(cx.f0, m) << "," << cx.f.Cdf(m) << "\n";
    }
  }
  return Verdict(nc.pass);
}

int RunBinary(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  BinarySolution s;
  if (o.files.size() > 1) {
    s = BinarySolve(u, LoadDistribution(o.files[1]));
  } else if (o.mu > 0.0 && o.mu < 1.0) {
    s = BinarySolve(u, o.mu);
  } else {
    throw Error(ErrorKind::kInvalidArgument, "binary needs a prior file or --mu in (0, 1)");
  }
  out << "cav u(" << s.mu << ") = " << s.value << "\n"
      << "least informative support {" << s.y << ", " << s.z << "}\n"
      << "most informative support {" << s.x << ", " << s.w << "}\n";
  MaybeWrite(o, ToJson(s));
  return kExitPass;
}

int RunCertify(const Options& o, std::ostream& out) {
  const Payoff u = LoadPayoff(o.files[0]);
  const Distribution f0 = LoadDistribution(o.files[1]);
  const Distribution cand = LoadDistribution(o.files[2]);
  const Certificate c = CertifyOptimality(u, f0, cand, GridSpec(o.grid), o.tol_given ? o.tol : 1e-6);
  out << "feasible " << (c.feasible ? "yes" : "no") << "\n"
      << "value " << c.lower << " bound " << c.upper << " gap " << c.gap << "\n"
      << (c.certified ? "certified" : "not certified") << "\n";
  MaybeWrite(o, ToJson(c));
  return Verdict(c.certified);
}

int RunExperimentCommand(const Options& o, std::ostream& out) {
  const std::optional<ExperimentKind> kind = ParseExperimentKind(o.kind);
  if (!kind) throw Error(ErrorKind::kInvalidArgument, "unknown experiment kind " + o.kind);
  ExperimentOptions eo;
  eo.kind = *kind;
  eo.count = o.count;
  eo.seed = o.seed;
  eo.grid_n = o.grid;
  eo.probe_k = o.probes;
  eo.threads = o.threads;
  const ExperimentReport r = RunExperiment(eo);
  out << ExperimentKindName(r.kind) << ": " << r.passes << "/" << r.count << " pass, "
      << r.failures << " fail, " << r.errors << " error; worst residual " << r.worst_residual
      << "; " << r.seconds << " s\n";
  for (const InstanceResult& i : r.instances) {
    if (i.pass) continue;
    out << "  #" << i.index << " seed " << i.seed << ": "
        << (i.error.empty() ? i.detail : i.error) << "\n";
  }
  MaybeWrite(o, ToJson(r));
  if (!o.csv.empty()) {
    std::ofstream f = OpenCsv(o.csv);
    f << "index,seed,pass,residual,seconds,detail\n";
    for (const InstanceResult& i : r.instances) {
      std::string d = i.error.empty() ? i.detail : i.error;
      for (char& ch : d) {
        if (ch == ',' || ch == '"') ch = ';';
      }
      f << i.index << "," << i.seed << "," << i.pass << "," << i.residual << "," << i.seconds
        << "," << d << "\n";
    }
  }
  return Verdict(r.passes == r.count);
}

int ExitFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kNumericFailure:
    case ErrorKind::kConstructionFailure:
      return kExitNumeric;
    case ErrorKind::kNotAViolation:
      return kExitFail;
    default:
      return kExitUsage;
  }
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal persuasion solver and comparative-statics checks", "persuade"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c, bool grid = true) {
    if (grid) c->add_option("--grid", o.grid, "grid size")->check(CLI::Range(3, 100000));
    c->add_option("--tol", o.tol, "tolerance")->each([&](const std::string&) { o.tol_given = true; });
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--out", o.out, "write machine-readable JSON here");
  };
  auto files = [&](CLI::App* c, const char* what, int n) {
    c->add_option("files", o.files, what)->required()->expected(n);
  };

  CLI::App* solve = app.add_subcommand("solve", "optimal signal for a payoff and prior");
  files(solve, "PAYOFF PRIOR", 2);
  solve->add_option("--lower", o.lower, "lower bound G0 of the feasible interval");
  solve->add_option("--csv", o.csv, "plot data: x,F0cdf,Fcdf,C_F0,C_F,u,p");
  common(solve);

  CLI::App* olc = app.add_subcommand("check-olc", "is u ordinally less convex than v");
  files(olc, "U V", 2);
  common(olc);

  CLI::App* crater = app.add_subcommand("check-crater", "crater property of a regular payoff");
  files(crater, "PAYOFF", 1);
  common(crater, false);

  CLI::App* regular = app.add_subcommand("check-regular", "regularity of a payoff");
  files(regular, "PAYOFF", 1);
  common(regular, false);

  CLI::App* compare = app.add_subcommand("compare", "weak set order of the two argmax sets");
  files(compare, "U V PRIOR", 3);
  compare->add_option("--lower", o.lower, "lower bound G0 of the feasible interval");
  compare->add_option("--probes", o.probes, "probe size")->check(CLI::PositiveNumber);
  common(compare);

  CLI::App* cx = app.add_subcommand(
      "counterexample", "crater counterexample for U, or chord counterexample for U V");
  cx->add_option("files", o.files, "U [V]")->required()->expected(1, 2);
  cx->add_option("--csv", o.csv, "plot data: m,u,v,p,F0_density,F_cdf");
  cx->add_option("--probes", o.probes, "probe size")->check(CLI::PositiveNumber);
  common(cx);

  CLI::App* binary = app.add_subcommand("binary", "concavification for a binary prior");
  binary->add_option("files", o.files, "PAYOFF [PRIOR]")->required()->expected(1, 2);
  binary->add_option("--mu", o.mu, "prior mean when no prior file is given");
  common(binary, false);

  CLI::App* certify = app.add_subcommand("certify", "duality certificate for a candidate");
  files(certify, "PAYOFF PRIOR CANDIDATE", 3);
  common(certify);

  std::vector<CLI::App*> experiments;
  for (const char* name : {"experiment", "oracle"}) {
    CLI::App* e = app.add_subcommand(name, "seeded experiment batch");
    e->add_option("--kind", o.kind, "experiment kind")->required();
    e->add_option("--count", o.count, "number of instances")->check(CLI::NonNegativeNumber);
    e->add_option("--probes", o.probes, "probe size")->check(CLI::PositiveNumber);
    e->add_option("--threads", o.threads, "worker threads (0: all cores)");
    e->add_option("--csv", o.csv, "per-instance rows");
    common(e);
    experiments.push_back(e);
  }

  std::vector<std::string> argv_store{"persuade"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  // Grid experiments default to the kind's own grid.
  for (CLI::App* e : experiments) {
    if (e->parsed() && e->count("--grid") == 0) o.grid = 0;
  }

  try {
    if (solve->parsed()) return RunSolve(o, out);
    if (olc->parsed()) return RunCheckOlc(o, out);
    if (crater->parsed()) return RunCheckCrater(o, out);
    if (regular->parsed()) return RunCheckRegular(o, out);
    if (compare->parsed()) return RunCompare(o, out);
    if (cx->parsed()) {
      return o.files.size() == 2 ? RunChordCounterexample(o, out) : RunCraterCounterexample(o, out);
    }
    if (binary->parsed()) return RunBinary(o, out);
    if (certify->parsed()) return RunCertify(o, out);
    return RunExperimentCommand(o, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return ExitFor(e);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitNumeric;
  }
}

int Dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Dispatch(args, std::cout, std::cerr);
}

}  // namespace persuasion
