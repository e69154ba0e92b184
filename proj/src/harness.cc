#include "persuasion/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "persuasion/constructions.h"
#include "persuasion/error.h"
#include "persuasion/orders.h"
#include "persuasion/solver.h"

namespace persuasion {
namespace {

using Rng = std::mt19937_64;

Rng MakeRng(uint64_t seed, uint32_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

double Unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
double Signed(Rng& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }
int Pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <typename T>
T PickOf(Rng& rng, std::initializer_list<T> options) {
  return *(options.begin() + Pick(rng, 0, static_cast<int>(options.size()) - 1));
}

std::string Format(const char* fmt, double a, double b = 0.0, double c = 0.0,
                   double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

Payoff SShape(Rng& rng, double scale, int sign) {
  const double t = 0.25 + 0.5 * Unit(rng);
  const double k = sign * scale * (0.125 + 0.375 * Unit(rng));
  const double c0 = Signed(rng), c1 = 2.0 * Unit(rng);
  const Polynomial p({c0 - k * t * t * t, c1 + 3 * k * t * t, -3 * k * t, k});
  return AutoTagged(Payoff::FromPolynomial(p, Curvature::kUnclassified).segments());
}

Payoff Spline(Rng& rng, int segments, double scale) {
  std::vector<double> t, s;
  for (int k = 0; k <= segments; ++k) {
    t.push_back(static_cast<double>(k) / segments);
    s.push_back(scale * Signed(rng));
  }
  return SplineFromCurvature(t, s, Signed(rng), Signed(rng));
}

Payoff OneSigned(Rng& rng, int segments, double scale, double sign) {
  std::vector<double> t, s;
  for (int k = 0; k <= segments; ++k) {
    t.push_back(static_cast<double>(k) / segments);
    s.push_back(sign * scale * (0.1 + 0.9 * Unit(rng)));
  }
  return SplineFromCurvature(t, s, Signed(rng), Signed(rng));
}

// Curvature negative, positive, negative over random knots.
Payoff ThreeRuns(Rng& rng, double scale) {
  std::vector<double> t{0.0, 1.0};
  for (int k = 0; k < 4; ++k) t.push_back(0.05 + 0.9 * Unit(rng));
  std::sort(t.begin(), t.end());
  for (size_t k = 1; k < t.size(); ++k) {
    if (t[k] - t[k - 1] < 0.02) return Payoff();
  }
  const double signs[] = {-1, -1, 1, 1, -1, -1};
  std::vector<double> s;
  for (double sg : signs) s.push_back(sg * scale * (0.1 + 0.9 * Unit(rng)));
  return SplineFromCurvature(t, s, Signed(rng), 2.0 * Signed(rng));
}

Payoff Crater(Rng& rng, double scale, bool want_holds) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    const Payoff u = ThreeRuns(rng, scale);
    if (u.segments().empty()) continue;
    if (CurvatureRuns(u).size() != 3) continue;
    if (CheckCrater(u).holds == want_holds) return u;
  }
  throw Error(ErrorKind::kConstructionFailure,
              want_holds ? "no crater-compliant draw in 500 attempts"
                         : "no crater-violating draw in 500 attempts");
}

std::vector<double> TwentiethKnots(Rng& rng, int pieces) {
  std::vector<int> pool;
  for (int k = 1; k < 20; ++k) pool.push_back(k);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<double> knots{0.0, 1.0};
  for (int k = 0; k < std::min(pieces - 1, 19); ++k) knots.push_back(pool[k] / 20.0);
  std::sort(knots.begin(), knots.end());
  return knots;
}

Payoff PiecewiseLinear(Rng& rng, int pieces, double scale, bool jumps) {
  const std::vector<double> knots = TwentiethKnots(rng, pieces);
  std::vector<PayoffSegment> segs;
  double value = Signed(rng);
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    const double slope = (jumps ? 0.5 : 0.4 * scale) * Signed(rng);
    if (jumps) value = Signed(rng);
    segs.push_back({a, b, Polynomial({value - slope * a, slope}), Curvature::kAffine});
    value += slope * (b - a);
  }
  return Payoff::Create(segs);
}

Distribution Atomless(Rng& rng, int pieces) {
  const double a = 0.3 * Unit(rng), b = 0.7 + 0.3 * Unit(rng);
  std::vector<double> cuts{a, b};
  for (int k = 1; k < pieces; ++k) cuts.push_back(a + (b - a) * Unit(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> w;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    w.push_back(0.2 + Unit(rng));
    total += w.back();
  }
  std::vector<UniformPiece> out;
  for (int k = 0; k < pieces; ++k) {
    if (cuts[k + 1] > cuts[k]) out.push_back({cuts[k], cuts[k + 1], w[k] / total});
  }
  double kept = 0.0;
  for (const UniformPiece& p : out) kept += p.w;
  for (UniformPiece& p : out) p.w /= kept;
  return Distribution::Create({}, out);
}

std::vector<Atom> RandomAtoms(Rng& rng, int count, double mass) {
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int k = 0; k < count; ++k) {
    atoms.push_back({Unit(rng), 0.1 + Unit(rng)});
    total += atoms.back().w;
  }
  for (Atom& a : atoms) a.w *= mass / total;
  std::sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
  return atoms;
}

Distribution Mixed(Rng& rng, int pieces) {
  const double atom_mass = 0.3 + 0.3 * Unit(rng);
  const std::vector<Atom> atoms = RandomAtoms(rng, Pick(rng, 1, 2), atom_mass);
  std::vector<UniformPiece> uniforms = Atomless(rng, pieces).uniforms();
  for (UniformPiece& p : uniforms) p.w *= 1.0 - atom_mass;
  return Distribution::Create(atoms, uniforms);
}

// Mixes f with an atom so that the mean becomes `mean` exactly up to rounding.
Distribution WithMean(Rng& rng, const Distribution& f, double mean) {
  const double m = f.Mean();
  if (std::abs(m - mean) < 1e-15) return f;
  const double y = m > mean ? mean * Unit(rng) : mean + (1.0 - mean) * Unit(rng);
  const double lambda = (m - mean) / (m - y);
  std::vector<Atom> atoms;
  for (const Atom& a : f.atoms()) atoms.push_back({a.x, (1.0 - lambda) * a.w});
  atoms.push_back({y, lambda});
  std::sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
  std::vector<UniformPiece> uniforms = f.uniforms();
  for (UniformPiece& p : uniforms) p.w *= 1.0 - lambda;
  return Distribution::Create(atoms, uniforms);
}

// Grid pair (F, H) with F a contraction of H, both on the grid.
std::pair<Distribution, Distribution> GridPair(Rng& rng, const GridSpec& grid) {
  std::vector<double> h(grid.n(), 0.0);
  for (int k = 0; k < 5; ++k) h[Pick(rng, 0, grid.n() - 1)] += 0.2 + Unit(rng);
  double total = 0.0;
  for (double w : h) total += w;
  for (double& w : h) w /= total;
  std::vector<double> f = h;
  for (int op = 0; op < 2; ++op) {
    std::vector<int> support;
    for (int i = 0; i < grid.n(); ++i)
      if (f[i] > 1e-12) support.push_back(i);
    if (support.size() < 2) break;
    const int p = Pick(rng, 0, static_cast<int>(support.size()) - 2);
    const int i = support[p];
    const int k = support[Pick(rng, p + 1, static_cast<int>(support.size()) - 1)];
    if (k - i < 2) continue;
    const int y = Pick(rng, i + 1, k - 1);
    double a = f[i] * (0.3 + 0.7 * Unit(rng));
    double b = a * (y - i) / double(k - y);
    if (b > f[k]) {
      a *= f[k] / b;
      b = f[k];
    }
    f[i] -= a;
    f[k] -= b;
    f[y] += a + b;
  }
  return {Distribution::FromGrid(grid, f), Distribution::FromGrid(grid, h)};
}

double WsoResidual(const WsoVerdict& w) {
  double r = 0.0;
  for (const WsoFailure& f : w.lower_failures) r = std::max(r, f.target - f.best);
  for (const WsoFailure& f : w.higher_failures) r = std::max(r, f.target - f.best);
  return r;
}

std::string WsoDetail(const WsoVerdict& w) {
  std::string s = "lower=" + std::to_string(w.lower) +
                  " strictly_lower=" + std::to_string(w.strictly_lower) +
                  " higher=" + std::to_string(w.higher) +
                  " strictly_higher=" + std::to_string(w.strictly_higher);
  return s;
}

WsoVerdict Compare(const Payoff& u, const Payoff& v, const Distribution& f0,
                   const GridSpec& grid, const Distribution* g0, int k, uint64_t seed) {
  const ArgmaxProbe pu = ProbeArgmax(u, f0, grid, g0, k, 2 * seed + 1);
  const ArgmaxProbe pv = ProbeArgmax(v, f0, grid, g0, k, 2 * seed + 2);
  return WsoCompare(u, pu, v, pv, f0, grid, g0);
}

void RunDuality(uint64_t seed, const GridSpec& grid, InstanceResult& r) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kDuality, seed, grid.n());
  const SolveReport s = Solve(GenPayoff(spec), GenPrior(spec), grid);
  const SlacknessReport slack = CheckSlackness(s, 1e-6);
  r.residual = std::abs(s.gap);
  r.pass = r.residual <= 1e-8 && slack.pass;
  r.detail = Format("gap=%.3g affine=%.3g support=%.3g", s.gap, slack.affine_residual,
                    slack.support_residual);
}

void RunBinary(int index, uint64_t seed, const GridSpec& grid, InstanceResult& r) {
  Payoff u;
  Distribution prior;
  if (index == 0) {
    u = Payoff::Create({{0.0, 0.5, Polynomial({0.0}), Curvature::kAffine},
                        {0.5, 1.0, Polynomial({1.0}), Curvature::kAffine}});
    prior = Distribution::TwoPoint(0.0, 0.7, 1.0);
  } else {
    const InstanceSpec spec = MakeInstance(ExperimentKind::kBinary, seed, grid.n());
    u = GenPayoff(spec);
    prior = GenPrior(spec);
  }
  const BinarySolution b = BinarySolve(u, prior);
  const SolveReport s = Solve(u, prior, grid, nullptr, false);
  r.residual = std::abs(s.value - b.value);
  r.pass = r.residual <= 1e-8;
  if (index == 0) r.pass = r.pass && std::abs(b.value - 0.6) <= 1e-12;
  r.detail = Format("mu=%.6g cav=%.12g grid=%.12g", prior.Mean(), b.value, s.value);
}

void RunCensorship(uint64_t seed, int grid_n, InstanceResult& r) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kCensorship, seed, grid_n);
  const Payoff v = GenPayoff(spec);
  const Distribution f0 = GenPrior(spec);
  const CensorshipSolution cs = UpperCensorshipSolve(v, f0);
  std::vector<int> sizes;
  for (int n = grid_n; n >= 101 && sizes.size() < 4; n = (n - 1) / 2 + 1) sizes.push_back(n);
  std::reverse(sizes.begin(), sizes.end());
  std::vector<double> gaps;
  bool ok = true;
  for (int n : sizes) {
    const Certificate c = CertifyOptimality(v, f0, cs.f, GridSpec(n), 2e-3);
    // Grid duals are not unique, so the gap itself jitters below the 1/n envelope.
    ok = ok && c.feasible && c.gap >= -1e-9 && c.gap <= 2e-3 * 801.0 / n;
    gaps.push_back(c.gap);
  }
  r.residual = gaps.back();
  r.pass = ok && gaps.back() <= 2e-3;
  r.detail = "cutoff=" + Format("%.6g", cs.a) + " gaps";
  for (size_t k = 0; k < gaps.size(); ++k) {
    r.detail += " n" + std::to_string(sizes[k]) + "=" + Format("%.3g", gaps[k]);
  }
}

void RunLemma4(uint64_t seed, const GridSpec& grid, InstanceResult& r) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kLemma4, seed, grid.n());
  const Payoff u = GenPayoff(spec);
  Rng rng = MakeRng(seed, 3);
  const auto [f, h] = GridPair(rng, grid);
  const DominanceVerdict d = IntervalDominanceCheck(u, f, h, DominanceMode::kGrid, &grid);
  const double best = Solve(u, h, grid, &f, false).value;
  const double gain = best - u.Expectation(h);
  const bool oracle = gain <= 1e-6;
  r.pass = d.holds == oracle;
  r.residual = gain;
  r.detail = Format("check=%g oracle=%g gain=%.3g shortfall=%.3g", d.holds, oracle, gain,
                    d.shortfall);
}

void RunThm1Suff(uint64_t seed, const GridSpec& grid, int k, InstanceResult& r) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kThm1Suff, seed, grid.n());
  const Payoff u = GenPayoff(spec);
  const Payoff v = GenPartner(u, spec.partner, seed);
  const Distribution f0 = Discretize(GenPrior(spec), grid);
  const WsoVerdict w = Compare(u, v, f0, grid, nullptr, k, seed);
  r.pass = !w.strictly_higher;
  r.residual = WsoResidual(w);
  r.detail = std::string(PayoffFamilyName(spec.payoff)) + "/" +
             PartnerRouteName(spec.partner) + "/" + PriorFamilyName(spec.prior) + " " +
             WsoDetail(w);
}

void RunThm1StarInterval(uint64_t seed, const GridSpec& grid, int k, InstanceResult& r) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kThm1StarInterval, seed, grid.n());
  const Payoff u = GenPayoff(spec);
  const Payoff v = GenPartner(u, spec.partner, seed);
  const Distribution f0 = Discretize(GenPrior(spec), grid);
  Rng rng = MakeRng(seed, 3);
  const double lo = f0.SupportMin(), hi = f0.SupportMax();
  const Distribution g0 = UpperCensorship(f0, lo + (hi - lo) * Unit(rng));
  const WsoVerdict w = Compare(u, v, f0, grid, &g0, k, seed);
  r.pass = !w.strictly_higher;
  r.residual = WsoResidual(w);
  r.detail = std::string(PayoffFamilyName(spec.payoff)) + "/" +
             PartnerRouteName(spec.partner) + " " + WsoDetail(w);
}

void RunThm1Nec(uint64_t seed, const GridSpec& grid, int k, InstanceResult& r) {
  Rng rng = MakeRng(seed, 4);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Payoff u = Spline(rng, 3, 8.0), v = Spline(rng, 3, 8.0);
    const OlcVerdict olc = IsOrdinallyLessConvex(u, v, grid);
    if (olc.holds) continue;
    const ChordCounterexample cx = BuildChordCounterexample(u, v, *olc.witness, grid);
    const WsoVerdict w = Compare(u, v, cx.prior, grid, nullptr, k, seed);
    r.pass = w.strictly_higher;
    r.residual = WsoResidual(w);
    r.detail = std::string(ChordCaseName(cx.kase)) + " x=" + Format("%.4g", cx.witness.x) +
               " z=" + Format("%.4g", cx.witness.z) + " " + WsoDetail(w);
    return;
  }
  throw Error(ErrorKind::kConstructionFailure, "no pair failing the chord condition");
}

void RunThm2Suff(uint64_t seed, const GridSpec& grid, int k, InstanceResult& r) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kThm2Suff, seed, grid.n());
  const Payoff u = GenPayoff(spec);
  const Payoff v = GenPartner(u, spec.partner, seed);
  const Distribution f0 = Discretize(GenPrior(spec), grid);
  const WsoVerdict w = Compare(u, v, f0, grid, nullptr, k, seed);
  const SolveReport s = Solve(u, f0, grid, nullptr, false);
  const Distribution pooled = PoolConcave(s.optimizer, u);
  const Distribution spread = SpreadConvex(s.optimizer, u, f0);
  const double pool_loss = s.value - u.Expectation(pooled);
  const double spread_loss = s.value - u.Expectation(spread);
  const bool preserved = LessInformative(pooled, s.optimizer).holds &&
                         LessInformative(spread, f0).holds && pool_loss <= 1e-6 &&
                         spread_loss <= 1e-6;
  r.pass = w.lower && preserved;
  r.residual = std::max({WsoResidual(w), pool_loss, spread_loss, 0.0});
  r.detail = std::string(PayoffFamilyName(spec.payoff)) + "/" +
             PartnerRouteName(spec.partner) + " " + WsoDetail(w) +
             Format(" pool_loss=%.3g spread_loss=%.3g", pool_loss, spread_loss);
}

void RunThm2Nec(uint64_t seed, const GridSpec& grid, InstanceResult& r) {
  InstanceSpec spec = MakeInstance(ExperimentKind::kThm2Nec, seed, grid.n());
  std::optional<CraterCounterexample> cx;
  int draws = 0;
  while (!cx) {
    ++draws;
    try {
      cx = BuildCraterCounterexample(GenPayoff(spec), grid);
    } catch (const Error& e) {
      // Some violations are too thin to realize on the grid; draw again.
      if (e.kind() != ErrorKind::kConstructionFailure || draws >= 20) throw;
      spec.seed += 1000003;
    }
  }
  const NecessityCheck nc = VerifyNecessity(*cx, grid);
  r.pass = nc.gap <= 1e-6 && nc.v_drop > 1e-9;
  r.residual = nc.gap;
  r.detail = std::string(CraterCaseName(cx->kase)) +
             Format(" X=%.4g gap=%.3g drop=%.3g draws=%d", cx->X, nc.gap, nc.v_drop, draws);
}

void RunProp1(uint64_t seed, InstanceResult& r) {
  const InstanceSpec spec = MakeInstance(ExperimentKind::kProp1, seed, 0);
  const Payoff u = GenPayoff(spec);
  const Payoff v = GenPartner(u, spec.partner, seed);
  Rng rng = MakeRng(seed, 3);
  const double mu = 0.05 + 0.9 * Unit(rng);
  const BinaryComparison c = CompareBinarySolutions(u, v, mu);
  r.pass = c.pass;
  r.residual = std::max({0.0, c.v.x - c.u.x, c.u.w - c.v.w, c.v.y - c.u.y, c.u.z - c.v.z});
  r.detail = Format("mu=%.4g u:[%.4g %.4g %.4g", mu, c.u.x, c.u.y, c.u.z) +
             Format(" %.4g] v:[%.4g %.4g %.4g", c.u.w, c.v.x, c.v.y, c.v.z) +
             Format(" %.4g]", c.v.w);
  for (const std::string& f : c.failures) r.detail += " fail:" + f;
}

void RunLattice(uint64_t seed, InstanceResult& r) {
  Rng rng = MakeRng(seed, 5);
  const double mean = 0.2 + 0.6 * Unit(rng);
  auto draw = [&]() {
    Distribution d = Unit(rng) < 0.5 ? Distribution::Create(RandomAtoms(rng, Pick(rng, 2, 4), 1.0))
                                     : Mixed(rng, Pick(rng, 1, 3));
    return WithMean(rng, d, mean);
  };
  const Distribution f = draw(), g = draw(), h = draw();
  std::vector<std::string> violations;
  double worst = 0.0;
  auto le = [&](const Distribution& a, const Distribution& b, const char* what) {
    const OrderCheck c = LessInformative(a, b);
    if (!c.holds) {
      violations.push_back(what);
      worst = std::max(worst, c.violation);
    }
  };
  auto same = [&](const Distribution& a, const Distribution& b, const char* what) {
    const double d = SupDistance(IntegrateCdf(a), IntegrateCdf(b));
    worst = std::max(worst, d);
    if (d > 1e-8) violations.push_back(what);
  };
  const Distribution j = Join(f, g), m = Meet(f, g);
  le(f, j, "f <= join");
  le(g, j, "g <= join");
  le(m, f, "meet <= f");
  le(m, g, "meet <= g");
  le(m, j, "meet <= join");
  le(f, f, "reflexive");
  le(Distribution::PointMass(mean), f, "point mass <= f");
  same(j, Join(g, f), "join commutes");
  same(m, Meet(g, f), "meet commutes");
  same(Join(f, f), f, "join idempotent");
  same(Meet(f, f), f, "meet idempotent");
  same(Join(f, m), f, "absorption f v (f ^ g)");
  same(Meet(f, j), f, "absorption f ^ (f v g)");
  same(Join(j, h), Join(f, Join(g, h)), "join associative");
  same(Meet(m, h), Meet(f, Meet(g, h)), "meet associative");
  // Least upper bound and greatest lower bound at sample points.
  const IntegratedCdf cf = IntegrateCdf(f), cg = IntegrateCdf(g), cj = IntegrateCdf(j),
                      cm = IntegrateCdf(m);
  for (int k = 0; k <= 200; ++k) {
    const double x = k / 200.0;
    const double up = cj(x) - std::max(cf(x), cg(x));
    const double down = cm(x) - std::min(cf(x), cg(x));
    worst = std::max({worst, std::abs(up), std::max(down, 0.0)});
    if (std::abs(up) > 1e-8) {
      violations.push_back("join is not the pointwise max");
      break;
    }
    if (down > 1e-8) {
      violations.push_back("meet above the pointwise min");
      break;
    }
  }
  const bool fg = LessInformative(f, g).holds, gf = LessInformative(g, f).holds;
  if (fg && gf) same(f, g, "antisymmetric");
  if (fg) same(j, g, "join of comparable pair");
  if (fg != (SupDistance(cj, cg) <= 1e-8)) violations.push_back("order and join disagree");
  const auto& a = f.atoms();
  if (f.uniforms().empty() && a.size() >= 3) {
    const double w = a[0].w + a[1].w;
    std::vector<Atom> pooled{{(a[0].x * a[0].w + a[1].x * a[1].w) / w, w}};
    for (size_t i = 2; i < a.size(); ++i) pooled.push_back(a[i]);
    std::sort(pooled.begin(), pooled.end(), [](auto& p, auto& q) { return p.x < q.x; });
    const Distribution c = Distribution::Create(pooled);
    le(c, f, "pooled contraction <= f");
    if (LessInformative(f, c).holds) violations.push_back("f <= strict contraction");
  }
  r.pass = violations.empty();
  r.residual = worst;
  r.detail = std::to_string(violations.size()) + " violations";
  for (const std::string& v : violations) r.detail += "; " + v;
}

}  // namespace

const char* ExperimentKindName(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kThm1Suff: return "thm1-suff";
    case ExperimentKind::kThm1Nec: return "thm1-nec";
    case ExperimentKind::kThm1StarInterval: return "thm1star-interval";
    case ExperimentKind::kThm2Suff: return "thm2-suff";
    case ExperimentKind::kThm2Nec: return "thm2-nec";
    case ExperimentKind::kProp1: return "prop1";
    case ExperimentKind::kLemma4: return "lemma4";
    case ExperimentKind::kDuality: return "duality";
    case ExperimentKind::kBinary: return "binary";
    case ExperimentKind::kCensorship: return "censorship";
    case ExperimentKind::kLattice: return "lattice";
  }
  return "?";
}

std::vector<ExperimentKind> AllExperimentKinds() {
  return {ExperimentKind::kThm1Suff,  ExperimentKind::kThm1Nec,
          ExperimentKind::kThm1StarInterval, ExperimentKind::kThm2Suff,
          ExperimentKind::kThm2Nec,   ExperimentKind::kProp1,
          ExperimentKind::kLemma4,    ExperimentKind::kDuality,
          ExperimentKind::kBinary,    ExperimentKind::kCensorship,
          ExperimentKind::kLattice};
}

std::optional<ExperimentKind> ParseExperimentKind(const std::string& name) {
  for (ExperimentKind k : AllExperimentKinds()) {
    if (name == ExperimentKindName(k)) return k;
  }
  return std::nullopt;
}

const char* PayoffFamilyName(PayoffFamily f) {
  switch (f) {
    case PayoffFamily::kSShape: return "s_shape";
    case PayoffFamily::kSpline: return "spline";
    case PayoffFamily::kConvex: return "convex";
    case PayoffFamily::kConcave: return "concave";
    case PayoffFamily::kCraterCompliant: return "crater_compliant";
    case PayoffFamily::kCraterViolating: return "crater_violating";
    case PayoffFamily::kPiecewiseLinear: return "piecewise_linear";
    case PayoffFamily::kStep: return "step";
  }
  return "?";
}

const char* PriorFamilyName(PriorFamily f) {
  switch (f) {
    case PriorFamily::kAtomless: return "atomless";
    case PriorFamily::kAtoms: return "atoms";
    case PriorFamily::kMixed: return "mixed";
    case PriorFamily::kTwoPoint: return "two_point";
  }
  return "?";
}

const char* PartnerRouteName(PartnerRoute r) {
  switch (r) {
    case PartnerRoute::kExp: return "exp";
    case PartnerRoute::kCubic: return "cubic";
    case PartnerRoute::kAddConvex: return "add_convex";
  }
  return "?";
}

int DefaultGrid(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDuality: return 201;
    case ExperimentKind::kBinary: return 201;
    case ExperimentKind::kCensorship: return 801;
    case ExperimentKind::kLemma4: return 41;
    case ExperimentKind::kThm1Nec: return 61;
    case ExperimentKind::kThm2Nec: return 201;
    default: return 101;
  }
}

InstanceSpec MakeInstance(ExperimentKind kind, uint64_t seed, int grid_n) {
  Rng rng = MakeRng(seed, 0);
  InstanceSpec s;
  s.seed = seed;
  s.kind = kind;
  s.grid_n = grid_n > 0 ? grid_n : DefaultGrid(kind);
  s.segments = Pick(rng, 3, 6);
  s.curvature_scale = 4.0 + 8.0 * Unit(rng);
  s.sign = Unit(rng) < 0.5 ? 1 : -1;
  s.prior_pieces = Pick(rng, 1, 4);
  using PF = PayoffFamily;
  using QF = PriorFamily;
  using PR = PartnerRoute;
  switch (kind) {
    case ExperimentKind::kDuality:
      s.payoff = PickOf(rng, {PF::kSpline, PF::kSShape, PF::kPiecewiseLinear, PF::kStep});
      s.prior = PickOf(rng, {QF::kAtomless, QF::kAtoms, QF::kMixed});
      break;
    case ExperimentKind::kBinary:
      s.payoff = PickOf(rng, {PF::kPiecewiseLinear, PF::kStep});
      s.prior = QF::kTwoPoint;
      break;
    case ExperimentKind::kCensorship:
      s.payoff = PF::kSShape;
      s.sign = -1;
      s.prior = QF::kAtomless;
      break;
    case ExperimentKind::kLemma4:
      s.payoff = PF::kSpline;
      s.prior = QF::kAtoms;
      break;
    case ExperimentKind::kThm1Suff:
      s.payoff = PickOf(rng, {PF::kSpline, PF::kSShape, PF::kConvex, PF::kConcave,
                              PF::kPiecewiseLinear, PF::kStep});
      s.prior = PickOf(rng, {QF::kAtomless, QF::kAtoms, QF::kMixed, QF::kTwoPoint});
      s.partner = PickOf(rng, {PR::kExp, PR::kCubic, PR::kAddConvex});
      break;
    case ExperimentKind::kThm1StarInterval:
      s.payoff = PickOf(rng, {PF::kSpline, PF::kSShape});
      s.prior = PickOf(rng, {QF::kAtomless, QF::kMixed});
      s.partner = PickOf(rng, {PR::kExp, PR::kCubic, PR::kAddConvex});
      break;
    case ExperimentKind::kThm2Suff:
      s.payoff = PickOf(rng, {PF::kConvex, PF::kConcave, PF::kSShape, PF::kCraterCompliant});
      s.prior = QF::kAtomless;
      s.partner = PickOf(rng, {PR::kExp, PR::kCubic, PR::kAddConvex});
      break;
    case ExperimentKind::kThm2Nec:
      s.payoff = PF::kCraterViolating;
      s.prior = QF::kAtomless;
      break;
    case ExperimentKind::kProp1:
      s.payoff = PickOf(rng, {PF::kSpline, PF::kSShape});
      s.prior = QF::kTwoPoint;
      s.partner = PickOf(rng, {PR::kExp, PR::kCubic});
      break;
    case ExperimentKind::kThm1Nec:
    case ExperimentKind::kLattice:
      s.payoff = PF::kSpline;
      s.prior = QF::kAtoms;
      break;
  }
  s.degree = s.payoff == PF::kPiecewiseLinear || s.payoff == PF::kStep ? 1 : 3;
  return s;
}

Payoff GenPayoff(const InstanceSpec& spec) {
  Rng rng = MakeRng(spec.seed, 1);
  const double scale = spec.curvature_scale;
  switch (spec.payoff) {
    case PayoffFamily::kSShape: return SShape(rng, scale, spec.sign);
    case PayoffFamily::kSpline: return Spline(rng, spec.segments, scale);
    case PayoffFamily::kConvex: return OneSigned(rng, spec.segments, scale, 1.0);
    case PayoffFamily::kConcave: return OneSigned(rng, spec.segments, scale, -1.0);
    case PayoffFamily::kCraterCompliant: return Crater(rng, scale, true);
    case PayoffFamily::kCraterViolating: return Crater(rng, scale, false);
    case PayoffFamily::kPiecewiseLinear:
      return PiecewiseLinear(rng, spec.segments, scale, false);
    case PayoffFamily::kStep: return PiecewiseLinear(rng, spec.segments, scale, true);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown payoff family");
}

Distribution GenPrior(const InstanceSpec& spec) {
  Rng rng = MakeRng(spec.seed, 2);
  switch (spec.prior) {
    case PriorFamily::kAtomless: return Atomless(rng, spec.prior_pieces);
    case PriorFamily::kAtoms:
      return Distribution::Create(RandomAtoms(rng, spec.prior_pieces + 1, 1.0));
    case PriorFamily::kMixed: return Mixed(rng, spec.prior_pieces);
    case PriorFamily::kTwoPoint: {
      const GridSpec grid(spec.grid_n);
      const int i = Pick(rng, 0, grid.n() - 2);
      const int k = Pick(rng, i + 1, grid.n() - 1);
      return Distribution::TwoPoint(grid.point(i), 0.1 + 0.8 * Unit(rng), grid.point(k));
    }
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown prior family");
}

Payoff GenPartner(const Payoff& u, PartnerRoute route, uint64_t seed) {
  std::vector<PayoffSegment> segs = u.segments();
  for (const PayoffSegment& s : segs) {
    if (s.outer != OuterTransform::kIdentity) {
      throw Error(ErrorKind::kInvalidArgument, "partner of a transformed payoff");
    }
  }
  Rng rng = MakeRng(seed, 6);
  switch (route) {
    case PartnerRoute::kExp:
      for (PayoffSegment& s : segs) s.outer = OuterTransform::kExp;
      break;
    case PartnerRoute::kCubic: {
      double lo = 1e300, hi = -1e300;
      for (int k = 0; k <= 1000; ++k) {
        const double y = u.Eval(k / 1000.0);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
      for (const PayoffSegment& s : segs) {
        lo = std::min({lo, s.Value(s.from), s.Value(s.to)});
      }
      lo -= 0.05 * (hi - lo + 1.0);
      for (PayoffSegment& s : segs) {
        const Polynomial d = s.poly - Polynomial::Constant(lo);
        s.poly = d + d * d * d;
      }
      break;
    }
    case PartnerRoute::kAddConvex: {
      const double c = 0.5 + 3.5 * Unit(rng), a = Unit(rng);
      const Polynomial q({c * a * a, -2 * c * a, c});
      for (PayoffSegment& s : segs) s.poly = s.poly + q;
      break;
    }
  }
  for (PayoffSegment& s : segs) s.curvature = Curvature::kUnclassified;
  return AutoTagged(segs);
}

Certificate CertifyOptimality(const Payoff& u, const Distribution& f0,
                              const Distribution& candidate, const GridSpec& grid,
                              double tol) {
  Certificate c;
  c.feasible = std::abs(candidate.Mean() - f0.Mean()) <= 1e-9 &&
               LessInformative(candidate, f0).holds;
  const PriceFunction p = DualPrices(u, f0, grid);
  for (int i = 0; i + 1 < grid.n(); ++i) {
    const double a = grid.point(i), b = grid.point(i + 1);
    const double slope = (p.values[i + 1] - p.values[i]) / (b - a);
    const Excess e = MaxExcessOverLine(u, a, b, p.values[i] - slope * a, slope);
    c.lift = std::max(c.lift, e.value);
  }
  c.upper = p.Integrate(f0) + c.lift;
  c.lower = u.Expectation(candidate);
  c.gap = c.upper - c.lower;
  c.certified = c.feasible && c.gap <= tol;
  return c;
}

InstanceResult RunInstance(ExperimentKind kind, int index, uint64_t seed, int grid_n,
                           int probe_k) {
  InstanceResult r;
  r.index = index;
  r.seed = seed;
  const int n = grid_n > 0 ? grid_n : DefaultGrid(kind);
  const auto start = std::chrono::steady_clock::now();
  try {
    const GridSpec grid(n);
    switch (kind) {
      case ExperimentKind::kDuality: RunDuality(seed, grid, r); break;
      case ExperimentKind::kBinary: RunBinary(index, seed, grid, r); break;
      case ExperimentKind::kCensorship: RunCensorship(seed, n, r); break;
      case ExperimentKind::kLemma4: RunLemma4(seed, grid, r); break;
      case ExperimentKind::kThm1Suff: RunThm1Suff(seed, grid, probe_k, r); break;
      case ExperimentKind::kThm1Nec: RunThm1Nec(seed, grid, probe_k, r); break;
      case ExperimentKind::kThm1StarInterval:
        RunThm1StarInterval(seed, grid, probe_k, r);
        break;
      case ExperimentKind::kThm2Suff: RunThm2Suff(seed, grid, probe_k, r); break;
      case ExperimentKind::kThm2Nec: RunThm2Nec(seed, grid, r); break;
      case ExperimentKind::kProp1: RunProp1(seed, r); break;
      case ExperimentKind::kLattice: RunLattice(seed, r); break;
    }
  } catch (const std::exception& e) {
    r.pass = false;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ExperimentReport RunExperiment(const ExperimentOptions& options) {
  if (options.count < 0) throw Error(ErrorKind::kInvalidArgument, "negative count");
  ExperimentReport report;
  report.kind = options.kind;
  report.seed = options.seed;
  report.count = options.count;
  report.grid_n = options.grid_n > 0 ? options.grid_n : DefaultGrid(options.kind);
  report.probe_k = options.probe_k;
  report.instances.resize(options.count);
  const auto start = std::chrono::steady_clock::now();
  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, options.count));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int i = next++; i < options.count; i = next++) {
      report.instances[i] = RunInstance(options.kind, i, options.seed + i, report.grid_n,
                                        options.probe_k);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  for (const InstanceResult& r : report.instances) {
    if (!r.error.empty()) {
      ++report.errors;
    } else if (r.pass) {
      ++report.passes;
    } else {
      ++report.failures;
    }
    if (r.error.empty()) report.worst_residual = std::max(report.worst_residual, r.residual);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace persuasion
