// nevlab: command-line front end. Exit codes: 0 success, 1 input or
// precondition error, 2 property violated with a confirmed witness.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <nevlab/io.hpp>
#include <nevlab/nevanlinna.hpp>
#include <nevlab/normality.hpp>
#include <nevlab/value_distribution.hpp>

using namespace nevlab;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kViolated = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

FactoredRational load_spec(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  return io::factored_from_json(io::parse_text(read_file(path), path));
}

GaussianRational parse_gr(const std::string& text, const std::string& flag) {
  try {
    return GaussianRational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(flag + ": " + e.what());
  }
}

mpq_class parse_rational(const std::string& text, const std::string& flag) {
  GaussianRational g = parse_gr(text, flag);
  if (!g.is_real()) throw InputError(flag + ": expected a real rational");
  return g.re();
}

// Writes to path, or stdout when path is empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  body(out);
}

struct SampleOptions {
  std::string kind = "exp";
  std::string input;
  std::string a = "1";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--sample", kind, "exp | sin | cos | tan | rational")
        ->check(CLI::IsMember({"exp", "sin", "cos", "tan", "rational"}));
    cmd->add_option("--input", input, "function spec JSON (rational sample)");
    cmd->add_option("--a", a, "exponent a of exp(a z)");
  }

  Sample build() const {
    if (kind == "exp") return Sample::exp(parse_gr(a, "--a"));
    if (kind == "sin") return Sample::sin();
    if (kind == "cos") return Sample::cos();
    if (kind == "tan") return Sample::tan();
    return Sample::rational(expand(load_spec(input)), "rational");
  }
};

struct GridOptions {
  double rmin = 1, rmax = 50, tol = 1e-8;
  int steps = 20;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--rmin", rmin, "smallest radius (>= 1)");
    cmd->add_option("--rmax", rmax, "largest radius");
    cmd->add_option("--steps", steps, "number of radii");
    cmd->add_option("--tol", tol, "quadrature tolerance");
  }
  std::vector<double> radii() const {
    if (!(tol > 0)) throw InputError("--tol must be positive");
    if (steps < 1) throw InputError("radius grid is empty");
    if (steps > 1 && !(rmax > rmin)) throw InputError("radius grid is empty: need rmax > rmin");
    return linear_grid(rmin, rmax, steps);
  }
};

struct SpecOptions {
  int m = 1, n = 2, k = 1;
  void add_to(CLI::App* cmd) {
    cmd->add_option("--m", m, "exponent m");
    cmd->add_option("--n", n, "exponent n");
    cmd->add_option("--k", k, "derivative order k");
  }
  MonomialSpec spec(bool enforce) const {
    MonomialSpec s{m, n, k, enforce};
    s.validate();
    return s;
  }
};

json decomposition_json(const SquarefreeDecomposition& d) {
  json parts = json::array();
  for (const auto& p : d.parts) parts.push_back({{"factor", io::polynomial_to_json(p.factor)}, {"multiplicity", p.multiplicity}});
  return parts;
}

// ---------------------------------------------------------------- commands

int cmd_analyze(const std::string& input, const SpecOptions& so, const std::string& omega_text) {
  RationalFunction f = expand(load_spec(input));
  GaussianRational omega = parse_gr(omega_text, "--omega");
  auto rep = theorem2_verify(f, MonomialSpec{so.m, so.n, so.k, false}, omega);
  if (rep.verdict == Verdict::precondition_unmet) throw InputError("precondition not met: " + rep.failed_clause);
  json out{{"schema", io::kSchema},
           {"verdict", to_string(rep.verdict)},
           {"distinct_zero_count", rep.distinct_zero_count},
           {"m", so.m},
           {"n", so.n},
           {"k", so.k},
           {"omega", omega.str()},
           {"F", io::rational_to_json(rep.F)},
           {"numerator_of_difference", io::polynomial_to_json(rep.numerator_of_difference)},
           {"decomposition", decomposition_json(rep.witness)}};
  std::cout << out.dump(2) << '\n';
  return rep.verdict == Verdict::holds ? kOk : kViolated;
}

int cmd_fuzz(std::size_t cases, std::uint64_t seed, int max_degree, unsigned workers, const std::string& report) {
  if (max_degree < 1) throw InputError("--max-degree must be positive");
  FuzzConfig cfg;
  cfg.case_count = cases;
  cfg.seed = seed;
  cfg.workers = workers;
  cfg.bounds.max_zero_degree = max_degree;
  cfg.bounds.max_pole_degree = max_degree;
  FuzzSummary s = fuzz_theorem2(cfg);
  emit(report, [&](std::ostream& os) { os << to_json(s, cfg).dump(2) << '\n'; });
  bool confirmed = std::any_of(s.violations.begin(), s.violations.end(),
                               [](const FuzzViolation& v) { return v.numerically_confirmed; });
  return confirmed ? kViolated : kOk;
}

int cmd_characteristic(const SampleOptions& sample, const GridOptions& grid, const std::string& out) {
  auto radii = grid.radii();
  auto profile = nevanlinna_profile(sample.build(), radii, grid.tol);
  emit(out, [&](std::ostream& os) { profile.write_csv(os); });
  return kOk;
}

int cmd_thm1(const SampleOptions& sample, const SpecOptions& so, const std::string& omega_text, const GridOptions& grid) {
  MonomialSpec spec = so.spec(true);
  GaussianRational omega = parse_gr(omega_text, "--omega");
  auto radii = grid.radii();
  Sample f = sample.build();
  if (!f.is_transcendental()) throw InputError("thm1 needs a transcendental sample (exp, sin, cos, tan)");
  auto rep = theorem1_inequality_report(f, spec, omega, radii, grid.tol);
  json rows = json::array();
  for (const auto& r : rep.rows) rows.push_back({{"r", r.r}, {"T", r.T}, {"Nbar", r.Nbar}, {"q", r.q}, {"c_star", rep.c_star}});
  json out{{"schema", io::kSchema},
           {"sample", f.id()},
           {"m", spec.m},
           {"n", spec.n},
           {"k", spec.k},
           {"omega", omega.str()},
           {"c_star", rep.c_star},
           {"slack_C", rep.slack.C},
           {"verdict", rep.verdict()},
           {"rows", std::move(rows)}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_normality(const std::string& family, int jmax, const std::string& region, int grid, int k, const std::string& out) {
  if (jmax < 1) throw InputError("--jmax must be at least 1");
  Rect rect;
  try {
    rect = Rect::parse(region);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  auto table = marty_scan(FamilySpec::by_name(family, jmax, k), rect, grid);
  emit(out, [&](std::ostream& os) { table.write_csv(os); });
  return kOk;
}

int cmd_rescale(const std::string& input, const std::string& z0_text, const std::string& t_text, const SpecOptions& so,
                bool check) {
  RationalFunction f = expand(load_spec(input));
  GaussianRational z0 = parse_gr(z0_text, "--z0");
  mpq_class t = parse_rational(t_text, "--t");
  if (sgn(t) <= 0) throw InputError("--t must be a positive rational");
  auto rep = zalcman_rescale_exact(f, so.spec(false), z0, t);
  json out{{"schema", io::kSchema},
           {"equal", rep.equal},
           {"lhs", io::rational_to_json(rep.lhs)},
           {"rhs", io::rational_to_json(rep.rhs)}};
  std::cout << out.dump(2) << '\n';
  return check && !rep.equal ? kViolated : kOk;
}

int cmd_bound(const SampleOptions& sample, const SpecOptions& so, const std::string& h_text, double radius, double tol,
              const std::string& out) {
  if (!(radius > 0)) throw InputError("--radius must be positive");
  auto rep = theorem4_bound_scan(sample.build(), so.spec(false), ShareTarget(parse_gr(h_text, "--target")),
                                 Region::disk(radius), tol);
  for (const auto& cell : rep.flagged) {
    std::cerr << "warning: zero localization failed on cell [" << cell.x0 << ", " << cell.x1 << "] x [" << cell.y0
              << ", " << cell.y1 << "]\n";
  }
  emit(out, [&](std::ostream& os) { rep.write_csv(os); });
  std::cerr << "path=" << rep.path << " A_min=" << io::fmt12(rep.a_min) << '\n';
  return rep.flagged.empty() ? kOk : kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nevlab: exact and numeric checks for differential monomials f^m (f^n)^(k)"};
  app.require_subcommand(1);

  std::string input, omega = "1", out, report, z0 = "0", t = "1", family = "exp-scale", region = "-1,1,-1,1", h = "1";
  SpecOptions so;
  SampleOptions sample;
  GridOptions grid;
  std::size_t cases = 1000;
  std::uint64_t seed = 0;
  int max_degree = 9, jmax = 20, mgrid = 32;
  unsigned workers = 0;
  bool check = false;
  double radius = 2, btol = 1e-10;

  auto* analyze = app.add_subcommand("analyze", "exact distinct-zero verdict for F - omega with rational f");
  analyze->add_option("--input", input, "function spec JSON")->required();
  so.add_to(analyze);
  analyze->add_option("--omega", omega, "nonzero constant omega, e.g. \"2\" or \"1/2-3i\"");

  auto* fuzz = app.add_subcommand("fuzz", "seeded random search for counterexamples to the distinct-zero bound");
  fuzz->add_option("--cases", cases, "number of cases");
  fuzz->add_option("--seed", seed, "master seed");
  fuzz->add_option("--max-degree", max_degree, "cap on total zero and pole multiplicity of f");
  fuzz->add_option("--workers", workers, "worker threads (default NEVLAB_WORKERS or all cores)");
  fuzz->add_option("--report", report, "JSON report path (default stdout)");

  auto* characteristic = app.add_subcommand("characteristic", "Nevanlinna profile CSV");
  sample.add_to(characteristic);
  grid.add_to(characteristic);
  characteristic->add_option("--out", out, "CSV path (default stdout)");

  auto* thm1 = app.add_subcommand("thm1", "Nbar(r,1/(F-omega))/T(r,F) table with a PASS/ATTENTION verdict");
  sample.add_to(thm1);
  so.add_to(thm1);
  thm1->add_option("--omega", omega, "nonzero constant omega");
  grid.add_to(thm1);

  auto* normality = app.add_subcommand("normality", "Marty scan CSV for a built-in family");
  normality->add_option("--family", family, "exp-scale | monomial-scale | reciprocal-logistic | constant");
  normality->add_option("--jmax", jmax, "largest family index");
  normality->add_option("--region", region, "rectangle \"x0,x1,y0,y1\"");
  normality->add_option("--grid", mgrid, "grid points per side (>= 16)");
  normality->add_option("--k", so.k, "k for monomial-scale");
  normality->add_option("--out", out, "CSV path (default stdout)");

  auto* rescale = app.add_subcommand("rescale", "exact rescaling identity with rho = t^(m+n)");
  rescale->add_option("--input", input, "function spec JSON")->required();
  rescale->add_option("--z0", z0, "center z0");
  rescale->add_option("--t", t, "positive rational t");
  so.add_to(rescale);
  rescale->add_flag("--check", check, "exit 2 when the two sides differ");

  auto* bound = app.add_subcommand("bound", "zeros of F - h in |z| <= R with |(f^n)^(k)| at each (CSV)");
  sample.add_to(bound);
  so.add_to(bound);
  bound->add_option("--target", h, "constant target h");
  bound->add_option("--radius", radius, "disk radius");
  bound->add_option("--tol", btol, "location tolerance");
  bound->add_option("--out", out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*analyze) return cmd_analyze(input, so, omega);
    if (*fuzz) return cmd_fuzz(cases, seed, max_degree, workers, report);
    if (*characteristic) return cmd_characteristic(sample, grid, out);
    if (*thm1) return cmd_thm1(sample, so, omega, grid);
    if (*normality) return cmd_normality(family, jmax, region, mgrid, so.k, out);
    if (*rescale) return cmd_rescale(input, z0, t, so, check);
    if (*bound) return cmd_bound(sample, so, h, radius, btol, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
