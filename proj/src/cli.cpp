#include "dyson/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dyson/betaens.hpp"
#include "dyson/chain.hpp"
#include "dyson/exact.hpp"
#include "dyson/lyapunov.hpp"
#include "dyson/schmidt.hpp"
#include "dyson/specfun.hpp"
#include "dyson/stats.hpp"
#include "dyson/tridiag.hpp"

namespace dyson::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

DisorderLaw parse_law(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::vector<double> a;
  if (colon != std::string::npos) {
    for (const auto& p : split(text.substr(colon + 1), ',')) a.push_back(to_double(trim(p)));
  }
  DisorderLaw law;
  if (name == "constant" && a.size() == 1) {
    law = Constant{a[0]};
  } else if (name == "gamma" && (a.size() == 1 || a.size() == 2)) {
    law = GammaLaw{a[0], a.size() == 2 ? a[1] : a[0]};
  } else if (name == "twopoint" && a.size() == 3) {
    law = TwoPoint{a[0], a[1], a[2]};
  } else if (name == "gaussian" && a.size() == 1) {
    law = GaussianPotential{a[0]};
  } else {
    throw UsageError("bad law '" + text +
                     "' (constant:v | gamma:alpha[,rate] | twopoint:light,heavy,p | gaussian:variance)");
  }
  validate(law);
  return law;
}

ChainKind parse_kind(const std::string& s) {
  if (s == "type1") return ChainKind::TypeI;
  if (s == "type2") return ChainKind::TypeII;
  if (s == "anderson") return ChainKind::Anderson;
  throw UsageError("bad chain kind '" + s + "' (type1 | type2 | anderson)");
}

// Flat "key = value" lines; '#' starts a comment.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key == "config") continue;
    out.push_back("--" + key);
    out.push_back(trim(line.substr(eq + 1)));
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

struct Common {
  Seed seed = 1;
  std::string output;
  std::string manifest;
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--output", c.output, "CSV output file (default: stdout)");
  sub->add_option("--manifest", c.manifest, "JSON manifest file (default: <output>.manifest.json)");
  sub->add_option("--config", c.config, "flat key = value file; flags override it");
}

// Result of one subcommand.
struct Outcome {
  Table table;
  std::string scalar;  ///< printed instead of the CSV when set and no --output
  nlohmann::json results = nlohmann::json::object();
  bool ok = true;
};

void emit(const CLI::App* sub, const Common& c, const Outcome& out) {
  std::vector<std::string> files;
  const std::string csv = to_csv(out.table);
  if (!c.output.empty()) {
    write_file(c.output, csv);
    files.push_back(c.output);
  } else if (!out.scalar.empty()) {
    std::cout << out.scalar << "\n";
  } else {
    std::cout << csv;
  }
  std::string manifest = c.manifest;
  if (manifest.empty() && !c.output.empty()) manifest = c.output + ".manifest.json";
  if (manifest.empty()) return;

  nlohmann::json params = nlohmann::json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "output" || name == "manifest") continue;
    if (opt->count() > 0) {
      params[name] = opt->as<std::string>();
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  files.push_back(manifest);
  nlohmann::json m = {{"command", sub->get_name()},
                      {"parameters", params},
                      {"seed", c.seed},
                      {"tool_version", kToolVersion},
                      {"timestamp", utc_timestamp()},
                      {"threads", 1},
                      {"output_files", files},
                      {"results", out.results}};
  write_file(manifest, m.dump(2) + "\n");
}

std::vector<double> grid_or_point(const std::string& grid, const std::vector<double>& points) {
  if (!grid.empty()) return parse_grid(grid);
  if (!points.empty()) return points;
  throw UsageError("give --grid or a point");
}

// ---- subcommands ----

struct PureArgs {
  std::string what = "idos";
  std::vector<double> x;
  std::string grid;
};

Outcome run_pure(const PureArgs& a) {
  static const std::map<std::string, std::string> header{{"idos", "M"}, {"dos", "D"}, {"omega", "Omega"}, {"xi", "xi"}};
  if (!header.count(a.what)) throw UsageError("--what must be idos, dos, omega or xi");
  Outcome out;
  out.table.header = {"x", header.at(a.what)};
  for (double x : grid_or_point(a.grid, a.x)) {
    if (!(x >= 0.0)) throw ParameterError("pure: x must be non-negative");
    const auto v = exact::pure_chain(x);
    const double y = a.what == "idos" ? v.idos : a.what == "dos" ? v.dos : a.what == "omega" ? v.omega : v.xi;
    out.table.rows.push_back({x, y});
  }
  if (a.grid.empty() && a.x.size() == 1) out.scalar = format_number(out.table.rows[0][1]);
  return out;
}

struct ExactArgs {
  double alpha = 1.0;
  double kappa = 1.0;
  std::string what = "idos";
  std::string grid;
};

Outcome run_exact(const ExactArgs& a) {
  const exact::GammaChainParams p{a.alpha, a.kappa};
  Outcome out;
  const auto xs = parse_grid(a.grid);
  if (a.what == "idos") {
    out.table.header = {"x", "M", "clamp"};
    for (double x : xs) {
      const auto v = exact::idos_exact_detail(p, x);
      out.table.rows.push_back({x, v.value, v.clamp});
    }
  } else if (a.what == "dos") {
    out.table.header = {"x", "D"};
    for (double x : xs) out.table.rows.push_back({x, exact::dos_exact(p, x)});
  } else if (a.what == "omega") {
    out.table.header = {"x", "Omega"};
    for (double x : xs) out.table.rows.push_back({x, exact::omega_exact(p, x)});
  } else {
    throw UsageError("--what must be idos, dos or omega");
  }
  return out;
}

struct SchmidtArgs {
  std::string kind = "type1";
  std::string law = "gamma:1,1";
  double spring_k = 1.0;
  std::string what = "omega";
  std::string grid;
  std::size_t samples = 1000000;
  std::size_t burn_in = schmidt::kDefaultBurnIn;
  int iterations = 50;
  Eigen::Index cells = 2000;
};

// Stationary density by iterating the integral map from a broad start.
Outcome schmidt_density(const SchmidtArgs& a, ChainKind kind, const DisorderLaw& law) {
  const auto xs = parse_grid(a.grid);
  if (xs.size() != 1) throw UsageError("schmidt --what density takes a single-point grid");
  const double x = xs[0];
  schmidt::DensityGrid g;
  schmidt::RecursionKind rec;
  if (kind == ChainKind::TypeI) {
    if (!(x > 0.0)) throw ParameterError("schmidt density: x must be positive");
    g = schmidt::make_xi_grid(1e-12 * x, 80.0 * x * mean(law), a.cells);
    schmidt::fill_from_density(g, [&](double t) { return std::exp(-t / x); });
    rec = schmidt::XiTypeI{x};
  } else if (kind == ChainKind::TypeII) {
    g = schmidt::make_ratio_grid(a.cells);
    schmidt::fill_from_density(g, [](double z) { return 1.0 / (kPi * (1.0 + z * z)); });
    rec = schmidt::RatioTypeII{x, a.spring_k};
  } else {
    throw UsageError("schmidt: kind must be type1 or type2");
  }
  const auto res = schmidt::density_iteration(rec, law, g, a.iterations);
  Outcome out;
  out.table.header = {"point", "weight"};
  for (Eigen::Index k = 0; k < res.grid.points.size(); ++k) {
    out.table.rows.push_back({res.grid.points[k], res.grid.weights[k]});
  }
  out.results["residual"] = res.residual;
  out.results["leaked"] = res.leaked;
  return out;
}

Outcome run_schmidt(const SchmidtArgs& a, Seed seed) {
  const auto kind = parse_kind(a.kind);
  const auto law = parse_law(a.law);
  Outcome out;
  if (a.what == "density") return schmidt_density(a, kind, law);
  const auto xs = parse_grid(a.grid);
  std::uint64_t i = 0;
  if (a.what == "omega") {
    out.table.header = {"x", "Omega", "stderr"};
    for (double x : xs) {
      const Seed s = derive_seed(seed, i++);
      schmidt::Estimate e;
      if (kind == ChainKind::TypeI) {
        e = schmidt::omega_mc(schmidt::XiTypeI{x}, law, a.samples, s, a.burn_in);
      } else if (kind == ChainKind::TypeII) {
        e = schmidt::omega_type2_mc(law, a.spring_k, x, a.samples, s, a.burn_in);
      } else {
        throw UsageError("schmidt: kind must be type1 or type2");
      }
      out.table.rows.push_back({x, e.value, e.stderr_});
    }
  } else if (a.what == "idos") {
    if (kind != ChainKind::TypeII) throw UsageError("schmidt --what idos needs --kind type2");
    out.table.header = {"omega_sq", "M", "stderr"};
    for (double x : xs) {
      const auto e = schmidt::idos_node_fraction(law, a.spring_k, x, a.samples, derive_seed(seed, i++), a.burn_in);
      out.table.rows.push_back({x, e.value, e.stderr_});
    }
  } else {
    throw UsageError("--what must be omega, idos or density");
  }
  return out;
}

struct LyapunovArgs {
  std::string kind = "type2";
  std::string law = "twopoint:1,2,0.5";
  double spring_k = 1.0;
  std::string grid;
  std::size_t steps = 1000000;
};

Outcome run_lyapunov(const LyapunovArgs& a, Seed seed) {
  const ChainSpec spec{parse_kind(a.kind), 1, parse_law(a.law), a.spring_k, seed};
  Outcome out;
  out.table.header = {spec.kind == ChainKind::Anderson ? "E" : "omega_sq", "gamma", "stderr"};
  std::uint64_t i = 0;
  for (double x : parse_grid(a.grid)) {
    const auto e = lyapunov::transfer_lyapunov(spec, x, a.steps, derive_seed(seed, i++));
    out.table.rows.push_back({x, e.gamma, e.stderr_});
  }
  return out;
}

struct ScalingArgs {
  std::string grid;
  double alpha = 0.0;
  std::size_t steps = 1000000;
};

Outcome run_scaling(const ScalingArgs& a, Seed seed) {
  Outcome out;
  const auto xs = parse_grid(a.grid);
  if (a.alpha <= 0.0) {
    out.table.header = {"x", "F", "D"};
    for (double x : xs) out.table.rows.push_back({x, specfun::scaling_f(x), specfun::scaling_dos(x)});
    return out;
  }
  const double s = std::cbrt(2.0 * a.alpha);
  std::vector<double> energies;
  for (double x : xs) energies.push_back(2.0 + x / (s * s));
  const auto rep = lyapunov::band_edge_collapse(a.alpha, energies, a.steps, seed);
  out.table.header = {"E", "x", "gamma", "stderr", "gamma_scaled", "F"};
  for (const auto& p : rep.points) {
    out.table.rows.push_back({p.energy, p.scaled_x, p.gamma, p.gamma_stderr, p.scaled_gamma, p.target});
  }
  out.results["max_rel_dev"] = rep.max_rel_dev;
  return out;
}

struct BetaArgs {
  Eigen::Index pairs = 200;
  double beta = 2.0;
  double c = 0.0;
  std::size_t samples = 100;
  int bins = 50;
};

Outcome run_betaens(const BetaArgs& a, Seed seed) {
  if (a.bins < 1) throw UsageError("--bins must be positive");
  betaens::BetaEnsembleSpec spec{a.pairs, a.beta, betaens::FixedBeta{}, seed};
  if (a.c > 0.0) spec.regime = betaens::COverN{a.c};
  auto ys = betaens::pooled_squared_spectra(spec, a.samples);

  std::function<double(double)> cdf;
  double hi_limit = 1.0;
  if (a.c > 0.0) {
    auto table = std::make_shared<betaens::ConCdf>(a.c);
    cdf = [table](double mu) { return (*table)(mu); };
    hi_limit = 80.0;
  } else {
    const double scale = 4.0 * static_cast<double>(a.pairs) * a.beta;
    for (double& y : ys) y /= scale;
    cdf = betaens::mp_cdf;
  }
  std::sort(ys.begin(), ys.end());
  // Equal-mass bins of the target law.
  std::vector<double> edges{0.0};
  for (int k = 1; k < a.bins; ++k) {
    const double q = static_cast<double>(k) / a.bins;
    double lo = 0.0, hi = hi_limit;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < q ? lo : hi) = mid;
    }
    edges.push_back(0.5 * (lo + hi));
  }
  edges.push_back(std::max(hi_limit, ys.empty() ? hi_limit : ys.back()));
  Outcome out;
  out.table.header = {"mu_lo", "mu_hi", "D", "D_target"};
  const double n = static_cast<double>(ys.size());
  for (int k = 0; k < a.bins; ++k) {
    const auto c0 = std::lower_bound(ys.begin(), ys.end(), edges[k]);
    const auto c1 = k + 1 == a.bins ? ys.end() : std::lower_bound(ys.begin(), ys.end(), edges[k + 1]);
    const double width = edges[k + 1] - edges[k];
    const double target = (cdf(edges[k + 1]) - cdf(edges[k])) / width;
    out.table.rows.push_back({edges[k], edges[k + 1], static_cast<double>(c1 - c0) / (n * width), target});
  }
  const auto ks = stats::ks_one_sample(ys, cdf);
  out.results["ks_statistic"] = ks.statistic;
  out.results["ks_p_value"] = ks.p_value;
  out.results["eigenvalues"] = ys.size();
  return out;
}

struct DosArgs {
  std::string kind = "type1";
  std::string law = "gamma:1,1";
  double spring_k = 1.0;
  Eigen::Index masses = 2001;
  std::size_t realizations = 10;
  std::string grid;
};

Outcome run_dos(const DosArgs& a, Seed seed) {
  const auto kind = parse_kind(a.kind);
  if (kind == ChainKind::Anderson) throw UsageError("dos: kind must be type1 or type2");
  const auto law = parse_law(a.law);
  const auto xs = parse_grid(a.grid);
  if (a.realizations < 1) throw UsageError("--realizations must be positive");
  std::vector<std::vector<double>> per(xs.size());
  for (std::size_t r = 0; r < a.realizations; ++r) {
    const auto m = squared_frequency_matrix(realize({kind, a.masses, law, a.spring_k, derive_seed(seed, r)}));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      per[i].push_back(static_cast<double>(count_below(m, std::nextafter(xs[i], 1e300))) /
                       static_cast<double>(a.masses));
    }
  }
  Outcome out;
  out.table.header = {"x", "M", "stderr"};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto st = block_stats(per[i]);
    out.table.rows.push_back({xs[i], st.mean, st.stderr_});
  }
  return out;
}

// Fast invariant checks across all modules.
Outcome run_selftest() {
  using Check = std::pair<const char*, std::function<bool()>>;
  const std::vector<Check> checks = {
      {"pure closed forms",
       [] {
         const auto v = exact::pure_chain(2.0);
         return std::abs(v.idos - 0.5) < 1e-15 && std::abs(v.omega - 2.0 * std::log(2.0)) < 1e-14 &&
                std::abs(v.dos - 1.0 / (2.0 * kPi)) < 1e-15 && exact::pure_chain(4.0).idos == 1.0;
       }},
      {"airy wronskian",
       [] {
         for (double x = -20.0; x <= 20.0; x += 0.37) {
           if (std::abs(specfun::airy(x).wronskian() - 1.0 / kPi) > 1e-12) return false;
         }
         return true;
       }},
      {"scaling dual forms",
       [] {
         for (double x = -6.0; x <= 6.0; x += 0.25) {
           if (std::abs(specfun::scaling_f(x) - specfun::scaling_f_rotated(x)) > 1e-8) return false;
         }
         return true;
       }},
      {"sturm count against node count",
       [] {
         const auto r = realize({ChainKind::TypeII, 2000, TwoPoint{1, 2, 0.3}, 1.0, 5});
         const auto m = squared_frequency_matrix(r);
         for (double w2 : {0.3, 1.0, 2.2, 3.7}) {
           if (schmidt::node_count(r, w2) != count_below(m, w2)) return false;
         }
         return true;
       }},
      {"exact idos pure limit",
       [] {
         return std::abs(exact::idos_exact({400.0, 400.0}, 2.0) - 0.5) < 0.01;
       }},
      {"omega characteristic function",
       [] {
         const auto e = schmidt::omega_mc(schmidt::XiTypeI{1.0}, GammaLaw{1, 1}, 200000, 3);
         return std::abs(e.value - exact::omega_exact({1, 1}, 1.0)) < 4.0 * e.stderr_;
       }},
      {"lyapunov pure chain",
       [] {
         const ChainSpec s{ChainKind::TypeII, 1, Constant{1.0}, 1.0, 0};
         return std::abs(lyapunov::transfer_lyapunov(s, 2.0, 10000, 1).gamma) < 1e-12 &&
                std::abs(lyapunov::transfer_lyapunov(s, 6.0, 1000000, 1).gamma - std::log(2.0 + std::sqrt(3.0))) <
                    1e-5;
       }},
      {"finite product identity",
       [] {
         const auto r = realize({ChainKind::TypeII, 500, TwoPoint{1, 2, 0.5}, 1.0, 9});
         const auto id = lyapunov::finite_identity(r, 1.3);
         return std::abs(id.from_recursion - id.from_spectrum) < 1e-9;
       }},
      {"beta ensemble zero mode",
       [] {
         const auto m = betaens::sample_matrix({30, 2.0, betaens::FixedBeta{}, 4});
         return eigenvalues(m.hermitian_form()).values.cwiseAbs().minCoeff() < 1e-10;
       }},
      {"whittaker c = 2 at 1",
       [] { return std::abs(specfun::whittaker_msq(2.0, 1.0) - std::exp(1.0)) < 1e-12; }},
      {"letac identity",
       [] { return schmidt::letac_check(1.0, 1.0, 1.0, 20000, 3).p_value > 1e-4; }},
  };
  Outcome out;
  out.table.header = {"check", "pass"};
  std::ostringstream lines;
  int i = 0;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception&) {
      ok = false;
    }
    out.ok = out.ok && ok;
    lines << (ok ? "PASS " : "FAIL ") << name << "\n";
    out.table.rows.push_back({static_cast<double>(i++), ok ? 1.0 : 0.0});
    out.results[name] = ok;
  }
  out.scalar = lines.str() + (out.ok ? "selftest passed" : "selftest FAILED");
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::string body = text;
  bool geometric = false;
  if (!body.empty() && body[0] == 'g') {
    geometric = true;
    body = body.substr(1);
  }
  const auto parts = split(body, ':');
  if (parts.size() != 3) throw UsageError("grid must be lo:hi:n or glo:hi:n, got '" + text + "'");
  const double lo = to_double(parts[0]), hi = to_double(parts[1]);
  const double nd = to_double(parts[2]);
  if (nd < 1 || nd != std::floor(nd)) throw UsageError("grid point count must be a positive integer");
  const auto n = static_cast<std::size_t>(nd);
  if (geometric && !(lo > 0.0 && hi > 0.0)) throw UsageError("geometric grid needs positive ends");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = geometric ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  out.front() = lo;
  if (n > 1) out.back() = hi;
  return out;
}

int run(const std::vector<std::string>& args_in) {
  std::vector<std::string> args = args_in;
  CLI::App app{"Spectra and localisation of disordered harmonic chains"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Common common;
  PureArgs pure;
  ExactArgs ex;
  SchmidtArgs sch;
  LyapunovArgs lya;
  ScalingArgs sca;
  BetaArgs bet;
  DosArgs dos;

  auto* p = app.add_subcommand("pure", "closed forms of the uniform chain");
  p->add_option("--what", pure.what, "idos | dos | omega | xi")->capture_default_str();
  p->add_option("--x", pure.x, "evaluation point(s)");
  p->add_option("--grid", pure.grid, "lo:hi:n or glo:hi:n");
  add_common(p, common);

  auto* e = app.add_subcommand("exact", "exact curves of the gamma-distributed chain");
  e->add_option("--alpha", ex.alpha, "shape (integer)")->capture_default_str();
  e->add_option("--kappa", ex.kappa, "rate")->capture_default_str();
  e->add_option("--what", ex.what, "idos | dos | omega")->capture_default_str();
  e->add_option("--grid", ex.grid, "lo:hi:n or glo:hi:n")->required();
  add_common(e, common);

  auto* s = app.add_subcommand("schmidt", "Monte Carlo of the ratio recursions");
  s->add_option("--kind", sch.kind, "type1 | type2")->capture_default_str();
  s->add_option("--law", sch.law, "disorder law")->capture_default_str();
  s->add_option("--spring-k", sch.spring_k, "spring constant")->capture_default_str();
  s->add_option("--what", sch.what, "omega | idos | density")->capture_default_str();
  s->add_option("--iterations", sch.iterations, "density map iterations")->capture_default_str();
  s->add_option("--cells", sch.cells, "density grid cells")->capture_default_str();
  s->add_option("--grid", sch.grid, "lo:hi:n or glo:hi:n")->required();
  s->add_option("--samples", sch.samples, "samples per point")->capture_default_str();
  s->add_option("--burn-in", sch.burn_in, "discarded steps")->capture_default_str();
  add_common(s, common);

  auto* l = app.add_subcommand("lyapunov", "Lyapunov exponents from transfer products");
  l->add_option("--kind", lya.kind, "type1 | type2 | anderson")->capture_default_str();
  l->add_option("--law", lya.law, "disorder law")->capture_default_str();
  l->add_option("--spring-k", lya.spring_k, "spring constant")->capture_default_str();
  l->add_option("--grid", lya.grid, "w^2 (or E for anderson) grid")->required();
  l->add_option("--steps", lya.steps, "steps per point")->capture_default_str();
  add_common(l, common);

  auto* c = app.add_subcommand("scaling", "band-edge scaling functions and collapse");
  c->add_option("--grid", sca.grid, "scaled energy grid")->required();
  c->add_option("--alpha", sca.alpha, "if positive, run the Anderson collapse at this alpha");
  c->add_option("--steps", sca.steps, "steps per point")->capture_default_str();
  add_common(c, common);

  auto* b = app.add_subcommand("betaens", "anti-symmetric beta-ensemble histograms");
  b->add_option("--pairs", bet.pairs, "N, matrix size 2N+1")->capture_default_str();
  b->add_option("--beta", bet.beta, "fixed beta")->capture_default_str();
  b->add_option("--c", bet.c, "if positive, beta = c/N");
  b->add_option("--samples", bet.samples, "matrices")->capture_default_str();
  b->add_option("--bins", bet.bins, "equal-mass bins")->capture_default_str();
  add_common(b, common);

  auto* d = app.add_subcommand("dos", "IDOS by exact eigenvalue counting");
  d->add_option("--kind", dos.kind, "type1 | type2")->capture_default_str();
  d->add_option("--law", dos.law, "disorder law")->capture_default_str();
  d->add_option("--spring-k", dos.spring_k, "spring constant")->capture_default_str();
  d->add_option("--masses", dos.masses, "N")->capture_default_str();
  d->add_option("--realizations", dos.realizations, "chains averaged")->capture_default_str();
  d->add_option("--grid", dos.grid, "lo:hi:n or glo:hi:n")->required();
  add_common(d, common);

  auto* t = app.add_subcommand("selftest", "fast invariant checks");
  add_common(t, common);

  try {
    // Config values go right after the subcommand so later flags win.
    for (std::size_t i = 1; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") {
        const auto extra = read_config(args[i + 1]);
        args.insert(args.begin() + 2, extra.begin(), extra.end());
        break;
      }
    }
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    Outcome out;
    if (sub == p) out = run_pure(pure);
    else if (sub == e) out = run_exact(ex);
    else if (sub == s) out = run_schmidt(sch, common.seed);
    else if (sub == l) out = run_lyapunov(lya, common.seed);
    else if (sub == c) out = run_scaling(sca, common.seed);
    else if (sub == b) out = run_betaens(bet, common.seed);
    else if (sub == d) out = run_dos(dos, common.seed);
    else out = run_selftest();
    emit(sub, common, out);
    return out.ok ? kExitOk : kExitNumeric;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& err) {
    std::cerr << "invalid parameter: " << err.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& err) {
    std::cerr << "invalid parameter: " << err.what() << "\n";
    return kExitUsage;
  } catch (const IoError& err) {
    std::cerr << "io error: " << err.what() << "\n";
    return kExitIo;
  } catch (const Error& err) {
    std::cerr << "numeric failure: " << err.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace dyson::cli
