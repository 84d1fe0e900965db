#include "instab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "instab/dispersion.hpp"
#include "instab/eigensystem.hpp"
#include "instab/error.hpp"
#include "instab/lattice.hpp"
#include "instab/models.hpp"
#include "instab/spectral.hpp"

namespace instab::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string p_text;
  std::string q_text;
  std::string model_text = "ns";
  double nu = 0.0;
  std::optional<double> alpha;
  double tol = 1e-10;
  std::int64_t max_depth = kDefaultMaxDepth;
  std::optional<std::int64_t> fixed_depth;
  std::int64_t window = 0;  // 0 selects the subcommand default
  std::string format;       // empty selects the subcommand default
  std::string output;

  double radius = 4.0;
  std::optional<double> lambda;
  std::optional<double> lambda_min, lambda_max, lambda_step;
  std::optional<double> nu_min, nu_max, nu_step;
  double t_final = 60.0;
  std::optional<double> dt;
  std::uint64_t seed = 12345;
};

LatticeVector parse_vector(const std::string& text, const char* name) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError(std::string("--") + name + " expects x,y");
  try {
    std::size_t used_x = 0, used_y = 0;
    const std::string xs = text.substr(0, comma);
    const std::string ys = text.substr(comma + 1);
    const long long x = std::stoll(xs, &used_x);
    const long long y = std::stoll(ys, &used_y);
    if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument("trailing");
    return {x, y};
  } catch (const std::logic_error&) {
    throw UsageError(std::string("--") + name + " expects two integers x,y, got '" + text + "'");
  }
}

std::vector<double> make_grid(double lo, double hi, double step, const char* what) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw UsageError(std::string("empty ") + what + " grid");
  const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 10000000) throw UsageError(std::string(what) + " grid too large");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

std::string require_format(const RunConfig& cfg, const std::string& fallback, bool csv_ok) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f == "csv" && !csv_ok) throw UsageError(cfg.subcommand + ": csv output is not available");
  return f;
}

FlowParams params_from(const RunConfig& cfg, bool need_q = true) {
  if (cfg.p_text.empty()) throw UsageError("--p is required");
  if (need_q && cfg.q_text.empty()) throw UsageError("--q is required");
  const LatticeVector p = parse_vector(cfg.p_text, "p");
  const LatticeVector q = need_q ? parse_vector(cfg.q_text, "q") : LatticeVector{0, 0};
  const ModelKind model = parse_model(cfg.model_text);
  if (model == ModelKind::NavierStokes && cfg.alpha)
    throw UsageError("--alpha applies only to the alpha models");
  return make_flow_params(model, p, q, cfg.nu, cfg.alpha);
}

json vec_json(LatticeVector v) { return json::array({v.x, v.y}); }

json instance_json(const FlowParams& fp, const RunConfig& cfg) {
  json j;
  j["model"] = std::string(to_string(fp.model));
  j["p"] = vec_json(fp.p);
  j["q_input"] = vec_json(parse_vector(cfg.q_text, "q"));
  j["q"] = vec_json(fp.q);
  j["class"] = std::string(to_string(fp.point_class));
  j["nu"] = fp.nu;
  if (fp.is_alpha_model()) j["alpha"] = fp.alpha;
  else j["alpha"] = nullptr;
  return j;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_csv_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_double(v);
    first = false;
  }
  os << '\n';
}

/// Runs job(i) for i in [0, count) on up to sweep_threads() workers; each
/// worker gets its own state from make_state. Rethrows the first failure.
template <class State>
void parallel_for(std::size_t count, const std::function<State()>& make_state,
                  const std::function<void(State&, std::size_t)>& job) {
  const unsigned threads = sweep_threads(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned id) {
    try {
      State state = make_state();
      for (std::size_t i = next++; i < count; i = next++) job(state, i);
    } catch (...) {
      errors[id] = std::current_exception();
      next = count;
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---- subcommands -------------------------------------------------------

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const std::string fmt = require_format(cfg, "csv", true);
  if (cfg.p_text.empty()) throw UsageError("--p is required");
  const LatticeVector p = parse_vector(cfg.p_text, "p");
  std::vector<std::pair<LatticeVector, PointClass>> rows;
  if (!cfg.q_text.empty()) {
    const LatticeVector q = parse_vector(cfg.q_text, "q");
    rows.emplace_back(q, classify(q, p));
  } else {
    for (const auto& [orbit, c] : enumerate_classes(p, cfg.radius)) rows.emplace_back(orbit.rep, c);
  }
  if (fmt == "csv") {
    out << "qx,qy,norm_sq,class\n";
    for (const auto& [q, c] : rows) out << q.x << ',' << q.y << ',' << q.norm_sq() << ',' << to_string(c) << '\n';
  } else {
    json j;
    j["schema"] = 1;
    j["p"] = vec_json(p);
    if (cfg.q_text.empty()) j["radius"] = cfg.radius;
    json pts = json::array();
    for (const auto& [q, c] : rows)
      pts.push_back({{"q", vec_json(q)}, {"norm_sq", q.norm_sq()}, {"class", std::string(to_string(c))}});
    j["points"] = pts;
    out << j.dump(2) << '\n';
  }
  return kOk;
}

RootResult solve_root(const FlowParams& fp, const RunConfig& cfg) {
  if (!(fp.nu > 0.0)) throw UsageError("root search needs nu > 0");
  DispersionSpec spec = make_dispersion_spec(fp, cfg.fixed_depth);
  spec.max_depth = cfg.max_depth;
  RootSearchOptions opts;
  if (cfg.lambda_max) opts.lambda_cap = *cfg.lambda_max;
  return find_root(spec, cfg.tol, opts);
}

int cmd_root(const RunConfig& cfg, std::ostream& out) {
  const std::string fmt = require_format(cfg, "json", true);
  const FlowParams fp = params_from(cfg);
  const RootResult r = solve_root(fp, cfg);
  if (fmt == "csv") {
    out << "found,lambda,bracket_lo,bracket_hi,dispersion_residual,cf_depth\n";
    out << (r.found ? 1 : 0) << ',' << format_double(r.lambda) << ',' << format_double(r.bracket_lo) << ','
        << format_double(r.bracket_hi) << ',' << format_double(r.dispersion_residual) << ',' << r.cf_depth << '\n';
  } else {
    json j;
    j["schema"] = 1;
    j["instance"] = instance_json(fp, cfg);
    j["tol"] = cfg.tol;
    j["found"] = r.found;
    j["lambda"] = r.lambda;
    j["bracket"] = json::array({r.bracket_lo, r.bracket_hi});
    j["dispersion_residual"] = r.dispersion_residual;
    j["cf_depth"] = r.cf_depth;
    j["diagnostic"] = r.diagnostic;
    out << j.dump(2) << '\n';
  }
  return r.found ? kOk : kNumerical;
}

int cmd_nu0(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, "json", false);
  const FlowParams fp = params_from(cfg);
  make_dispersion_spec(fp);  // class check
  Nu0Options opts;
  if (cfg.nu_min) opts.nu_start = *cfg.nu_min;
  if (cfg.nu_max) opts.nu_cap = *cfg.nu_max;
  const double nu0 = nu0_estimate(fp, cfg.tol, opts);
  json j;
  j["schema"] = 1;
  j["instance"] = instance_json(fp, cfg);
  j["tol"] = cfg.tol;
  j["nu0"] = nu0;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_eigvec(const RunConfig& cfg, std::ostream& out) {
  const std::string fmt = require_format(cfg, "json", true);
  const FlowParams fp = params_from(cfg);
  make_dispersion_spec(fp);
  double lambda = 0.0;
  if (cfg.lambda) {
    lambda = *cfg.lambda;
  } else {
    const RootResult r = solve_root(fp, cfg);
    if (!r.found) throw Error(ErrorCode::NoSignChange, r.diagnostic);
    lambda = r.lambda;
  }
  const std::int64_t window = cfg.window > 0 ? cfg.window : 128;
  EigenOptions eo;
  eo.root_tol = cfg.tol;
  eo.max_depth = cfg.max_depth;
  const EigenvectorResult res = build_w(lambda, fp, window, eo);
  if (fmt == "csv") {
    out << "n,w,log_abs_w\n";
    for (std::int64_t n = -window; n <= window; ++n)
      out << n << ',' << format_double(res.at(n)) << ','
          << format_double(res.log_abs_w[static_cast<std::size_t>(n + window)]) << '\n';
    return kOk;
  }
  json j;
  j["schema"] = 1;
  j["instance"] = instance_json(fp, cfg);
  j["lambda"] = lambda;
  j["window"] = window;
  j["residual"] = res.residual;
  j["decay_rate"] = res.decay_rate;
  j["decay_r_squared"] = res.decay_r_squared;
  j["sign_ok"] = res.sign_ok;
  j["degenerate"] = is_degenerate(res);
  json ns = json::array(), ws = json::array(), ls = json::array();
  for (std::int64_t n = -window; n <= window; ++n) {
    ns.push_back(n);
    ws.push_back(res.at(n));
    ls.push_back(finite_or_null(res.log_abs_w[static_cast<std::size_t>(n + window)]));
  }
  j["n"] = ns;
  j["w"] = ws;
  j["log_abs_w"] = ls;
  out << j.dump(2) << '\n';
  return kOk;
}

std::vector<double> lambda_points(const RunConfig& cfg) {
  if (cfg.lambda) return {*cfg.lambda};
  if (!cfg.lambda_min || !cfg.lambda_max || !cfg.lambda_step)
    throw UsageError("give --lambda or all of --lambda-min, --lambda-max, --lambda-step");
  return make_grid(*cfg.lambda_min, *cfg.lambda_max, *cfg.lambda_step, "lambda");
}

int cmd_det(const RunConfig& cfg, std::ostream& out) {
  const std::string fmt = require_format(cfg, "csv", true);
  const FlowParams fp = params_from(cfg);
  const std::vector<double> grid = lambda_points(cfg);
  if (std::any_of(grid.begin(), grid.end(), [](double l) { return !(l > 0.0); }))
    throw UsageError("det: lambda must be > 0");
  const std::int64_t window = cfg.window > 0 ? cfg.window : 128;
  std::vector<DeterminantSample> samples(grid.size());
  parallel_for<int>(
      grid.size(), [] { return 0; },
      [&](int&, std::size_t i) { samples[i] = det_I_plus_K(grid[i], fp, window); });
  if (fmt == "csv") {
    out << "lambda,value,N\n";
    for (const auto& s : samples) out << format_double(s.lambda) << ',' << format_double(s.value) << ',' << s.window << '\n';
  } else {
    json j;
    j["schema"] = 1;
    j["instance"] = instance_json(fp, cfg);
    json rows = json::array();
    for (const auto& s : samples) rows.push_back({{"lambda", s.lambda}, {"value", s.value}, {"N", s.window}});
    j["samples"] = rows;
    out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, "json", false);
  const FlowParams fp = params_from(cfg);
  const std::int64_t window = cfg.window > 0 ? cfg.window : 32;
  const double dt = cfg.dt ? *cfg.dt : max_stable_dt(build_L(fp, window));
  GrowthOptions go;
  go.seed = cfg.seed;
  const double rate = growth_rate(fp, window, cfg.t_final, dt, go);
  json j;
  j["schema"] = 1;
  j["instance"] = instance_json(fp, cfg);
  j["window"] = window;
  j["t_final"] = cfg.t_final;
  j["dt"] = dt;
  j["seed"] = cfg.seed;
  j["growth_rate"] = rate;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, "csv", true);
  const FlowParams fp = params_from(cfg);
  DispersionSpec spec = make_dispersion_spec(fp, cfg.fixed_depth);
  spec.max_depth = cfg.max_depth;
  const bool nu_scan = cfg.nu_min || cfg.nu_max || cfg.nu_step;
  const bool lambda_scan = cfg.lambda_min || cfg.lambda_max || cfg.lambda_step;
  if (nu_scan == lambda_scan) throw UsageError("curve: give exactly one of a lambda grid or a nu grid");

  struct Row {
    double x = 0, a = 0, b = 0, c = 0;
    bool keep = true;
  };
  std::vector<double> grid;
  if (nu_scan) {
    if (!cfg.nu_min || !cfg.nu_max || !cfg.nu_step) throw UsageError("curve: --nu-min, --nu-max, --nu-step are all required");
    grid = make_grid(*cfg.nu_min, *cfg.nu_max, *cfg.nu_step, "nu");
    if (grid.front() < 0.0) throw UsageError("curve: nu must be >= 0");
  } else {
    if (!cfg.lambda_min || !cfg.lambda_max || !cfg.lambda_step)
      throw UsageError("curve: --lambda-min, --lambda-max, --lambda-step are all required");
    grid = make_grid(*cfg.lambda_min, *cfg.lambda_max, *cfg.lambda_step, "lambda");
  }

  std::vector<Row> rows(grid.size());
  parallel_for<DispersionFunction>(
      grid.size(), [&] { return DispersionFunction(spec); },
      [&](DispersionFunction& fn, std::size_t i) {
        Row& row = rows[i];
        row.x = grid[i];
        if (nu_scan) {
          if (row.x == 0.0) {  // every coefficient vanishes at λ = ν = 0
            row.a = 0.0;
            row.b = 0.0;
            return;
          }
          const DispersionParts d = fn.parts(0.0, cfg.tol, row.x);
          row.a = d.total();
          row.b = -d.a0;
        } else {
          if (fp.nu == 0.0 && row.x == 0.0) {
            row.keep = false;
            return;
          }
          const DispersionParts d = fn.parts(row.x, cfg.tol);
          row.a = -d.a0;
          row.b = d.tails();
          row.c = d.total();
        }
      });

  out << (nu_scan ? "nu,h,rhs\n" : "lambda,minus_a0,f_plus_g,dispersion\n");
  for (const Row& r : rows) {
    if (!r.keep) continue;
    if (nu_scan) write_csv_row(out, {r.x, r.a, r.b});
    else write_csv_row(out, {r.x, r.a, r.b, r.c});
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, "json", false);
  const FlowParams fp = params_from(cfg);
  const RootResult r = solve_root(fp, cfg);
  if (!r.found) throw Error(ErrorCode::NoSignChange, r.diagnostic);
  const std::int64_t window = cfg.window > 0 ? cfg.window : 128;
  const double lam = r.lambda;
  const double scale = std::max(1.0, std::abs(lam));
  constexpr double kAgree = 1e-8;
  constexpr double kDet = 1e-6;

  json checks = json::array();
  bool all = true;
  auto add = [&](const std::string& name, double value, double limit) {
    const bool pass = std::isfinite(value) && value <= limit;
    all = all && pass;
    checks.push_back({{"name", name}, {"pass", pass}, {"value", finite_or_null(value)}, {"limit", limit}});
  };
  const double lam_matrix = max_real_eig(fp, window);
  add("matrix", std::abs(lam - lam_matrix), kAgree * scale);
  double lam_det = std::numeric_limits<double>::quiet_NaN();
  try {
    lam_det = det_root(fp, window, {0.9 * lam, 1.1 * lam}, 1e-3 * cfg.tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSignChange) throw;
  }
  add("determinant_root", std::abs(lam - lam_det), kAgree * scale);
  if (fp.model == ModelKind::NavierStokes) add("determinant_value", std::abs(det_I_plus_K(lam, fp, window).value), kDet);

  json j;
  j["schema"] = 1;
  j["instance"] = instance_json(fp, cfg);
  j["window"] = window;
  j["lambda_cf"] = lam;
  j["lambda_matrix"] = lam_matrix;
  j["lambda_det"] = finite_or_null(lam_det);
  j["checks"] = checks;
  j["pass"] = all;
  out << j.dump(2) << '\n';
  return all ? kOk : kFailure;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnsupportedClass:
      return kUsage;
    default:
      return kNumerical;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

unsigned sweep_threads(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("INSTAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Linear instability of unidirectional flows via continued fractions", "instab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto instance_opts = [&cfg](CLI::App* sub, bool with_q) {
    sub->add_option("--p", cfg.p_text, "forcing wave vector x,y")->required();
    if (with_q) sub->add_option("--q", cfg.q_text, "orbit point x,y")->required();
    sub->add_option("--model", cfg.model_text, "ns | sg | nsa | voigt")->capture_default_str();
    sub->add_option("--nu", cfg.nu, "viscosity");
    sub->add_option("--alpha", cfg.alpha, "alpha-model length scale");
    sub->add_option("--tol", cfg.tol, "tolerance")->capture_default_str();
    sub->add_option("--max-depth", cfg.max_depth, "continued-fraction depth cap")->capture_default_str();
    sub->add_option("--depth", cfg.fixed_depth, "fixed truncation depth instead of adaptive tails");
    sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", cfg.output, "write output to this file");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "classify lattice points relative to p");
  classify_cmd->add_option("--p", cfg.p_text, "forcing wave vector x,y")->required();
  classify_cmd->add_option("--q", cfg.q_text, "classify this point only");
  classify_cmd->add_option("--radius", cfg.radius, "grid half-width")->capture_default_str();
  classify_cmd->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  classify_cmd->add_option("--output,-o", cfg.output, "write output to this file");

  CLI::App* root_cmd = app.add_subcommand("root", "positive root of the dispersion function");
  instance_opts(root_cmd, true);
  root_cmd->add_option("--lambda-max", cfg.lambda_max, "upper end of the lambda scan");

  CLI::App* nu0_cmd = app.add_subcommand("nu0", "estimate the critical viscosity");
  instance_opts(nu0_cmd, true);
  nu0_cmd->add_option("--nu-min", cfg.nu_min, "scan start");
  nu0_cmd->add_option("--nu-max", cfg.nu_max, "scan cap");

  CLI::App* eig_cmd = app.add_subcommand("eigvec", "eigenvector at the root");
  instance_opts(eig_cmd, true);
  eig_cmd->add_option("--window,-N", cfg.window, "window half-width (default 128)");
  eig_cmd->add_option("--lambda", cfg.lambda, "use this lambda instead of solving");
  eig_cmd->add_option("--lambda-max", cfg.lambda_max, "upper end of the lambda scan");

  CLI::App* det_cmd = app.add_subcommand("det", "perturbation determinant samples");
  instance_opts(det_cmd, true);
  det_cmd->add_option("--window,-N", cfg.window, "window half-width (default 128)");
  det_cmd->add_option("--lambda", cfg.lambda, "single lambda");
  det_cmd->add_option("--lambda-min", cfg.lambda_min);
  det_cmd->add_option("--lambda-max", cfg.lambda_max);
  det_cmd->add_option("--lambda-step", cfg.lambda_step);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "growth rate from time integration");
  instance_opts(sim_cmd, true);
  sim_cmd->add_option("--window,-N", cfg.window, "window half-width (default 32)");
  sim_cmd->add_option("--t-final", cfg.t_final)->capture_default_str();
  sim_cmd->add_option("--dt", cfg.dt, "time step (default: largest stable)");
  sim_cmd->add_option("--seed", cfg.seed)->capture_default_str();

  CLI::App* curve_cmd = app.add_subcommand("curve", "dispersion curve table (CSV)");
  instance_opts(curve_cmd, true);
  curve_cmd->add_option("--lambda-min", cfg.lambda_min);
  curve_cmd->add_option("--lambda-max", cfg.lambda_max);
  curve_cmd->add_option("--lambda-step", cfg.lambda_step);
  curve_cmd->add_option("--nu-min", cfg.nu_min);
  curve_cmd->add_option("--nu-max", cfg.nu_max);
  curve_cmd->add_option("--nu-step", cfg.nu_step);

  CLI::App* verify_cmd = app.add_subcommand("verify", "cross-check root, matrix and determinant");
  instance_opts(verify_cmd, true);
  verify_cmd->add_option("--window,-N", cfg.window, "window half-width (default 128)");
  verify_cmd->add_option("--lambda-max", cfg.lambda_max, "upper end of the lambda scan");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "instab: usage error: " << e.what() << '\n';
    return kUsage;
  }

  const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> table{
      {"classify", cmd_classify}, {"root", cmd_root},         {"nu0", cmd_nu0},     {"eigvec", cmd_eigvec},
      {"det", cmd_det},           {"simulate", cmd_simulate}, {"curve", cmd_curve}, {"verify", cmd_verify},
  };
  for (const auto& [name, fn] : table) {
    if (app.got_subcommand(name)) cfg.subcommand = name;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "instab: error: cannot open '" << cfg.output << "' for writing\n";
      return kFailure;
    }
    sink = &file;
  }

  try {
    if (cfg.fixed_depth && *cfg.fixed_depth < 1) throw UsageError("--depth must be >= 1");
    if (!(cfg.tol > 0.0)) throw UsageError("--tol must be > 0");
    if (cfg.max_depth < 2) throw UsageError("--max-depth must be >= 2");
    const int code = table.at(cfg.subcommand)(cfg, *sink);
    sink->flush();
    if (!*sink) {
      err << "instab: error: write failed\n";
      return kFailure;
    }
    return code;
  } catch (const UsageError& e) {
    err << "instab: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "instab: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "instab: error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace instab::cli
