#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rpm/dyck.hpp"
#include "rpm/errors.hpp"
#include "rpm/generator.hpp"
#include "rpm/ldt.hpp"
#include "rpm/reference_values.hpp"
#include "rpm/sim.hpp"
#include "rpm/thermo.hpp"
#include "rpm/xxz.hpp"
#include "run_record.hpp"

using namespace rpm;
using rpm::cli::json;
using rpm::cli::RunRecord;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitResource = 4;

struct Options {
  int width = 0;
  double alpha = 0, beta = 0, delta = 0, phi = 0;
  std::string observable = "tiles";
  std::string grid;
  int max_order = 4;
  double tmax = 1e5;
  std::uint64_t seed = 1;
  int trajectories = 1;
  double batch = 1e3;
  double simulate_time = 0;
  bool states = false;
  bool csv = false;
  bool table = false;
  int threads = 0;
  std::string out;
};

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  RunRecord record;
  std::optional<Csv> csv;
  bool failed = false;
};

std::string fmt(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Gapless:
      return "gapless";
    case Regime::Gapped:
      return "gapped";
    default:
      return "boundary";
  }
}

template <class T, class F>
std::vector<T> parallel_map(const std::vector<double>& xs, int threads, F&& f) {
  std::vector<T> out(xs.size());
  const int workers = std::clamp(threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()), 1,
                                 static_cast<int>(std::max<std::size_t>(1, xs.size())));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = static_cast<std::size_t>(w); i < xs.size(); i += static_cast<std::size_t>(workers))
            out[i] = f(xs[i]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Observable parse_observable(const std::string& s, bool allow_joint) {
  if (s == "tiles") return Observable::Tiles;
  if (s == "global") return Observable::Global;
  if (allow_joint && s == "joint") return Observable::Tiles;
  throw InvalidArgument("unknown observable '" + s + "'");
}

// ------------------------------------------------------------------ commands

Output cmd_stationary(const Options& o) {
  Output out;
  const StationaryState s = stationary_state(o.width);
  const StationaryObservables ob = stationary_observables(s);
  const double l = o.width, l2 = l * l;
  const double peaks = l * 3 * l2 / (8 * (l2 - 1)), suscept = 3 * l / (4 * (l2 - 1));
  const double norm = s.integer_form.sum();
  json r{{"dimension", s.probabilities.size()},
         {"normalization", std::round(norm)},
         {"integer_deviation", s.integer_deviation},
         {"kernel_residual", s.kernel_residual},
         {"avg_peaks", ob.avg_peaks},
         {"avg_peaks_conjecture", peaks},
         {"susceptibility", ob.prob_global_susceptible},
         {"susceptibility_conjecture", suscept},
         {"mean_tiles_rate", ob.mean_tiles_rate},
         {"mean_tiles_rate_closed_form", l * (5 * l2 - 8) / (8 * (l2 - 1))},
         {"mean_global_rate", ob.mean_global_rate},
         {"mean_global_rate_closed_form", 0.75 * l / (l2 - 1)}};
  static const std::map<int, double> known{{2, 2}, {4, 10}, {6, 140}, {8, 5544}, {10, 622908}};
  json checks{{"avg_peaks", std::abs(ob.avg_peaks - peaks) < 1e-8},
              {"susceptibility", std::abs(ob.prob_global_susceptible - suscept) < 1e-8},
              {"integer_form", s.integer_deviation < 1e-6}};
  if (auto it = known.find(o.width); it != known.end()) {
    r["normalization_expected"] = it->second;
    checks["normalization"] = std::abs(norm - it->second) < 1e-6 * it->second;
  }
  r["checks"] = checks;
  for (const auto& [k, v] : checks.items()) out.failed |= !v.get<bool>();
  if (o.states) {
    json rows = json::array();
    const auto states = enumerate_states(o.width);
    for (std::size_t k = 0; k < states.size(); ++k)
      rows.push_back({{"state", states[k].to_hex()},
                      {"weight", std::round(s.integer_form[static_cast<Eigen::Index>(k)])},
                      {"probability", s.probabilities[static_cast<Eigen::Index>(k)]}});
    r["states"] = rows;
  }
  out.record.parameters = {{"L", o.width}};
  out.record.results = r;
  out.record.tolerances = {{"conjectures", 1e-8}, {"integer_form", 1e-6}};
  return out;
}

Output cmd_eigen(const Options& o) {
  Output out;
  const double perron = perron_root(o.width, o.alpha, o.beta);
  const XxzParams p = map_params(o.alpha, o.beta, o.width);
  json r{{"perron_root", perron}, {"delta", p.delta}, {"phi_squared", p.twist.phi_squared()}, {"regime", regime_name(p.regime)}};
  if (o.width <= kMaxDenseChain) {
    const double e0 = ground_energy_dense(p);
    const double bridge = -std::exp(o.beta) * e0 - 0.75 * o.width;
    r["xxz_ground_energy"] = e0;
    r["bridge_value"] = bridge;
    r["bridge_residual"] = std::abs(perron - bridge);
    out.failed = std::abs(perron - bridge) > 1e-8;
  }
  r["asymptotic_cgf"] = joint_cgf(o.alpha, o.beta, o.width).total();
  out.record.parameters = {{"L", o.width}, {"alpha", o.alpha}, {"beta", o.beta}};
  out.record.results = r;
  out.record.tolerances = {{"bridge", 1e-8}};
  return out;
}

Output cmd_bethe(const Options& o) {
  Output out;
  const Twist t = Twist::real(o.phi);
  const cplx u = t.u(o.width);
  const BetheRoots b = solve_bethe(o.width, o.delta, u);
  json roots = json::array();
  for (const cplx& z : b.z) roots.push_back({{"re", z.real()}, {"im", z.imag()}});
  const double e = bethe_energy(b);
  json r{{"roots", roots}, {"energy", e}, {"bethe_residual", b.residual}};
  if (o.width <= kMaxDenseChain) {
    const double dense = ground_energy_dense(make_params(o.width, o.delta, t));
    r["vector_residual"] = verify_bethe_vector(b);
    r["dense_energy"] = dense;
    r["energy_gap"] = std::abs(e - dense);
    out.failed = std::abs(e - dense) > 1e-8;
  }
  out.record.parameters = {{"L", o.width}, {"delta", o.delta}, {"phi", o.phi}};
  out.record.results = r;
  out.record.tolerances = {{"energy", 1e-8}, {"newton", BetheOptions{}.newton_tolerance}};
  return out;
}

Output cmd_cgf(const Options& o) {
  Output out;
  const bool joint = o.observable == "joint";
  const Observable which = parse_observable(o.observable, true);
  check_even_width(o.width);
  const std::vector<double> grid = cli::parse_grid(o.grid);
  const auto values = parallel_map<CgfValue>(grid, o.threads, [&](double x) {
    if (joint) return joint_cgf(o.alpha, x, o.width);
    return which == Observable::Tiles ? cgf_tiles(x, o.width) : cgf_global(x, o.width);
  });
  json rows = json::array();
  Csv csv{{"param", "bulk", "fsc", "total"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CgfValue& v = values[i];
    rows.push_back({{"param", grid[i]}, {"bulk", v.bulk}, {"fsc", v.fsc}, {"total", v.total()}, {"regime", regime_name(v.regime)}});
    csv.rows.push_back({fmt(grid[i], 17), fmt(v.bulk, 17), fmt(v.fsc, 17), fmt(v.total(), 17)});
  }
  out.record.parameters = {{"observable", o.observable}, {"L", o.width}, {"grid", o.grid}};
  if (joint) out.record.parameters["alpha"] = o.alpha;
  out.record.parameters["param_name"] = which == Observable::Global ? "alpha" : "beta";
  out.record.results = {{"rows", rows}};
  out.csv = std::move(csv);
  return out;
}

Output cmd_rate(const Options& o) {
  Output out;
  const Observable which = parse_observable(o.observable, false);
  check_even_width(o.width);
  const std::vector<double> grid = cli::parse_grid(o.grid);
  const double l = o.width;
  // The grid holds the rate y at width L; rate_point works in scaled units.
  const auto points = parallel_map<RatePoint>(grid, o.threads, [&](double y) {
    RatePoint p = rate_point(which, which == Observable::Tiles ? y / l : y * l);
    p.y = y;
    p.rate = which == Observable::Tiles ? p.rate * l : p.rate / l;
    return p;
  });
  json rows = json::array();
  Csv csv{{"y", "rate", "legendre_param"}, {}};
  for (const RatePoint& p : points) {
    rows.push_back({{"y", p.y}, {"rate", finite_or_null(p.rate)}, {"legendre_param", finite_or_null(p.parameter)}, {"infinite", p.infinite}});
    csv.rows.push_back({fmt(p.y, 17), fmt(p.rate, 17), fmt(p.parameter, 17)});
  }
  out.record.parameters = {{"observable", o.observable}, {"L", o.width}, {"grid", o.grid}};
  out.record.results = {{"rows", rows}};
  out.csv = std::move(csv);
  return out;
}

Output cmd_cumulants(const Options& o) {
  Output out;
  check_even_width(o.width);
  if (o.max_order < 1 || o.max_order > 4) throw InvalidArgument("--max-order must be in 1..4");
  std::optional<EnsembleEstimate> sim;
  if (o.simulate_time > 0) {
    check_width(o.width);
    const auto ens = run_ensemble(o.width, o.simulate_time, o.seed, o.trajectories, o.threads, {.batch_length = o.batch});
    sim = estimate_cumulants(ens);
  }
  json rows = json::array();
  for (auto which : {Observable::Tiles, Observable::Global}) {
    for (int n = 1; n <= o.max_order; ++n) {
      const double closed = cumulant_closed_form(which, n).at(which, o.width);
      const double numeric = cumulant_numeric(which, n).at(which, o.width);
      const double listed = cumulant_tabulated(which, n).at(which, o.width);
      json row{{"observable", which == Observable::Tiles ? "tiles" : "global"},
               {"order", n},
               {"closed_form", closed},
               {"numeric", numeric},
               {"tabulated", listed},
               {"relative_gap", std::abs(numeric - closed) / std::abs(closed)}};
      if (sim && n <= 2) {
        const CumulantEstimate& c = which == Observable::Tiles ? sim->tiles : sim->global;
        row["simulated"] = n == 1 ? c.c1 : c.c2;
        row["simulated_stderr"] = n == 1 ? c.stderr1 : c.stderr2;
      }
      rows.push_back(row);
    }
  }
  out.record.parameters = {{"L", o.width}, {"max_order", o.max_order}};
  if (sim) out.record.parameters.update({{"simulate_time", o.simulate_time}, {"seed", o.seed}, {"trajectories", o.trajectories}});
  out.record.results = {{"rows", rows}};
  out.record.tolerances = {{"closed_vs_numeric", 1e-6}};
  return out;
}

Output cmd_simulate(const Options& o) {
  Output out;
  const auto ens = run_ensemble(o.width, o.tmax, o.seed, o.trajectories, o.threads, {.batch_length = o.batch});
  json traj = json::array();
  for (std::size_t k = 0; k < ens.size(); ++k) {
    const TrajectoryStats& s = ens[k];
    traj.push_back({{"index", k},
                    {"stream", s.stream},
                    {"t_total", s.t_total},
                    {"n_tiles", s.n_tiles},
                    {"n_global", s.n_global},
                    {"n_adsorbed", s.n_adsorbed},
                    {"n_events", s.n_events},
                    {"batches", s.tiles_batches.size()}});
  }
  json r{{"trajectories", traj}};
  std::size_t batches = 0;
  for (const auto& s : ens) batches += s.tiles_batches.size();
  if (batches >= kMinBatches) {
    const EnsembleEstimate e = estimate_cumulants(ens);
    auto est = [](const CumulantEstimate& c) {
      return json{{"c1", c.c1}, {"c2", c.c2}, {"stderr1", c.stderr1}, {"stderr2", c.stderr2}};
    };
    r["estimates"] = {{"batches", e.batches}, {"tiles", est(e.tiles)}, {"global", est(e.global)}};
  } else {
    r["estimates"] = nullptr;
  }
  out.record.parameters = {{"L", o.width}, {"tmax", o.tmax}, {"seed", o.seed}, {"trajectories", o.trajectories}, {"batch", o.batch}};
  out.record.results = r;
  out.record.tolerances = {{"min_batches", kMinBatches}};
  return out;
}

Output cmd_verify_appendix(const Options&) {
  Output out;
  using std::numbers::pi;
  json checks = json::array();
  auto add = [&](const std::string& name, double expected, double computed, double tol) {
    const double d = std::abs(expected - computed);
    checks.push_back({{"name", name}, {"expected", expected}, {"computed", computed}, {"abs_delta", d}, {"tolerance", tol}, {"pass", d < tol}});
    out.failed |= !(d < tol);
  };
  add("Y(pi/3)", reference::kYAtPiThird[0], Y(pi / 3), 1e-10);
  for (int n = 1; n <= 6; ++n)
    add("Y^(" + std::to_string(n) + ")(pi/3)", reference::kYAtPiThird[n], Y_deriv(pi / 3, n), reference::kYAtPiThirdTolerance[n]);
  add("Y(pi/2)", 2 / pi, Y(pi / 2), 1e-10);
  add("gamma^2 Y(gamma), gamma = 1e-3", reference::kYSmallGammaLeading, 1e-6 * Y(1e-3), 1e-4);
  add("e^lambda Ytilde(lambda), lambda = 12", reference::kYtildeSeries[0], std::exp(12.0) * Ytilde(12.0), 1e-8);
  add("e^{3 lambda} (Ytilde - 2 e^-lambda), lambda = 8", reference::kYtildeSeries[1],
      std::exp(24.0) * (Ytilde(8.0) - 2 * std::exp(-8.0)), 1e-4);
  out.record.results = {{"checks", checks}};
  out.record.tolerances = {{"per_check", "see checks[].tolerance"}};
  return out;
}

// ------------------------------------------------------------------ output

void print_table(const json& results, std::ostream& os) {
  auto cell = [](const json& v) -> std::string {
    if (v.is_number_float()) return fmt(v.get<double>(), 10);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
  };
  for (const auto& [key, v] : results.items()) {
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      os << key << ":\n";
      std::vector<std::string> cols;
      for (const auto& [k, _] : v.front().items()) cols.push_back(k);
      for (const auto& c : cols) os << "  " << c;
      os << '\n';
      for (const auto& row : v) {
        for (const auto& c : cols) os << "  " << (row.contains(c) ? cell(row.at(c)) : "-");
        os << '\n';
      }
    } else if (v.is_object()) {
      os << key << ":\n";
      for (const auto& [k, x] : v.items()) os << "  " << k << ": " << cell(x) << '\n';
    } else {
      os << key << ": " << cell(v) << '\n';
    }
  }
}

int emit(Output& out, const Options& o) {
  std::ostringstream text;
  if (o.csv) {
    if (!out.csv) throw InvalidArgument("--csv is available for cgf and rate only");
    for (std::size_t i = 0; i < out.csv->header.size(); ++i) text << (i ? "," : "") << out.csv->header[i];
    text << '\n';
    for (const auto& row : out.csv->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) text << (i ? "," : "") << row[i];
      text << '\n';
    }
  } else if (o.table) {
    print_table(out.record.results, text);
  } else {
    const json j = out.record.to_json();
    const auto problems = cli::validate_run_record(j);
    if (!problems.empty()) throw NumericFailure("run record failed validation: " + problems.front(), 0.0);
    text << cli::dump_precise(j) << '\n';
  }
  if (o.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw InvalidArgument("cannot write '" + o.out + "'");
    f << text.str();
  }
  return out.failed ? kExitNumeric : 0;
}

int validate_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("not JSON: ") + e.what());
  }
  const auto problems = cli::validate_run_record(j);
  for (const auto& p : problems) std::cerr << p << '\n';
  std::cout << (problems.empty() ? "valid" : "invalid") << '\n';
  return problems.empty() ? 0 : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Raise and peel model: spectra, large deviations and simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--csv", o.csv, "CSV output (cgf, rate)");
  app.add_flag("--table", o.table, "human-readable table, 10 significant digits");
  app.add_option("--out", o.out, "write output to a file");
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  auto width = [&](CLI::App* c) { c->add_option("--L", o.width, "lattice width (even)")->required(); };

  std::map<std::string, std::function<Output(const Options&)>> handlers;
  auto sub = [&](const char* name, const char* help, std::function<Output(const Options&)> h) {
    handlers[name] = std::move(h);
    return app.add_subcommand(name, help);
  };

  width(sub("stationary", "stationary state and conjecture checks", cmd_stationary));
  app.get_subcommand("stationary")->add_flag("--states", o.states, "list every state with its weight");

  auto* eigen = sub("eigen", "Perron root and the XXZ bridge", cmd_eigen);
  width(eigen);
  eigen->add_option("--alpha", o.alpha);
  eigen->add_option("--beta", o.beta);

  auto* bethe = sub("bethe", "Bethe roots of the twisted chain", cmd_bethe);
  width(bethe);
  bethe->add_option("--delta", o.delta)->required();
  bethe->add_option("--phi", o.phi, "real twist angle");

  auto* cgf = sub("cgf", "scaled CGF on a grid", cmd_cgf);
  width(cgf);
  cgf->add_option("--observable", o.observable)->check(CLI::IsMember({"tiles", "global", "joint"}));
  cgf->add_option("--grid", o.grid, "start:stop:step")->required();
  cgf->add_option("--alpha", o.alpha, "fixed alpha for the joint CGF (grid runs over beta)");

  auto* rate = sub("rate", "rate function on a grid of rates y", cmd_rate);
  width(rate);
  rate->add_option("--observable", o.observable)->check(CLI::IsMember({"tiles", "global"}));
  rate->add_option("--grid", o.grid, "start:stop:step")->required();

  auto* cum = sub("cumulants", "closed-form, numeric and simulated cumulants", cmd_cumulants);
  width(cum);
  cum->add_option("--max-order", o.max_order);
  cum->add_option("--simulate-time", o.simulate_time, "also simulate for this long per trajectory");
  cum->add_option("--seed", o.seed);
  cum->add_option("--trajectories", o.trajectories);
  cum->add_option("--batch", o.batch);

  auto* simulate = sub("simulate", "Monte Carlo trajectories", cmd_simulate);
  width(simulate);
  simulate->add_option("--tmax", o.tmax);
  simulate->add_option("--seed", o.seed);
  simulate->add_option("--trajectories", o.trajectories);
  simulate->add_option("--batch", o.batch);

  sub("verify-appendix", "Y and Ytilde oracle checks", cmd_verify_appendix);

  std::string record_path;
  app.add_subcommand("validate", "check a JSON run record against the schema")
      ->add_option("file", record_path)
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (app.got_subcommand("validate")) return validate_file(record_path);
    for (auto& [name, handler] : handlers) {
      if (!app.got_subcommand(name)) continue;
      const auto t0 = std::chrono::steady_clock::now();
      Output out = handler(o);
      out.record.command = name;
      out.record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return emit(out, o);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const NumericFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInvalid;
}
