#include "cli.hpp"

#include "qrfcomm/analytic.hpp"
#include "qrfcomm/channel.hpp"
#include "qrfcomm/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace qrfcomm::cli {

namespace {

using json = nlohmann::ordered_json;

// Config file: a JSON object whose keys are long flag names; nested objects
// configure the subcommand of the same name.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    const json j = json::parse(in);
    if (!j.is_object()) throw CLI::ConversionError("config", "a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  static void flatten(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        flatten(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Common {
  std::string out = "-";
  std::string format;
  double grid_half_width = 0.0;
  std::size_t grid_points = 1024;
  std::optional<std::uint64_t> seed;
};

struct Table {
  std::string command;
  json params = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string render_csv(const Table& t, const Common& c) {
  std::ostringstream s;
  s << "# tool: qrfcomm " << kToolVersion << "\n";
  s << "# command: " << t.command << "\n";
  s << "# params: " << t.params.dump() << "\n";
  s << "# seed: " << (c.seed ? std::to_string(*c.seed) : std::string("none")) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) s << (i ? "," : "") << t.columns[i];
  s << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << fmt(row[i]);
    s << "\n";
  }
  return s.str();
}

std::string render_json(const Table& t, const Common& c) {
  json doc;
  doc["metadata"] = {{"tool", std::string("qrfcomm ") + kToolVersion},
                     {"command", t.command},
                     {"params", t.params},
                     {"seed", c.seed ? json(*c.seed) : json(nullptr)}};
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

json grid_params(const Common& c) {
  return {{"grid_half_width", c.grid_half_width == 0.0 ? json("auto") : json(c.grid_half_width)},
          {"grid_points", c.grid_points}};
}

Grid pick_grid(const Common& c, double Delta, double token_width, double mu_x = 0.0) {
  if (c.grid_half_width > 0.0) return make_grid(c.grid_half_width, c.grid_points);
  return default_grid(Delta, token_width, mu_x, c.grid_points);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

struct Fig2Args {
  std::vector<double> deltas{0.5, 1.0, 2.0};
  double s_min = 0.0;
  double s_max = 5.0;
  double s_step = 0.1;
};

Table cmd_fig2(const Fig2Args& a, const Common& c) {
  require(!a.deltas.empty(), "Delta list is empty");
  for (double d : a.deltas) require(d > 0.0, "Delta values must be positive");
  require(a.s_min >= 0.0 && a.s_max >= a.s_min && a.s_step > 0.0, "invalid s range");
  const auto steps = static_cast<std::size_t>(std::floor((a.s_max - a.s_min) / a.s_step + 1e-9));

  Table t;
  t.command = "fig2";
  t.params = {{"Delta", a.deltas}, {"s_min", a.s_min}, {"s_max", a.s_max}, {"s_step", a.s_step},
              {"token", "single"}, {"smearing", 0.0}};
  t.params.update(grid_params(c));
  t.columns = {"Delta", "s", "fidelity", "fidelity_numeric"};
  for (double Delta : a.deltas) {
    for (std::size_t i = 0; i <= steps; ++i) {
      const double s = a.s_min + a.s_step * static_cast<double>(i);
      const Grid grid = pick_grid(c, Delta, s);
      const WaveFunction psi = to_basis(gaussian_wavefunction({0.0, 0.0, Delta}, grid), Basis::Momentum);
      const auto dist = OutcomeDistribution::gaussian(s, {0.0});
      const ChannelReport r = evaluate_channel(psi, asymptotic_kernel(dist, grid));
      t.rows.push_back({Delta, s, gaussian_fidelity(Delta, s), r.fidelity});
    }
  }
  return t;
}

struct Fig3Args {
  double ratio_min = 0.1;
  double ratio_max = 10.0;
  std::size_t ratio_count = 50;
  bool scan_x_bar = false;
};

Table cmd_fig3(const Fig3Args& a, const Common& c) {
  require(a.ratio_min > 0.0 && a.ratio_max >= a.ratio_min, "invalid ratio range");
  require(a.ratio_count >= 1, "ratio count must be positive");
  require(a.ratio_count > 1 || a.ratio_max == a.ratio_min, "a single ratio needs ratio-min == ratio-max");

  Table t;
  t.command = "fig3";
  t.params = {{"ratio_min", a.ratio_min}, {"ratio_max", a.ratio_max}, {"ratio_count", a.ratio_count},
              {"scan_x_bar", a.scan_x_bar}};
  (void)c;
  t.columns = {"ratio", "F_max", "p_bar_max_sigma", "beta"};
  if (a.scan_x_bar) t.columns.push_back("x_bar_max_sigma");
  MaximizeOptions opts;
  opts.scan_x_bar = a.scan_x_bar;
  for (std::size_t i = 0; i < a.ratio_count; ++i) {
    const double frac = a.ratio_count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(a.ratio_count - 1);
    const double ratio = a.ratio_min * std::pow(a.ratio_max / a.ratio_min, frac);
    const MaxFidelityResult r = maximize_fidelity(ratio, opts);
    if (r.f_max < r.beta) throw NumericalError("optimizer returned F_max below beta");
    std::vector<double> row{r.ratio, r.f_max, r.p_bar_max_sigma, r.beta};
    if (a.scan_x_bar) row.push_back(r.x_bar_max_sigma);
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct ConvergeArgs {
  std::vector<double> taus{5.0, 10.0, 20.0, 50.0};
  double Delta = 1.0;
  double sigma = 1.0;
  double smearing = 0.0;
  std::size_t quad_nodes = 0;
};

Table cmd_converge_tau(const ConvergeArgs& a, const Common& c) {
  require(!a.taus.empty(), "tau ladder is empty");
  for (std::size_t i = 0; i < a.taus.size(); ++i) {
    require(a.taus[i] > 0.0, "tau values must be positive");
    require(i == 0 || a.taus[i] > a.taus[i - 1], "tau ladder must be strictly increasing");
  }
  require(a.Delta > 0.0 && a.sigma >= 0.0 && a.smearing >= 0.0, "invalid widths");

  Table t;
  t.command = "converge-tau";
  t.params = {{"tau", a.taus}, {"Delta", a.Delta}, {"sigma", a.sigma}, {"smearing", a.smearing},
              {"quad_nodes", a.quad_nodes}};
  t.params.update(grid_params(c));
  t.columns = {"tau", "max_deviation", "fidelity_tau", "fidelity_inf", "trace_error"};
  const Grid grid = pick_grid(c, a.Delta, a.sigma);
  const WaveFunction psi = gaussian_wavefunction({0.0, 0.0, a.Delta}, grid);
  const auto dist = OutcomeDistribution::gaussian(a.sigma, {a.smearing});
  const DecoherenceKernel limit = asymptotic_kernel(dist, grid);
  const double f_inf = evaluate_channel(psi, limit).fidelity;
  for (double tau : a.taus) {
    const DecoherenceKernel k = finite_tau_kernel(dist, tau, grid, a.quad_nodes);
    const ChannelReport r = evaluate_channel(psi, k);
    t.rows.push_back({tau, max_deviation(k, limit), r.fidelity, f_inf, r.trace_error});
  }
  return t;
}

struct SimulateArgs {
  double Delta = 1.0;
  double sigma = 1.0;
  double smearing = 0.0;
  double tau = 20.0;
  std::size_t samples = 100000;
  std::string token = "single";
  double x_bar = 0.0;
  double p_bar = 0.0;
  double mu_x = 0.0;
  double mu_p = 0.0;
};

Table cmd_simulate(const SimulateArgs& a, const Common& c) {
  require(c.seed.has_value(), "simulate requires --seed");
  require(a.samples >= kMinMonteCarloSamples, "at least 1000 samples required");
  require(a.Delta > 0.0 && a.sigma > 0.0 && a.smearing >= 0.0 && a.tau > 0.0, "invalid parameters");
  require(a.token == "single" || a.token == "superposition", "token must be single or superposition");
  const TokenSpec token =
      a.token == "single" ? TokenSpec::single(a.sigma) : TokenSpec::superposition(a.x_bar, a.p_bar, a.sigma);

  const Grid grid = pick_grid(c, a.Delta, a.sigma + std::abs(a.x_bar), a.mu_x);
  const WaveFunction psi = gaussian_wavefunction({a.mu_x, a.mu_p, a.Delta}, grid);
  const auto dist = OutcomeDistribution::for_token(token, {a.smearing});
  const ChannelReport mc = mc_protocol(psi, dist, a.tau, a.samples, *c.seed);
  const ChannelReport ref = evaluate_channel(psi, finite_tau_kernel(dist, a.tau, grid));

  Table t;
  t.command = "simulate";
  t.params = {{"Delta", a.Delta}, {"sigma", a.sigma}, {"smearing", a.smearing}, {"tau", a.tau},
              {"samples", a.samples}, {"token", a.token}, {"x_bar", a.x_bar}, {"p_bar", a.p_bar},
              {"mu_x", a.mu_x}, {"mu_p", a.mu_p}, {"method", to_string(mc.method)}};
  t.params.update(grid_params(c));
  t.columns = {"fidelity", "std_err", "n_samples", "purity_in", "purity_out", "trace_error",
               "fidelity_kernel", "deviation_std_err"};
  t.rows.push_back({mc.fidelity, mc.std_err, static_cast<double>(mc.n_samples), mc.purity_in, mc.purity_out,
                    mc.trace_error, ref.fidelity, (mc.fidelity - ref.fidelity) / mc.std_err});
  return t;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reference-frame-free communication for the translation group", "qrfcomm"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with flag values; command-line flags take precedence");

  Common common;
  std::uint64_t seed = 0;
  app.add_option("--out", common.out, "Output path ('-' for standard output)");
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--grid-half-width", common.grid_half_width, "Grid half-width L (default: automatic)")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid-points", common.grid_points, "Grid points n (even, >= 8)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");

  Fig2Args f2;
  auto* fig2 = app.add_subcommand("fig2", "Gaussian fidelity against token width");
  fig2->add_option("--Delta", f2.deltas, "System widths")->delimiter(',');
  fig2->add_option("--s-min", f2.s_min);
  fig2->add_option("--s-max", f2.s_max);
  fig2->add_option("--s-step", f2.s_step);

  Fig3Args f3;
  auto* fig3 = app.add_subcommand("fig3", "Maximum superposition-token fidelity against Delta/sigma");
  fig3->add_option("--ratio-min", f3.ratio_min);
  fig3->add_option("--ratio-max", f3.ratio_max);
  fig3->add_option("--ratio-count", f3.ratio_count);
  fig3->add_flag("--scan-x-bar", f3.scan_x_bar, "Add the x_bar sigma argmax of a 2-D scan");

  ConvergeArgs cv;
  auto* conv = app.add_subcommand("converge-tau", "Finite-tau kernel against its limit");
  conv->add_option("--tau", cv.taus, "Increasing tau ladder")->delimiter(',');
  conv->add_option("--Delta", cv.Delta);
  conv->add_option("--sigma", cv.sigma);
  conv->add_option("--smearing", cv.smearing);
  conv->add_option("--quad-nodes", cv.quad_nodes, "Quadrature nodes (0: automatic)");

  SimulateArgs sim;
  auto* simc = app.add_subcommand("simulate", "Monte Carlo run of the protocol");
  simc->add_option("--Delta", sim.Delta);
  simc->add_option("--sigma", sim.sigma);
  simc->add_option("--smearing", sim.smearing);
  simc->add_option("--tau", sim.tau);
  simc->add_option("--samples", sim.samples);
  simc->add_option("--token", sim.token)->check(CLI::IsMember({"single", "superposition"}));
  simc->add_option("--x-bar", sim.x_bar);
  simc->add_option("--p-bar", sim.p_bar);
  simc->add_option("--mu-x", sim.mu_x);
  simc->add_option("--mu-p", sim.mu_p);

  for (auto* sub : {fig2, fig3, conv, simc}) sub->configurable();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kUsageError;
  }
  if (seed_opt->count() > 0) common.seed = seed;

  Table table;
  std::string default_format = "csv";
  try {
    if (fig2->parsed()) {
      table = cmd_fig2(f2, common);
    } else if (fig3->parsed()) {
      table = cmd_fig3(f3, common);
    } else if (conv->parsed()) {
      table = cmd_converge_tau(cv, common);
    } else {
      table = cmd_simulate(sim, common);
      default_format = "json";
    }
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::runtime_error& e) {
    err << "numerical guard: " << e.what() << "\n";
    return kNumericalError;
  }

  const std::string format = common.format.empty() ? default_format : common.format;
  const std::string text = format == "json" ? render_json(table, common) : render_csv(table, common);
  if (common.out == "-") {
    out << text;
  } else {
    std::ofstream file(common.out, std::ios::binary);
    if (!file || !(file << text)) {
      err << "error: cannot write " << common.out << "\n";
      return kUsageError;
    }
  }
  return kSuccess;
}

}  // namespace qrfcomm::cli
