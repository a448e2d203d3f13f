#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lob/calibration.hpp"
#include "lob/config.hpp"
#include "lob/io.hpp"
#include "lob/simulator.hpp"

namespace {

using nlohmann::ordered_json;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  out << content;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

// Shared model flags. Precedence: built-in defaults < config file < flags.
// Derived defaults: r from k when only k is given; x0 from --spread.
struct ModelArgs {
  std::string config_path;
  double r = 0.0, k = 0.0, x0 = 0.0, sigma = 0.0, tick = 0.0, offset = 0.0, spread = 0.0;
  CLI::Option *r_opt = nullptr, *k_opt = nullptr, *x0_opt = nullptr, *sigma_opt = nullptr,
              *tick_opt = nullptr, *offset_opt = nullptr, *spread_opt = nullptr;

  void attach(CLI::App* cmd, bool with_offset, bool with_spread) {
    cmd->add_option("--config", config_path, "config file (flat key = value; flags win)");
    r_opt = cmd->add_option("--r", r, "jump-event proportion in (0,1)");
    k_opt = cmd->add_option("--k", k, "Pareto tail exponent of price jumps (> 2)");
    x0_opt = cmd->add_option("--x0", x0, "Pareto scale of price jumps");
    sigma_opt = cmd->add_option("--sigma", sigma, "noise volume standard deviation");
    tick_opt = cmd->add_option("--tick", tick, "tick size");
    if (with_offset)
      offset_opt = cmd->add_option("--offset", offset, "grid offset d in [0, tick)");
    if (with_spread)
      spread_opt = cmd->add_option("--spread", spread,
                                   "observed average spread; sets x0 = spread / 2");
  }
};

struct ResolvedModel {
  double r, k, x0, sigma, alpha, d;
};

void check_families(const lob::ConfigMap& cm) {
  const std::string jf = lob::config_string(cm, "jump.family", "pareto");
  if (jf != "pareto")
    throw std::invalid_argument("config key 'jump.family': unsupported family '" + jf +
                                "' (supported: pareto)");
  const std::string vf = lob::config_string(cm, "volume.family", "normal");
  if (vf != "normal")
    throw std::invalid_argument("config key 'volume.family': unsupported family '" + vf +
                                "' (supported: normal)");
}

ResolvedModel resolve_model(const ModelArgs& args, const lob::ConfigMap& cm) {
  check_families(cm);
  ResolvedModel m{};
  m.k = args.k_opt->count() ? args.k : lob::config_double(cm, "jump.k", 3.0);
  const bool k_given = args.k_opt->count() > 0 || lob::config_has(cm, "jump.k");
  const bool spread_given = args.spread_opt != nullptr && args.spread_opt->count() > 0;

  if (args.x0_opt->count())
    m.x0 = args.x0;
  else if (lob::config_has(cm, "jump.x0"))
    m.x0 = lob::config_double(cm, "jump.x0", 0.0);
  else if (spread_given)
    m.x0 = args.spread / 2.0;
  else
    m.x0 = 0.005;

  if (args.r_opt->count())
    m.r = args.r;
  else if (lob::config_has(cm, "market.r"))
    m.r = lob::config_double(cm, "market.r", 0.0);
  else if (k_given)
    m.r = lob::derive_r(m.k);
  else
    m.r = 2.0 / 3.0;

  m.sigma = args.sigma_opt->count() ? args.sigma : lob::config_double(cm, "volume.sigma", 1.0);
  m.alpha = args.tick_opt->count() ? args.tick : lob::config_double(cm, "grid.alpha", 0.01);
  if (args.offset_opt != nullptr && args.offset_opt->count())
    m.d = args.offset;
  else if (lob::config_has(cm, "grid.d"))
    m.d = lob::config_double(cm, "grid.d", 0.0);
  else
    m.d = 0.75 * m.alpha;
  return m;
}

lob::ConfigMap load_config(const std::string& path) {
  return path.empty() ? lob::ConfigMap{} : lob::parse_config_file(path);
}

void run_shape(const ModelArgs& args, int levels, const std::string& out) {
  const ResolvedModel m = resolve_model(args, load_config(args.config_path));
  const lob::MarketParams params(m.r, lob::JumpLaw(m.k, m.x0), lob::VolumeLaw(m.sigma));
  const lob::EquilibriumBook eq = lob::solve_equilibrium(params);
  const lob::TickGrid grid(m.alpha, m.d);
  const lob::DiscreteBook book = lob::make_discrete_book(grid, eq, levels);

  std::ostringstream os;
  os << "side,index,price_offset,level_volume,cumulative_volume,level_gain,queue_value\n";
  auto row = [&](const char* side, int i, double qv) {
    os << side << ',' << i << ',' << lob::format_sci(lob::level_offset(book, i)) << ','
       << lob::format_sci(lob::level_volume(book, i)) << ','
       << lob::format_sci(lob::cumulative_depth(book, i)) << ','
       << lob::format_sci(lob::level_gain(book, i)) << ',' << lob::format_sci(qv) << '\n';
  };
  for (int i = -levels; i <= -1; ++i) row("bid", i, lob::bid_queue_position_value(book, i));
  for (int i = 1; i <= levels; ++i) row("ask", i, lob::queue_position_value(book, i));
  write_output(out, os.str());
}

void run_queue_value(const ModelArgs& args, const std::vector<double>& d_fracs, int levels,
                     const std::string& out) {
  const ResolvedModel m = resolve_model(args, load_config(args.config_path));
  const lob::MarketParams params(m.r, lob::JumpLaw(m.k, m.x0), lob::VolumeLaw(m.sigma));
  const lob::EquilibriumBook eq = lob::solve_equilibrium(params);

  std::ostringstream os;
  os << "d_frac,d,limit,price_offset,populated,queue_value\n";
  for (const double f : d_fracs) {
    if (!(f >= 0.0 && f < 1.0))
      throw std::invalid_argument("d-frac must lie in [0, 1) (got " + std::to_string(f) + ")");
    const lob::TickGrid grid(m.alpha, f * m.alpha);
    const lob::DiscreteBook book = lob::make_discrete_book(grid, eq, levels + 1);
    for (int i = 1; i <= levels; ++i) {
      os << lob::format_sci(f) << ',' << lob::format_sci(grid.d) << ',' << i << ','
         << lob::format_sci(lob::level_offset(book, i)) << ',' << (i >= book.k_r ? 1 : 0)
         << ',' << lob::format_sci(lob::queue_position_value(book, i)) << '\n';
    }
  }
  write_output(out, os.str());
}

void run_calibrate(const std::string& input, double tick, const std::string& out) {
  const lob::CsvTable table = lob::read_csv_file(input);
  const std::vector<std::string> expect = {"date", "spread", "variance_per_trade"};
  if (table.header != expect)
    throw std::invalid_argument(input +
                                ":1: expected header 'date,spread,variance_per_trade'");
  std::vector<lob::DailyObservation> obs;
  for (std::size_t n = 0; n < table.rows.size(); ++n) {
    const auto& row = table.rows[n];
    const int line = table.line_numbers[n];
    if (row.size() != 3)
      throw std::invalid_argument(input + ":" + std::to_string(line) +
                                  ": expected 3 fields, got " + std::to_string(row.size()));
    obs.push_back({row[0], lob::parse_csv_double(row[1], "spread", input, line),
                   lob::parse_csv_double(row[2], "variance_per_trade", input, line)});
  }
  const lob::CalibrationResult res = lob::fit_shape(obs, tick);
  ordered_json j;
  j["n_observations"] = obs.size();
  j["alpha"] = tick;
  j["phi_bar"] = res.phi_bar;
  j["k"] = res.k;
  j["x0"] = res.x0;
  j["mu"] = res.mu;
  j["r"] = res.r;
  j["sse"] = res.sse;
  j["at_boundary"] = res.at_boundary;
  write_output(out, j.dump(2) + "\n");
}

void run_forecast(const std::string& input, const std::string& out, const std::string& csv_out) {
  const lob::CsvTable table = lob::read_csv_file(input);
  const std::vector<std::string> base = {"name", "spread_old", "tick_old", "tick_new"};
  const bool with_actual =
      table.header.size() == 5 && table.header[4] == "spread_actual";
  if (!(table.header == base || with_actual))
    throw std::invalid_argument(
        input + ":1: expected header 'name,spread_old,tick_old,tick_new[,spread_actual]'");
  std::vector<lob::ForecastRow> rows;
  for (std::size_t n = 0; n < table.rows.size(); ++n) {
    const auto& row = table.rows[n];
    const int line = table.line_numbers[n];
    if (row.size() != table.header.size())
      throw std::invalid_argument(input + ":" + std::to_string(line) + ": expected " +
                                  std::to_string(table.header.size()) + " fields, got " +
                                  std::to_string(row.size()));
    lob::ForecastRow fr;
    fr.name = row[0];
    fr.spread_old = lob::parse_csv_double(row[1], "spread_old", input, line);
    fr.tick_old = lob::parse_csv_double(row[2], "tick_old", input, line);
    fr.tick_new = lob::parse_csv_double(row[3], "tick_new", input, line);
    if (with_actual && !row[4].empty())
      fr.spread_actual = lob::parse_csv_double(row[4], "spread_actual", input, line);
    rows.push_back(fr);
  }
  const lob::ForecastReport report = lob::forecast_report(rows);

  ordered_json j;
  j["n_rows"] = report.rows.size();
  j["n_valid"] = report.n_valid;
  j["n_with_actual"] = report.n_with_actual;
  j["mean_rel_error"] = report.mean_rel_error;
  j["naive_mean_rel_error"] = report.naive_mean_rel_error;
  j["rows"] = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json jr;
    jr["name"] = r.name;
    jr["spread_old"] = r.spread_old;
    jr["tick_old"] = r.tick_old;
    jr["tick_new"] = r.tick_new;
    if (r.skipped) {
      jr["skipped"] = true;
      jr["skip_reason"] = r.skip_reason;
    } else {
      jr["skipped"] = false;
      jr["forecast"] = r.forecast;
      if (r.has_actual) {
        jr["spread_actual"] = r.spread_actual;
        jr["rel_error"] = r.rel_error;
        jr["naive_error"] = r.naive_error;
      }
    }
    j["rows"].push_back(jr);
  }
  write_output(out, j.dump(2) + "\n");

  if (!csv_out.empty()) {
    std::ostringstream os;
    os << "name,spread_old,tick_old,tick_new,forecast,spread_actual,rel_error,naive_error,"
          "skipped,skip_reason\n";
    for (const auto& r : report.rows) {
      os << csv_quote(r.name) << ',' << lob::format_sci(r.spread_old) << ','
         << lob::format_sci(r.tick_old) << ',' << lob::format_sci(r.tick_new) << ',';
      if (!r.skipped) os << lob::format_sci(r.forecast);
      os << ',';
      if (!r.skipped && r.has_actual) os << lob::format_sci(r.spread_actual);
      os << ',';
      if (!r.skipped && r.has_actual) os << lob::format_sci(r.rel_error);
      os << ',';
      if (!r.skipped && r.has_actual) os << lob::format_sci(r.naive_error);
      os << ',' << (r.skipped ? 1 : 0) << ',' << csv_quote(r.skip_reason) << '\n';
    }
    write_output(csv_out, os.str());
  }
}

struct SimArgs {
  ModelArgs model;
  double lambda_i = 0.0, lambda_u = 0.0, p0 = 0.0;
  std::int64_t n_events = 0;
  std::uint64_t seed = 0;
  int n_levels = 0, n_slices = 0;
  CLI::Option *li_opt = nullptr, *lu_opt = nullptr, *p0_opt = nullptr, *events_opt = nullptr,
              *seed_opt = nullptr, *levels_opt = nullptr, *slices_opt = nullptr;
};

lob::SimConfig resolve_sim(const SimArgs& args) {
  const lob::ConfigMap cm = load_config(args.model.config_path);
  const ResolvedModel m = resolve_model(args.model, cm);
  lob::SimConfig cfg;
  cfg.jump = lob::JumpLaw(m.k, m.x0);
  cfg.volume = lob::VolumeLaw(m.sigma);
  cfg.alpha = args.model.tick_opt->count() ? m.alpha : lob::config_double(cm, "grid.alpha", m.alpha);
  // intensities: explicit lambdas win over a bare proportion r
  const bool li_given = args.li_opt->count() > 0 || lob::config_has(cm, "sim.lambda_i");
  const bool lu_given = args.lu_opt->count() > 0 || lob::config_has(cm, "sim.lambda_u");
  if (li_given || lu_given) {
    cfg.lambda_i = args.li_opt->count() ? args.lambda_i
                                        : lob::config_double(cm, "sim.lambda_i", cfg.lambda_i);
    cfg.lambda_u = args.lu_opt->count() ? args.lambda_u
                                        : lob::config_double(cm, "sim.lambda_u", cfg.lambda_u);
  } else {
    cfg.lambda_i = m.r;
    cfg.lambda_u = 1.0 - m.r;
  }
  cfg.p0 = args.p0_opt->count() ? args.p0 : lob::config_double(cm, "sim.p0", cfg.p0);
  cfg.n_events = args.events_opt->count()
                     ? args.n_events
                     : lob::config_int(cm, "sim.n_events", cfg.n_events);
  cfg.seed = args.seed_opt->count() ? args.seed : lob::config_uint64(cm, "sim.seed", cfg.seed);
  cfg.n_levels = args.levels_opt->count()
                     ? args.n_levels
                     : static_cast<int>(lob::config_int(cm, "sim.n_levels", cfg.n_levels));
  cfg.n_slices = args.slices_opt->count()
                     ? args.n_slices
                     : static_cast<int>(lob::config_int(cm, "sim.n_slices", cfg.n_slices));
  return cfg;
}

ordered_json probe_json(const lob::ProbeStat& p) {
  ordered_json j;
  j["executions"] = p.executions;
  j["mean_profit"] = p.mean_profit;
  j["se"] = p.se;
  j["mean_predicted"] = p.mean_predicted;
  j["diff_se"] = p.diff_se;
  return j;
}

void run_simulate(const SimArgs& args, const std::string& out, const std::string& trace_path) {
  const lob::SimConfig cfg = resolve_sim(args);

  std::ofstream trace;
  std::function<void(const lob::TradeEvent&)> cb;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw std::invalid_argument("cannot open output file '" + trace_path + "'");
    trace << "time,type,size,price_pre,price_post\n";
    cb = [&trace](const lob::TradeEvent& ev) {
      trace << lob::format_sci(ev.time) << ',' << (ev.informed ? "jump" : "noise") << ','
            << lob::format_sci(ev.size) << ',' << lob::format_sci(ev.price_pre) << ','
            << lob::format_sci(ev.price_post) << '\n';
    };
  }

  const lob::SimStats stats = lob::run(cfg, cb);
  const double predicted_share = lob::informed_share_prediction(cfg);

  ordered_json j;
  j["config"] = {{"lambda_i", cfg.lambda_i}, {"lambda_u", cfg.lambda_u},
                 {"jump", {{"family", "pareto"}, {"k", cfg.jump.k}, {"x0", cfg.jump.x0}}},
                 {"volume", {{"family", "normal"}, {"sigma", cfg.volume.sigma}}},
                 {"alpha", cfg.alpha}, {"p0", cfg.p0}, {"n_events", cfg.n_events},
                 {"seed", cfg.seed}, {"n_levels", cfg.n_levels}, {"n_slices", cfg.n_slices}};
  j["events"] = {{"total", stats.n_events}, {"jumps", stats.n_jumps},
                 {"noise", stats.n_noise}, {"trades", stats.n_trades},
                 {"informed_trades", stats.n_informed_trades}};
  j["time"] = {{"total", stats.total_time}, {"avg_spread", stats.time_avg_spread},
               {"d_mean", stats.d_mean}, {"d_std", stats.d_std}};
  j["variance_per_trade"] = {{"value", stats.variance_per_trade},
                             {"se", stats.variance_per_trade_se}};
  j["informed_share"] = {{"value", stats.informed_share}, {"se", stats.informed_share_se},
                         {"predicted", predicted_share}};
  j["truncation"] = {{"clip_count", stats.clip_count}, {"biased", stats.truncation_biased}};
  j["d_histogram"] = stats.d_histogram;
  auto side_json = [&](const std::vector<lob::SliceStat>& slices,
                       const std::vector<lob::ProbeStat>& top,
                       const std::vector<lob::ProbeStat>& bottom) {
    ordered_json arr = ordered_json::array();
    for (int lvl = 0; lvl < stats.tracked_levels; ++lvl) {
      ordered_json level;
      level["level"] = lvl + 1;
      level["top"] = probe_json(top[lvl]);
      level["bottom"] = probe_json(bottom[lvl]);
      level["slices"] = ordered_json::array();
      for (int s = 0; s < stats.n_slices; ++s) {
        const auto& st = slices[static_cast<std::size_t>(lvl) * stats.n_slices + s];
        level["slices"].push_back({{"executions", st.executions},
                                   {"mean_profit", st.mean_profit},
                                   {"se", st.se}});
      }
      arr.push_back(level);
    }
    return arr;
  };
  j["levels"] = {{"ask", side_json(stats.ask_slices, stats.ask_top, stats.ask_bottom)},
                 {"bid", side_json(stats.bid_slices, stats.bid_top, stats.bid_bottom)}};
  write_output(out, j.dump(2) + "\n");
}

int dispatch(int argc, char** argv) {
  CLI::App app{"limit-order-book equilibrium model toolkit"};
  app.require_subcommand(1);

  // shape
  auto* shape = app.add_subcommand("shape", "emit the equilibrium book as CSV");
  ModelArgs shape_model;
  shape_model.attach(shape, /*with_offset=*/true, /*with_spread=*/true);
  int shape_levels = 12;
  std::string shape_out = "-";
  shape->add_option("--levels", shape_levels, "levels per side to emit")
      ->check(CLI::PositiveNumber);
  shape->add_option("--out", shape_out, "output path ('-' = stdout)");
  shape->callback([&] { run_shape(shape_model, shape_levels, shape_out); });

  // queue-value
  auto* qv = app.add_subcommand("queue-value",
                                "emit queue position values for the first ask limits");
  ModelArgs qv_model;
  qv_model.attach(qv, /*with_offset=*/false, /*with_spread=*/true);
  std::vector<double> d_fracs{0.25, 0.5, 0.75};
  int qv_levels = 4;
  std::string qv_out = "-";
  qv->add_option("--d-frac", d_fracs, "grid offsets as fractions of the tick")
      ->delimiter(',');
  qv->add_option("--levels", qv_levels, "number of limits to emit")->check(CLI::PositiveNumber);
  qv->add_option("--out", qv_out, "output path ('-' = stdout)");
  qv->callback([&] { run_queue_value(qv_model, d_fracs, qv_levels, qv_out); });

  // calibrate
  auto* cal = app.add_subcommand("calibrate",
                                 "fit the jump law to daily spread/variance observations");
  std::string cal_input, cal_out = "-";
  double cal_tick = 0.0;
  cal->add_option("--input", cal_input, "CSV: date,spread,variance_per_trade")->required();
  cal->add_option("--tick", cal_tick, "tick size of the observation period")->required();
  cal->add_option("--out", cal_out, "output path ('-' = stdout)");
  cal->callback([&] { run_calibrate(cal_input, cal_tick, cal_out); });

  // spread-forecast
  auto* fc = app.add_subcommand("spread-forecast",
                                "forecast spreads under a tick change from pre-change spreads");
  fc->alias("forecast");
  std::string fc_input, fc_out = "-", fc_csv;
  fc->add_option("--input", fc_input, "CSV: name,spread_old,tick_old,tick_new[,spread_actual]")
      ->required();
  fc->add_option("--out", fc_out, "JSON report path ('-' = stdout)");
  fc->add_option("--csv", fc_csv, "also write the report as CSV to this path");
  fc->callback([&] { run_forecast(fc_input, fc_out, fc_csv); });

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the Monte Carlo market simulation");
  SimArgs sim_args;
  sim_args.model.attach(sim, /*with_offset=*/false, /*with_spread=*/false);
  std::string sim_out = "-", sim_trace;
  {
    lob::SimConfig defaults;
    sim_args.lambda_i = defaults.lambda_i;
    sim_args.lambda_u = defaults.lambda_u;
    sim_args.p0 = defaults.p0;
    sim_args.n_events = defaults.n_events;
    sim_args.seed = defaults.seed;
    sim_args.n_levels = defaults.n_levels;
    sim_args.n_slices = defaults.n_slices;
  }
  sim_args.li_opt = sim->add_option("--lambda-i", sim_args.lambda_i, "jump event intensity");
  sim_args.lu_opt = sim->add_option("--lambda-u", sim_args.lambda_u, "noise event intensity");
  sim_args.p0_opt = sim->add_option("--p0", sim_args.p0, "initial efficient price");
  sim_args.events_opt = sim->add_option("--events", sim_args.n_events, "number of events");
  sim_args.seed_opt = sim->add_option("--seed", sim_args.seed, "RNG seed");
  sim_args.levels_opt = sim->add_option("--levels", sim_args.n_levels, "book levels per side");
  sim_args.slices_opt = sim->add_option("--slices", sim_args.n_slices, "queue slices per level");
  sim->add_option("--out", sim_out, "stats JSON path ('-' = stdout)");
  sim->add_option("--trace", sim_trace, "event trace CSV path");
  sim->callback([&] { run_simulate(sim_args, sim_out, sim_trace); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
