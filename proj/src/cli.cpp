#include "howde/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "howde/anonymize.hpp"
#include "howde/apps.hpp"
#include "howde/baselines.hpp"
#include "howde/config.hpp"
#include "howde/detector.hpp"
#include "howde/io.hpp"
#include "howde/metrics.hpp"
#include "howde/parallel.hpp"
#include "howde/profiles.hpp"
#include "howde/synth.hpp"

namespace howde {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kParamKeys = {"delta_T_H", "delta_T_W", "C_hours",     "C_days_H",     "C_days_W",
                                             "f_hours_H", "f_hours_W", "f_days_W",    "window_mode",  "night_bins",
                                             "business_bins", "business_days"};
const std::vector<std::string> kPopulationKeys = {
    "users",           "days",           "start",           "missing_rate_min",    "missing_rate_max",
    "mix_commuter",    "mix_home_day",   "mix_away_day",    "mix_night_shift",     "leisure_rate",
    "multi_home_share", "multi_home_away_min", "multi_home_away_max", "near_work_share", "move_share", "job_change_share",
    "errand_share",    "unemployed_share", "id_prefix"};

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

// Config keys exposed as flags on one subcommand, plus --config and --set.
class KeyFlags {
 public:
  KeyFlags(CLI::App* app, std::vector<std::string> keys) : keys_(std::move(keys)) {
    app->add_option("--config", config_path_, "key=value config file");
    app->add_option("--set", sets_, "Override any config key (key=value), repeatable");
    for (const std::string& k : keys_) {
      app->add_option(flag_name(k), values_[k], "Config key " + k);
    }
    app_ = app;
  }

  // Config file first, then flags. A key given both as a flag and via --set
  // is a usage error.
  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path_.empty()) load_config_file(cfg, config_path_);
    std::set<std::string> from_set;
    for (const std::string& kv : sets_) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      if (!from_set.insert(key).second) throw UsageError("key '" + key + "' given twice via --set");
      if (given(key)) throw UsageError("conflicting values for '" + key + "': " + flag_name(key) + " and --set");
      set_config_key(cfg, key, kv.substr(eq + 1));
    }
    for (const std::string& k : keys_) {
      if (given(k)) set_config_key(cfg, k, values_.at(k));
    }
    return cfg;
  }

  bool given(const std::string& key) const {
    auto* opt = app_->get_option_no_throw(flag_name(key));
    return opt != nullptr && opt->count() > 0;
  }

 private:
  CLI::App* app_ = nullptr;
  std::vector<std::string> keys_;
  std::string config_path_;
  std::vector<std::string> sets_;
  std::map<std::string, std::string> values_;
};

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Writes to `out` for "-" or an empty path, else to the file.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  fn(f);
  f.flush();
  if (!f) throw InputError("error writing " + path);
}

std::string num(double x) { return format_fixed(x, 6); }

std::vector<UserTrace> load_traces(const RunConfig& cfg, bool skip_bad_rows, std::ostream& err) {
  if (cfg.input.empty()) throw UsageError("missing --input stops file");
  StopTable table = read_stops_file(cfg.input, {skip_bad_rows});
  for (const RejectedRow& r : table.rejected) err << "warning: " << cfg.input << ": line " << r.line << ": " << r.reason << '\n';
  if (cfg.prefilter_min_days > 0) {
    const auto keep = prefilter_users(table.traces, cfg.prefilter_min_days);
    std::erase_if(table.traces, [&](const UserTrace& t) {
      return !std::binary_search(keep.begin(), keep.end(), t.user_id);
    });
  }
  return std::move(table.traces);
}

CoordinateTable load_coords(const std::string& path) { return path.empty() ? CoordinateTable{} : read_coords_file(path); }

std::vector<UserLabels> compute_labels(const RunConfig& cfg, std::span<const UserTrace> traces,
                                       const CoordinateTable& coords, std::ostream& err) {
  const int threads = default_threads();
  if (cfg.detector == Detector::kHowde) return run_howde(traces, cfg.params, threads);
  std::vector<UserLabels> out(traces.size());
  std::vector<std::size_t> skipped(traces.size(), 0);
  parallel_for(traces.size(), threads, [&](std::size_t i) {
    BaselineResult r;
    if (cfg.detector == Detector::kAtlas) {
      r = run_atlas(traces[i], {cfg.baseline_windows, cfg.params.windows});
    } else {
      TimeGeoOptions o;
      o.windows = cfg.baseline_windows;
      o.shared = cfg.params.windows;
      r = run_timegeo(traces[i], coords, o);
    }
    skipped[i] = r.skipped_candidates;
    out[i] = baseline_labels(traces[i], r, cfg.params.windows);
  });
  std::size_t total = 0;
  for (std::size_t s : skipped) total += s;
  if (total > 0) err << "warning: " << total << " work candidates skipped for missing coordinates\n";
  return out;
}

void write_eval_header(std::ostream& o) {
  o << "scope,protocol,n_truth,n_detected,n_matched,acc,f_nd,bootstrap_B,acc_sd,f_nd_sd,acc_ci_low,acc_ci_high,"
       "f_nd_ci_low,f_nd_ci_high\n";
}

void write_eval_row(std::ostream& o, Scope scope, Granularity g, const EvalReport& r) {
  const bool b = r.spread.replicates > 0;
  auto sp = [&](double x) { return b ? num(x) : std::string("nan"); };
  o << to_string(scope) << ',' << (g == Granularity::kUserWeek ? "USER_WEEK" : "USER") << ',' << r.point.n_truth << ','
    << r.point.n_detected << ',' << r.point.n_matched << ',' << num(r.point.detected_accuracy) << ','
    << num(r.point.frac_not_detected) << ',' << r.spread.replicates << ',' << sp(r.spread.acc_stddev) << ','
    << sp(r.spread.fnd_stddev) << ',' << sp(r.spread.acc_ci_low) << ',' << sp(r.spread.acc_ci_high) << ','
    << sp(r.spread.fnd_ci_low) << ',' << sp(r.spread.fnd_ci_high) << '\n';
}

// Truth of both scopes from one file; scopes without rows are omitted.
std::vector<GroundTruth> load_truth(const RunConfig& cfg) {
  if (cfg.truth.empty()) throw UsageError("missing --truth ground-truth file");
  std::vector<GroundTruth> out;
  for (Scope s : {Scope::kHome, Scope::kWork}) {
    GroundTruth t = read_truth_file(cfg.truth, s);
    if (t.entries.empty()) continue;
    if (cfg.protocol && t.granularity != *cfg.protocol) {
      throw ProtocolError("truth file " + cfg.truth + " has " + (t.granularity == Granularity::kUser ? "USER" : "USER_WEEK") +
                          " rows but protocol asks for the other granularity");
    }
    out.push_back(std::move(t));
  }
  if (out.empty()) throw InputError("truth file " + cfg.truth + " has no rows");
  return out;
}

struct ClusterOptions {
  std::string scope = "home";
  int k = 0;
  int k_min = 2;
  int k_max = 8;
  int seeds = 3;
};

void add_cluster_options(CLI::App* app, ClusterOptions& o) {
  app->add_option("--scope", o.scope, "home or work")->check(CLI::IsMember({"home", "work", "HOME", "WORK"}));
  app->add_option("--k", o.k, "Fixed number of clusters (0 selects k by the elbow rule)")->check(CLI::NonNegativeNumber);
  app->add_option("--k-min", o.k_min, "Smallest k for the elbow rule")->check(CLI::PositiveNumber);
  app->add_option("--k-max", o.k_max, "Largest k for the elbow rule")->check(CLI::PositiveNumber);
  app->add_option("--seeds", o.seeds, "K-Modes runs per k for the elbow rule")->check(CLI::PositiveNumber);
}

struct Clustering {
  Scope scope = Scope::kHome;
  std::vector<DaySequence> sequences;
  ClusterModel model;
  ElbowResult elbow;
};

Clustering cluster(const RunConfig& cfg, const ClusterOptions& o, std::ostream& err) {
  if (o.k_max < o.k_min) throw UsageError("--k-max must be >= --k-min");
  Clustering c;
  c.scope = *parse_scope(o.scope);
  const auto traces = load_traces(cfg, false, err);
  const auto labels = run_howde(traces, cfg.params, default_threads());
  c.sequences = profile_sequences(traces, labels, c.scope, cfg.params.windows);
  if (c.sequences.empty()) throw InputError("no user has a detected " + std::string(to_string(c.scope)) + " location");
  std::vector<CodeSequence> codes;
  codes.reserve(c.sequences.size());
  for (const auto& s : c.sequences) codes.push_back(s.codes);
  int k = o.k;
  if (k == 0) {
    c.elbow = elbow_k(codes, o.k_min, o.k_max, cfg.seed, o.seeds, default_threads());
    k = c.elbow.k;
  }
  c.model = kmodes(codes, k, cfg.seed);
  return c;
}

std::vector<std::vector<std::string>> parse_grid(const std::vector<std::string>& specs, const KeyFlags& flags,
                                                 std::vector<std::string>& keys) {
  std::vector<std::vector<std::string>> values;
  for (const std::string& spec : specs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos) throw UsageError("--grid expects key=v1,v2,..., got '" + spec + "'");
    const std::string key = spec.substr(0, eq);
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) throw UsageError("--grid key '" + key + "' repeated");
    if (std::find(kParamKeys.begin(), kParamKeys.end(), key) == kParamKeys.end()) {
      throw UsageError("--grid key '" + key + "' is not a detector parameter");
    }
    if (flags.given(key)) throw UsageError("conflicting values for '" + key + "': " + flag_name(key) + " and --grid");
    std::vector<std::string> vs;
    std::stringstream ss(spec.substr(eq + 1));
    for (std::string v; std::getline(ss, v, ';');) {
      if (!v.empty()) vs.push_back(v);
    }
    // Commas separate values unless the key takes a set (night_bins, ...).
    if (key != "night_bins" && key != "business_bins" && key != "business_days") {
      std::vector<std::string> split;
      for (const std::string& v : vs) {
        std::stringstream s2(v);
        for (std::string x; std::getline(s2, x, ',');) {
          if (!x.empty()) split.push_back(x);
        }
      }
      vs = std::move(split);
    }
    if (vs.empty()) throw UsageError("--grid key '" + key + "' has no values");
    keys.push_back(key);
    values.push_back(std::move(vs));
  }
  return values;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Home and work location detection from stop-location data", "howde"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  const auto param_keys = kParamKeys;
  bool skip_bad_rows = false;
  std::function<int()> action;

  // detect
  auto* detect = app.add_subcommand("detect", "Run the detector and write per-day labels");
  KeyFlags detect_flags(detect, concat({param_keys, {"input", "output", "prefilter_min_days"}}));
  detect->add_flag("--skip-bad-rows", skip_bad_rows, "Skip malformed stop rows instead of failing");
  detect->callback([&] {
    action = [&] {
      RunConfig cfg = detect_flags.resolve();
      validate(cfg);
      const auto traces = load_traces(cfg, skip_bad_rows, err);
      const auto labels = run_howde(traces, cfg.params, default_threads());
      emit(cfg.output, out, [&](std::ostream& o) { write_labels(o, labels); });
      return kExitOk;
    };
  });

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Run a static baseline detector and write per-day labels");
  std::string method = "atlas";
  baseline->add_option("--method", method, "atlas or timegeo")->check(CLI::IsMember({"atlas", "timegeo"}));
  KeyFlags baseline_flags(baseline, concat({{"night_bins", "business_bins", "business_days"},
                                            {"input", "output", "coords", "baseline_windows", "prefilter_min_days"}}));
  baseline->add_flag("--skip-bad-rows", skip_bad_rows, "Skip malformed stop rows instead of failing");
  baseline->callback([&] {
    action = [&] {
      RunConfig cfg = baseline_flags.resolve();
      set_config_key(cfg, "detector", method);
      validate(cfg);
      const auto traces = load_traces(cfg, skip_bad_rows, err);
      const auto labels = compute_labels(cfg, traces, load_coords(cfg.coords), err);
      emit(cfg.output, out, [&](std::ostream& o) { write_labels(o, labels); });
      return kExitOk;
    };
  });

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score labels against ground truth");
  std::string labels_path;
  auto* labels_opt = evaluate_cmd->add_option("--labels", labels_path, "Labels CSV to score");
  KeyFlags eval_flags(evaluate_cmd,
                      concat({param_keys, {"input", "output", "truth", "coords", "detector", "baseline_windows",
                                           "protocol", "bootstrap_B", "seed", "prefilter_min_days"}}));
  labels_opt->excludes(evaluate_cmd->get_option("--input"));
  evaluate_cmd->callback([&] {
    action = [&] {
      RunConfig cfg = eval_flags.resolve();
      validate(cfg);
      const auto truths = load_truth(cfg);
      std::vector<UserLabels> labels;
      if (!labels_path.empty()) {
        labels = read_labels_file(labels_path);
      } else {
        const auto traces = load_traces(cfg, false, err);
        labels = compute_labels(cfg, traces, load_coords(cfg.coords), err);
      }
      std::vector<std::pair<Scope, EvalReport>> reports;
      for (const GroundTruth& t : truths) {
        reports.emplace_back(t.scope, evaluate(labels, t, cfg.bootstrap_B, cfg.seed, default_threads()));
      }
      emit(cfg.output, out, [&](std::ostream& o) {
        write_eval_header(o);
        for (std::size_t i = 0; i < reports.size(); ++i) write_eval_row(o, reports[i].first, truths[i].granularity, reports[i].second);
      });
      return kExitOk;
    };
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Evaluate the detector over a grid of parameter values");
  std::vector<std::string> grid_specs;
  sweep->add_option("--grid", grid_specs, "key=v1,v2,... (repeatable; sets use ';' between values)")->required();
  KeyFlags sweep_flags(sweep, concat({param_keys, {"input", "output", "truth", "bootstrap_B", "seed", "prefilter_min_days"}}));
  sweep->callback([&] {
    action = [&] {
      RunConfig base = sweep_flags.resolve();
      std::vector<std::string> keys;
      const auto values = parse_grid(grid_specs, sweep_flags, keys);
      std::vector<RunConfig> configs{base};
      for (std::size_t k = 0; k < keys.size(); ++k) {
        std::vector<RunConfig> next;
        for (const RunConfig& c : configs) {
          for (const std::string& v : values[k]) {
            RunConfig x = c;
            set_config_key(x, keys[k], v);
            next.push_back(std::move(x));
          }
        }
        configs = std::move(next);
      }
      for (const RunConfig& c : configs) validate(c);
      const auto truths = load_truth(base);
      const auto traces = load_traces(base, false, err);
      std::vector<std::string> rows;
      for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto labels = run_howde(traces, configs[i].params, default_threads());
        std::ostringstream row;
        std::size_t vi = i;
        std::vector<std::string> cells(keys.size());
        for (std::size_t k = keys.size(); k-- > 0;) {
          cells[k] = values[k][vi % values[k].size()];
          vi /= values[k].size();
        }
        for (const std::string& cell : cells) {
          row << (cell.find(',') == std::string::npos ? cell : '"' + cell + '"') << ',';
        }
        for (Scope s : {Scope::kHome, Scope::kWork}) {
          const GroundTruth* t = nullptr;
          for (const auto& g : truths) {
            if (g.scope == s) t = &g;
          }
          if (t == nullptr) {
            row << "0,0,0,nan,nan,nan,nan";
          } else {
            const EvalReport r = evaluate(labels, *t, base.bootstrap_B, base.seed, default_threads());
            const bool b = r.spread.replicates > 0;
            row << r.point.n_truth << ',' << r.point.n_detected << ',' << r.point.n_matched << ','
                << num(r.point.detected_accuracy) << ',' << num(r.point.frac_not_detected) << ','
                << (b ? num(r.spread.acc_stddev) : "nan") << ',' << (b ? num(r.spread.fnd_stddev) : "nan");
          }
          row << (s == Scope::kHome ? "," : "\n");
        }
        rows.push_back(row.str());
      }
      emit(base.output, out, [&](std::ostream& o) {
        for (const std::string& k : keys) o << k << ',';
        o << "home_n_truth,home_n_detected,home_n_matched,home_acc,home_f_nd,home_acc_sd,home_f_nd_sd,"
             "work_n_truth,work_n_detected,work_n_matched,work_acc,work_f_nd,work_acc_sd,work_f_nd_sd\n";
        for (const std::string& r : rows) o << r;
      });
      return kExitOk;
    };
  });

  // profiles
  auto* profiles = app.add_subcommand("profiles", "Cluster day sequences into behavioural profiles");
  ClusterOptions profile_opts;
  add_cluster_options(profiles, profile_opts);
  std::string elbow_output;
  profiles->add_option("--elbow-output", elbow_output, "Write the mean cost per k to this CSV");
  KeyFlags profile_flags(profiles, concat({param_keys, {"input", "output", "seed", "prefilter_min_days"}}));
  profiles->callback([&] {
    action = [&] {
      RunConfig cfg = profile_flags.resolve();
      validate(cfg);
      const Clustering c = cluster(cfg, profile_opts, err);
      emit(cfg.output, out, [&](std::ostream& o) {
        o << "cluster,size_fraction,mode\n";
        for (const ClusterRow& r : cluster_report(c.model)) o << r.cluster << ',' << num(r.size_fraction) << ',' << r.mode << '\n';
      });
      if (!elbow_output.empty()) {
        emit(elbow_output, out, [&](std::ostream& o) {
          o << "k,mean_cost,selected\n";
          for (std::size_t i = 0; i < c.elbow.ks.size(); ++i) {
            o << c.elbow.ks[i] << ',' << num(c.elbow.mean_costs[i]) << ',' << (c.elbow.ks[i] == c.elbow.k ? 1 : 0) << '\n';
          }
        });
      }
      return kExitOk;
    };
  });

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Mean normalised profile entropy and its null model");
  ClusterOptions entropy_opts;
  add_cluster_options(entropy, entropy_opts);
  int repetitions = 100;
  entropy->add_option("--repetitions", repetitions, "Null-model shuffles")->check(CLI::PositiveNumber);
  KeyFlags entropy_flags(entropy, concat({param_keys, {"input", "output", "seed", "prefilter_min_days"}}));
  entropy->callback([&] {
    action = [&] {
      RunConfig cfg = entropy_flags.resolve();
      validate(cfg);
      const Clustering c = cluster(cfg, entropy_opts, err);
      const auto users = user_assignments(c.sequences, c.model);
      const double observed = mean_entropy(users, c.model.k);
      const double null = entropy_null(users, c.model.k, derive_seed(cfg.seed, 1), repetitions);
      emit(cfg.output, out, [&](std::ostream& o) {
        o << "scope,k,users,days,mean_entropy,null_entropy\n";
        o << to_string(c.scope) << ',' << c.model.k << ',' << users.size() << ',' << c.sequences.size() << ','
          << num(observed) << ',' << num(null) << '\n';
      });
      return kExitOk;
    };
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic population with ground truth");
  std::string truth_output, user_truth_output, coords_output;
  synth->add_option("--truth-output", truth_output, "Per-week ground truth CSV");
  synth->add_option("--user-truth-output", user_truth_output, "Per-user ground truth CSV");
  synth->add_option("--coords-output", coords_output, "Location coordinates CSV");
  std::string time_format = "iso";
  synth->add_option("--time-format", time_format, "iso or epoch")->check(CLI::IsMember({"iso", "epoch"}));
  KeyFlags synth_flags(synth, concat({kPopulationKeys, {"output", "seed"}}));
  synth->callback([&] {
    action = [&] {
      RunConfig cfg = synth_flags.resolve();
      cfg.population.seed = cfg.seed;
      cfg.population.validate();
      const auto pop = generate_population(make_population(cfg.population), default_threads());
      const TimeFormat tf = time_format == "epoch" ? TimeFormat::kEpoch : TimeFormat::kIso;
      emit(cfg.output, out, [&](std::ostream& o) { write_stops(o, pop.traces, tf); });
      if (!truth_output.empty()) write_truth_file(truth_output, std::vector{pop.home_weeks, pop.work_weeks});
      if (!user_truth_output.empty()) write_truth_file(user_truth_output, std::vector{pop.home_users, pop.work_users});
      if (!coords_output.empty()) write_coords_file(coords_output, pop.coords);
      return kExitOk;
    };
  });

  // anonymize
  auto* anon = app.add_subcommand("anonymize", "Coarsen, shift and shuffle stops for release");
  KeyFlags anon_flags(anon, {"input", "output", "seed"});
  anon->callback([&] {
    action = [&] {
      RunConfig cfg = anon_flags.resolve();
      const auto traces = load_traces(cfg, false, err);
      const auto result = anonymize(traces, {cfg.seed, kAnonymizeGrid}, default_threads());
      emit(cfg.output, out, [&](std::ostream& o) { write_stops(o, result); });
      return kExitOk;
    };
  });

  // apps
  auto* apps = app.add_subcommand("apps", "Downstream analyses of detected labels");
  apps->require_subcommand(1);
  std::string app_labels, app_output, app_coords, regions_path, reference_path, comparison_output, groups_path;
  int min_stable_days = 30;
  std::size_t min_users = 0;

  auto* employment = apps->add_subcommand("employment", "Employment rate per home region");
  employment->add_option("--labels", app_labels, "Labels CSV")->required();
  employment->add_option("--output", app_output, "Result CSV (default stdout)");
  auto* regions_opt = employment->add_option("--regions", regions_path, "user_id,region_id CSV");
  employment->add_option("--coords", app_coords, "Coordinates with region_id, used when --regions is absent")
      ->excludes(regions_opt);
  employment->add_option("--min-stable-days", min_stable_days, "Days a work location must stay constant")
      ->check(CLI::PositiveNumber);
  employment->add_option("--min-users", min_users, "Drop regions with fewer users from the report");
  employment->add_option("--reference", reference_path, "region_id,value reference statistics");
  employment->add_option("--comparison-output", comparison_output, "Write the reference comparison to this CSV");
  employment->callback([&] {
    action = [&] {
      if (regions_path.empty() && app_coords.empty()) throw UsageError("employment needs --regions or --coords");
      const auto labels = read_labels_file(app_labels);
      const auto region_of = regions_path.empty() ? home_regions(labels, read_coords_file(app_coords))
                                                  : read_mapping_file(regions_path);
      EmploymentResult r = employment_rate(labels, region_of, min_stable_days);
      if (r.users_without_region > 0) err << "warning: " << r.users_without_region << " users without a region\n";
      std::erase_if(r.regions, [&](const RegionRate& x) { return x.users < min_users; });
      emit(app_output, out, [&](std::ostream& o) {
        o << "region_id,users,employed,rate\n";
        for (const RegionRate& x : r.regions) o << x.region_id << ',' << x.users << ',' << x.employed << ',' << num(x.rate) << '\n';
      });
      if (!reference_path.empty()) {
        std::map<std::string, double> estimates;
        for (const RegionRate& x : r.regions) estimates[x.region_id] = x.rate;
        const auto cmp = compare_to_reference(estimates, read_reference_file(reference_path));
        emit(comparison_output.empty() ? "-" : comparison_output, err, [&](std::ostream& o) {
          o << "pearson_r,mean_relative_error,regions_compared,zero_reference_excluded\n";
          o << num(cmp.pearson_r) << ',' << num(cmp.mean_relative_error) << ',' << cmp.regions_compared << ','
            << cmp.zero_reference_excluded << '\n';
        });
      }
      return kExitOk;
    };
  });

  auto* commute = apps->add_subcommand("commute", "Home-work distance per user group");
  commute->add_option("--labels", app_labels, "Labels CSV")->required();
  commute->add_option("--output", app_output, "Result CSV (default stdout)");
  commute->add_option("--coords", app_coords, "Coordinates CSV")->required();
  commute->add_option("--groups", groups_path, "user_id,group CSV")->required();
  commute->callback([&] {
    action = [&] {
      const auto labels = read_labels_file(app_labels);
      const CommuteResult r = commute_stats(labels, read_coords_file(app_coords), read_mapping_file(groups_path));
      if (r.days_missing_coords > 0) err << "warning: " << r.days_missing_coords << " days skipped for missing coordinates\n";
      if (r.users_without_group > 0) err << "warning: " << r.users_without_group << " users without a group\n";
      emit(app_output, out, [&](std::ostream& o) {
        o << "group,users,mean_km,stderr_km\n";
        for (const GroupCommute& g : r.groups) o << g.group << ',' << g.users << ',' << num(g.mean_km) << ',' << num(g.stderr_km) << '\n';
      });
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace howde
