// Command-line surface: builds schedule plans and region-table maps, and
// emits the verification reports (rotation profile, distortion norms,
// modulus bound chain, increment power-law fits, sharpness table) as CSV
// or JSON.  Exit codes: 0 all checks pass, 1 a mathematical check failed,
// 2 usage or configuration error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdrot/holder.hpp"
#include "fdrot/io.hpp"
#include "fdrot/log_space.hpp"
#include "fdrot/map.hpp"
#include "fdrot/modulus.hpp"
#include "fdrot/rotation.hpp"
#include "fdrot/schedule.hpp"
#include "fdrot/series.hpp"

namespace {

using fdrot::kNegInf;
using fdrot::log_value_json;
using fdrot::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
  std::string config;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

// Input problems (missing/garbled files, bad fields) are usage errors.
std::string read_input_file(const std::string& path) {
  try {
    return fdrot::read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
}

ordered_json load_config(const std::string& path) {
  if (path.empty()) return ordered_json::object();
  ordered_json j = ordered_json::parse(read_input_file(path));
  if (!j.is_object()) {
    throw std::invalid_argument("config root must be a JSON object");
  }
  return j;
}

double num_or(const ordered_json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw std::invalid_argument(std::string("config field '") + key +
                                "' must be a number");
  }
  return v.get<double>();
}

int int_or(const ordered_json& j, const char* key, int dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) {
    throw std::invalid_argument(std::string("config field '") + key +
                                "' must be an integer");
  }
  return v.get<int>();
}

std::string str_or(const ordered_json& j, const char* key,
                   const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_string()) {
    throw std::invalid_argument(std::string("config field '") + key +
                                "' must be a string");
  }
  return v.get<std::string>();
}

std::uint64_t resolve_seed(const ordered_json& cfg, const CommonArgs& args,
                           const char* cmd) {
  if (args.seed_given) return args.seed;
  if (cfg.contains("seed")) {
    const auto& v = cfg.at("seed");
    if (!v.is_number_integer()) {
      throw std::invalid_argument("config field 'seed' must be an integer");
    }
    return v.get<std::uint64_t>();
  }
  throw std::invalid_argument(std::string(cmd) +
                              ": seed required (config \"seed\" or --seed)");
}

fdrot::SchedulePlan plan_from_config(const ordered_json& cfg) {
  if (cfg.contains("plan")) {
    return fdrot::SchedulePlan::from_json_string(
        read_input_file(str_or(cfg, "plan", "")));
  }
  fdrot::GaugeSpec gauge;
  if (cfg.contains("gauge")) {
    const auto& g = cfg.at("gauge");
    if (!g.is_object()) {
      throw std::invalid_argument("config field 'gauge' must be an object");
    }
    gauge.family =
        fdrot::GaugeSpec::family_from_name(str_or(g, "family", "log-power"));
    gauge.parameter = num_or(g, "parameter", 0.5);
  }
  const double p = num_or(cfg, "p", 2.0);
  const int n_blocks = int_or(cfg, "n_blocks", 8);
  const fdrot::ScheduleMode mode =
      fdrot::mode_from_name(str_or(cfg, "mode", "stretch-rotation"));
  return fdrot::generate_schedule(p, n_blocks, gauge, mode);
}

struct Target {
  std::optional<fdrot::SchedulePlan> plan;
  fdrot::PiecewiseRadialMap map = fdrot::PiecewiseRadialMap::identity();
};

//! Map and (when available) plan a command operates on: an explicit map
//! file wins; otherwise the plan (file or inline parameters) is composed.
Target target_from_config(const ordered_json& cfg) {
  Target t;
  if (cfg.contains("map")) {
    t.map = fdrot::PiecewiseRadialMap::from_json_string(
        read_input_file(str_or(cfg, "map", "")));
    if (cfg.contains("plan")) t.plan = plan_from_config(cfg);
  } else {
    t.plan = plan_from_config(cfg);
    t.map = fdrot::compose_schedule(*t.plan);
  }
  return t;
}

void emit(const CommonArgs& args, const std::string& text) {
  if (args.out.empty()) {
    std::cout << text;
  } else {
    fdrot::write_text_file(args.out, text);
  }
}

ordered_json fit_json(const fdrot::ExponentFit& f) {
  ordered_json j;
  j["side"] = f.side == fdrot::HolderSide::Above ? "above" : "below";
  j["exponent"] = f.exponent;
  j["log_constant"] = f.log_constant;
  j["constant"] = fdrot::finite_or_null(std::exp(f.log_constant));
  j["d_min"] = f.d_min;
  j["d_max"] = f.d_max;
  j["residual"] = f.residual;
  ordered_json pts = ordered_json::array();
  for (const fdrot::ScalePoint& p : f.points) {
    ordered_json q;
    q["log_d"] = p.log_d;
    q["log_q"] = p.log_q;
    pts.push_back(q);
  }
  j["points"] = pts;
  j["warnings"] = f.warnings;
  return j;
}

// ---------------------------------------------------------------- build

int cmd_build(const CommonArgs& args) {
  const ordered_json cfg = load_config(args.config);
  const fdrot::SchedulePlan plan = plan_from_config(cfg);
  const auto checks = fdrot::check_feasibility(plan);
  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.pass;
  if (!all_pass) {
    for (const auto& c : checks) {
      if (!c.pass) {
        std::cerr << "constraint failed: " << c.name
                  << " (slack_log = " << c.slack_log << ")\n";
      }
    }
    return kExitCheckFailed;
  }
  const fdrot::PiecewiseRadialMap map = fdrot::compose_schedule(plan);

  const std::string out_dir = args.out.empty() ? "." : args.out;
  std::filesystem::create_directories(out_dir);
  const std::string plan_path = out_dir + "/plan.json";
  const std::string map_path = out_dir + "/map.json";
  fdrot::write_text_file(plan_path, plan.to_json_string());
  fdrot::write_text_file(map_path, map.to_json_string());

  ordered_json j;
  j["plan"] = plan_path;
  j["map"] = map_path;
  ordered_json fc = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["slack_log"] = c.slack_log;
    fc.push_back(e);
  }
  j["feasibility"] = fc;
  j["all_pass"] = all_pass;
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

// ----------------------------------------------------- rotation-profile

int cmd_rotation_profile(const CommonArgs& args) {
  const ordered_json cfg = load_config(args.config);
  const Target target = target_from_config(cfg);

  double p = 0.0;
  double alpha_below = 0.0;
  if (target.plan && target.plan->n_blocks > 0) {
    p = target.plan->p;
    alpha_below = std::exp(target.plan->log_alpha[0]);
  }
  p = num_or(cfg, "p", p);
  alpha_below = num_or(cfg, "alpha_below", alpha_below);

  const double theta = num_or(cfg, "theta", 0.0);
  const double t_max = num_or(cfg, "t_max", 1.0);
  const double t_min = num_or(cfg, "t_min", 1e-6);
  const int grid_points = int_or(cfg, "grid_points", 129);

  std::vector<double> record;
  if (target.plan) {
    for (double lr : target.plan->log_r) {
      if (lr >= std::log(t_min) - 1e-12 && lr <= std::log(t_max)) {
        record.push_back(std::exp(lr));
      }
    }
  }
  const fdrot::RotationProfile profile = fdrot::continuous_arg(
      target.map, theta, t_max, t_min, 1.5, p, alpha_below, record,
      grid_points);

  bool finite = true;
  for (const auto& s : profile.samples) {
    finite = finite && std::isfinite(s.unwrapped_arg);
  }

  if (args.format == "json") {
    ordered_json j;
    j["theta"] = theta;
    j["p"] = p;
    j["alpha_below"] = alpha_below;
    j["total_lift"] = profile.total_lift;
    ordered_json rows = ordered_json::array();
    for (const auto& s : profile.samples) {
      const fdrot::LogSigned a = target.map.arg_offset(s.log_t);
      ordered_json r;
      r["t"] = s.t;
      r["log_t"] = s.log_t;
      r["unwrapped_arg"] = s.unwrapped_arg;
      r["arg_analytic"] = fdrot::finite_or_null(theta + a.value());
      r["arg_log_abs"] = fdrot::finite_or_null(a.log_abs);
      r["arg_sign"] = a.sign;
      r["bound_value"] = s.bound_value;
      r["ratio"] = s.ratio;
      rows.push_back(r);
    }
    j["samples"] = rows;
    j["all_finite"] = finite;
    emit(args, j.dump(2) + "\n");
  } else {
    fdrot::CsvWriter csv({"t", "unwrapped_arg", "bound_value", "ratio",
                          "log_t", "arg_analytic", "arg_log_abs", "arg_sign",
                          "log_bound"});
    for (const auto& s : profile.samples) {
      const fdrot::LogSigned a = target.map.arg_offset(s.log_t);
      csv.row({s.t, s.unwrapped_arg, s.bound_value, s.ratio, s.log_t,
               theta + a.value(), a.log_abs, static_cast<double>(a.sign),
               std::log(s.bound_value)});
    }
    emit(args, csv.text());
  }
  return finite ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------- distortion-report

int cmd_distortion_report(const CommonArgs& args) {
  const ordered_json cfg = load_config(args.config);
  const fdrot::SchedulePlan plan = plan_from_config(cfg);
  const std::uint64_t seed = resolve_seed(cfg, args, "distortion-report");
  const auto samples =
      static_cast<std::uint64_t>(num_or(cfg, "samples", 1000000.0));

  const fdrot::PiecewiseRadialMap map = fdrot::compose_schedule(plan);
  const fdrot::LpNorm analytic = fdrot::distortion_lp_norm(plan);
  const fdrot::McEstimate mc =
      fdrot::distortion_lp_norm_mc(map, plan.p, samples, seed);
  const fdrot::ConvergenceReport series = fdrot::series_report(plan);

  const double analytic_integral = std::exp(plan.p * analytic.log_value);
  const double diff = std::abs(mc.integral - analytic_integral);
  const double allowance = 3.0 * mc.se + 1e-9 * (1.0 + analytic_integral);
  const bool mc_consistent = diff <= allowance;
  const bool pass = mc_consistent && series.all_convergent &&
                    std::isfinite(analytic.log_value);

  ordered_json j;
  j["p"] = plan.p;
  j["n_blocks"] = plan.n_blocks;
  j["mode"] = fdrot::mode_name(plan.mode);
  j["analytic_norm"] = log_value_json(analytic.log_value);
  {
    ordered_json m;
    m["norm"] = log_value_json(mc.log_norm);
    m["norm_se"] = mc.norm_se;
    m["integral"] = log_value_json(mc.log_integral);
    m["integral_se"] = log_value_json(mc.log_se);
    m["samples"] = mc.total_samples;
    m["seed"] = seed;
    m["consistent_with_analytic"] = mc_consistent;
    j["monte_carlo"] = m;
  }
  ordered_json se = ordered_json::array();
  for (const auto& entry : series.series) {
    ordered_json e;
    e["name"] = entry.name;
    e["convergent"] = entry.verdict.convergent;
    e["method"] = entry.verdict.method;
    e["tail_ratio"] = entry.verdict.tail_ratio;
    e["raabe"] = entry.verdict.raabe;
    e["log_terms"] = entry.log_terms;
    const double last_sum = entry.log_partial_sums.empty()
                                ? kNegInf
                                : entry.log_partial_sums.back();
    e["partial_sum"] = log_value_json(last_sum);
    se.push_back(e);
  }
  j["series"] = se;
  j["all_convergent"] = series.all_convergent;
  j["pass"] = pass;

  if (args.format == "csv") {
    std::string text = "metric,log_value,value\n";
    const auto row = [&text](const std::string& name, double log_v) {
      text += name + "," + fdrot::fmt_double(log_v) + "," +
              fdrot::fmt_double(std::exp(log_v)) + "\n";
    };
    row("analytic_norm", analytic.log_value);
    row("mc_norm", mc.log_norm);
    row("mc_integral", mc.log_integral);
    row("mc_integral_se", mc.log_se);
    for (const auto& entry : series.series) {
      const double last_sum = entry.log_partial_sums.empty()
                                  ? kNegInf
                                  : entry.log_partial_sums.back();
      row("series_" + entry.name + "_partial_sum", last_sum);
    }
    emit(args, text);
  } else {
    emit(args, j.dump(2) + "\n");
  }
  return pass ? kExitPass : kExitCheckFailed;
}

// -------------------------------------------------------- modulus-check

int cmd_modulus_check(const CommonArgs& args) {
  const ordered_json cfg = load_config(args.config);
  const fdrot::SchedulePlan plan = plan_from_config(cfg);
  const fdrot::PiecewiseRadialMap map = fdrot::compose_schedule(plan);
  const double p = plan.p;
  const double alpha_below =
      num_or(cfg, "alpha_below", 3.0 * p / (p - 1.0) + 0.5);

  std::vector<double> log_z0;
  if (cfg.contains("z0_log")) {
    for (const auto& v : cfg.at("z0_log")) log_z0.push_back(v.get<double>());
  } else if (cfg.contains("z0")) {
    for (const auto& v : cfg.at("z0")) {
      log_z0.push_back(std::log(v.get<double>()));
    }
  } else {
    const int count = int_or(cfg, "z0_count", 20);
    const double lo = std::log(num_or(cfg, "z0_min", 1e-5));
    const double hi = std::log(num_or(cfg, "z0_max", 1e-2));
    for (int i = 0; i < count; ++i) {
      log_z0.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                std::max(1, count - 1));
    }
  }
  const auto mc_samples =
      static_cast<std::uint64_t>(num_or(cfg, "samples", 0.0));
  const std::uint64_t seed =
      mc_samples > 0 ? resolve_seed(cfg, args, "modulus-check") : 0;

  bool all_pass = true;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  ordered_json rows = ordered_json::array();
  fdrot::CsvWriter csv({"log_z0", "z0", "winding", "log_upper", "log_lower",
                        "log_lower_holder", "log_r_f_exact", "log_r_f_holder",
                        "implied_winding_bound_log", "pass"});
  for (const double lz : log_z0) {
    const fdrot::BoundChainReport rep =
        fdrot::verify_bound_chain(map, plan, lz, alpha_below);
    all_pass = all_pass && rep.pass;
    sx += lz;
    sy += rep.log_upper;
    sxx += lz * lz;
    sxy += lz * rep.log_upper;

    ordered_json r;
    r["z0"] = log_value_json(rep.log_z0);
    r["winding_count"] = rep.n_winding;
    r["winding_log"] = fdrot::finite_or_null(rep.log_n);
    r["upper"] = log_value_json(rep.log_upper);
    r["lower"] = log_value_json(rep.log_lower);
    r["lower_holder"] = log_value_json(rep.log_lower_holder);
    r["c_f"] = log_value_json(rep.log_c_f);
    r["r_f_exact"] = log_value_json(rep.log_r_f_exact);
    r["r_f_holder"] = log_value_json(rep.log_r_f_holder);
    r["implied_winding_bound"] = log_value_json(rep.log_implied_winding_bound);
    if (mc_samples > 0) {
      const fdrot::BallChain chain = fdrot::build_ball_chain_log(lz);
      const fdrot::WeightedModulusReport wm =
          fdrot::weighted_modulus_upper(plan, chain, p, mc_samples, seed);
      ordered_json d;
      d["exact"] = log_value_json(wm.log_direct_exact);
      d["mc"] = log_value_json(wm.log_direct_mc);
      d["mc_se"] = log_value_json(wm.log_direct_mc_se);
      d["samples"] = wm.mc_samples;
      r["weighted_integral"] = d;
    }
    r["chain_holds"] = rep.chain_holds;
    r["winding_within"] = rep.winding_within;
    r["r_f_consistent"] = rep.r_f_consistent;
    r["pass"] = rep.pass;
    if (!rep.diagnostic.empty()) r["diagnostic"] = rep.diagnostic;
    rows.push_back(r);

    csv.row({rep.log_z0, std::exp(rep.log_z0), rep.n_winding, rep.log_upper,
             rep.log_lower, rep.log_lower_holder, rep.log_r_f_exact,
             rep.log_r_f_holder, rep.log_implied_winding_bound,
             rep.pass ? 1.0 : 0.0});
  }

  const double n = static_cast<double>(log_z0.size());
  const double det = n * sxx - sx * sx;
  const double slope = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
  const double expected = -2.0 / p;
  const bool slope_ok = log_z0.size() < 2 ||
                        std::abs(slope - expected) <= 0.02;
  const bool pass = all_pass && slope_ok;

  if (args.format == "csv") {
    emit(args, csv.text());
  } else {
    ordered_json j;
    j["p"] = p;
    j["alpha_below"] = alpha_below;
    j["reports"] = rows;
    ordered_json s;
    s["upper_vs_z0"] = slope;
    s["expected"] = expected;
    s["within_tolerance"] = slope_ok;
    j["slope"] = s;
    j["pass"] = pass;
    emit(args, j.dump(2) + "\n");
  }
  return pass ? kExitPass : kExitCheckFailed;
}

// ----------------------------------------------------------- holder-fit

int cmd_holder_fit(const CommonArgs& args) {
  const ordered_json cfg = load_config(args.config);
  const Target target = target_from_config(cfg);
  // A bare map still needs p for the inverse threshold; an empty plan
  // carries it without changing the map under test.
  const fdrot::SchedulePlan plan =
      target.plan ? *target.plan
                  : fdrot::generate_schedule(num_or(cfg, "p", 2.0), 0,
                                             fdrot::GaugeSpec{},
                                             fdrot::ScheduleMode::RotationOnly);

  fdrot::SamplerSpec spec;
  spec.seed = resolve_seed(cfg, args, "holder-fit");
  spec.pairs_per_scale = int_or(cfg, "pairs_per_scale", 64);
  spec.max_distance = num_or(cfg, "max_distance", 0.1);

  double scale_lo = 1e-5;
  double scale_hi = 0.5 * spec.max_distance;
  int scale_count = 10;
  if (cfg.contains("scales")) {
    const auto& s = cfg.at("scales");
    scale_lo = num_or(s, "lo", scale_lo);
    scale_hi = num_or(s, "hi", scale_hi);
    scale_count = int_or(s, "count", scale_count);
  }
  const std::vector<double> scales =
      fdrot::log_spaced_scales(scale_lo, scale_hi, scale_count);

  const fdrot::ExponentFit above =
      fdrot::fit_exponent(target.map, spec, fdrot::HolderSide::Above, scales);
  const fdrot::ExponentFit below =
      fdrot::fit_exponent(target.map, spec, fdrot::HolderSide::Below, scales);
  const fdrot::InverseHolderReport inverse =
      fdrot::check_inverse_holder(target.map, plan, spec);
  std::optional<fdrot::GBoundsReport> g;
  if (plan.mode == fdrot::ScheduleMode::StretchRotation && plan.n_blocks > 0) {
    g = fdrot::check_g_bounds(plan, spec);
  }

  const bool pass = inverse.pass && (!g || g->pass);

  if (args.format == "csv") {
    std::string text = "fit,side,log_d,d,log_q,q,fitted_log_q\n";
    const auto rows = [&text](const std::string& name,
                              const fdrot::ExponentFit& f) {
      const char* side = f.side == fdrot::HolderSide::Above ? "above" : "below";
      for (const fdrot::ScalePoint& p : f.points) {
        const double fitted = f.log_constant + f.exponent * p.log_d;
        text += name;
        text += ',';
        text += side;
        text += ',' + fdrot::fmt_double(p.log_d) + ',' +
                fdrot::fmt_double(std::exp(p.log_d)) + ',' +
                fdrot::fmt_double(p.log_q) + ',' +
                fdrot::fmt_double(std::exp(p.log_q)) + ',' +
                fdrot::fmt_double(fitted) + '\n';
      }
    };
    rows("map_above", above);
    rows("map_below", below);
    rows("inverse_above", inverse.inverse_above);
    if (g) {
      rows("g_above", g->above);
      rows("g_below", g->below);
    }
    emit(args, text);
  } else {
    ordered_json j;
    j["p"] = plan.p;
    j["seed"] = spec.seed;
    {
      ordered_json s;
      s["lo"] = scale_lo;
      s["hi"] = scale_hi;
      s["count"] = scale_count;
      j["scales"] = s;
    }
    j["map_above"] = fit_json(above);
    j["map_below"] = fit_json(below);
    {
      ordered_json inv;
      inv["forward_below"] = fit_json(inverse.forward_below);
      inv["inverse_above"] = fit_json(inverse.inverse_above);
      inv["reciprocal_product"] = inverse.reciprocal_product;
      inv["below_threshold"] = inverse.below_threshold;
      inv["max_round_trip_error"] = inverse.max_round_trip_error;
      inv["reciprocal_ok"] = inverse.reciprocal_ok;
      inv["below_within_threshold"] = inverse.below_within_threshold;
      inv["round_trip_ok"] = inverse.round_trip_ok;
      inv["pass"] = inverse.pass;
      j["inverse"] = inv;
    }
    if (g) {
      ordered_json gb;
      gb["above"] = fit_json(g->above);
      gb["below"] = fit_json(g->below);
      gb["sqrt_bound_constant"] = g->sqrt_bound_constant;
      gb["cubic_constant"] = g->cubic_constant;
      gb["deriv_constant"] = g->deriv_constant;
      gb["above_exponent_ok"] = g->above_exponent_ok;
      gb["sqrt_bound_holds"] = g->sqrt_bound_holds;
      gb["below_exponent_ok"] = g->below_exponent_ok;
      gb["cubic_positive"] = g->cubic_positive;
      gb["deriv_positive"] = g->deriv_positive;
      gb["pass"] = g->pass;
      j["g_bounds"] = gb;
    } else {
      j["g_bounds"] = nullptr;
    }
    j["pass"] = pass;
    emit(args, j.dump(2) + "\n");
  }
  return pass ? kExitPass : kExitCheckFailed;
}

// ------------------------------------------------------------ sharpness

int cmd_sharpness(const CommonArgs& args) {
  const ordered_json cfg = load_config(args.config);
  const fdrot::SchedulePlan plan = plan_from_config(cfg);
  const fdrot::PiecewiseRadialMap map = fdrot::compose_schedule(plan);
  const std::vector<fdrot::SharpnessRow> rows =
      fdrot::sharpness_check(map, plan);

  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r.pass;
  const bool equality_at_first =
      rows.empty() || std::abs(rows.front().log_excess) <= 1e-12;

  if (args.format == "csv") {
    fdrot::CsvWriter csv(
        {"n", "log_r", "log_lhs", "log_rhs", "log_excess", "pass"});
    for (const auto& r : rows) {
      csv.row({static_cast<double>(r.n), r.log_r, r.log_lhs, r.log_rhs,
               r.log_excess, r.pass ? 1.0 : 0.0});
    }
    emit(args, csv.text());
  } else {
    ordered_json j;
    j["p"] = plan.p;
    j["mode"] = fdrot::mode_name(plan.mode);
    j["n_blocks"] = plan.n_blocks;
    ordered_json rj = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json e;
      e["n"] = r.n;
      e["log_r"] = r.log_r;
      e["lhs"] = log_value_json(r.log_lhs);
      e["rhs"] = log_value_json(r.log_rhs);
      e["log_excess"] = r.log_excess;
      e["pass"] = r.pass;
      rj.push_back(e);
    }
    j["rows"] = rj;
    j["equality_at_first"] = equality_at_first;
    j["all_pass"] = all_pass;
    emit(args, j.dump(2) + "\n");
  }
  return (all_pass && equality_at_first) ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "construction and verification of finite-distortion rotation maps"};
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&args](CLI::App* cmd) {
    cmd->add_option("--config", args.config, "JSON configuration file");
    cmd->add_option("--out", args.out, "output path (stdout when omitted)");
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", args.seed, "RNG seed (overrides config)")
        ->each([&args](const std::string&) { args.seed_given = true; });
  };

  CLI::App* c_build = app.add_subcommand("build", "write plan and map files");
  CLI::App* c_rot = app.add_subcommand(
      "rotation-profile", "unwrapped boundary twist along a ray");
  CLI::App* c_dist = app.add_subcommand(
      "distortion-report", "distortion L^p norms and convergence series");
  CLI::App* c_mod = app.add_subcommand(
      "modulus-check", "weighted modulus bound chain at sample points");
  CLI::App* c_hold = app.add_subcommand(
      "holder-fit", "increment power-law fits and inverse regularity");
  CLI::App* c_sharp = app.add_subcommand(
      "sharpness", "accumulated twist against the bound shape at each r_n");
  for (CLI::App* c : {c_build, c_rot, c_dist, c_mod, c_hold, c_sharp}) {
    add_common(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (c_build->parsed()) return cmd_build(args);
    if (c_rot->parsed()) return cmd_rotation_profile(args);
    if (c_dist->parsed()) return cmd_distortion_report(args);
    if (c_mod->parsed()) return cmd_modulus_check(args);
    if (c_hold->parsed()) return cmd_holder_fit(args);
    if (c_sharp->parsed()) return cmd_sharpness(args);
    std::cerr << "no command selected\n";
    return kExitUsage;
  } catch (const fdrot::ConstraintError& e) {
    std::cerr << "constraint failed: " << e.constraint() << " (" << e.what()
              << ")\n";
    return kExitCheckFailed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "evaluation failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
