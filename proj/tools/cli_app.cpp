#include "cli_app.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbdstein/bounds.hpp"
#include "pbdstein/coupling.hpp"
#include "pbdstein/errors.hpp"
#include "pbdstein/io.hpp"
#include "pbdstein/metrics.hpp"
#include "pbdstein/pmf.hpp"
#include "pbdstein/profile.hpp"
#include "pbdstein/stein.hpp"

namespace pbdstein::cli {

namespace {

using json = nlohmann::json;

struct Flags {
  double alpha = 0.0, beta = 0.0;
  double a = 0.0, b = 0.0;
  double tol = 1e-10;
  std::string format = "json";
  std::string output;
  std::string profile_path;
  std::int64_t site = 1;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
  bool path_mode = false;
  std::int64_t initial = 0;
  double horizon = 0.0;

  CLI::Option *o_alpha = nullptr, *o_beta = nullptr, *o_a = nullptr, *o_b = nullptr;
  CLI::Option *o_format = nullptr;
};

void add_rate_flags(CLI::App* cmd, Flags& f, bool with_ab) {
  f.o_alpha = cmd->add_option("--alpha", f.alpha, "birth rate of the quadratic-death chain");
  f.o_beta = cmd->add_option("--beta", f.beta, "linear death coefficient");
  if (with_ab) {
    f.o_a = cmd->add_option("--a", f.a, "birth rate in the unit-linear-death form");
    f.o_b = cmd->add_option("--b", f.b, "quadratic death coefficient in that form");
  }
}

void add_output_flags(CLI::App* cmd, Flags& f) {
  f.o_format = cmd->add_option("--format", f.format, "output format")
                   ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", f.output, "write the report to this file instead of stdout");
}

// Exactly one complete parameter pair must be present.
enum class Pair { AlphaBeta, AB };
Pair checked_pair(const Flags& f, bool ab_allowed) {
  const bool has_alpha = f.o_alpha->count() > 0, has_beta = f.o_beta->count() > 0;
  const bool has_a = ab_allowed && f.o_a->count() > 0;
  const bool has_b = ab_allowed && f.o_b->count() > 0;
  if (has_alpha != has_beta)
    throw domain_error("--alpha and --beta must be given together");
  if (has_a != has_b) throw domain_error("--a and --b must be given together");
  if (has_alpha && has_a)
    throw domain_error("--alpha/--beta and --a/--b are mutually exclusive");
  if (!has_alpha && !has_a)
    throw domain_error(ab_allowed ? "either --alpha/--beta or --a/--b is required"
                                  : "--alpha and --beta are required");
  return has_alpha ? Pair::AlphaBeta : Pair::AB;
}

void check_tol(double tol) {
  if (!(tol > 0.0 && tol <= 1e-3))
    throw domain_error("--tol must lie in (0, 1e-3]");
}

void emit(const Flags& f, const std::string& payload, std::ostream& out) {
  if (f.output.empty()) {
    out << payload;
    if (!payload.empty() && payload.back() != '\n') out << '\n';
    return;
  }
  std::ofstream file(f.output, std::ios::binary);
  if (!file) throw domain_error("--output path cannot be opened: " + f.output);
  file << payload;
  if (!payload.empty() && payload.back() != '\n') file << '\n';
}

std::string csv_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream s;
  s << "name,value\n";
  for (const auto& [k, v] : rows) s << k << ',' << v << '\n';
  return s.str();
}

json bounds_to_json_fragment(const BoundReport& report) {
  json entries = json::object();
  for (const auto& [id, entry] : report) {
    json e;
    if (entry.applicable()) {
      e["value"] = *entry.value;
    } else {
      e["value"] = nullptr;
      e["reason"] = entry.reason;
    }
    entries[id] = std::move(e);
  }
  return entries;
}

int cmd_pmf(const Flags& f, std::ostream& out) {
  check_tol(f.tol);
  TruncatedPmf pmf = (checked_pair(f, true) == Pair::AlphaBeta)
                         ? pbd_equilibrium(PBDParams(f.alpha, f.beta), f.tol)
                         : (f.b == 0.0 ? poisson_pmf(f.a, f.tol)
                                       : pbd_equilibrium(PBDParams::from_ab(f.a, f.b), f.tol));
  if (f.format == "json") {
    emit(f, to_json(pmf), out);
  } else {
    std::ostringstream s;
    write_csv(s, pmf);
    emit(f, s.str(), out);
  }
  return kExitOk;
}

int cmd_stein(const Flags& f, std::ostream& out) {
  check_tol(f.tol);
  checked_pair(f, false);
  const PBDParams params(f.alpha, f.beta);
  const TruncatedPmf pi = pbd_equilibrium(params, f.tol);
  const double mean = moment(pi, 1).value;
  const SteinSolution sol =
      stein_solve(params, pi, [](std::int64_t k) { return -static_cast<double>(k); });
  const SupremumResult sg = exact_sup_g(params, pi);
  const SupremumResult sd = exact_sup_delta_g(params, pi);
  const SupremumResult sd2 = exact_sup_delta2_g(params, pi);
  const BoundReport fb = factor_bounds(params);

  auto bound = [&](const char* id) { return *fb.at(id).value; };
  const json dominance = {
      {"sup_g_15", sg.value <= bound("sup_g_15") + 1e-12},
      {"sup_dg_16", sd.value <= bound("sup_dg_16") + 1e-12},
      {"sup_d2g_17", sd2.value <= bound("sup_d2g_17") + 1e-12},
      {"sup_d2g_17_relax", sd2.value <= bound("sup_d2g_17_relax") + 1e-12},
      {"mean_lower_210", mean >= bound("mean_lower_210") - 1e-12},
      {"mean_upper_210", mean <= bound("mean_upper_210") + 1e-12},
  };

  if (f.format == "json") {
    json j;
    j["schema"] = kSchemaTag;
    j["kind"] = "stein";
    j["alpha"] = f.alpha;
    j["beta"] = f.beta;
    j["tol"] = f.tol;
    j["truncation"] = pi.trunc();
    j["mean"] = mean;
    j["g_f1"] = json(sol.g);
    j["max_residual"] = sol.max_residual;
    j["exact_sup_g"] = {{"value", sg.value}, {"arg_index", sg.arg_index}};
    j["exact_sup_delta_g"] = {{"value", sd.value},
                              {"arg_index", sd.arg_index},
                              {"scan_end", sd.scan_end}};
    j["exact_sup_delta2_g"] = {{"value", sd2.value},
                               {"arg_index", sd2.arg_index},
                               {"scan_end", sd2.scan_end}};
    j["bounds"] = bounds_to_json_fragment(fb);
    j["dominance"] = dominance;
    emit(f, j.dump(2), out);
  } else {
    std::vector<std::pair<std::string, std::string>> rows{
        {"alpha", format_double(f.alpha)},
        {"beta", format_double(f.beta)},
        {"tol", format_double(f.tol)},
        {"truncation", std::to_string(pi.trunc())},
        {"mean", format_double(mean)},
        {"max_residual", format_double(sol.max_residual)},
        {"exact_sup_g", format_double(sg.value)},
        {"exact_sup_g_arg", std::to_string(sg.arg_index)},
        {"exact_sup_delta_g", format_double(sd.value)},
        {"exact_sup_delta_g_arg", std::to_string(sd.arg_index)},
        {"exact_sup_delta2_g", format_double(sd2.value)},
        {"exact_sup_delta2_g_arg", std::to_string(sd2.arg_index)},
    };
    for (const auto& [id, entry] : fb) rows.emplace_back(id, format_double(*entry.value));
    for (const auto& [id, flag] : dominance.items())
      rows.emplace_back("dominance_" + id, flag.get<bool>() ? "true" : "false");
    emit(f, csv_rows(rows), out);
  }
  return kExitOk;
}

int cmd_bounds(const Flags& f, std::ostream& out) {
  BoundReport report;
  if (checked_pair(f, true) == Pair::AlphaBeta) {
    report = factor_bounds(PBDParams(f.alpha, f.beta));
  } else {
    report = factor_bounds_ab(f.a, f.b);
    if (f.b == 0.0)
      for (const auto& [id, entry] : poisson_factor_bounds(f.a)) report[id] = entry;
  }
  if (f.format == "json") {
    emit(f, to_json(report), out);
  } else {
    std::ostringstream s;
    write_csv(s, report);
    emit(f, s.str(), out);
  }
  return kExitOk;
}

int cmd_compare(const Flags& f, std::ostream& out) {
  check_tol(f.tol);
  const BernoulliProfile profile = load_profile(f.profile_path);
  const TruncatedPmf w = exact_pmf(profile);
  const FitResult fit = fit_pbd(profile);  // inapplicable conditions surface as exit 3
  const TruncatedPmf equilibrium = pbd_equilibrium(fit.params, f.tol);
  const ReferenceLaws laws = reference_laws(profile, f.tol);
  const BoundReport bounds = approx_bounds(profile);

  const DistanceResult d_pbd = wasserstein(w, equilibrium);
  const DistanceResult d_pn = wasserstein(w, laws.poisson);
  const DistanceResult d_shift = wasserstein(w, laws.shifted_poisson);

  std::optional<bool> pbd_ok, shift_ok;
  if (bounds.at("pbd_application_114").applicable())
    pbd_ok = d_pbd.value <= *bounds.at("pbd_application_114").value + d_pbd.tail_error + 1e-9;
  if (laws.integer_shift && bounds.at("bx_shifted").applicable())
    shift_ok = d_shift.value <= *bounds.at("bx_shifted").value + d_shift.tail_error + 1e-9;

  json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "compare";
  j["n"] = profile.size();
  j["lambda_1"] = profile.lambda(1);
  j["lambda_2"] = profile.lambda(2);
  j["lambda_3"] = profile.lambda(3);
  j["fit"] = {{"alpha", fit.params.alpha},
              {"beta", fit.params.beta},
              {"condition", fit.condition},
              {"borderline", fit.borderline}};
  j["bounds"] = bounds_to_json_fragment(bounds);
  j["distances"] = {
      {"pbd", {{"value", d_pbd.value}, {"tail_error", d_pbd.tail_error}}},
      {"poisson", {{"value", d_pn.value}, {"tail_error", d_pn.tail_error}}},
      {"shifted_poisson",
       {{"value", d_shift.value},
        {"tail_error", d_shift.tail_error},
        {"shift", laws.shift},
        {"integer_shift", laws.integer_shift}}},
  };
  j["checks"] = {{"pbd_within_114", pbd_ok ? json(*pbd_ok) : json(nullptr)},
                 {"shifted_within_bx", shift_ok ? json(*shift_ok) : json(nullptr)}};

  if (f.format == "json") {
    emit(f, j.dump(2), out);
  } else {
    std::vector<std::pair<std::string, std::string>> rows{
        {"n", std::to_string(profile.size())},
        {"lambda_1", format_double(profile.lambda(1))},
        {"fit_alpha", format_double(fit.params.alpha)},
        {"fit_beta", format_double(fit.params.beta)},
        {"d_pbd", format_double(d_pbd.value)},
        {"d_poisson", format_double(d_pn.value)},
        {"d_shifted_poisson", format_double(d_shift.value)},
    };
    for (const auto& [id, entry] : bounds)
      rows.emplace_back(id, entry.applicable() ? format_double(*entry.value)
                                               : std::string("null"));
    emit(f, csv_rows(rows), out);
  }

  if ((pbd_ok && !*pbd_ok) || (shift_ok && !*shift_ok))
    throw consistency_error("an exact distance exceeds its claimed bound");
  return kExitOk;
}

int cmd_simulate(const Flags& f, std::ostream& out) {
  checked_pair(f, false);
  const PBDParams params(f.alpha, f.beta);
  if (f.site < 1) throw domain_error("--site must be at least 1");
  if (f.samples < 100) throw domain_error("--samples must be at least 100");
  if (f.threads < 1) throw domain_error("--threads must be at least 1");

  if (f.path_mode) {
    if (f.o_format->count() > 0 && f.format != "csv")
      throw domain_error("--path output is CSV only; drop --format json");
    if (!(f.horizon > 0.0)) throw domain_error("--horizon must be positive in path mode");
    if (f.initial < 0) throw domain_error("--initial must be non-negative");
    const std::vector<PathPoint> path =
        simulate_chain_path(params, f.initial, f.horizon, f.seed);
    std::ostringstream s;
    write_csv(s, path);
    emit(f, s.str(), out);
    return kExitOk;
  }

  const CouplingEstimate est =
      estimate_vacancy_mean(params, f.site, f.samples, f.seed, f.threads);
  if (f.format == "json") {
    emit(f, to_json(est), out);
  } else {
    emit(f, csv_rows({{"target", est.target},
                      {"mean", format_double(est.mean)},
                      {"std_error", format_double(est.std_error)},
                      {"n_samples", std::to_string(est.n_samples)},
                      {"seed", std::to_string(est.seed)}}),
         out);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Birth-death equilibrium and Stein-solution numerics"};
  app.require_subcommand(1);

  Flags pf, sf, bf, cf, mf;

  CLI::App* pmf_cmd = app.add_subcommand("pmf", "equilibrium pmf of the chain");
  add_rate_flags(pmf_cmd, pf, true);
  pmf_cmd->add_option("--tol", pf.tol, "certified tail bound target");
  add_output_flags(pmf_cmd, pf);

  CLI::App* stein_cmd =
      app.add_subcommand("stein", "exact solution suprema with their closed-form bounds");
  add_rate_flags(stein_cmd, sf, false);
  stein_cmd->add_option("--tol", sf.tol, "equilibrium truncation target");
  add_output_flags(stein_cmd, sf);

  CLI::App* bounds_cmd = app.add_subcommand("bounds", "closed-form bound report");
  add_rate_flags(bounds_cmd, bf, true);
  add_output_flags(bounds_cmd, bf);

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Bernoulli-sum law against its fitted equilibrium and Poisson references");
  compare_cmd->add_option("--profile", cf.profile_path, "profile file, JSON {\"p\":[...]} or CSV")
      ->required();
  compare_cmd->add_option("--tol", cf.tol, "reference pmf truncation target");
  add_output_flags(compare_cmd, cf);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "particle-system Monte Carlo");
  add_rate_flags(sim_cmd, mf, false);
  sim_cmd->add_option("--site", mf.site, "focus site of the vacancy-time estimate");
  sim_cmd->add_option("--samples", mf.samples, "number of independent samples");
  sim_cmd->add_option("--seed", mf.seed, "base seed for the per-sample streams");
  sim_cmd->add_option("--threads", mf.threads, "parallel width; never changes the result");
  sim_cmd->add_flag("--path", mf.path_mode, "emit one jump-chain path as CSV instead");
  sim_cmd->add_option("--initial", mf.initial, "path mode: starting state");
  sim_cmd->add_option("--horizon", mf.horizon, "path mode: time horizon");
  add_output_flags(sim_cmd, mf);

  try {
    app.parse(argc, argv);
    if (pmf_cmd->parsed()) return cmd_pmf(pf, out);
    if (stein_cmd->parsed()) return cmd_stein(sf, out);
    if (bounds_cmd->parsed()) return cmd_bounds(bf, out);
    if (compare_cmd->parsed()) return cmd_compare(cf, out);
    return cmd_simulate(mf, out);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "flag error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const domain_error& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const inapplicable_error& e) {
    err << "inapplicable (" << e.condition() << "): " << e.what() << '\n';
    return kExitInapplicable;
  } catch (const consistency_error& e) {
    err << "consistency failure: " << e.what() << '\n';
    return kExitInconsistent;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInconsistent;
  }
}

}  // namespace pbdstein::cli
