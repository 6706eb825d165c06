#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "cli_app.hpp"
#include "oracles.hpp"
#include "pbdstein/errors.hpp"
#include "pbdstein/io.hpp"
#include "pbdstein/metrics.hpp"
#include "pbdstein/pmf.hpp"
#include "pbdstein/rates.hpp"

using namespace pbdstein;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"pbdstein"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/pbdstein_test_" + name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  return path;
}

std::string flat_profile_json(int n, double p) {
  std::string s = "{\"p\": [";
  for (int i = 0; i < n; ++i) {
    if (i) s += ", ";
    s += format_double(p);
  }
  return s + "]}";
}

}  // namespace

TEST_CASE("pmf documents survive a JSON round-trip") {
  const TruncatedPmf pmf = pbd_equilibrium(PBDParams(2, 3), 1e-11);
  const TruncatedPmf back = pmf_from_json(to_json(pmf));
  CHECK(back.offset == pmf.offset);
  CHECK(back.tail_bound == pmf.tail_bound);
  REQUIRE(back.probs.size() == pmf.probs.size());
  for (std::size_t k = 0; k < pmf.probs.size(); ++k)
    CHECK(back.probs[k] == pmf.probs[k]);
  CHECK(back.meta.source == pmf.meta.source);
  CHECK(back.meta.tol == pmf.meta.tol);
  CHECK(back.meta.renormalized == pmf.meta.renormalized);

  const json j = json::parse(to_json(pmf));
  CHECK(j.at("schema") == kSchemaTag);
  CHECK(j.at("kind") == "pmf");
  CHECK(j.at("meta").contains("params"));
}

TEST_CASE("malformed pmf documents are rejected") {
  CHECK_THROWS_AS(pmf_from_json("not json at all"), domain_error);
  CHECK_THROWS_AS(pmf_from_json("{}"), domain_error);
  const std::string wrong_kind =
      R"({"schema":"pbd-stein/1","kind":"bounds","offset":0,"probs":[1.0],"tail_bound":0})";
  CHECK_THROWS_AS(pmf_from_json(wrong_kind), domain_error);
  const std::string bad_prob =
      R"({"schema":"pbd-stein/1","kind":"pmf","offset":0,"probs":[1.5],"tail_bound":0})";
  CHECK_THROWS_AS(pmf_from_json(bad_prob), domain_error);
  const std::string bad_offset =
      R"({"schema":"pbd-stein/1","kind":"pmf","offset":-1,"probs":[1.0],"tail_bound":0})";
  CHECK_THROWS_AS(pmf_from_json(bad_offset), domain_error);
  const std::string bad_tail =
      R"({"schema":"pbd-stein/1","kind":"pmf","offset":0,"probs":[1.0],"tail_bound":-0.5})";
  CHECK_THROWS_AS(pmf_from_json(bad_tail), domain_error);
}

TEST_CASE("reports serialize with their kind tags") {
  const BoundReport r = factor_bounds(PBDParams(1, 1));
  const json jb = json::parse(to_json(r));
  CHECK(jb.at("kind") == "bounds");
  CHECK(jb.at("bounds").at("sup_g_15").at("value").get<double>() ==
        doctest::Approx(5.0 / 7.0));

  const DistanceResult d = wasserstein(poisson_pmf(2.0, 1e-12), poisson_pmf(2.5, 1e-12));
  const json jd = json::parse(to_json(d));
  CHECK(jd.at("kind") == "distance");
  CHECK(jd.at("method") == "cdf_sum");
  CHECK(jd.at("value").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(jd.contains("tail_error"));
}

TEST_CASE("inapplicable bound entries serialize as null with a reason") {
  const BoundReport r = approx_bounds(BernoulliProfile({0.5, 0.5}));
  const json j = json::parse(to_json(r));
  CHECK(j.at("bounds").at("pbd_application_114").at("value").is_null());
  CHECK_FALSE(
      j.at("bounds").at("pbd_application_114").at("reason").get<std::string>().empty());

  std::ostringstream csv;
  write_csv(csv, r);
  CHECK(csv.str().find("bound_id,value") == 0);
  CHECK(csv.str().find("pbd_application_114,null") != std::string::npos);
}

TEST_CASE("pmf and path CSV layouts") {
  TruncatedPmf pmf;
  pmf.offset = 2;
  pmf.probs = {0.25, 0.75};
  std::ostringstream s;
  write_csv(s, pmf);
  CHECK(s.str() == "k,prob\n2,0.25\n3,0.75\n");

  std::vector<PathPoint> path{{0.0, 3}, {0.5, 4}, {1.25, 3}};
  std::ostringstream sp;
  write_csv(sp, path);
  CHECK(sp.str() == "time,state\n0,3\n0.5,4\n1.25,3\n");
}

TEST_CASE("shortest round-trip decimal formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  const double samples[] = {1.0 / 3.0, 6.02e23, -1e-300, 0.697774657964008};
  for (double x : samples) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("profile parsing from JSON and CSV") {
  const BernoulliProfile pj = profile_from_json(R"({"p": [0.1, 0.2, 0.3]})");
  REQUIRE(pj.size() == 3);
  CHECK(pj.p[1] == 0.2);

  CHECK_THROWS_AS(profile_from_json("{\"q\": [0.1]}"), domain_error);
  CHECK_THROWS_AS(profile_from_json("{\"p\": [\"x\"]}"), domain_error);
  CHECK_THROWS_AS(profile_from_json("{\"p\": [1.5]}"), domain_error);
  CHECK_THROWS_AS(profile_from_json("{"), domain_error);

  const BernoulliProfile pc = profile_from_csv("p\n0.1\n\n0.2\n");
  REQUIRE(pc.size() == 2);
  CHECK(pc.p[0] == 0.1);
  const BernoulliProfile bare = profile_from_csv("0.4\n0.5");
  REQUIRE(bare.size() == 2);

  try {
    profile_from_csv("0.1\noops\n");
    FAIL("expected a parse failure");
  } catch (const domain_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(profile_from_csv("0.1\n1.2\n"), domain_error);
}

TEST_CASE("profile loading dispatches on extension and content") {
  const std::string js = write_temp("profile.json", R"({"p": [0.1, 0.2]})");
  CHECK(load_profile(js).size() == 2);
  const std::string cs = write_temp("profile.csv", "0.1\n0.2\n0.3\n");
  CHECK(load_profile(cs).size() == 3);
  const std::string sniffed = write_temp("profile_noext", R"({"p": [0.5]})");
  CHECK(load_profile(sniffed).size() == 1);
  const std::string bare = write_temp("profile_noext2", "0.25\n");
  CHECK(load_profile(bare).size() == 1);
  CHECK_THROWS_AS(load_profile("/tmp/pbdstein_test_does_not_exist"), domain_error);
}

TEST_CASE("cli pmf agrees with the normalizer oracle") {
  const CliResult r = run_cli({"pmf", "--alpha", "1", "--beta", "1", "--tol", "1e-12",
                               "--format", "csv"});
  REQUIRE(r.code == cli::kExitOk);
  REQUIRE(r.out.rfind("k,prob\n0,", 0) == 0);
  const std::size_t start = std::string("k,prob\n0,").size();
  const double pi0 = std::stod(r.out.substr(start));
  const double expected = 1.0 / static_cast<double>(oracle::bessel_i0_at2());
  CHECK(std::abs(pi0 - expected) <= 1e-9);
}

TEST_CASE("cli pmf in the unit-death parameterization") {
  const CliResult r = run_cli({"pmf", "--a", "2", "--b", "0", "--tol", "1e-14"});
  REQUIRE(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j.at("probs")[0].get<double>() ==
        doctest::Approx(0.1353352832366127).epsilon(1e-12));

  // a/b values map onto the direct parameterization exactly
  const CliResult ab = run_cli({"pmf", "--a", "2", "--b", "0.5"});
  const CliResult direct = run_cli({"pmf", "--alpha", "4", "--beta", "2"});
  REQUIRE(ab.code == cli::kExitOk);
  CHECK(ab.out == direct.out);
}

TEST_CASE("cli stein report carries suprema, bounds, dominance") {
  const CliResult r = run_cli({"stein", "--alpha", "1", "--beta", "1"});
  REQUIRE(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j.at("kind") == "stein");
  CHECK(j.at("exact_sup_g").at("value").get<double>() ==
        doctest::Approx(0.697775).epsilon(1e-5));
  CHECK(j.at("bounds").at("sup_g_15").at("value").get<double>() ==
        doctest::Approx(0.714286).epsilon(1e-5));
  const json& dom = j.at("dominance");
  REQUIRE(dom.size() == 6);
  for (const auto& [key, flag] : dom.items()) CHECK(flag.get<bool>());
  CHECK(j.at("truncation").get<int>() >= 5);
  CHECK(j.at("max_residual").get<double>() <= 1e-8);
}

TEST_CASE("cli compare on the flat hundred-summand profile") {
  const std::string path = write_temp("flat100.json", flat_profile_json(100, 0.1));
  const CliResult r = run_cli({"compare", "--profile", path});
  REQUIRE(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j.at("fit").at("alpha").get<double>() == doctest::Approx(891.0).epsilon(1e-10));
  CHECK(j.at("fit").at("beta").get<double>() == doctest::Approx(79.2).epsilon(1e-10));
  CHECK(j.at("bounds").at("pbd_application_114").at("value").get<double>() ==
        doctest::Approx(0.09749156355455571).epsilon(1e-10));
  CHECK(j.at("bounds").at("bx_shifted").at("value").get<double>() ==
        doctest::Approx(0.44444444444444453).epsilon(1e-10));
  const double d_pbd = j.at("distances").at("pbd").at("value").get<double>();
  const double d_pn = j.at("distances").at("poisson").at("value").get<double>();
  const double d_sh = j.at("distances").at("shifted_poisson").at("value").get<double>();
  CHECK(d_pbd == doctest::Approx(0.0033026659122383636).epsilon(1e-9));
  CHECK(d_pn == doctest::Approx(0.12862447047468029).epsilon(1e-9));
  CHECK(d_sh == doctest::Approx(0.033021428991178874).epsilon(1e-9));
  CHECK(d_pbd < d_sh);
  CHECK(d_sh < d_pn);
  CHECK(j.at("distances").at("shifted_poisson").at("shift").get<int>() == 1);
  CHECK(j.at("distances").at("shifted_poisson").at("integer_shift").get<bool>());
  CHECK(j.at("checks").at("pbd_within_114").get<bool>());
  CHECK(j.at("checks").at("shifted_within_bx").get<bool>());
}

TEST_CASE("cli outputs are byte-identical across reruns") {
  const std::vector<std::string> stein_args{"stein", "--alpha", "2", "--beta", "0.5"};
  CHECK(run_cli(stein_args).out == run_cli(stein_args).out);

  const std::vector<std::string> sim{"simulate", "--alpha", "1", "--beta", "1",
                                     "--site", "1", "--samples", "500",
                                     "--seed", "11"};
  const CliResult s1 = run_cli(sim);
  REQUIRE(s1.code == cli::kExitOk);
  CHECK(s1.out == run_cli(sim).out);

  std::vector<std::string> sim4 = sim;
  sim4.push_back("--threads");
  sim4.push_back("4");
  CHECK(run_cli(sim4).out == s1.out);

  const json j = json::parse(s1.out);
  CHECK(j.at("kind") == "estimate");
  CHECK(j.at("target") == "vacancy_mean_site_1");
  CHECK(j.at("n_samples").get<int>() == 500);
}

TEST_CASE("cli usage errors name the offending flags") {
  CHECK(run_cli({}).code == cli::kExitUsage);

  const CliResult missing = run_cli({"pmf"});
  CHECK(missing.code == cli::kExitUsage);
  CHECK(missing.err.find("--alpha") != std::string::npos);

  const CliResult half = run_cli({"pmf", "--alpha", "1"});
  CHECK(half.code == cli::kExitUsage);
  CHECK(half.err.find("--beta") != std::string::npos);

  const CliResult both = run_cli({"pmf", "--alpha", "1", "--beta", "1", "--a", "2",
                                  "--b", "1"});
  CHECK(both.code == cli::kExitUsage);
  CHECK(both.err.find("mutually exclusive") != std::string::npos);

  const CliResult tol = run_cli({"pmf", "--alpha", "1", "--beta", "1", "--tol", "0.5"});
  CHECK(tol.code == cli::kExitUsage);
  CHECK(tol.err.find("--tol") != std::string::npos);

  // stein accepts only the direct parameterization
  CHECK(run_cli({"stein", "--a", "2", "--b", "1"}).code == cli::kExitUsage);

  const CliResult badfmt =
      run_cli({"pmf", "--alpha", "1", "--beta", "1", "--format", "xml"});
  CHECK(badfmt.code == cli::kExitUsage);

  const CliResult fewsam = run_cli({"simulate", "--alpha", "1", "--beta", "1",
                                    "--samples", "50"});
  CHECK(fewsam.code == cli::kExitUsage);
  CHECK(fewsam.err.find("--samples") != std::string::npos);

  const CliResult path_json = run_cli({"simulate", "--alpha", "1", "--beta", "1",
                                       "--path", "--horizon", "2", "--format", "json"});
  CHECK(path_json.code == cli::kExitUsage);
  const CliResult no_horizon =
      run_cli({"simulate", "--alpha", "1", "--beta", "1", "--path"});
  CHECK(no_horizon.code == cli::kExitUsage);
  CHECK(no_horizon.err.find("--horizon") != std::string::npos);

  const CliResult range = run_cli({"bounds", "--alpha", "1e-4", "--beta", "1"});
  CHECK(range.code == cli::kExitUsage);
}

TEST_CASE("cli reports inapplicable fits with the named condition") {
  const std::string path = write_temp("coin.json", R"({"p": [0.5, 0.5]})");
  const CliResult r = run_cli({"compare", "--profile", path});
  CHECK(r.code == cli::kExitInapplicable);
  CHECK(r.err.find("moment_condition") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("cli surfaces numerical consistency failures") {
  const CliResult r = run_cli({"stein", "--alpha", "1e6", "--beta", "1"});
  CHECK(r.code == cli::kExitInconsistent);
  CHECK(r.err.find("consistency") != std::string::npos);
}

TEST_CASE("cli --output writes the same bytes to a file") {
  const CliResult direct = run_cli({"bounds", "--alpha", "1", "--beta", "1"});
  REQUIRE(direct.code == cli::kExitOk);
  const std::string path = "/tmp/pbdstein_test_bounds_out.json";
  std::remove(path.c_str());
  const CliResult filed =
      run_cli({"bounds", "--alpha", "1", "--beta", "1", "--output", path});
  REQUIRE(filed.code == cli::kExitOk);
  CHECK(filed.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == direct.out);
}

TEST_CASE("cli bounds merges unit-death entries at b = 0") {
  const CliResult r = run_cli({"bounds", "--a", "2", "--b", "0", "--format", "csv"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("sup_gt_18") != std::string::npos);
  CHECK(r.out.find("pn_dg_112") != std::string::npos);

  const CliResult direct = run_cli({"bounds", "--alpha", "1", "--beta", "1"});
  const json j = json::parse(direct.out);
  CHECK(j.at("bounds").size() == 6);
}

TEST_CASE("cli path mode emits a csv jump chain") {
  const CliResult r = run_cli({"simulate", "--alpha", "1", "--beta", "1", "--path",
                               "--initial", "2", "--horizon", "5", "--seed", "3"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.rfind("time,state\n0,2\n", 0) == 0);
}

TEST_CASE("cli help succeeds and lists the subcommands") {
  const CliResult r = run_cli({"--help"});
  CHECK(r.code == cli::kExitOk);
  for (const char* name : {"pmf", "stein", "bounds", "compare", "simulate"})
    CHECK(r.out.find(name) != std::string::npos);
}
