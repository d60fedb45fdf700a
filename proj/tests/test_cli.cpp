// End-to-end tests of the command-line tool: it is spawned as a real
// process, so exit codes, stdout, stderr and --out files are all exercised
// the way a shell user sees them. Scratch files live in the working
// directory of the test runner.

#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "biprod/json_io.hpp"

namespace {

using biprod::Json;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(BIPROD_CLI_PATH) + " " + args +
                    " > cli_stdout.txt 2> cli_stderr.txt";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp("cli_stdout.txt");
  r.err = slurp("cli_stderr.txt");
  return r;
}

const std::string kLibrary = std::string(BIPROD_DATA_DIR) + "/examples.json";

} // namespace

TEST_CASE("group report carries orders, orbits and the fixed subgroup") {
  put("cli_shear.json",
      R"({"name":"shear","moduli":[3,9],"sigma_images":[[1,0],[1,1]]})");

  RunResult r = run_cli("group-report --input cli_shear.json");
  REQUIRE(r.code == 0);
  Json body = Json::parse(r.out);
  CHECK(body["version"] == "1.0.0");
  CHECK(body["config"]["command"] == "group-report");
  CHECK(body["name"] == "shear");
  CHECK(body["label"] == "Z3 x Z9");
  CHECK(body["order"] == 27);
  CHECK(body["sigma_order"] == 3);
  CHECK(body["element_orders"]["9"] == 18);
  CHECK(body["orbit_histogram"]["1"] == 9);
  CHECK(body["orbit_histogram"]["3"] == 6);
  CHECK(body["fixed_subgroup"]["order"] == 9);
  CHECK(body["cosets"].size() == 3);

  RunResult tsv = run_cli("group-report --input cli_shear.json --format tsv");
  REQUIRE(tsv.code == 0);
  CHECK(tsv.out ==
        "group\torder\tsigma\tfixed_order\torbit_histogram\n"
        "Z3 x Z9\t27\t1,0;1,1\t9\t1:9,3:6\n");
}

TEST_CASE("config and usage errors exit with code 2") {
  put("cli_bad.json", "{ this is not json");
  CHECK(run_cli("group-report --input cli_bad.json").code == 2);

  put("cli_unknown.json", R"({"moduli":[9],"flavour":"sour"})");
  RunResult unknown = run_cli("group-report --input cli_unknown.json");
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown key") != std::string::npos);

  put("cli_nonauto.json", R"({"moduli":[3,9],"sigma_images":[[1,0],[1,3]]})");
  RunResult nonauto = run_cli("group-report --input cli_nonauto.json");
  CHECK(nonauto.code == 2);
  CHECK(nonauto.err.find("automorphism") != std::string::npos);

  CHECK(run_cli("group-report --input cli_no_such_file.json").code == 2);

  put("cli_z9.json", R"({"moduli":[9],"sigma_images":[[2]]})");
  CHECK(run_cli("enumerate --input cli_z9.json").code == 2); // no --target
  CHECK(run_cli("verify --theorem no-such-suite").code == 2);
  CHECK(run_cli("--help").code == 0);

  RunResult ver = run_cli("--version");
  CHECK(ver.code == 0);
  CHECK(ver.out == "biprod 1.0.0\n");
}

TEST_CASE("enumerate reports the containment chain") {
  put("cli_z9.json", R"({"moduli":[9],"sigma_images":[[2]]})");
  RunResult r = run_cli("enumerate --input cli_z9.json --target gamma");
  REQUIRE(r.code == 0);
  Json body = Json::parse(r.out);
  CHECK(body["target"] == "gamma");
  CHECK(body["order"] == 6);
  CHECK(body["elements"].size() == 6);
  CHECK(body["witnesses"].size() == 6);
  CHECK(body["aut_order"] == 6);
  CHECK(body["gamma_order"] == 6);
  CHECK(body["sym_minus_order"] == 12);
  CHECK(body["is_closed"] == true);
  CHECK(body["contains_aut_sigma"] == true);
  CHECK(body["abelian"] == true);
  CHECK(body["iso_label"] == "Z6");
  CHECK(body["chain"]["verdict"] == "aut = gamma < sym_minus");

  // Non-targeted groups still shape the verdict.
  RunResult sym = run_cli(
      "enumerate --input cli_z9.json --target sym-minus --format tsv");
  REQUIRE(sym.code == 0);
  CHECK(sym.out ==
        "group\tsigma\ttarget\torder\taut_order\tgamma_order\t"
        "sym_minus_order\tchain\n"
        "Z9\t2\tsym_minus\t12\t6\t6\t12\taut = gamma < sym_minus\n");
}

TEST_CASE("enumerate separates the three groups where they differ") {
  // This sigma admits non-additive witnesses: gamma is strictly bigger
  // than the commuting automorphisms.
  put("cli_z24.json", R"({"moduli":[2,4],"sigma_images":[[1,0],[1,3]]})");
  RunResult r = run_cli("enumerate --input cli_z24.json --target gamma");
  REQUIRE(r.code == 0);
  Json body = Json::parse(r.out);
  CHECK(body["aut_order"] == 4);
  CHECK(body["gamma_order"] == 8);
  CHECK(body["sym_minus_order"] == 8);
  CHECK(body["chain"]["strict_aut_gamma"] == true);
  CHECK(body["chain"]["strict_gamma_sym"] == false);
  CHECK(body["chain"]["verdict"] == "aut < gamma = sym_minus");
  // The witness group of this family is non-abelian of order 8.
  CHECK(body["abelian"] == false);

  // Full strict chain on the order-27 shear carrier.
  put("cli_shear.json",
      R"({"moduli":[3,9],"sigma_images":[[1,0],[1,1]]})");
  RunResult s = run_cli(
      "enumerate --input cli_shear.json --target aut-sigma --format tsv");
  REQUIRE(s.code == 0);
  CHECK(s.out.find("\t18\t54\t162\taut < gamma < sym_minus\n") !=
        std::string::npos);
}

TEST_CASE("brute force respects the order-nine gate") {
  put("cli_z9.json", R"({"moduli":[9],"sigma_images":[[2]]})");
  RunResult capped =
      run_cli("enumerate --input cli_z9.json --target gamma --mode brute");
  CHECK(capped.code == 3);
  CHECK(capped.err.find("resource cap") != std::string::npos);

  RunResult allowed = run_cli(
      "enumerate --input cli_z9.json --target gamma --mode brute "
      "--allow-nine");
  REQUIRE(allowed.code == 0);
  RunResult constrained =
      run_cli("enumerate --input cli_z9.json --target gamma");
  REQUIRE(constrained.code == 0);

  // Same sets element for element; only the resolved config differs.
  Json jb = Json::parse(allowed.out);
  Json jc = Json::parse(constrained.out);
  CHECK(jb["elements"] == jc["elements"]);
  CHECK(jb["witnesses"] == jc["witnesses"]);
  CHECK(jb["order"] == jc["order"]);
  CHECK(jb["config"]["mode"] == "brute");
  CHECK(jc["config"]["mode"] == "constrained");
}

TEST_CASE("reports are deterministic and --out writes files") {
  put("cli_z9.json", R"({"moduli":[9],"sigma_images":[[2]]})");
  RunResult a = run_cli(
      "enumerate --input cli_z9.json --target sym-plus --out cli_a.json");
  RunResult b = run_cli(
      "enumerate --input cli_z9.json --target sym-plus --out cli_b.json");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out.empty());
  std::string ra = slurp("cli_a.json");
  std::string rb = slurp("cli_b.json");
  CHECK(!ra.empty());
  CHECK(ra == rb);
  CHECK(Json::parse(ra)["target"] == "sym_plus");
}

TEST_CASE("every verification suite passes on the shipped library") {
  const char* suites[] = {"two-ffs",   "sigma-nofix", "involution",
                          "reduction", "main-examples", "group-main",
                          "sym-equality", "hopf-axioms",
                          "factorization-laws", "kernel-nu", "phi-not"};
  for (const char* s : suites) {
    CAPTURE(s);
    RunResult r = run_cli(std::string("verify --theorem ") + s +
                          " --input " + kLibrary);
    REQUIRE(r.code == 0);
    Json body = Json::parse(r.out);
    CHECK(body["theorem"] == s);
    CHECK(body["pass"] == true);
    CHECK(body["results"].size() >= 1);
    for (const Json& e : body["results"]) CHECK(e["pass"] == true);
  }
}

TEST_CASE("verification fails honestly on a sabotaged library") {
  // Mislabel the hypothesis of one no-fixed-point instance: sigma has
  // order 6 on Z9, so the coprime-order case does not apply.
  Json lib = Json::parse(slurp(kLibrary));
  bool patched = false;
  for (Json& inst : lib["instances"]) {
    if (inst["name"] == "z9-double") {
      REQUIRE(inst["nofix_case"] == "unique-fixed-point");
      inst["nofix_case"] = "coprime-order";
      patched = true;
    }
  }
  REQUIRE(patched);
  put("cli_sabotaged.json", lib.dump(2));

  RunResult r =
      run_cli("verify --theorem sigma-nofix --input cli_sabotaged.json");
  CHECK(r.code == 1);
  Json body = Json::parse(r.out);
  CHECK(body["pass"] == false);
  bool found = false;
  for (const Json& e : body["results"])
    if (e["name"] == "z9-double") {
      CHECK(e["hypothesis_holds"] == false);
      CHECK(e["pass"] == false);
      found = true;
    }
  CHECK(found);

  // TSV keeps the per-entry verdicts and the trailing ALL row.
  RunResult tsv = run_cli(
      "verify --theorem sigma-nofix --input cli_sabotaged.json --format tsv");
  CHECK(tsv.code == 1);
  CHECK(tsv.out.find("sigma-nofix\tz9-double\tfalse\n") != std::string::npos);
  CHECK(tsv.out.find("sigma-nofix\tALL\tfalse") != std::string::npos);
}
