/// End-to-end command-line checks: subcommands, flags, exit codes, output
/// files, and the seed environment fallback.
#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  const std::string name = "qdsim_cli_" + std::to_string(::getpid()) + "_" +
                           tag + "_" + std::to_string(counter++);
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_path = temp_path("stdout");
  const std::string cmd =
      env_prefix + QDSIM_CLI_PATH + std::string(" ") + args + " >" + out_path + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CmdResult res;
  if (WIFEXITED(raw)) res.exit_code = WEXITSTATUS(raw);
  res.output = slurp(out_path);
  std::filesystem::remove(out_path);
  return res;
}

}  // namespace

TEST_CASE("worked examples through the binary") {
  const CmdResult bell = run_cli(
      "run --protocol bell --alice-bits 10 --bob-bits 01 --n 1 --seed 7");
  CHECK(bell.exit_code == 0);
  CHECK(bell.output.find("alice_decoded=01 bob_decoded=10") != std::string::npos);

  const CmdResult ghz =
      run_cli("run --protocol ghz --alice-bits 01 --bob-bits 00 --seed 1");
  CHECK(ghz.exit_code == 0);
  CHECK(ghz.output.find("alice_decoded=00 bob_decoded=01") != std::string::npos);

  const CmdResult w =
      run_cli("run --protocol w --alice-bits 10 --bob-bits 01 --seed 2");
  CHECK(w.exit_code == 0);
  CHECK(w.output.find("alice_decoded=01 bob_decoded=10") != std::string::npos);
}

TEST_CASE("a detected attack exits with the abort code") {
  const CmdResult res = run_cli(
      "run --protocol bell --adversary intercept-resend --delta3 32 --seed 3");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("aborted:") != std::string::npos);
  CHECK(res.output.find("check failed") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("run --protocol nope --alice-bits 00 --bob-bits 00").exit_code == 1);
  CHECK(run_cli("run --protocol w --alice-bits 012 --bob-bits 00").exit_code == 1);
  CHECK(run_cli("run --protocol w --alice-bits 0x --bob-bits 00").exit_code == 1);
  // Pair-count and check-size flags only make sense for the two-particle run.
  CHECK(run_cli("run --protocol w --alice-bits 00 --bob-bits 00 --n 2").exit_code == 1);
  CHECK(run_cli("run --protocol ghz --alice-bits 00 --bob-bits 00 --delta1 2").exit_code == 1);
  // Bit-length mismatch against the pair count.
  CHECK(run_cli("run --protocol bell --alice-bits 00 --bob-bits 00 --n 2").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("run --protocol bell --no-such-flag").exit_code == 1);
}

TEST_CASE("help is available and exits cleanly") {
  const CmdResult res = run_cli("--help");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("run") != std::string::npos);
  CHECK(res.output.find("audit") != std::string::npos);
  CHECK(res.output.find("attack") != std::string::npos);
  CHECK(res.output.find("table1") != std::string::npos);
}

TEST_CASE("transcript files are byte-identical for identical configurations") {
  const std::string f1 = temp_path("t1"), f2 = temp_path("t2"), f3 = temp_path("t3");
  const std::string base =
      "run --protocol bell --alice-bits 10011010 --bob-bits 01100101 --seed 11";
  CHECK(run_cli(base + " --output " + f1).exit_code == 0);
  CHECK(run_cli(base + " --output " + f2).exit_code == 0);
  CHECK(run_cli(
            "run --protocol bell --alice-bits 10011010 --bob-bits 01100101 "
            "--seed 12 --output " + f3)
            .exit_code == 0);

  const std::string t1 = slurp(f1), t2 = slurp(f2), t3 = slurp(f3);
  REQUIRE_FALSE(t1.empty());
  CHECK(t1 == t2);
  CHECK(t1 != t3);

  const nlohmann::json j = nlohmann::json::parse(t1);
  CHECK(j["protocol"] == "bell");
  CHECK(j["seed"] == 11);
  CHECK(j["params"]["n"] == 4);
  CHECK(j["outcome"]["status"] == "completed");
  CHECK(j["events"].is_array());

  std::filesystem::remove(f1);
  std::filesystem::remove(f2);
  std::filesystem::remove(f3);
}

TEST_CASE("seed falls back to the environment variable") {
  const std::string args =
      "run --protocol bell --alice-bits 10 --bob-bits 01 --n 1";
  const CmdResult flagged = run_cli(args + " --seed 7");
  const CmdResult env = run_cli(args, "QDSIM_SEED=7 ");
  CHECK(env.exit_code == 0);
  CHECK(env.output == flagged.output);
  // An explicit flag beats the environment.
  const CmdResult both = run_cli(args + " --seed 7", "QDSIM_SEED=99 ");
  CHECK(both.output == flagged.output);
}

TEST_CASE("audit subcommand reports the leakage numbers") {
  const CmdResult w = run_cli("audit --protocol w --seed 5");
  CHECK(w.exit_code == 0);
  CHECK(w.output.find("protocol=w") != std::string::npos);
  CHECK(w.output.find("per_announcement_entropy_bits=2") != std::string::npos);
  CHECK(w.output.find("mutual_information_bits=2") != std::string::npos);
  CHECK(w.output.find("consistent_assignments=8") != std::string::npos);

  const CmdResult bell = run_cli("audit --protocol bell --seed 5");
  CHECK(bell.exit_code == 0);
  CHECK(bell.output.find("mutual_information_bits=0") != std::string::npos);
  CHECK(bell.output.find("consistent_assignments=16") != std::string::npos);

  const std::string f = temp_path("audit");
  CHECK(run_cli("audit --protocol ghz --seed 5 --output " + f).exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(f));
  CHECK(j["per_announcement_entropy_bits"] == 4.0);
  CHECK(j["consistent_assignments"] == 16);
  std::filesystem::remove(f);
}

TEST_CASE("attack subcommand estimates detection rates") {
  const std::string f = temp_path("attack");
  const CmdResult res =
      run_cli("attack --protocol bell --trials 400 --seed 9 --output " + f);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("per_decoy rate=0.") != std::string::npos);
  CHECK(res.output.find("per_check_pair rate=") != std::string::npos);
  CHECK(res.output.find("abort_delta3_8 rate=") != std::string::npos);

  const nlohmann::json j = nlohmann::json::parse(slurp(f));
  CHECK(j["adversary"] == "intercept-resend");  // the subcommand's default
  CHECK(j["trials"] == 400);
  CHECK(j["per_decoy"]["rate"].get<double>() > 0.15);
  CHECK(j["per_decoy"]["rate"].get<double>() < 0.35);
  std::filesystem::remove(f);

  // An explicitly honest channel is never detected.
  const CmdResult none =
      run_cli("attack --protocol w --adversary none --trials 50 --seed 9");
  CHECK(none.exit_code == 0);
  CHECK(none.output.find("per_decoy rate=0 ") != std::string::npos);
}

TEST_CASE("table subcommand prints ten rows") {
  const CmdResult res = run_cli("table1");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("Work") != std::string::npos);
  CHECK(res.output.find("100%") != std::string::npos);
  CHECK(res.output.find("80%") != std::string::npos);
  CHECK(res.output.find("66.7%") != std::string::npos);

  const std::string f = temp_path("table");
  CHECK(run_cli("table1 --output " + f).exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(f));
  CHECK(j["rows"].size() == 10);
  std::filesystem::remove(f);
}
