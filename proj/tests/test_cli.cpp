#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mobcon_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "__stdout";
  const fs::path err_file = dir / "__stderr";
  const std::string cmd = std::string(MOBCON_BIN) + " " + args + " > " + out_file.string() +
                          " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string base_config(const std::string& out_dir) {
  return "[dataset]\nformat = synth_checkins\nn_agents = 150\nn_venues = 30\ndays = 25\n"
         "[model]\nmode = venue\nbeta = 0.5\n"
         "[seeds]\nn_seeds = 4\nrng_seed = 21\nn_runs = 3\n"
         "[outputs]\ndirectory = " +
         out_dir + "\n";
}

}  // namespace

TEST_CASE("cli validate reports schema health") {
  const fs::path dir = scratch("validate");
  write_file(dir / "good.ini", base_config((dir / "out").string()));
  const CliResult ok = run_cli("validate --config " + (dir / "good.ini").string(), dir);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("config ok") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));  // validate never writes outputs

  const CliResult quiet =
      run_cli("validate --config " + (dir / "good.ini").string() + " --quiet", dir);
  CHECK(quiet.exit_code == 0);
  CHECK(quiet.out.empty());

  write_file(dir / "bad.ini",
             "[dataset]\nformat = synth_checkins\ntypo = 1\n[outputs]\ndirectory = out\n");
  const CliResult bad = run_cli("validate --config " + (dir / "bad.ini").string(), dir);
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("unknown key 'typo'") != std::string::npos);
}

TEST_CASE("cli run produces files and honest exit codes") {
  const fs::path dir = scratch("run");
  write_file(dir / "exp.ini", base_config((dir / "out").string()));
  const CliResult ok = run_cli("run --config " + (dir / "exp.ini").string(), dir);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("wall clock") != std::string::npos);
  for (const char* name : {"summary.json", "total_infected.csv", "active_infected.csv",
                           "new_infected.csv", "growth_rate.csv", "reproduction_number.csv"})
    CHECK(fs::exists(dir / "out" / name));

  // missing data file: exit 3
  write_file(dir / "missing.ini",
             "[dataset]\nformat = checkins\npath = " + (dir / "absent.tsv").string() +
                 "\n[outputs]\ndirectory = " + (dir / "o").string() + "\n");
  CHECK(run_cli("run --config " + (dir / "missing.ini").string(), dir).exit_code == 3);

  // infeasible seed count: exit 4
  write_file(dir / "seeds.ini",
             "[dataset]\nformat = synth_checkins\nn_agents = 3\nn_venues = 2\ndays = 5\n"
             "[seeds]\nn_seeds = 40\n[outputs]\ndirectory = " +
                 (dir / "o").string() + "\n");
  CHECK(run_cli("run --config " + (dir / "seeds.ini").string(), dir).exit_code == 4);

  // config problems: exit 2
  CHECK(run_cli("run --config " + (dir / "nonexistent.ini").string(), dir).exit_code == 2);
  CHECK(run_cli("run", dir).exit_code == 2);             // --config is required
  CHECK(run_cli("run --config x --bogus", dir).exit_code == 2);
  CHECK(run_cli("frobnicate", dir).exit_code == 2);      // unknown subcommand
}

TEST_CASE("cli runs are byte-reproducible and seed-sensitive") {
  const fs::path dir = scratch("determinism");
  write_file(dir / "exp.ini", base_config((dir / "a").string()));

  REQUIRE(run_cli("run --config " + (dir / "exp.ini").string() + " --quiet", dir).exit_code == 0);
  REQUIRE(run_cli("run --config " + (dir / "exp.ini").string() + " --quiet --out " +
                      (dir / "b").string(),
                  dir)
              .exit_code == 0);
  for (const char* name : {"summary.json", "total_infected.csv", "active_infected.csv",
                           "new_infected.csv", "growth_rate.csv", "reproduction_number.csv"}) {
    INFO(name);
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }

  REQUIRE(run_cli("run --config " + (dir / "exp.ini").string() + " --quiet --rng-seed 99 --out " +
                      (dir / "c").string(),
                  dir)
              .exit_code == 0);
  CHECK(slurp(dir / "a" / "total_infected.csv") != slurp(dir / "c" / "total_infected.csv"));

  // a worker pool must not change any output byte
  REQUIRE(run_cli("run --config " + (dir / "exp.ini").string() + " --quiet --workers 3 --out " +
                      (dir / "d").string(),
                  dir)
              .exit_code == 0);
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "d" / "summary.json"));
  CHECK(slurp(dir / "a" / "total_infected.csv") == slurp(dir / "d" / "total_infected.csv"));
}

TEST_CASE("cli sweep, compare, and ingest run end to end") {
  const fs::path dir = scratch("verbs");
  write_file(dir / "sweep.ini", base_config((dir / "sw").string()) +
                                    "[sweep]\nparameter = beta\nvalues = 0, 0.75\n");
  const CliResult sweep = run_cli("sweep --config " + (dir / "sweep.ini").string(), dir);
  CHECK(sweep.exit_code == 0);
  CHECK(fs::exists(dir / "sw" / "sweep.csv"));
  CHECK(fs::exists(dir / "sw" / "beta_0" / "summary.json"));

  // sweep without a [sweep] section is a config error
  write_file(dir / "nosweep.ini", base_config((dir / "sw2").string()));
  CHECK(run_cli("sweep --config " + (dir / "nosweep.ini").string(), dir).exit_code == 2);

  write_file(dir / "cmp.ini",
             "[dataset]\nformat = synth_meetings\nn_agents = 120\ndays = 25\n"
             "events_per_agent_per_day = 1.5\n[model]\nmode = meeting\nbeta = 0.4\n"
             "[seeds]\nn_seeds = 4\nrng_seed = 2\nn_runs = 3\n"
             "[comparisons]\ncontact_graph = true\nhomogeneous = true\n"
             "[outputs]\ndirectory = " +
                 (dir / "cmp").string() + "\n");
  CHECK(run_cli("compare --config " + (dir / "cmp.ini").string(), dir).exit_code == 0);
  CHECK(fs::exists(dir / "cmp" / "comparison.json"));

  write_file(dir / "ing.ini", base_config((dir / "ing").string()));
  const CliResult ingest = run_cli("ingest --config " + (dir / "ing.ini").string(), dir);
  CHECK(ingest.exit_code == 0);
  CHECK(fs::exists(dir / "ing" / "checkins.tsv"));
  CHECK(fs::exists(dir / "ing" / "ingest.json"));
}
