#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "esseen_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI with `args`, stdout to `out`, stderr discarded. Returns the exit status.
int run(const std::string& args, const std::string& out = "/dev/null", const std::string& env = "") {
  const std::string cmd = env + " \"" ESSEEN_LAB_PATH "\" " + args + " > \"" + out + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json run_json(const std::string& args, const std::string& env = "") {
  const fs::path out = workdir() / "out.json";
  REQUIRE(run(args, out.string(), env) == 0);
  return nlohmann::json::parse(slurp(out));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("subcommands produce versioned json") {
  const auto dist = run_json("dist show --family two_point:-2,1");
  CHECK(dist.at("schema") == "esseen-lab/v1");
  CHECK(dist.at("atoms").size() == 2);
  CHECK(dist.at("moments").at("variance").get<double>() == doctest::Approx(2.0));

  const auto conv = run_json("convolve --family rademacher --n 3");
  CHECK(conv.at("atoms").size() == 4);

  const auto kol = run_json("kolmogorov --family rademacher --n 1");
  CHECK(kol.at("distance").get<double>() == doctest::Approx(0.3413447460685429).epsilon(1e-12));
  CHECK(kol.at("config").contains("quad_tol"));

  const auto inline_dist = run_json("kolmogorov --dist '{\"atoms\": [[-1, 0.5], [1, 0.5]]}'");
  CHECK(inline_dist.at("distance") == kol.at("distance"));

  const auto chf = run_json("chf-check --family rademacher --n 16 --points 200");
  CHECK(chf.at("lemma3").at("regime_violations") == 0);

  const auto sb = run_json("smooth-bound --family rademacher --n 16 --eps 0.2");
  CHECK(sb.at("lhs").get<double>() <= sb.at("rhs").get<double>());
  const auto sb_auto = run_json("smooth-bound --family rademacher --n 16 --auto-eps");
  CHECK(sb_auto.at("eps").get<double>() == doctest::Approx(1.0));
  CHECK(sb_auto.contains("lemma4_majorant"));

  const auto scan = run_json("constant-scan --family rademacher --n 1,4");
  CHECK(scan.at("cells").size() == 2);
}

TEST_CASE("kernel tables") {
  const fs::path tables = workdir() / "tables";
  const auto k = run_json("kernel --tables " + tables.string() + " --stride 1024");
  CHECK(k.at("mass_defect").get<double>() <= 1e-6);
  for (const char* name : {"psi.csv", "phi.csv", "f.csv"}) {
    const std::string text = slurp(tables / name);
    CHECK(text.rfind("x,value\n", 0) == 0);
  }
}

TEST_CASE("rate formats") {
  const fs::path csv = workdir() / "rate.csv", svg = workdir() / "rate.svg";
  CHECK(run("--format csv rate --family rademacher --n 4,8,16", csv.string()) == 0);
  CHECK(slurp(csv).rfind("n,distance,sqrt_n_distance,be_rhs,ratio\n", 0) == 0);
  CHECK(run("rate --family rademacher --n 4,8,16 --format svg --out " + svg.string()) == 0);
  CHECK(slurp(svg).rfind("<svg", 0) == 0);
}

TEST_CASE("deterministic across thread counts") {
  const fs::path a = workdir() / "scan1.json", b = workdir() / "scan4.json";
  REQUIRE(run("constant-scan --threads 1", a.string()) == 0);
  REQUIRE(run("constant-scan --threads 4", b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("config precedence") {
  const fs::path cfg = workdir() / "cfg.json";
  std::ofstream(cfg) << R"({"eps": 0.4, "quad_tol": 1e-8})";
  const auto from_file = run_json("--config " + cfg.string() + " smooth-bound --family rademacher --n 4");
  CHECK(from_file.at("eps").get<double>() == doctest::Approx(0.4));
  CHECK(from_file.at("config").at("quad_tol").get<double>() == doctest::Approx(1e-8));

  const auto flag_wins = run_json("--config " + cfg.string() + " smooth-bound --family rademacher --n 4 --eps 0.3");
  CHECK(flag_wins.at("eps").get<double>() == doctest::Approx(0.3));

  const auto from_env = run_json("smooth-bound --family rademacher --n 4", "ESSEEN_LAB_CONFIG=" + cfg.string());
  CHECK(from_env.at("eps").get<double>() == doctest::Approx(0.4));

  const auto defaults = run_json("smooth-bound --family rademacher --n 4", "ESSEEN_LAB_CONFIG=");
  CHECK(defaults.at("eps").get<double>() == doctest::Approx(0.2));
}

TEST_CASE("exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("kolmogorov --family poisson") == 2);
  CHECK(run("rate --family rademacher --n 8,4") == 2);
  CHECK(run("kolmogorov --dist '{\"atoms\": [[0, 0.5], [1, 0.6]]}'") == 2);
  CHECK(run("--format csv kolmogorov") == 2);
  const fs::path bad_cfg = workdir() / "bad.json";
  std::ofstream(bad_cfg) << R"({"eps": -1})";
  CHECK(run("--config " + bad_cfg.string() + " kernel") == 2);
  CHECK(run("--config " + (workdir() / "absent.json").string() + " kernel") == 4);
  CHECK(run("rate --out /nonexistent-dir/x.json") == 4);
  // Three incommensurate lattices without pruning: 201^3 atoms exceed the cap.
  const fs::path no_prune = workdir() / "no_prune.json";
  std::ofstream(no_prune) << R"({"prune_tol": 0})";
  CHECK(run("--config " + no_prune.string() + " convolve --dist '{\"atoms\": [[0, 0.5], [1.4142135623730951, 0.5]]}' "
            "--dist '{\"atoms\": [[0, 0.5], [3.141592653589793, 0.5]]}' "
            "--dist '{\"atoms\": [[0, 0.5], [2.718281828459045, 0.5]]}' --n 200") == 3);
}

}  // TEST_SUITE
