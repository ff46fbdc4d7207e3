// esseen-lab: exact Berry-Esseen experiments on discrete sums.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "esseen/bounds.hpp"
#include "esseen/experiments.hpp"
#include "esseen/report.hpp"

namespace {

using nlohmann::json;
using namespace esseen;

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int exit_code(Errc code) {
  switch (code) {
    case Errc::SupportOverflow:
    case Errc::LogBranchViolation:
    case Errc::GridTooCoarse:
    case Errc::AliasRisk:
    case Errc::QuadratureFailure:
    case Errc::QuadratureDepthExceeded:
      return kExitNumerical;
    case Errc::IoError:
      return kExitIo;
    default:
      return kExitInvalid;
  }
}

struct Settings {
  BoundConfig bound;
  int threads = 0;
  std::string format = "json";
  std::string out;
};

// Global flags as parsed; empty optionals mean "not given on the command line".
struct GlobalFlags {
  std::string config;
  std::string out;
  std::string format;
  std::optional<int> threads;
  std::optional<long> seed;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::BadParam, "'" + path + "': " + e.what());
  }
}

void apply_config(Settings& s, const json& j) {
  if (!j.is_object()) throw Error(Errc::BadParam, "config must be a JSON object");
  auto positive = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw Error(Errc::BadParam, "config '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!(x > 0.0)) throw Error(Errc::BadParam, "config '" + key + "' must be positive");
    return x;
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "eps") s.bound.eps = positive(v, key);
    else if (key == "quad_tol") s.bound.quad_tol = positive(v, key);
    else if (key == "c_small") s.bound.c_small = positive(v, key);
    else if (key == "C_smooth") s.bound.C_smooth = v.is_null() ? std::nullopt : std::optional(positive(v, key));
    else if (key == "C_be") s.bound.C_be = v.is_null() ? std::nullopt : std::optional(positive(v, key));
    else if (key == "prune_tol") {
      if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > kMaxPruneTol)
        throw Error(Errc::BadParam, "config 'prune_tol' must lie in [0, 1e-9]");
      s.bound.prune_tol = v.get<double>();
    } else if (key == "threads") {
      if (!v.is_number_integer() || v.get<int>() < 0)
        throw Error(Errc::BadParam, "config 'threads' must be a nonnegative integer");
      s.threads = v.get<int>();
    } else if (key == "format") s.format = v.get<std::string>();
    else throw Error(Errc::BadParam, "unknown config key '" + key + "'");
  }
}

Settings resolve(const GlobalFlags& g) {
  Settings s;
  std::string path = g.config;
  if (path.empty())
    if (const char* env = std::getenv("ESSEEN_LAB_CONFIG")) path = env;
  if (!path.empty()) apply_config(s, read_json_file(path));
  if (g.threads) s.threads = *g.threads;
  if (!g.format.empty()) s.format = g.format;
  s.out = g.out;
  if (s.threads <= 0) s.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  parse_format(s.format);
  return s;
}

json config_json(const Settings& s) {
  // The thread count is left out so reports stay byte-identical across it.
  json j = to_json(s.bound);
  j["format"] = s.format;
  return j;
}

void emit_json(const Settings& s, std::string_view kind, json body) {
  if (s.format != "json") throw Error(Errc::BadParam, std::string(kind) + " supports only --format json");
  write_output(s.out, envelope(kind, config_json(s), std::move(body)).dump(2) + "\n");
}

// Distribution selection shared by several subcommands.
struct DistArgs {
  std::string family;
  std::string dist;  // path to a JSON file, or inline JSON text

  void add(CLI::App* app) {
    app->add_option("--family", family, "family, e.g. rademacher, centered_bernoulli:0.3, two_point:-2,1");
    app->add_option("--dist", dist, "distribution JSON (file path or inline text)");
  }

  DiscreteDist load() const {
    if (!family.empty() && !dist.empty()) throw Error(Errc::BadParam, "give --family or --dist, not both");
    if (!dist.empty()) {
      if (std::filesystem::exists(dist)) return dist_from_json(read_json_file(dist));
      try {
        return dist_from_json(json::parse(dist));
      } catch (const json::exception& e) {
        throw Error(Errc::BadParam, std::string("--dist: ") + e.what());
      }
    }
    return family_or_default();
  }

  std::string label() const { return dist.empty() ? family_or_default_name() : "custom"; }

 private:
  DiscreteDist family_or_default() const {
    return family.empty() ? esseen::family(FamilySpec::rademacher()) : esseen::family(FamilySpec::parse(family));
  }
  std::string family_or_default_name() const {
    return family.empty() ? FamilySpec::rademacher().name() : FamilySpec::parse(family).name();
  }
};

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw Error(Errc::BadParam, "bad size '" + item + "'");
    }
    if (used != item.size()) throw Error(Errc::BadParam, "bad size '" + item + "'");
    out.push_back(n);
  }
  return out;
}

std::vector<DiscreteDist> summands(const DiscreteDist& y, int n) {
  return std::vector<DiscreteDist>(static_cast<std::size_t>(n), normalized_summand(y, n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Berry-Esseen experiments on sums of discrete random variables", "esseen-lab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kSchema));

  GlobalFlags g;
  app.add_option("--config", g.config, "JSON config file (fallback: $ESSEEN_LAB_CONFIG)");
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--format", g.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "accepted for compatibility; all computation is deterministic");

  // dist show
  auto* dist_cmd = app.add_subcommand("dist", "inspect distributions");
  dist_cmd->require_subcommand(1);
  auto* show = dist_cmd->add_subcommand("show", "atoms and moments of a distribution");
  DistArgs show_args;
  show_args.add(show);
  int show_n = 0;
  bool show_standardize = false;
  show->add_option("--n", show_n, "show the normalized sum of n copies instead")->check(CLI::PositiveNumber);
  show->add_flag("--standardize", show_standardize, "standardize before showing");

  // convolve
  auto* conv = app.add_subcommand("convolve", "exact distribution of an independent sum");
  std::vector<std::string> conv_families, conv_dists;
  int conv_n = 1;
  conv->add_option("--family", conv_families, "summand family; repeatable");
  conv->add_option("--dist", conv_dists, "summand distribution JSON; repeatable");
  conv->add_option("--n", conv_n, "copies of each summand")->check(CLI::PositiveNumber);

  // kolmogorov
  auto* kol = app.add_subcommand("kolmogorov", "exact Kolmogorov distance to the standard normal");
  DistArgs kol_args;
  kol_args.add(kol);
  int kol_n = 1;
  kol->add_option("--n", kol_n, "distance of the standardized sum of n copies")->check(CLI::PositiveNumber);

  // chf-check
  auto* chf = app.add_subcommand("chf-check", "characteristic-function remainder sweeps");
  DistArgs chf_args;
  chf_args.add(chf);
  int chf_n = 16, chf_points = 1000;
  chf->add_option("--n", chf_n, "number of summands for the sum sweep")->check(CLI::PositiveNumber);
  chf->add_option("--points", chf_points, "grid points per sweep")->check(CLI::Range(2, 10'000'000));

  // kernel
  auto* ker = app.add_subcommand("kernel", "smoothing kernel summary and tables");
  std::string tables_dir;
  long stride = 64;
  ker->add_option("--tables", tables_dir, "directory for psi.csv, phi.csv and f.csv");
  ker->add_option("--stride", stride, "write every stride-th sample")->check(CLI::PositiveNumber);

  // smooth-bound
  auto* sb = app.add_subcommand("smooth-bound", "smoothing-inequality bound for a normalized sum");
  DistArgs sb_args;
  sb_args.add(sb);
  int sb_n = 1;
  std::optional<double> sb_eps;
  bool sb_auto = false;
  sb->add_option("--n", sb_n, "number of summands")->check(CLI::PositiveNumber);
  auto* eps_opt = sb->add_option("--eps", sb_eps, "smoothing scale")->check(CLI::PositiveNumber);
  auto* auto_opt = sb->add_flag("--auto-eps", sb_auto, "eps = rho^3 / c_small with the full chain report");
  eps_opt->excludes(auto_opt);

  // rate
  auto* rate = app.add_subcommand("rate", "distance versus n with a log-log fit");
  DistArgs rate_args;
  rate_args.add(rate);
  std::string rate_sizes = "4,8,16,32,64,128,256";
  rate->add_option("--n", rate_sizes, "comma-separated sorted sizes");

  // constant-scan
  auto* scan = app.add_subcommand("constant-scan", "smallest constant C with distance <= C sum E|X_k|^3");
  std::vector<std::string> scan_families;
  std::string scan_sizes;
  scan->add_option("--family", scan_families, "families to scan; repeatable (default suite otherwise)");
  scan->add_option("--n", scan_sizes, "comma-separated sorted sizes (default 1..256)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    Settings s = resolve(g);
    ExperimentOptions opts{s.threads, s.bound.prune_tol};

    if (show->parsed()) {
      DiscreteDist d = show_args.load();
      if (show_n > 0) d = normalized_sum(d, show_n, s.bound.prune_tol);
      else if (show_standardize) d = standardize(d);
      json body = to_json(d);
      body["moments"] = to_json(moments(d));
      emit_json(s, "dist", std::move(body));
    } else if (conv->parsed()) {
      std::vector<DiscreteDist> parts;
      for (const auto& f : conv_families) parts.push_back(family(FamilySpec::parse(f)));
      for (const auto& text : conv_dists) {
        DistArgs a;
        a.dist = text;
        parts.push_back(a.load());
      }
      if (parts.empty()) throw Error(Errc::BadParam, "convolve needs at least one --family or --dist");
      std::vector<DiscreteDist> all;
      for (const auto& p : parts) all.push_back(sum_iid(p, conv_n, s.bound.prune_tol));
      const DiscreteDist sum = sum_independent(all, s.bound.prune_tol);
      json body = to_json(sum);
      body["moments"] = to_json(moments(sum));
      emit_json(s, "convolve", std::move(body));
    } else if (kol->parsed()) {
      const DiscreteDist d = normalized_sum(kol_args.load(), kol_n, s.bound.prune_tol);
      json body = to_json(kolmogorov_vs_normal(d));
      body["family"] = kol_args.label();
      body["n"] = kol_n;
      emit_json(s, "kolmogorov", std::move(body));
    } else if (chf->parsed()) {
      const DiscreteDist y = chf_args.load();
      const DiscreteDist x = standardize(y);
      const auto ds = summands(y, chf_n);
      const double c = calibrate_c_small(ds, s.bound.c_small);
      if (c != s.bound.c_small) std::cerr << "esseen-lab: c_small reduced to " << c << "\n";
      json body;
      body["family"] = chf_args.label();
      body["n"] = chf_n;
      body["lemma3"] = to_json(lemma3_sweep(x, chf_points));
      body["lemma4"] = to_json(lemma4_sweep(ds, c, chf_points));
      body["c_small_effective"] = c;
      emit_json(s, "chf-check", std::move(body));
    } else if (ker->parsed()) {
      const Kernel& k = default_kernel();
      if (!tables_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(tables_dir, ec);
        if (ec) throw Error(Errc::IoError, "cannot create '" + tables_dir + "'");
        const std::filesystem::path dir(tables_dir);
        write_output((dir / "psi.csv").string(), grid_csv(k.psi, 1));
        write_output((dir / "phi.csv").string(), grid_csv(k.phi, stride));
        write_output((dir / "f.csv").string(), grid_csv(k.f_table, stride));
      }
      emit_json(s, "kernel", kernel_summary(k));
    } else if (sb->parsed()) {
      const DiscreteDist y = sb_args.load();
      const auto ds = summands(y, sb_n);
      BoundReport r;
      if (sb_auto) {
        r = end_to_end_bound(ds, s.bound);
        if (r.c_small_effective != s.bound.c_small)
          std::cerr << "esseen-lab: c_small reduced to " << r.c_small_effective << "\n";
      } else {
        const double eps = sb_eps ? *sb_eps : s.bound.eps;
        s.bound.eps = eps;
        r = esseen_rhs(ChfExpr::product_of(ds), kNormalDensityBound, eps, s.bound);
      }
      json body = to_json(r);
      body["family"] = sb_args.label();
      body["n"] = sb_n;
      // Without a pinned constant, use the empirical one from the default suite.
      const double C_be = s.bound.C_be ? *s.bound.C_be
                                       : constant_scan(default_suite(), default_scan_sizes(), opts).constant;
      body["C_be"] = C_be;
      body["berry_esseen_rhs"] = berry_esseen_rhs(ds, C_be);
      emit_json(s, "smooth-bound", std::move(body));
    } else if (rate->parsed()) {
      const std::vector<int> sizes = parse_sizes(rate_sizes);
      const RateResult r = rate_experiment(rate_args.label(), rate_args.load(), sizes, opts);
      switch (parse_format(s.format)) {
        case ReportFormat::Csv: write_output(s.out, rate_csv(r)); break;
        case ReportFormat::Svg: write_output(s.out, rate_svg(r)); break;
        case ReportFormat::Json: emit_json(s, "rate", to_json(r)); break;
      }
    } else if (scan->parsed()) {
      std::vector<FamilySpec> specs;
      for (const auto& f : scan_families) specs.push_back(FamilySpec::parse(f));
      if (scan_families.empty()) specs = default_suite();
      const std::vector<int> sizes = scan_sizes.empty() ? default_scan_sizes() : parse_sizes(scan_sizes);
      emit_json(s, "constant-scan", to_json(constant_scan(specs, sizes, opts)));
    }
  } catch (const Error& e) {
    std::cerr << "esseen-lab: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::bad_alloc&) {
    std::cerr << "esseen-lab: out of memory\n";
    return kExitNumerical;
  }
  return 0;
}
