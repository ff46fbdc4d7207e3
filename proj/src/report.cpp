#include "esseen/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace esseen {

using nlohmann::json;

namespace {

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

ReportFormat parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "svg") return ReportFormat::Svg;
  throw Error(Errc::BadParam, "unknown format '" + std::string(name) + "'");
}

json to_json(const DiscreteDist& d) {
  json atoms = json::array();
  for (Eigen::Index i = 0; i < d.size(); ++i) atoms.push_back({d.points()[i], d.probs()[i]});
  return {{"atoms", atoms}, {"pruned_mass", d.pruned_mass()}};
}

json to_json(const MomentSummary& m) {
  return {{"mean", m.mean}, {"variance", m.variance}, {"abs3", m.abs3}};
}

json to_json(const DistanceReport& r) {
  return {{"distance", r.distance},
          {"arg_sup", r.arg_sup},
          {"side", r.side == SupSide::AtAtom ? "at_atom" : "left_limit"},
          {"error_bar", r.error_bar}};
}

json to_json(const BoundReport& r) {
  json j = {{"lhs", r.lhs},
            {"integral_term", r.integral_term},
            {"tail_term", r.tail_term},
            {"rhs", r.rhs},
            {"min_feasible_C", r.min_feasible_C},
            {"eps", r.eps},
            {"density_bound", r.density_bound},
            {"C_smooth", r.C_smooth},
            {"error_bar", r.error_bar}};
  if (r.rho3 > 0.0) {
    j["rho3"] = r.rho3;
    j["c_small_effective"] = r.c_small_effective;
    j["wide_epsilon"] = r.wide_epsilon;
    j["lemma4_constant"] = r.lemma4_constant;
    j["lemma4_majorant"] = r.lemma4_majorant;
  }
  return j;
}

json to_json(const BoundConfig& c) {
  json j = {{"eps", c.eps}, {"quad_tol", c.quad_tol}, {"c_small", c.c_small}, {"prune_tol", c.prune_tol}};
  j["C_smooth"] = c.C_smooth ? json(*c.C_smooth) : json(nullptr);
  j["C_be"] = c.C_be ? json(*c.C_be) : json(nullptr);
  return j;
}

json to_json(const RateResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"distance", row.distance},
                    {"sqrt_n_distance", row.sqrt_n_distance},
                    {"be_rhs", row.be_rhs},
                    {"ratio", row.ratio},
                    {"error_bar", row.error_bar}});
  return {{"family", r.label},
          {"rows", rows},
          {"fit",
           {{"slope", r.fit.slope}, {"intercept", r.fit.intercept}, {"r_squared", r.fit.r_squared}}}};
}

json to_json(const ConstantScan& s) {
  json cells = json::array();
  for (const auto& c : s.cells)
    cells.push_back({{"family", c.family},
                     {"n", c.n},
                     {"distance", c.distance},
                     {"rho3", c.rho3},
                     {"ratio", c.ratio}});
  return {{"constant", s.constant}, {"cells", cells}};
}

json to_json(const Lemma3Sweep& s) {
  return {{"theta_max", s.theta_max},
          {"t_at_max", s.t_at_max},
          {"regime_violations", s.regime_violations},
          {"branch_violations", s.branch_violations},
          {"points", s.points}};
}

json to_json(const Lemma4Sweep& s) {
  return {{"lambda_max", s.lambda_max},
          {"t_at_max", s.t_at_max},
          {"t_window", s.t_window},
          {"points", s.points}};
}

json kernel_summary(const Kernel& k) {
  return {{"mass_defect", k.mass_defect},
          {"c_phi_tail", k.c_phi_tail},
          {"outer_tail_mass", k.outer_tail_mass},
          {"support_check", phi_hat_outside_support(k)},
          {"phi_min", k.phi.vals.minCoeff()},
          {"extent", k.phi.x_end()},
          {"step", k.phi.dx},
          {"psi_points", k.psi.size()}};
}

DiscreteDist dist_from_json(const json& j) {
  try {
    if (j.contains("atoms")) {
      std::vector<double> pts, prs;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2) throw Error(Errc::BadParam, "atom must be [x, p]");
        pts.push_back(a.at(0).get<double>());
        prs.push_back(a.at(1).get<double>());
      }
      return make_discrete(pts, prs);
    }
    const std::string name = j.at("family").get<std::string>();
    if (name == "rademacher") return family(FamilySpec::rademacher());
    if (name == "centered_bernoulli")
      return family(FamilySpec::centered_bernoulli(j.at("p").get<double>()));
    if (name == "two_point")
      return family(FamilySpec::two_point(j.at("x1").get<double>(), j.at("x2").get<double>()));
    if (name == "uniform_lattice") return family(FamilySpec::uniform_lattice(j.at("m").get<int>()));
    // Also accept the compact form, e.g. "centered_bernoulli:0.3".
    return family(FamilySpec::parse(name));
  } catch (const json::exception& e) {
    throw Error(Errc::BadParam, std::string("bad distribution: ") + e.what());
  }
}

json envelope(std::string_view kind, const json& config, json body) {
  json j = {{"schema", kSchema}, {"kind", kind}, {"config", config}};
  for (auto& [key, value] : body.items()) j[key] = std::move(value);
  return j;
}

std::string rate_csv(const RateResult& r) {
  std::string out(kRateCsvHeader);
  out += '\n';
  for (const auto& row : r.rows) {
    out += std::to_string(row.n) + ',' + num(row.distance) + ',' + num(row.sqrt_n_distance) + ',' +
           num(row.be_rhs) + ',' + num(row.ratio) + '\n';
  }
  return out;
}

std::string rate_svg(const RateResult& r) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 30, B = 50;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << r.label << ": Kolmogorov distance vs n (log-log), slope "
      << fixed(r.fit.slope, 3) << ", r2 " << fixed(r.fit.r_squared, 4) << "</text>\n";

  if (!r.rows.empty()) {
    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    for (const auto& row : r.rows) {
      const double lx = std::log10(row.n), ly = std::log10(std::max(row.distance, 1e-300));
      lx0 = std::min(lx0, lx);
      lx1 = std::max(lx1, lx);
      ly0 = std::min(ly0, ly);
      ly1 = std::max(ly1, ly);
    }
    lx0 = std::floor(lx0), lx1 = std::max(std::ceil(lx1), lx0 + 1);
    ly0 = std::floor(ly0), ly1 = std::max(std::ceil(ly1), ly0 + 1);
    auto px = [&](double lx) { return L + (lx - lx0) / (lx1 - lx0) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ly0) / (ly1 - ly0) * (H - T - B); };

    svg << "<g stroke=\"black\" fill=\"none\">\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/>\n";
    svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double d = lx0; d <= lx1 + 1e-9; d += 1.0)
      svg << "<text x=\"" << fixed(px(d)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">1e"
          << static_cast<int>(d) << "</text>\n";
    for (double d = ly0; d <= ly1 + 1e-9; d += 1.0)
      svg << "<text x=\"" << L - 6 << "\" y=\"" << fixed(py(d) + 4) << "\" text-anchor=\"end\">1e"
          << static_cast<int>(d) << "</text>\n";
    svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">n</text>\n";
    svg << "</g>\n";

    // Fitted line in log10 coordinates: log10 d = slope log10 n + intercept / ln 10.
    const double b10 = r.fit.intercept / std::log(10.0);
    svg << "<line stroke=\"#c0392b\" stroke-width=\"1.5\" x1=\"" << fixed(px(lx0)) << "\" y1=\""
        << fixed(py(r.fit.slope * lx0 + b10)) << "\" x2=\"" << fixed(px(lx1)) << "\" y2=\""
        << fixed(py(r.fit.slope * lx1 + b10)) << "\"/>\n";
    svg << "<g fill=\"#2c3e50\">\n";
    for (const auto& row : r.rows)
      svg << "<circle r=\"3\" cx=\"" << fixed(px(std::log10(row.n))) << "\" cy=\""
          << fixed(py(std::log10(std::max(row.distance, 1e-300)))) << "\"/>\n";
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string grid_csv(const RealGrid& g, Eigen::Index stride) {
  if (stride < 1) throw Error(Errc::BadParam, "stride must be >= 1");
  std::string out = "x,value\n";
  for (Eigen::Index i = 0; i < g.size(); i += stride) out += num(g.x(i)) + ',' + num(g.vals[i]) + '\n';
  return out;
}

void write_output(const std::string& path, std::string_view content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw Error(Errc::IoError, "cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(Errc::IoError, "write to '" + path + "' failed");
}

}  // namespace esseen
