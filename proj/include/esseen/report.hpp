#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "esseen/bounds.hpp"
#include "esseen/charfun.hpp"
#include "esseen/dist.hpp"
#include "esseen/experiments.hpp"
#include "esseen/fourier_kernel.hpp"
#include "esseen/kolmogorov.hpp"

namespace esseen {

inline constexpr std::string_view kSchema = "esseen-lab/v1";
inline constexpr std::string_view kRateCsvHeader = "n,distance,sqrt_n_distance,be_rhs,ratio";

enum class ReportFormat { Csv, Json, Svg };

ReportFormat parse_format(std::string_view name);

nlohmann::json to_json(const DiscreteDist& d);
nlohmann::json to_json(const MomentSummary& m);
nlohmann::json to_json(const DistanceReport& r);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const BoundConfig& c);
nlohmann::json to_json(const RateResult& r);
nlohmann::json to_json(const ConstantScan& s);
nlohmann::json to_json(const Lemma3Sweep& s);
nlohmann::json to_json(const Lemma4Sweep& s);
nlohmann::json kernel_summary(const Kernel& k);

/// Reads a distribution: {"family": "rademacher"}, {"family":
/// "centered_bernoulli", "p": 0.3}, {"family": "two_point", "x1": -2, "x2": 1},
/// {"family": "uniform_lattice", "m": 5} or {"atoms": [[x, p], ...]}.
DiscreteDist dist_from_json(const nlohmann::json& j);

/// Envelope {"schema": ..., "kind": kind, "config": config, ...body}.
nlohmann::json envelope(std::string_view kind, const nlohmann::json& config, nlohmann::json body);

std::string rate_csv(const RateResult& r);
/// Log-log plot of distance against n with the fitted line.
std::string rate_svg(const RateResult& r);

/// CSV with columns x,value; every `stride`-th sample.
std::string grid_csv(const RealGrid& g, Eigen::Index stride = 1);

/// Writes `content` to `path`, or to stdout when `path` is empty or "-".
void write_output(const std::string& path, std::string_view content);

}  // namespace esseen
