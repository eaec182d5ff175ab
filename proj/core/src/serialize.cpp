#include "isda/serialize.hpp"

#include <filesystem>
#include <stdexcept>

namespace isda {

using nlohmann::json;

json latent_to_json(const LatentDistribution& dist) {
  json j;
  j["family"] = std::string(family_name(dist.family()));
  switch (dist.family()) {
    case Family::kTriangular: j["mode"] = dist.mode(); break;
    case Family::kTruncatedNormal: j["sigma2"] = dist.sigma2(); break;
    case Family::kShiftedBeta:
      j["alpha"] = dist.alpha();
      j["beta"] = dist.beta();
      break;
    case Family::kKde:
      j["sample_path"] = dist.sample_path();
      j["bandwidth"] = dist.bandwidth();
      break;
    default: break;
  }
  return j;
}

namespace {

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw std::invalid_argument(std::string("latent: numeric field '") + key + "' required");
  }
  return j[key].get<double>();
}

}  // namespace

LatentDistribution latent_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw std::invalid_argument("latent: object with a 'family' string required");
  }
  const auto family = j["family"].get<std::string>();
  if (family == "uniform") return LatentDistribution::uniform();
  if (family == "triangular") return LatentDistribution::triangular(j.contains("mode") ? number_field(j, "mode") : 0.0);
  if (family == "inverted_triangular") return LatentDistribution::inverted_triangular();
  if (family == "truncated_normal") {
    return j.contains("sigma2") ? LatentDistribution::truncated_normal(number_field(j, "sigma2"))
                                : LatentDistribution::truncated_normal();
  }
  if (family == "shifted_beta") {
    return LatentDistribution::shifted_beta(number_field(j, "alpha"), number_field(j, "beta"));
  }
  if (family == "degenerate") return LatentDistribution::degenerate();
  if (family == "kde") {
    if (!j.contains("sample_path") || !j["sample_path"].is_string()) {
      throw std::invalid_argument("latent: kde needs 'sample_path'");
    }
    std::filesystem::path path = j["sample_path"].get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    std::optional<double> bw;
    if (j.contains("bandwidth") && !j["bandwidth"].is_null()) bw = number_field(j, "bandwidth");
    return LatentDistribution::kde(load_sample_file(path.string()), bw, j["sample_path"].get<std::string>());
  }
  throw std::invalid_argument("latent: unknown family '" + family + "'");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json summary_to_json(const MomentSummary& s) {
  return {{"psi", s.psi}, {"delta", s.delta}, {"euu", matrix_to_json(s.euu)}};
}

json aggregate_report_json(const AggregateResult& result, const AggregateOptions& options) {
  json dropped = json::array();
  for (const auto& d : result.dropped) {
    dropped.push_back({{"group", d.group}, {"variable", d.variable}, {"rule", d.rule}, {"count", d.count}});
  }
  return {{"trim", options.trim},
          {"keep_degenerate", options.keep_degenerate},
          {"groups_seen", result.groups_seen},
          {"rows_kept", result.frame.rows()},
          {"variables", result.frame.names()},
          {"dropped", dropped}};
}

}  // namespace isda
