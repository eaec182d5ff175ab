#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "isda/estimation.hpp"
#include "isda/ingest.hpp"
#include "isda/latent.hpp"
#include "isda/mallows.hpp"
#include "isda/matrix.hpp"

namespace isda {

/// {"family": "triangular", "mode": -0.34}, {"family": "shifted_beta",
/// "alpha": .., "beta": ..}, {"family": "kde", "sample_path": .., "bandwidth": ..}.
nlohmann::json latent_to_json(const LatentDistribution& dist);

/// Inverse of latent_to_json. A relative kde sample_path is resolved against
/// base_dir. Throws std::invalid_argument on unknown families or bad fields.
LatentDistribution latent_from_json(const nlohmann::json& j, const std::string& base_dir = {});

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json summary_to_json(const MomentSummary& s);
nlohmann::json aggregate_report_json(const AggregateResult& result, const AggregateOptions& options);

}  // namespace isda
