#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "akm/kernel.hpp"
#include "akm/model.hpp"
#include "akm/train.hpp"

namespace akm {

using Json = nlohmann::json;

/// Keys: rho, a_abs, D, bound, empirical_sup, grid_size.
Json to_json(const BoundReport& r);

/// Keys: kind, D, M, N, params (BasisFamily::params order), W (row-major,
/// interleaved re/im), output_mode. Doubles round-trip bit-exactly.
Json to_json(const AdaptiveKernelModel& m);
AdaptiveKernelModel model_from_json(const Json& j);

Json to_json(const TrainReport& r);

/// Columns epoch, loss (epochs counted from 1).
void write_loss_csv(const std::filesystem::path& path, const std::vector<double>& loss_trace);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace akm
