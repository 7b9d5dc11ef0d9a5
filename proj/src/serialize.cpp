#include "akm/serialize.hpp"

#include <fstream>
#include <iomanip>

#include "akm/errors.hpp"

namespace akm {

Json to_json(const BoundReport& r) {
  return {{"rho", r.rho}, {"a_abs", r.a_abs}, {"D", r.dim}, {"bound", r.bound}, {"empirical_sup", r.empirical_sup},
          {"grid_size", r.grid_size}};
}

Json to_json(const AdaptiveKernelModel& m) {
  const Vec theta = m.family().params();
  const Vec w = flatten_weights(m.weights());
  return {{"kind", to_string(m.family().kind())},
          {"D", m.family().dim()},
          {"M", m.outputs()},
          {"N", m.family().input_dim()},
          {"params", std::vector<double>(theta.begin(), theta.end())},
          {"W", std::vector<double>(w.begin(), w.end())},
          {"output_mode", to_string(m.mode())}};
}

AdaptiveKernelModel model_from_json(const Json& j) {
  try {
    const BasisKind kind = basis_kind_from_string(j.at("kind").get<std::string>());
    const auto dim = j.at("D").get<std::size_t>();
    const auto outputs = j.at("M").get<Eigen::Index>();
    const auto n = j.at("N").get<Eigen::Index>();
    const auto params = j.at("params").get<std::vector<double>>();
    const auto weights = j.at("W").get<std::vector<double>>();
    const Vec theta = Eigen::Map<const Vec>(params.data(), static_cast<Eigen::Index>(params.size()));

    BasisFamily family = BasisFamily::laguerre({}, 1);
    switch (kind) {
      case BasisKind::TM:
        family = BasisFamily::tm(std::vector<Complex>(dim));
        break;
      case BasisKind::Laguerre:
        family = BasisFamily::laguerre({}, dim);
        break;
      case BasisKind::Trig:
        family = BasisFamily::trig(Mat::Zero(n, static_cast<Eigen::Index>(dim)));
        break;
      case BasisKind::ArcTan:
        family = BasisFamily::arctan(Mat::Zero(n, static_cast<Eigen::Index>(dim)));
        break;
    }
    if (static_cast<std::size_t>(theta.size()) != family.param_count()) throw ShapeError("parameter count does not match kind and D");
    family = family.with_params(theta);
    const Vec w = Eigen::Map<const Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    return {family, unflatten_weights(w, static_cast<Eigen::Index>(dim), outputs),
            output_mode_from_string(j.at("output_mode").get<std::string>())};
  } catch (const Json::exception& e) {
    throw ShapeError(std::string("malformed model JSON: ") + e.what());
  }
}

Json to_json(const TrainReport& r) {
  Json j = {{"loss_trace", r.loss_trace},
            {"grad_norm_trace", r.grad_norm_trace},
            {"metric_trace", r.metric_trace},
            {"stop_reason", to_string(r.stop_reason)},
            {"epochs_run", r.epochs_run},
            {"steps_run", r.steps_run},
            {"wall_seconds", r.wall_seconds},
            {"best_loss", r.best_loss},
            {"best_epoch", r.best_epoch}};
  j["best_test_metric"] = r.best_test_metric ? Json(*r.best_test_metric) : Json(nullptr);
  j["reference_epoch"] = r.reference_epoch ? Json(*r.reference_epoch) : Json(nullptr);
  return j;
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<double>& loss_trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "epoch,loss\n" << std::setprecision(17);
  for (std::size_t e = 0; e < loss_trace.size(); ++e) out << e + 1 << ',' << loss_trace[e] << '\n';
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace akm
