#include <filesystem>
#include <ostream>

#include "akm/commands.hpp"
#include "akm/errors.hpp"

namespace akm::cli {

RunConfig resolve_config(RunConfig cfg, const CommonOptions& opts) {
  if (opts.config) cfg.load_file(*opts.config);
  for (const auto& assignment : opts.overrides) cfg.set_assignment(assignment);
  if (opts.seed) {
    if (!cfg.has("seed")) throw ConfigError("this command takes no seed");
    cfg.set("seed", std::to_string(*opts.seed));
  }
  if (opts.limit) {
    if (!cfg.has("limit")) throw ConfigError("this command takes no row limit");
    cfg.set("limit", std::to_string(*opts.limit));
  }
  return cfg;
}

int run_command(const std::string& name, const CommonOptions& opts, std::ostream& log, std::ostream& err) {
  try {
    if (name == "sysid-demo") return cmd_sysid_demo(resolve_config(sysid_defaults(), opts), opts.out, log);
    if (name == "kernel-bound") return cmd_kernel_bound(resolve_config(kernel_bound_defaults(), opts), opts.out, log);
    if (name == "train-classifier")
      return cmd_train_classifier(resolve_config(classifier_defaults(), opts), opts.out, log);
    if (name == "rff-compare") return cmd_rff_compare(resolve_config(rff_compare_defaults(), opts), opts.out, log);
    if (name == "grad-check") return cmd_grad_check(resolve_config(grad_check_defaults(), opts), opts.out, log);
    err << "unknown command '" << name << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    err << "training diverged: " << e.what() << '\n';
    return kDivergence;
  } catch (const BoundViolation& e) {
    err << "bound violation: " << e.what() << '\n';
    return kBoundViolation;
  } catch (const MissingDataError& e) {
    err << "missing data: " << e.what() << '\n';
    return kMissingData;
  } catch (const ParseError& e) {
    err << "malformed data: " << e.what() << '\n';
    return kMissingData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace akm::cli
