#include <fstream>
#include <iomanip>
#include <ostream>

#include "akm/commands.hpp"
#include "akm/errors.hpp"
#include "akm/kernel.hpp"
#include "akm/serialize.hpp"

namespace akm::cli {

RunConfig kernel_bound_defaults() {
  return RunConfig({
      {"a", "0,0.3,0.6"},   // Laguerre parameters (real, in [0, 1))
      {"rho", "0.5,0.9"},   // disk radii (in (0, 1))
      {"D", "1,5,10,20"},   // truncation orders
      {"grid", "64"},       // grid_n radii x grid_n angles
  });
}

int cmd_kernel_bound(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const auto as = cfg.get_doubles("a");
  const auto rhos = cfg.get_doubles("rho");
  const auto dims = cfg.get_sizes("D");
  const std::size_t grid = cfg.get_size("grid");
  for (double a : as)
    if (!(a >= 0.0 && a < 1.0)) throw ConfigError("key 'a': values must lie in [0, 1)");
  for (double rho : rhos)
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("key 'rho': values must lie in (0, 1)");
  for (std::size_t d : dims)
    if (d == 0) throw ConfigError("key 'D': values must be positive");
  if (grid < 2) throw ConfigError("key 'grid' must be at least 2");

  std::filesystem::create_directories(out);
  std::ofstream csv(out / "bounds.csv");
  if (!csv) throw std::runtime_error("cannot write bounds.csv");
  csv << "a_abs,rho,D,bound,empirical_sup\n" << std::setprecision(17);

  Json cells = Json::array();
  std::size_t violations = 0;
  for (double a : as)
    for (double rho : rhos)
      for (std::size_t d : dims) {
        BoundReport r;
        try {
          r = certify_bound({a, 0.0}, rho, d, grid);
        } catch (const BoundViolation& e) {
          log << "  VIOLATION a=" << a << " rho=" << rho << " D=" << d << ": " << e.what() << '\n';
          ++violations;
          continue;
        }
        csv << r.a_abs << ',' << r.rho << ',' << r.dim << ',' << r.bound << ',' << r.empirical_sup << '\n';
        cells.push_back(to_json(r));
        log << "  a=" << a << " rho=" << rho << " D=" << d << " bound=" << r.bound << " sup=" << r.empirical_sup << '\n';
      }
  write_json(out / "report.json", {{"command", "kernel-bound"}, {"grid", grid}, {"violations", violations}, {"cells", cells}});
  return violations == 0 ? kOk : kBoundViolation;
}

}  // namespace akm::cli
