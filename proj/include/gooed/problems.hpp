#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gooed/types.hpp"

namespace gooed {

/// Builds one of the built-in benchmark problems by name:
///   bm, t1, t2, t3          1D observation model, four prediction variants
///   easom1d, rosenbrock1d   2D parameters, scalar observation/design
///   easom2d, rosenbrock2d   2D parameters, 2D observation/design
///   ndim                    N-dimensional scaling problem (params = N)
///   lingauss                linear-Gaussian validation problem with an
///                           analytic expected-information-gain solution
/// All priors are uniform on the unit box except lingauss (standard normal);
/// observation noise sd is 1e-2 except lingauss (0.1).
Problem builtin_problem(const std::string& name, std::optional<int> params = {});

std::vector<std::string> builtin_problem_names();

/// Analytic EIG of the lingauss problem: 0.5 * ln(1 + d^2 / sd_eps^2).
double lingauss_analytic_eig(double d);

}  // namespace gooed
