#pragma once

#include <vector>

#include "igeo/family.hpp"
#include "igeo/geometry_types.hpp"

namespace igeo {

/// D[theta : theta_p] for the chosen divergence. Inner integrals for the
/// Renyi / alpha / Bhattacharyya families are evaluated in log-space
/// (exp of rho*log p + (1-rho)*log p') through the quadrature backend.
double divergence(const DivergenceSpec& spec, const ModelFamily& family,
                  const Vector& theta, const Vector& theta_p,
                  const quad::ExpectOptions& opts = {});

struct RenyiKlLimitRow {
    double rho;
    double d_rho;
    double d_kl;
    double discrepancy;  // |D_rho - D_KL|
};

/// Rows at rho = 1 +/- eps for each eps (descending), upper branch first.
/// Checks that each branch's discrepancy column decreases toward rho -> 1.
std::vector<RenyiKlLimitRow> renyi_kl_limit_check(const ModelFamily& family,
                                                  const Vector& theta, const Vector& theta_p,
                                                  const std::vector<double>& eps_list);

/// True when the discrepancy column is non-increasing toward rho = 1 on each
/// branch, allowing `slack` of noise.
bool limit_discrepancies_monotone(const std::vector<RenyiKlLimitRow>& rows, double slack = 1e-9);

}  // namespace igeo
