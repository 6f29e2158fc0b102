#pragma once

#include "lossfit/mwm.hpp"

namespace lossfit {

/// Trimmed sample moments: drop the m_n smallest and m*_n largest order
/// statistics, average h(x)^k over the middle n - m_n - m*_n.
WinsorizedMoments sample_trimmed_moments(const PaymentSample& sample,
                                         const PolicyFrame& frame,
                                         const Proportions& props,
                                         CasePolicy policy = CasePolicy::Enforce);

/// Trimmed-moment fit for payment Y; point estimates only (no closed-form
/// covariance here -- MTM variability is assessed by Monte Carlo).
FitResult fit_mtm_y(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy = CasePolicy::Enforce);

/// Trimmed-moment fit for payment Z (closed form, gamma-free constants).
FitResult fit_mtm_z(const PaymentSample& sample, const PolicyFrame& frame,
                    const Proportions& props, CasePolicy policy = CasePolicy::Enforce);

}  // namespace lossfit
