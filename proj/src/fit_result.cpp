#include "lossfit/fit_result.hpp"

namespace lossfit {

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::MLE: return "mle";
        case Estimator::MTM: return "mtm";
        case Estimator::MWM: return "mwm";
        case Estimator::LNPaI: return "lnpai";
        case Estimator::LNGPD: return "lngpd";
    }
    return "?";
}

}  // namespace lossfit
