#include "wavespeed/model.hpp"

#include <cmath>
#include <sstream>

namespace wavespeed {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << name << " must be finite";
        throw InvalidParameters(msg.str());
    }
}

}  // namespace

CompetitionParams validate(double d, double r, double k1, double k2) {
    require_finite(d, "d");
    require_finite(r, "r");
    require_finite(k1, "k1");
    require_finite(k2, "k2");
    if (d <= 0.0) throw InvalidParameters("d must be positive");
    if (r <= 0.0) throw InvalidParameters("r must be positive");
    if (!(k1 > 1.0) || !(k2 > 1.0)) {
        throw InvalidParameters("strong competition violated: need k1 > 1 and k2 > 1");
    }
    return CompetitionParams{d, r, k1, k2};
}

Lv1Params validate_lv1(double d, double alpha, double beta, double gamma) {
    require_finite(d, "d");
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_finite(gamma, "gamma");
    if (d <= 0.0) throw InvalidParameters("d must be positive");
    if (alpha <= 0.0 || beta <= 0.0 || gamma <= 0.0) {
        throw InvalidParameters("alpha, beta, gamma must be positive");
    }
    if (!(1.0 / gamma < alpha && alpha < beta)) {
        throw InvalidParameters("strong competition violated: need 1/gamma < alpha < beta");
    }
    return Lv1Params{d, alpha, beta, gamma};
}

CompetitionParams lv1_to_lv2(const Lv1Params& p) {
    return validate(p.d, p.alpha, p.alpha * p.gamma, p.beta / p.alpha);
}

Lv1Params lv2_to_lv1(const CompetitionParams& p) {
    return validate_lv1(p.d, p.r, p.r * p.k2, p.k1 / p.r);
}

State coexistence(const CompetitionParams& p) {
    const double denom = p.k1 * p.k2 - 1.0;
    return State{(p.k1 - 1.0) / denom, (p.k2 - 1.0) / denom};
}

Equilibria equilibria(const CompetitionParams& p) {
    Equilibria eq;
    eq.coexistence = coexistence(p);
    return eq;
}

}  // namespace wavespeed
