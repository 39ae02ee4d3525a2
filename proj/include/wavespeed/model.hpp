#ifndef WAVESPEED_MODEL_HPP
#define WAVESPEED_MODEL_HPP

// Two-species Lotka-Volterra competition with strong competition.
//
//   U_t = U_xx + U(1 - U - k1 V)
//   V_t = d V_xx + r V(1 - k2 U - V)
//
// and its cooperative form (u, v) = (U, 1 - V):
//
//   u_t = u_xx + f(u, v),   f(u, v) = u(1 - u - k1(1 - v))
//   v_t = d v_xx + r g(u, v), g(u, v) = (1 - v)(k2 u - v)

#include <stdexcept>
#include <string>
#include <utility>

namespace wavespeed {

class InvalidParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters (d, r, k1, k2) of the competition system. Always constructed
/// through validate(), so d, r > 0 and k1, k2 > 1 hold for every instance.
struct CompetitionParams {
    double d;
    double r;
    double k1;
    double k2;

    bool operator==(const CompetitionParams&) const = default;
};

/// Rejects non-finite values, d <= 0, r <= 0, and k1 <= 1 or k2 <= 1.
CompetitionParams validate(double d, double r, double k1, double k2);

/// Parameters of the alternative form
///   U_t = U_xx + U(1 - U - gamma V),  V_t = d V_xx + V(alpha - beta U - V)
/// with 1/gamma < alpha < beta.
struct Lv1Params {
    double d;
    double alpha;
    double beta;
    double gamma;
};

Lv1Params validate_lv1(double d, double alpha, double beta, double gamma);

/// alpha = r, beta = r k2, gamma = k1 / r.
CompetitionParams lv1_to_lv2(const Lv1Params& p);
Lv1Params lv2_to_lv1(const CompetitionParams& p);

/// A state of the competitive system, in (U, V) or (u, v) coordinates
/// depending on context.
struct State {
    double first;
    double second;

    bool operator==(const State&) const = default;
};

struct Equilibria {
    State stable_a{0.0, 1.0};
    State stable_b{1.0, 0.0};
    State trivial{0.0, 0.0};
    State coexistence;
};

/// (U*, V*) = ((k1 - 1)/(k1 k2 - 1), (k2 - 1)/(k1 k2 - 1)).
State coexistence(const CompetitionParams& p);
Equilibria equilibria(const CompetitionParams& p);

template <typename Scalar>
constexpr std::pair<Scalar, Scalar> to_cooperative(Scalar U, Scalar V) {
    return {U, Scalar(1) - V};
}

template <typename Scalar>
constexpr std::pair<Scalar, Scalar> from_cooperative(Scalar u, Scalar v) {
    return {u, Scalar(1) - v};
}

/// f(u, v) = u(1 - u - k1(1 - v)); defined for all real arguments.
template <typename Scalar>
constexpr Scalar reaction_f(Scalar u, Scalar v, Scalar k1) {
    return u * (Scalar(1) - u - k1 * (Scalar(1) - v));
}

/// g(u, v) = (1 - v)(k2 u - v); defined for all real arguments.
template <typename Scalar>
constexpr Scalar reaction_g(Scalar u, Scalar v, Scalar k2) {
    return (Scalar(1) - v) * (k2 * u - v);
}

inline double reaction_f(double u, double v, const CompetitionParams& p) {
    return reaction_f<double>(u, v, p.k1);
}

inline double reaction_g(double u, double v, const CompetitionParams& p) {
    return reaction_g<double>(u, v, p.k2);
}

/// Partial derivatives df/dv and dg/du; both are >= 0 on {u >= 0, v <= 1}.
template <typename Scalar>
constexpr Scalar reaction_f_dv(Scalar u, Scalar /*v*/, Scalar k1) {
    return k1 * u;
}

template <typename Scalar>
constexpr Scalar reaction_g_du(Scalar /*u*/, Scalar v, Scalar k2) {
    return k2 * (Scalar(1) - v);
}

}  // namespace wavespeed

#endif  // WAVESPEED_MODEL_HPP
