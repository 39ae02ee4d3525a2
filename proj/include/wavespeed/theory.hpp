#ifndef WAVESPEED_THEORY_HPP
#define WAVESPEED_THEORY_HPP

// Explicit sufficient conditions for the sign of the bistable wave speed c,
// combined through the reflection identity
//   c(d, r, k1, k2) = -sqrt(d r) c(1/d, 1/r, k2, k1).

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "wavespeed/model.hpp"

namespace wavespeed {

enum class CriterionId {
    N1,
    N2,
    NEG3,
    POS1,
    S1,
    S2,
    DEG_NEG,
    DEG_POS,
    PRIOR_I,
    PRIOR_II,
    PRIOR_III,
    PRIOR_VII,
    PRIOR_VIII,
};

inline constexpr std::array<CriterionId, 13> kAllCriteria{
    CriterionId::N1,       CriterionId::N2,        CriterionId::NEG3,      CriterionId::POS1,
    CriterionId::S1,       CriterionId::S2,        CriterionId::DEG_NEG,   CriterionId::DEG_POS,
    CriterionId::PRIOR_I,  CriterionId::PRIOR_II,  CriterionId::PRIOR_III, CriterionId::PRIOR_VII,
    CriterionId::PRIOR_VIII,
};

inline constexpr std::array<CriterionId, 5> kPriorCriteria{
    CriterionId::PRIOR_I, CriterionId::PRIOR_II, CriterionId::PRIOR_III, CriterionId::PRIOR_VII,
    CriterionId::PRIOR_VIII,
};

enum class Sign { Negative, Positive, Inconclusive };

/// The sign a criterion predicts when evaluated on the parameters as given.
Sign native_polarity(CriterionId id);

/// Report label: N1, N2, neg3, pos1, S1, S2, degenerate, ...
std::string_view label(CriterionId id);
/// Stable identifier used for CSV columns and SVG group ids.
std::string_view column_name(CriterionId id);
std::string_view to_string(Sign s);

struct FiredCriterion {
    CriterionId id;
    /// True when the criterion fired on reflect(params), flipping its polarity.
    bool reflected = false;

    Sign polarity() const;
    bool operator==(const FiredCriterion&) const = default;
};

struct SignVerdict {
    Sign sign = Sign::Inconclusive;
    std::vector<FiredCriterion> fired;
    bool reflected = false;

    bool fires(CriterionId id) const;
};

struct ThresholdBounds {
    double k_lower;
    double k_upper;
};

struct DeterminacyThresholds {
    double k1_star;
    double k1_dstar;
};

class SearchCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// m(k) = (sqrt(24k + 1) - 3) / 2 for k >= 1. Satisfies m(k)^2 + 3 m(k) = 6k - 2.
template <typename Scalar>
Scalar m_of_k(Scalar k) {
    using std::sqrt;
    if (!(k >= Scalar(1))) throw std::domain_error("m(k) requires k >= 1");
    return (sqrt(Scalar(24) * k + Scalar(1)) - Scalar(3)) / Scalar(2);
}

/// Lower bound on d/r in (N1); +infinity when k1 < m(k2).
double n1_ratio_bound(double k1, double k2);

struct RatioInterval {
    double lower;
    double upper;
};

/// Open interval of d/r in (N2); empty (lower >= upper) outside 1 < k1 < m(k2).
RatioInterval n2_ratio_interval(double k1, double k2);

/// Right-hand side of the small-d condition for k1 > k2^2; 0 otherwise.
double degenerate_ratio_bound(double k1, double k2);

/// Right-hand side of (neg3): c < 0 whenever k1 exceeds it.
double neg3_threshold(double d, double r, double k2);
/// Right-hand side of (pos1): c > 0 whenever 0 < k1 - 1 < it.
double pos1_threshold(double d, double r, double k2);

bool criterion_n1(const CompetitionParams& p);
bool criterion_n2(const CompetitionParams& p);
bool corollary_neg3(const CompetitionParams& p);
bool corollary_pos1(const CompetitionParams& p);
bool criterion_degenerate(const CompetitionParams& p);

struct SymmetricVerdict {
    bool s1;
    bool s2;
};

/// Symmetric case r = 1, k1 = k2 = k. Requires d > 0, k > 1.
SymmetricVerdict criterion_s1_s2(double d, double k);

/// Previously published negative-speed regions (i), (ii), (iii), (vii), (viii)
/// of the symmetric case. Equalities in their definitions are matched to
/// within 64 ulp so that decimal inputs such as 11/6 or d = 2k/(k-1) hit.
std::map<CriterionId, bool> prior_regions(double d, double k);

/// (d, r, k1, k2) -> (1/d, 1/r, k2, k1).
CompetitionParams reflect(const CompetitionParams& p);

/// Every criterion in its native polarity: negative ids on p, POS1 on p,
/// DEG_POS as the degenerate criterion on reflect(p). S1, S2 and the prior
/// regions are only evaluated when r == 1 and k1 == k2.
std::map<CriterionId, bool> evaluate_criteria(const CompetitionParams& p);

/// Negative: any negative criterion on p, or (pos1) on reflect(p).
/// Positive: (pos1) on p, or any negative criterion on reflect(p).
/// Throws std::logic_error if both polarities fire.
SignVerdict classify(const CompetitionParams& p);

/// Bracket of the threshold k* in k1 for fixed (d, r, k2) from (neg3)/(pos1).
ThresholdBounds kstar_bounds(double d, double r, double k2);

/// True when every d/r > 0 is covered by {N1, N2, degenerate} at (k1, k2).
/// Compares the two envelopes and confirms on a log-uniform ratio sample.
bool negative_for_all_ratios(double k1, double k2);

/// k1_dstar: smallest k1 (relative tolerance 1e-6, rounded up) with
/// negative_for_all_ratios(k1, k2). k1_star: largest k1 (rounded down) with
/// negative_for_all_ratios(k2, k1), i.e. the same search on the reflected
/// problem. Both are estimates from sufficient criteria only.
DeterminacyThresholds determinacy_thresholds(double k2, double search_cap);

}  // namespace wavespeed

#endif  // WAVESPEED_THEORY_HPP
