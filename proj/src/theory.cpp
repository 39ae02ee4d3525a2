#include "wavespeed/theory.hpp"

#include <algorithm>
#include <limits>

namespace wavespeed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near_equal(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

bool is_symmetric(const CompetitionParams& p) { return p.r == 1.0 && p.k1 == p.k2; }

// Negative-polarity criteria evaluated on q. Degenerate fires as DEG_POS when
// q is the reflection of the caller's parameters.
void collect_negative(const CompetitionParams& q, bool reflected,
                      std::vector<FiredCriterion>& out) {
    auto push = [&](CriterionId id) { out.push_back({id, reflected}); };
    if (criterion_n1(q)) push(CriterionId::N1);
    if (criterion_n2(q)) push(CriterionId::N2);
    if (corollary_neg3(q)) push(CriterionId::NEG3);
    if (criterion_degenerate(q)) push(reflected ? CriterionId::DEG_POS : CriterionId::DEG_NEG);
    if (is_symmetric(q)) {
        const auto sym = criterion_s1_s2(q.d, q.k1);
        if (sym.s1) push(CriterionId::S1);
        if (sym.s2) push(CriterionId::S2);
        for (const auto& [id, hit] : prior_regions(q.d, q.k1)) {
            if (hit) push(id);
        }
    }
}

}  // namespace

Sign native_polarity(CriterionId id) {
    switch (id) {
        case CriterionId::POS1:
        case CriterionId::DEG_POS:
            return Sign::Positive;
        default:
            return Sign::Negative;
    }
}

std::string_view label(CriterionId id) {
    switch (id) {
        case CriterionId::N1: return "N1";
        case CriterionId::N2: return "N2";
        case CriterionId::NEG3: return "neg3";
        case CriterionId::POS1: return "pos1";
        case CriterionId::S1: return "S1";
        case CriterionId::S2: return "S2";
        case CriterionId::DEG_NEG: return "degenerate";
        case CriterionId::DEG_POS: return "degenerate (reflected)";
        case CriterionId::PRIOR_I: return "prior (i)";
        case CriterionId::PRIOR_II: return "prior (ii)";
        case CriterionId::PRIOR_III: return "prior (iii)";
        case CriterionId::PRIOR_VII: return "prior (vii)";
        case CriterionId::PRIOR_VIII: return "prior (viii)";
    }
    return "?";
}

std::string_view column_name(CriterionId id) {
    switch (id) {
        case CriterionId::N1: return "N1";
        case CriterionId::N2: return "N2";
        case CriterionId::NEG3: return "NEG3";
        case CriterionId::POS1: return "POS1";
        case CriterionId::S1: return "S1";
        case CriterionId::S2: return "S2";
        case CriterionId::DEG_NEG: return "DEG_NEG";
        case CriterionId::DEG_POS: return "DEG_POS";
        case CriterionId::PRIOR_I: return "PRIOR_I";
        case CriterionId::PRIOR_II: return "PRIOR_II";
        case CriterionId::PRIOR_III: return "PRIOR_III";
        case CriterionId::PRIOR_VII: return "PRIOR_VII";
        case CriterionId::PRIOR_VIII: return "PRIOR_VIII";
    }
    return "?";
}

std::string_view to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "Negative";
        case Sign::Positive: return "Positive";
        case Sign::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Sign FiredCriterion::polarity() const {
    const Sign native = native_polarity(id);
    // DEG_POS already names the reflected degenerate criterion.
    if (!reflected || id == CriterionId::DEG_POS) return native;
    return native == Sign::Negative ? Sign::Positive : Sign::Negative;
}

bool SignVerdict::fires(CriterionId id) const {
    return std::any_of(fired.begin(), fired.end(),
                       [id](const FiredCriterion& f) { return f.id == id; });
}

double n1_ratio_bound(double k1, double k2) {
    const double m = m_of_k(k2);
    if (!(k1 >= m)) return kInf;
    if (k1 < 2.0) {
        return 6.0 * k1 * k1 / ((k1 - 1.0) * (k1 - 1.0) * (k1 + 4.0)) * (k2 - 1.0);
    }
    if (k2 <= 2.0) return 4.0 / (k1 - 1.0) * (k2 - 1.0);
    return 2.0 * k2 * m / (2.0 * k1 - m);
}

RatioInterval n2_ratio_interval(double k1, double k2) {
    const double m = m_of_k(k2);
    if (!(k1 > 1.0 && k1 < m)) return {kInf, 0.0};
    const double upper = m * (k2 - 1.0) / (m - k1);
    double lower;
    if (k2 <= 2.0) {
        lower = m * m / (k1 - 1.0);
    } else {
        // The supersolution needs p = m(k2) < 2 k1.
        if (!(2.0 * k1 > m)) return {kInf, 0.0};
        lower = 2.0 * k2 * m / (2.0 * k1 - m);
    }
    return {lower, upper};
}

double degenerate_ratio_bound(double k1, double k2) {
    if (!(k1 > k2 * k2)) return 0.0;
    const double kappa = std::cbrt(k1 * k2);
    const double root = std::sqrt(kappa * kappa + kappa + 1.0) + 1.0;
    return (1.0 - std::cbrt(k2 * k2 / k1)) * root * root /
           (kappa * (kappa - 1.0) * (kappa + 1.0) * (kappa + 1.0));
}

double neg3_threshold(double d, double r, double k2) {
    if (k2 <= 2.0) return std::max(2.0, 1.0 + 4.0 * r / d * (k2 - 1.0));
    return m_of_k(k2) * std::max(1.0, 0.5 + r / d * k2);
}

double pos1_threshold(double d, double r, double k2) {
    if (k2 <= 2.0) {
        return (k2 - 1.0) * (k2 + 4.0) / 6.0 * std::min(1.0, r / d * (k2 - 1.0) / (k2 * k2));
    }
    return (k2 - 1.0) * std::min((k2 + 4.0) / 6.0, r / (4.0 * d));
}

bool criterion_n1(const CompetitionParams& p) { return p.d / p.r > n1_ratio_bound(p.k1, p.k2); }

bool criterion_n2(const CompetitionParams& p) {
    const auto iv = n2_ratio_interval(p.k1, p.k2);
    const double rho = p.d / p.r;
    return iv.lower < rho && rho < iv.upper;
}

bool corollary_neg3(const CompetitionParams& p) { return p.k1 > neg3_threshold(p.d, p.r, p.k2); }

bool corollary_pos1(const CompetitionParams& p) {
    const double excess = p.k1 - 1.0;
    return 0.0 < excess && excess < pos1_threshold(p.d, p.r, p.k2);
}

bool criterion_degenerate(const CompetitionParams& p) {
    return p.k1 > p.k2 * p.k2 && p.d / p.r < degenerate_ratio_bound(p.k1, p.k2);
}

SymmetricVerdict criterion_s1_s2(double d, double k) {
    if (!(d > 0.0) || !(k > 1.0)) throw InvalidParameters("S1/S2 need d > 0 and k > 1");
    const double m = m_of_k(k);
    SymmetricVerdict v{false, false};
    if (k >= 2.0) v.s1 = d > 2.0 * k * m / (2.0 * k - m);
    if (k > 1.0 && k < 2.0) v.s2 = m * m / (k - 1.0) < d && d < m * (k - 1.0) / (m - k);
    return v;
}

std::map<CriterionId, bool> prior_regions(double d, double k) {
    if (!(d > 0.0) || !(k > 1.0)) throw InvalidParameters("prior regions need d > 0 and k > 1");
    std::map<CriterionId, bool> out;

    out[CriterionId::PRIOR_I] = near_equal(d, 11.0 / 2.0) && near_equal(k, 11.0 / 6.0);

    out[CriterionId::PRIOR_II] = near_equal(d, 4.0) && 5.0 / 4.0 <= k && k <= 4.0 / 3.0;

    out[CriterionId::PRIOR_III] = 5.0 / 3.0 < k && k < 2.0 && 4.0 < d && d < 4.0 / (k - 1.0) &&
                                  !near_equal(d, 2.0 * k / (k - 1.0));

    const double s = 3.0 * k - 1.0;
    const double first = k - d * (k - 1.0) / s;
    const double second = 4.0 * d * (k - 1.0) / (s * s) +
                          std::floor(2.0 * d * (k + 1.0) / (s * s) - k) *
                              std::floor(k * (5.0 - 3.0 * k) / 2.0);
    out[CriterionId::PRIOR_VII] = std::max(first, second) < 1.0;

    out[CriterionId::PRIOR_VIII] = 5.0 / 3.0 < k && k < 2.0 && 4.0 < d && d < 2.0 / (2.0 - k);
    return out;
}

CompetitionParams reflect(const CompetitionParams& p) {
    return CompetitionParams{1.0 / p.d, 1.0 / p.r, p.k2, p.k1};
}

std::map<CriterionId, bool> evaluate_criteria(const CompetitionParams& p) {
    std::map<CriterionId, bool> out;
    for (CriterionId id : kAllCriteria) out[id] = false;
    out[CriterionId::N1] = criterion_n1(p);
    out[CriterionId::N2] = criterion_n2(p);
    out[CriterionId::NEG3] = corollary_neg3(p);
    out[CriterionId::POS1] = corollary_pos1(p);
    out[CriterionId::DEG_NEG] = criterion_degenerate(p);
    out[CriterionId::DEG_POS] = criterion_degenerate(reflect(p));
    if (is_symmetric(p)) {
        const auto sym = criterion_s1_s2(p.d, p.k1);
        out[CriterionId::S1] = sym.s1;
        out[CriterionId::S2] = sym.s2;
        for (const auto& [id, hit] : prior_regions(p.d, p.k1)) out[id] = hit;
    }
    return out;
}

SignVerdict classify(const CompetitionParams& p) {
    std::vector<FiredCriterion> negative;
    collect_negative(p, false, negative);
    if (corollary_pos1(reflect(p))) negative.push_back({CriterionId::POS1, true});

    std::vector<FiredCriterion> positive;
    if (corollary_pos1(p)) positive.push_back({CriterionId::POS1, false});
    collect_negative(reflect(p), true, positive);

    if (!negative.empty() && !positive.empty()) {
        throw std::logic_error("polarity conflict: negative and positive criteria both fired");
    }

    SignVerdict v;
    if (!negative.empty()) {
        v.sign = Sign::Negative;
        v.fired = std::move(negative);
    } else if (!positive.empty()) {
        v.sign = Sign::Positive;
        v.fired = std::move(positive);
    }
    v.reflected = std::any_of(v.fired.begin(), v.fired.end(),
                              [](const FiredCriterion& f) { return f.reflected; });
    return v;
}

ThresholdBounds kstar_bounds(double d, double r, double k2) {
    if (!(d > 0.0) || !(r > 0.0) || !(k2 > 1.0)) {
        throw InvalidParameters("kstar_bounds needs d, r > 0 and k2 > 1");
    }
    const ThresholdBounds b{1.0 + pos1_threshold(d, r, k2), neg3_threshold(d, r, k2)};
    if (!(1.0 < b.k_lower && b.k_lower < b.k_upper)) {
        throw std::logic_error("kstar_bounds: inconsistent bracket");
    }
    return b;
}

bool negative_for_all_ratios(double k1, double k2) {
    if (!(k1 > 1.0) || !(k2 > 1.0)) return false;
    if (!(n1_ratio_bound(k1, k2) < degenerate_ratio_bound(k1, k2))) return false;

    // Safety net over d/r in [1e-6, 1e6].
    constexpr int kSamples = 241;
    for (int i = 0; i < kSamples; ++i) {
        const double rho = std::pow(10.0, -6.0 + 12.0 * i / (kSamples - 1));
        const CompetitionParams q{rho, 1.0, k1, k2};
        if (!criterion_n1(q) && !criterion_n2(q) && !criterion_degenerate(q)) return false;
    }
    return true;
}

namespace {

constexpr double kDeterminacyRelTol = 1e-6;

// Shrinks [covered_side, uncovered_side] until the relative width is below
// the tolerance. Returns the covered endpoint.
template <typename Covered>
double bisect_edge(double covered, double uncovered, Covered&& is_covered) {
    while (std::abs(covered - uncovered) > kDeterminacyRelTol * std::abs(covered)) {
        const double mid = 0.5 * (covered + uncovered);
        if (is_covered(mid)) {
            covered = mid;
        } else {
            uncovered = mid;
        }
    }
    return covered;
}

}  // namespace

DeterminacyThresholds determinacy_thresholds(double k2, double search_cap) {
    if (!(k2 > 1.0)) throw InvalidParameters("determinacy_thresholds needs k2 > 1");

    auto neg_covered = [k2](double k1) { return negative_for_all_ratios(k1, k2); };
    // The degenerate criterion needs k1 > k2^2, so coverage starts strictly above it.
    double lo = std::max(k2 * k2, m_of_k(k2));
    if (!(search_cap > lo)) throw SearchCapExceeded("search_cap below k2^2");
    double hi = lo;
    bool found = false;
    while (hi < search_cap) {
        const double next = std::min(hi * 1.01, search_cap);
        if (neg_covered(next)) {
            lo = hi;
            hi = next;
            found = true;
            break;
        }
        hi = next;
    }
    if (!found) throw SearchCapExceeded("no k1 below search_cap covers every d/r");
    const double k1_dstar = bisect_edge(hi, lo, neg_covered);

    // Reflected problem: k2 plays the role of k1, the unknown k1 that of k2.
    auto pos_covered = [k2](double k1) { return negative_for_all_ratios(k2, k1); };
    const double span = std::sqrt(k2) - 1.0;
    constexpr int kSteps = 400;
    double covered = 0.0;
    double uncovered = 0.0;
    bool have_covered = false;
    for (int i = 0; i <= kSteps; ++i) {
        const double k1 = 1.0 + span * std::pow(10.0, -9.0 + 9.0 * i / kSteps);
        if (pos_covered(k1)) {
            covered = k1;
            have_covered = true;
        } else if (have_covered) {
            uncovered = k1;
            break;
        }
    }
    if (!have_covered) throw SearchCapExceeded("no k1 near 1 yields positive speed for every d/r");
    if (uncovered == 0.0) uncovered = 1.0 + span;
    const double k1_star = bisect_edge(covered, uncovered, pos_covered);

    return {k1_star, k1_dstar};
}

}  // namespace wavespeed
