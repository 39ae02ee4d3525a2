#ifndef WAVESPEED_SCAN_HPP
#define WAVESPEED_SCAN_HPP

// Parameter-plane sweeps: per-cell criterion masks, the combined verdict and
// an optional front-speed measurement on a subsample.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "wavespeed/model.hpp"
#include "wavespeed/pde.hpp"
#include "wavespeed/theory.hpp"

namespace wavespeed {

enum class Plane {
    /// x = d, y = k with r = 1 and k1 = k2 = k.
    Symmetric,
    /// x = k1, y = d / r at fixed k2 and r.
    K1Ratio,
};

enum class AxisScale { Linear, Log };

struct Range {
    double lo;
    double hi;
};

struct ScanSpec {
    Plane plane = Plane::Symmetric;
    Range x{1.0, 10.0};
    Range y{1.0, 4.0};
    AxisScale x_scale = AxisScale::Linear;
    AxisScale y_scale = AxisScale::Linear;
    int nx = 91;
    int ny = 31;
    bool with_pde = false;
    /// PDE runs on cells whose column and row indices are both multiples of this.
    int pde_stride = 10;
    /// Fixed parameters of the K1Ratio plane.
    double k2 = 2.0;
    double r = 1.0;
    SimConfig pde = default_config();
};

/// [1, 10] x [1, 4] in the (d, k) plane at 91 x 31.
ScanSpec symmetric_spec();
/// k1 in [1.1, 10], d/r in [1e-3, 1e3], both logarithmic, 61 x 61.
ScanSpec figure2_spec(double k2, double r);

/// Throws std::invalid_argument for nx, ny < 2, empty ranges, or
/// non-positive values on a logarithmic axis.
void check_spec(const ScanSpec& spec);

/// Node i of n on the axis: lo + (hi - lo) i / (n - 1), or the geometric
/// analogue on a log axis. The last node is exactly hi.
double axis_node(const Range& range, AxisScale scale, int i, int n);

CompetitionParams plane_params(const ScanSpec& spec, double x, double y);

struct RegionSample {
    double x = 0.0;
    double y = 0.0;
    /// False when the point violates k1, k2 > 1 (e.g. k = 1 on the symmetric
    /// plane); all masks are then false and the verdict Inconclusive.
    bool valid = true;
    std::map<CriterionId, bool> verdicts;
    SignVerdict combined;
    std::optional<SpeedEstimate> c_num;
};

/// Row-major over (y, x): sample index = j * nx + i.
std::vector<RegionSample> scan_plane(const ScanSpec& spec);

struct Figure2Dataset {
    double k2;
    double r;
    std::vector<RegionSample> samples;
    /// Reference verticals k1 = sqrt(k2), k2, k2^2.
    std::array<double, 3> reference_k1;
};

Figure2Dataset figure2_dataset(double k2, double r, const ScanSpec& spec);
Figure2Dataset figure2_dataset(double k2, double r);

/// Cells per criterion mask.
std::map<CriterionId, std::size_t> mask_counts(const std::vector<RegionSample>& samples);

/// Header x,y,<column_name per criterion>,combined,c_num,stderr,converged.
/// Floats at 12 significant digits; the c_num fields are empty without a
/// measurement; combined is Negative, Positive, Inconclusive or Invalid.
void emit_csv(const std::vector<RegionSample>& samples, std::ostream& out);
void emit_csv(const std::vector<RegionSample>& samples, const std::filesystem::path& path);

/// Inverse of emit_csv. The fired-criterion list of the combined verdict is
/// not stored, so only combined.sign is restored. Throws std::runtime_error
/// on malformed input.
std::vector<RegionSample> parse_csv(std::istream& in);

/// Cell-rectangle masks, one <g id="COLUMN"> per criterion (prior regions
/// drawn first), a legend and labelled axes.
void emit_svg(const std::vector<RegionSample>& samples, const ScanSpec& spec, std::ostream& out);
void emit_svg(const std::vector<RegionSample>& samples, const ScanSpec& spec,
              const std::filesystem::path& path);

}  // namespace wavespeed

#endif  // WAVESPEED_SCAN_HPP
