#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <set>
#include <sstream>

#include "wavespeed/scan.hpp"

using namespace wavespeed;

namespace {

bool any_prior(const RegionSample& s) {
    for (auto id : kPriorCriteria) {
        if (s.verdicts.at(id)) return true;
    }
    return false;
}

std::string csv_of(const std::vector<RegionSample>& samples) {
    std::ostringstream os;
    emit_csv(samples, os);
    return os.str();
}

// Collects the id attribute of every <g> element below `node`.
void collect_group_ids(const boost::property_tree::ptree& node, std::multiset<std::string>& ids) {
    for (const auto& [name, child] : node) {
        if (name == "g") ids.insert(child.get<std::string>("<xmlattr>.id", ""));
        if (name != "<xmlattr>") collect_group_ids(child, ids);
    }
}

}  // namespace

TEST(Axis, NodesHitEndpoints) {
    EXPECT_DOUBLE_EQ(axis_node({1.0, 10.0}, AxisScale::Linear, 0, 91), 1.0);
    EXPECT_DOUBLE_EQ(axis_node({1.0, 10.0}, AxisScale::Linear, 90, 91), 10.0);
    EXPECT_NEAR(axis_node({1.0, 10.0}, AxisScale::Linear, 10, 91), 2.0, 1e-15);
    EXPECT_NEAR(axis_node({1e-3, 1e3}, AxisScale::Log, 30, 61), 1.0, 1e-14);
    EXPECT_DOUBLE_EQ(axis_node({1e-3, 1e3}, AxisScale::Log, 60, 61), 1e3);
}

TEST(Spec, Validation) {
    ScanSpec s = symmetric_spec();
    s.nx = 1;
    EXPECT_THROW(check_spec(s), std::invalid_argument);
    s = symmetric_spec();
    s.x = {5.0, 2.0};
    EXPECT_THROW(check_spec(s), std::invalid_argument);
    s = symmetric_spec();
    s.y = {0.5, 4.0};
    EXPECT_THROW(check_spec(s), std::invalid_argument);
    s = figure2_spec(2.0, 1.0);
    s.y = {0.0, 1.0};
    EXPECT_THROW(check_spec(s), std::invalid_argument);
    s = figure2_spec(1.0, 1.0);
    EXPECT_THROW(check_spec(s), std::invalid_argument);
}

TEST(Spec, PlaneMapping) {
    ScanSpec s = symmetric_spec();
    EXPECT_EQ(plane_params(s, 3.0, 2.0), (CompetitionParams{3.0, 1.0, 2.0, 2.0}));
    s = figure2_spec(2.0, 0.5);
    EXPECT_EQ(plane_params(s, 8.0, 0.1), (CompetitionParams{0.05, 0.5, 8.0, 2.0}));
}

TEST(SymmetricScan, NewRegionsExceedPriorOnes) {
    const auto samples = scan_plane(symmetric_spec());
    ASSERT_EQ(samples.size(), 91u * 31u);
    std::size_t new_cells = 0, prior_cells = 0;
    for (const auto& s : samples) {
        new_cells += s.verdicts.at(CriterionId::S1) || s.verdicts.at(CriterionId::S2);
        if (any_prior(s)) {
            ++prior_cells;
            EXPECT_EQ(s.combined.sign, Sign::Negative) << s.x << ' ' << s.y;
        }
    }
    EXPECT_GT(new_cells, prior_cells);
    EXPECT_GT(prior_cells, 0u);
}

TEST(SymmetricScan, RowMajorOrderAndInvalidRow) {
    const auto samples = scan_plane(symmetric_spec());
    EXPECT_DOUBLE_EQ(samples[1].x, 1.1);
    EXPECT_DOUBLE_EQ(samples[1].y, 1.0);
    EXPECT_DOUBLE_EQ(samples[91].y, 1.1);
    // k = 1 violates strong competition.
    for (int i = 0; i < 91; ++i) {
        EXPECT_FALSE(samples[i].valid);
        for (const auto& [id, on] : samples[i].verdicts) EXPECT_FALSE(on);
    }
    EXPECT_TRUE(samples[91].valid);
}

TEST(SymmetricScan, NoCellInBothPolarities) {
    for (const auto& spec : {symmetric_spec(), figure2_spec(2.0, 1.0), figure2_spec(3.0, 0.5)}) {
        for (const auto& s : scan_plane(spec)) {
            bool neg = false, pos = false;
            for (const auto& [id, on] : s.verdicts) {
                if (!on) continue;
                (native_polarity(id) == Sign::Negative ? neg : pos) = true;
            }
            EXPECT_FALSE(neg && pos) << s.x << ' ' << s.y;
            if (neg) EXPECT_EQ(s.combined.sign, Sign::Negative);
            if (pos) EXPECT_EQ(s.combined.sign, Sign::Positive);
        }
    }
}

TEST(SymmetricScan, Deterministic) {
    EXPECT_EQ(csv_of(scan_plane(symmetric_spec())), csv_of(scan_plane(symmetric_spec())));
}

TEST(Figure2, DegenerateMaskNeedsK1AboveK2Squared) {
    const auto ds = figure2_dataset(2.0, 1.0);
    EXPECT_DOUBLE_EQ(ds.reference_k1[0], std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(ds.reference_k1[1], 2.0);
    EXPECT_DOUBLE_EQ(ds.reference_k1[2], 4.0);
    std::size_t deg = 0;
    for (const auto& s : ds.samples) {
        if (s.verdicts.at(CriterionId::DEG_NEG)) {
            ++deg;
            EXPECT_GT(s.x, 4.0);
        }
    }
    EXPECT_GT(deg, 0u);
}

TEST(Figure2, SymmetricPointIsInconclusive) {
    ScanSpec s = figure2_spec(2.0, 1.0);
    s.x = {1.5, 2.5};
    s.y = {0.5, 1.5};
    s.x_scale = s.y_scale = AxisScale::Linear;
    s.nx = s.ny = 3;
    const auto samples = figure2_dataset(2.0, 1.0, s).samples;
    EXPECT_DOUBLE_EQ(samples[4].x, 2.0);
    EXPECT_DOUBLE_EQ(samples[4].y, 1.0);
    EXPECT_EQ(samples[4].combined.sign, Sign::Inconclusive);
}

TEST(Figure2, DegenerateEnvelopeAtK1Equals8) {
    ScanSpec s = figure2_spec(2.0, 1.0);
    s.x = {8.0, 8.0 + 1e-9};
    s.y = {0.0740, 0.0750};
    s.x_scale = s.y_scale = AxisScale::Linear;
    s.nx = 2;
    s.ny = 101;
    const auto samples = scan_plane(s);
    double last_in = 0.0;
    for (const auto& c : samples) {
        if (c.x == 8.0 && c.verdicts.at(CriterionId::DEG_NEG)) last_in = std::max(last_in, c.y);
    }
    EXPECT_NEAR(last_in, 0.0746, 5e-5);
}

TEST(Csv, ShapeAndRoundTrip) {
    ScanSpec s = figure2_spec(2.0, 1.0);
    s.nx = 13;
    s.ny = 7;
    auto samples = scan_plane(s);
    samples[3].c_num = SpeedEstimate{};
    samples[3].c_num->c_hat = -0.123456789012345;
    samples[3].c_num->std_error = 1.5e-7;
    samples[3].c_num->converged = true;

    const std::string text = csv_of(samples);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line,
              "x,y,N1,N2,NEG3,POS1,S1,S2,DEG_NEG,DEG_POS,PRIOR_I,PRIOR_II,PRIOR_III,PRIOR_VII,PRIOR_VIII,"
              "combined,c_num,stderr,converged");
    std::size_t rows = 1;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 13u * 7u + 1u);

    std::istringstream in(text);
    const auto back = parse_csv(in);
    ASSERT_EQ(back.size(), samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        EXPECT_NEAR(back[k].x, samples[k].x, 1e-11 * samples[k].x);
        EXPECT_NEAR(back[k].y, samples[k].y, 1e-11 * samples[k].y);
        EXPECT_EQ(back[k].valid, samples[k].valid);
        EXPECT_EQ(back[k].verdicts, samples[k].verdicts);
        EXPECT_EQ(back[k].combined.sign, samples[k].combined.sign);
        EXPECT_EQ(back[k].c_num.has_value(), samples[k].c_num.has_value());
    }
    EXPECT_NEAR(back[3].c_num->c_hat, -0.123456789012, 1e-15);
    EXPECT_TRUE(back[3].c_num->converged);
    // Emitting the parsed samples reproduces the text.
    EXPECT_EQ(csv_of(back), text);
}

TEST(Csv, InvalidCellsRoundTrip) {
    ScanSpec s = symmetric_spec();
    s.ny = 4;
    const auto samples = scan_plane(s);
    std::istringstream in(csv_of(samples));
    const auto back = parse_csv(in);
    EXPECT_FALSE(back[0].valid);
    EXPECT_TRUE(back.back().valid);
}

TEST(Csv, MalformedInputRejected) {
    std::istringstream bad_header("a,b\n1,2\n");
    EXPECT_THROW((void)parse_csv(bad_header), std::runtime_error);
    ScanSpec s = symmetric_spec();
    s.nx = s.ny = 2;
    std::string text = csv_of(scan_plane(s));
    text += "1,2,3\n";
    std::istringstream short_row(text);
    EXPECT_THROW((void)parse_csv(short_row), std::runtime_error);
    EXPECT_THROW(emit_csv({}, std::cout), std::invalid_argument);
}

TEST(Svg, WellFormedWithOneGroupPerCriterion) {
    for (const auto& spec : {symmetric_spec(), figure2_spec(2.0, 1.0)}) {
        const auto samples = scan_plane(spec);
        std::ostringstream os;
        emit_svg(samples, spec, os);
        std::istringstream is(os.str());
        boost::property_tree::ptree tree;
        ASSERT_NO_THROW(boost::property_tree::read_xml(is, tree));
        std::multiset<std::string> ids;
        collect_group_ids(tree, ids);
        for (auto id : kAllCriteria) EXPECT_EQ(ids.count(std::string(column_name(id))), 1u) << column_name(id);
        EXPECT_EQ(ids.count("legend"), 1u);
        EXPECT_EQ(ids.count("axes"), 1u);
    }
}

TEST(Svg, PriorsDrawnBelowNewCriteria) {
    const auto spec = symmetric_spec();
    std::ostringstream os;
    emit_svg(scan_plane(spec), spec, os);
    const std::string svg = os.str();
    EXPECT_LT(svg.find("id=\"PRIOR_VII\""), svg.find("id=\"S1\""));
    EXPECT_LT(svg.find("id=\"PRIOR_I\""), svg.find("id=\"N1\""));
}

TEST(Svg, SampleCountMustMatchSpec) {
    const auto spec = symmetric_spec();
    auto samples = scan_plane(spec);
    samples.pop_back();
    std::ostringstream os;
    EXPECT_THROW(emit_svg(samples, spec, os), std::invalid_argument);
}

TEST(WithPde, SubsampleOnlyAndSignsAgree) {
    ScanSpec s = symmetric_spec();
    s.x = {1.0, 11.0};
    s.y = {1.0, 3.0};
    s.nx = 3;
    s.ny = 3;
    s.pde_stride = 2;
    s.with_pde = true;
    s.pde.grid = Grid1D::with_spacing(50.0, 0.1);
    s.pde.t_end = 150.0;
    const auto samples = scan_plane(s);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const int i = static_cast<int>(k % 3), j = static_cast<int>(k / 3);
        const bool expected = samples[k].valid && i % 2 == 0 && j % 2 == 0;
        EXPECT_EQ(samples[k].c_num.has_value(), expected) << k;
        if (!samples[k].c_num || !samples[k].c_num->converged) continue;
        const auto& e = *samples[k].c_num;
        const double margin = 2.0 * e.std_error + 0.02;
        if (samples[k].combined.sign == Sign::Negative) EXPECT_LT(e.c_hat, margin);
        if (samples[k].combined.sign == Sign::Positive) EXPECT_GT(e.c_hat, -margin);
    }
    // (11, 1, 3, 3) is the top-right cell.
    ASSERT_TRUE(samples[8].c_num);
    EXPECT_LT(samples[8].c_num->c_hat, -0.02);
}
