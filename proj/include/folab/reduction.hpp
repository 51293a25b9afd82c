#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "folab/blowup.hpp"
#include "folab/config.hpp"

namespace folab {

enum class SingType {
    Regular,
    ReducedNondegenerate,
    SaddleNode,
    NonReduced,
    DicriticalTangency,
};

std::string to_string(SingType t);

// Classification of a germ at the origin from the linear part of the dual
// vector field X = b d/dx - a d/dy.
struct Classification {
    SingType type = SingType::Regular;
    Cplx mu1{0}, mu2{0}; // vector-field eigenvalues
};
Classification classify_germ(const OneForm& w, const Config& cfg);

struct ChartRecord {
    int id = -1;
    Chart chart;
    std::optional<int> comp_x; // component with local equation {first coordinate = 0}
    std::optional<int> comp_y;
    OneForm strict_F; // strict transform of the input in this chart
    int node = -1;    // reduction node that created this chart
};

struct ReductionNode {
    int id = -1;
    int parent_chart = 0;
    Cplx center_u{0}, center_v{0};
    std::vector<int> comps_through_center;
    int comp_created = -1;
    int chart_x = -1, chart_y = -1;
    int consumed_point = -1;
    int step_multiplicity = 0; // divisor power extracted at this blow-up
};

struct SingularPoint {
    int id = -1;
    int chart_id = -1;
    Cplx coord{0};     // divisor parameter in the chart
    bool exact = false;
    double residual = 0;
    SingType type = SingType::Regular;
    bool is_corner = false;
    int comp_i = -1; // owning component
    int comp_j = -1; // second component at a corner
    bool consumed = false;

    // local germ adapted so the owning component is {v = 0}, u along it,
    // normalized to unit coefficient scale
    OneForm germ_i;
    Cplx lin_alpha{0}, lin_beta{0}, lin_gamma{0}; // a ~ alpha v, b ~ beta u + gamma v
    std::map<int, Cplx> cs;                       // component id -> index along it
    std::optional<Cplx> cs_sep;                   // index along the separatrix branch
    std::pair<Cplx, Cplx> sep_direction{Cplx(0), Cplx(1)}; // adapted (du, dv)
};

struct DivisorComponent {
    int id = -1;
    int self_intersection = -1;
    int multiplicity = 0; // of sigma* omega along this component
    bool is_dicritical = false;
    bool is_dead_branch = false;
    std::vector<int> points;                              // singular point ids on it
    std::vector<std::pair<int, BranchKind>> chart_axes;   // (chart, which axis it occupies)
};

struct Corner {
    int comp_a = -1, comp_b = -1;
    int point_id = -1; // singular point at the corner, -1 if the foliation is regular there
    int chart_id = -1; // chart whose origin is the corner
};

struct DivisorGraph {
    std::vector<DivisorComponent> components;
    std::vector<Corner> corners;
    std::vector<SingularPoint> points;

    const SingularPoint& point(int id) const { return points.at(static_cast<std::size_t>(id)); }
    std::vector<int> active_points() const;
};

struct ReductionTree {
    std::vector<ChartRecord> charts; // charts[0] is the base chart
    std::vector<ReductionNode> nodes;
    int depth = 0;
};

struct Reduction {
    ReductionTree tree;
    DivisorGraph graph;
    Classification origin_class;
    bool already_reduced = false;
};

// Seidenberg driver. Throws NonIsolatedSingularity / MaxDepthExceeded.
Reduction desingularize(const OneForm& w, const Config& cfg);

// All indices are computed during reduction; this re-extracts them as a map
// keyed by (point id, component id) plus separatrix entries keyed (-1).
std::map<std::pair<int, int>, Cplx> camacho_sad_indices(const DivisorGraph& g);

struct IndexTheoremRow {
    int component = -1;
    bool skipped_dicritical = false;
    Cplx index_sum{0};
    int self_intersection = 0;
    double deviation = 0;
    bool pass = false;
};
std::vector<IndexTheoremRow> verify_index_theorem(const DivisorGraph& g, double tol);

struct ClassMReport {
    bool in_class = false;
    std::vector<std::string> reasons;
};
ClassMReport is_in_class_M(const DivisorGraph& g, const Config& cfg);

// Local intersection number of two coprime curve germs by recursive blow-up
// (sum of products of multiplicities over infinitely near common points).
struct IntersectionNumber {
    int value = 0;
    std::string bound_note; // Prop.-11-style statement M <= I
};
IntersectionNumber intersection_number(const TruncSeries2& f, const TruncSeries2& g,
                                       const Config& cfg, int max_depth = 40);

// Resultant of f and g with respect to y, as a polynomial in x
// (evaluation at roots of unity + Sylvester determinants + interpolation).
TruncSeries1 resultant_y(const TruncSeries2& f, const TruncSeries2& g, double eps);

// adapted germ of the strict transform at a non-base singular point:
// owning component at {v = 0}, u along it (see SingularPoint::germ_i)
OneForm adapted_germ_at(const ReductionTree& tree, const SingularPoint& p, double eps);

} // namespace folab
