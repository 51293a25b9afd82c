#include "folab/cli.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "folab/flows.hpp"
#include "folab/holonomy.hpp"
#include "folab/numutil.hpp"
#include "folab/parse.hpp"
#include "folab/reduction.hpp"
#include "folab/sliding.hpp"

namespace folab {

namespace {

using Json = nlohmann::ordered_json;

Json jcplx(Cplx c) { return Json::array({c.real(), c.imag()}); }

Json jjet(const JetDiffeo& j) {
    Json arr = Json::array();
    for (int k = 0; k <= j.order(); ++k) arr.push_back(jcplx(j.at(k)));
    return arr;
}

Json jjet_est(const JetEstimate& e) {
    Json out;
    out["coefficients"] = jjet(e.jet);
    Json bars = Json::array();
    for (double b : e.error_bars) bars.push_back(b);
    out["error_bars"] = bars;
    out["two_radius_consistent"] = e.consistent;
    out["max_disagreement"] = e.max_disagreement;
    return out;
}

struct VerdictSink {
    Json rows = Json::array();
    bool all_pass = true;

    void add(const std::string& name, bool pass, double residual, double tol) {
        Json v;
        v["name"] = name;
        v["pass"] = pass;
        v["residual"] = residual;
        v["tolerance"] = tol;
        rows.push_back(v);
        all_pass = all_pass && pass;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json jconfig(const Config& c) {
    Json out;
    out["jet_order"] = c.jet_order;
    out["eps_zero"] = c.eps_zero;
    out["ode_tol"] = c.ode_tol;
    out["q_max"] = c.q_max;
    out["seed"] = c.seed;
    out["max_depth"] = c.max_depth;
    return out;
}

Json jgraph(const Reduction& red) {
    Json out;
    out["blow_ups"] = red.tree.nodes.size();
    out["depth"] = red.tree.depth;
    out["already_reduced"] = red.already_reduced;
    Json comps = Json::array();
    for (const DivisorComponent& c : red.graph.components) {
        Json jc;
        jc["id"] = c.id;
        jc["self_intersection"] = c.self_intersection;
        jc["multiplicity"] = c.multiplicity;
        jc["dicritical"] = c.is_dicritical;
        jc["dead_branch"] = c.is_dead_branch;
        Json adj = Json::array();
        for (const Corner& cr : red.graph.corners)
            if (cr.comp_a == c.id)
                adj.push_back(cr.comp_b);
            else if (cr.comp_b == c.id)
                adj.push_back(cr.comp_a);
        jc["adjacent"] = adj;
        comps.push_back(jc);
    }
    out["components"] = comps;
    Json pts = Json::array();
    for (int pid : red.graph.active_points()) {
        const SingularPoint& p = red.graph.point(pid);
        Json jp;
        jp["id"] = p.id;
        jp["chart"] = p.chart_id;
        jp["coordinate"] = jcplx(p.coord);
        jp["exact"] = p.exact;
        jp["type"] = to_string(p.type);
        jp["corner"] = p.is_corner;
        Json comps_here = Json::array();
        comps_here.push_back(p.comp_i);
        if (p.is_corner) comps_here.push_back(p.comp_j);
        jp["components"] = comps_here;
        Json idx = Json::object();
        for (const auto& [comp, cs] : p.cs) idx[std::to_string(comp)] = jcplx(cs);
        if (p.cs_sep) idx["separatrix"] = jcplx(*p.cs_sep);
        jp["camacho_sad"] = idx;
        pts.push_back(jp);
    }
    out["singular_points"] = pts;
    return out;
}

// ---------------------------------------------------------------- commands

void cmd_reduce(Json& results, VerdictSink& verdicts, const OneForm& w, const Config& cfg) {
    Reduction red = desingularize(w, cfg);
    results["reduction"] = jgraph(red);
    for (const IndexTheoremRow& row : verify_index_theorem(red.graph, 1e-8)) {
        if (row.skipped_dicritical) {
            Json note;
            note["component"] = row.component;
            note["skipped"] = "dicritical";
            results["index_theorem_skipped"].push_back(note);
            continue;
        }
        verdicts.add("index_theorem_component_" + std::to_string(row.component), row.pass,
                     row.deviation, 1e-8);
    }
    ClassMReport cm = is_in_class_M(red.graph, cfg);
    Json jm;
    jm["in_class"] = cm.in_class;
    jm["reasons"] = cm.reasons;
    results["class_M"] = jm;
}

// adapted germ of a separatrix holonomy problem at a reduced origin:
// the loop runs inside the separatrix {x = 0} (so we swap), around u = 0
void cmd_holonomy(Json& results, VerdictSink& verdicts, const OneForm& w, const Config& cfg) {
    Classification cl = classify_germ(w, cfg);
    int order = cfg.jet_order;
    if (cl.type == SingType::ReducedNondegenerate) {
        OneForm adapted = w.swap_xy(); // separatrix {x=0} becomes {v=0}
        double scale = std::max(adapted.a.max_abs(), adapted.b.max_abs());
        if (scale > 0) adapted = adapted.scale(Cplx(1.0 / scale));
        Cplx alpha = adapted.a.at(0, 1), beta = adapted.b.at(1, 0);
        Cplx cs = -alpha / beta;
        LoopSpec loop;
        loop.center = Cplx(0);
        loop.base_u = Cplx(0.5);
        Transversal tr;
        HolonomyJet h = holonomy_jet(adapted, loop, tr, order, cfg);
        results["mode"] = "separatrix";
        results["separatrix"] = "x=0";
        results["cs_index"] = jcplx(cs);
        results["multiplier"] = jcplx(h.multiplier);
        results["computed_via_inverse"] = h.computed_via_inverse;
        results["jet"] = jjet_est(h.est);
        IndexMatchReport rep = multiplier_matches_index(h, cs, 1e-8);
        results["expected_multiplier"] = jcplx(rep.expected);
        verdicts.add("multiplier_matches_index", rep.pass, rep.deviation, 1e-8);
        double higher = 0;
        for (int k = 2; k <= h.est.jet.order(); ++k)
            higher = std::max(higher, std::abs(h.est.jet.at(k)));
        verdicts.add("higher_coefficients_vanish_for_linear_model", higher < 1e-8, higher, 1e-8);
        return;
    }

    Reduction red = desingularize(w, cfg);
    results["mode"] = "divisor";
    results["reduction"] = jgraph(red);
    Json jets = Json::array();
    for (int pid : red.graph.active_points()) {
        const SingularPoint& p = red.graph.point(pid);
        if (p.type != SingType::ReducedNondegenerate) continue;
        // loop inside the owning component around the point
        std::vector<Cplx> avoid;
        for (int qid : red.graph.components[static_cast<std::size_t>(p.comp_i)].points) {
            const SingularPoint& q = red.graph.point(qid);
            if (q.id != p.id && !q.consumed && q.chart_id == p.chart_id)
                avoid.push_back(q.coord - p.coord);
        }
        double r = 0.4;
        for (Cplx av : avoid) r = std::min(r, 0.45 * std::abs(av));
        LoopSpec loop;
        loop.center = Cplx(0);
        loop.base_u = Cplx(r);
        Transversal tr;
        tr.radius = std::min(0.4, 2 * r);
        HolonomyJet h = holonomy_jet(p.germ_i, loop, tr, order, cfg, avoid);
        Json row;
        row["point"] = pid;
        row["component"] = p.comp_i;
        row["multiplier"] = jcplx(h.multiplier);
        row["jet"] = jjet_est(h.est);
        Cplx cs = p.cs.at(p.comp_i);
        IndexMatchReport rep = multiplier_matches_index(h, cs, 1e-7);
        row["expected_multiplier"] = jcplx(rep.expected);
        jets.push_back(row);
        verdicts.add("multiplier_matches_index_point_" + std::to_string(pid), rep.pass,
                     rep.deviation, 1e-7);
    }
    results["holonomy_jets"] = jets;
}

void cmd_sliding(Json& results, VerdictSink& verdicts, const OneForm& wF, const OneForm& wL,
                 const Config& cfg) {
    int order = cfg.jet_order;
    Classification cl = classify_germ(wF, cfg);
    if (cl.type == SingType::ReducedNondegenerate) {
        // slidings onto the two separatrices of the reduced germ at the origin;
        // the germ must carry them along the coordinate axes
        OneForm F = wF;
        double eps = cfg.eps_zero;
        if (F.a.y_multiplicity(eps) < 1) F = wF.swap_xy();
        if (F.a.y_multiplicity(eps) < 1 || F.b.x_multiplicity(eps) < 1)
            throw std::invalid_argument(
                "sliding at a reduced origin expects the separatrices on the coordinate axes");
        TangentBranch tb = tangent_branch_local(F, wL, order, eps);
        results["mode"] = "origin";
        results["tangent_slope"] = jcplx(tb.slope);
        SlidingLocal g1 = sliding_jet(F, wL, CurveGerm::axis_x(order + 2), 1.0, order, cfg);
        SlidingLocal g2 = sliding_jet(F, wL, CurveGerm::axis_y(order + 2), 1.0, order, cfg);
        Json out;
        out["separatrix_1"] = jjet_est(g1.jet);
        out["separatrix_2"] = jjet_est(g2.jet);
        results["slidings"] = out;
        // Eq-(3) relation: the leaf projection S1 -> S2 plays the Dulac role
        JetEstimate d12 = project_along_leaves(wL, CurveGerm::axis_x(order + 2),
                                               CurveGerm::axis_y(order + 2), order, cfg);
        JetDiffeo pushed = compose1(compose1(d12.jet, g1.jet.jet), inverse1(d12.jet));
        double res = jet_distance(pushed, g2.jet.jet);
        verdicts.add("relation_g2_eq_dulac_push_g1", res < 1e-6, res, 1e-6);
        return;
    }

    Reduction red = desingularize(wF, cfg);
    FibrationPullback fib = pull_fibration(red, wL, cfg);
    results["mode"] = "divisor";
    results["reduction"] = jgraph(red);
    results["fibration_absolutely_dicritical"] = fib.absolutely_dicritical;
    results["fibration_failures"] = fib.failures;
    SlidingSet set = sliding_set(red, fib, order, cfg);
    Json entries = Json::array();
    for (const SlidingEntry& e : set.entries) {
        Json row;
        row["point"] = e.point_id;
        row["component"] = e.component;
        row["coordinate"] = jcplx(e.coord);
        row["derived_from_dulac"] = e.derived_from_dulac;
        row["tangent_slope"] = jcplx(e.local.tangent_slope);
        row["jet"] = jjet_est(e.local.jet);
        entries.push_back(row);
    }
    results["entries"] = entries;

    // corner relation: derived entry against the directly computed one
    for (const SlidingEntry& e : set.entries) {
        if (!e.derived_from_dulac) continue;
        const SingularPoint& p = red.graph.point(e.point_id);
        AdaptedPair pair = adapted_pair_at(red, fib, p, e.component, cfg);
        SlidingLocal direct = sliding_jet(pair.F_germ, pair.L_germ,
                                          CurveGerm::axis_x(order + 2), pair.orientation, order,
                                          cfg);
        double res = 0;
        int n = std::min(std::min(6, order), direct.jet.jet.order());
        for (int k = 1; k <= n; ++k)
            res = std::max(res, std::abs(direct.jet.jet.at(k) - e.local.jet.jet.at(k)));
        verdicts.add("corner_relation_point_" + std::to_string(e.point_id), res < 1e-6, res, 1e-6);
    }
}

void cmd_compare(Json& results, VerdictSink& verdicts, const OneForm& wF, const OneForm& wF2,
                 const OneForm& wL, const OneForm& wL2, const Config& cfg) {
    int order = cfg.jet_order;
    Reduction r1 = desingularize(wF, cfg);
    Reduction r2 = desingularize(wF2, cfg);
    FibrationPullback f1 = pull_fibration(r1, wL, cfg);
    FibrationPullback f2 = pull_fibration(r2, wL2, cfg);
    SlidingSet s1 = sliding_set(r1, f1, order, cfg);
    SlidingSet s2 = sliding_set(r2, f2, order, cfg);
    SlidingCompare cmp = compare_sliding_jets(s1, s2, order, 1e-6);
    Json rows = Json::array();
    for (const SlidingCompareRow& r : cmp.rows) {
        Json jr;
        jr["component"] = r.component;
        jr["coordinate"] = jcplx(r.coord);
        jr["deviation"] = r.deviation;
        rows.push_back(jr);
    }
    results["rows"] = rows;
    results["max_deviation"] = cmp.max_deviation;
    verdicts.add("sliding_jets_equal", cmp.equal, cmp.max_deviation, 1e-6);
}

void cmd_flows_check(Json& results, VerdictSink& verdicts, const OneForm& wF, const OneForm& wL,
                     const Config& cfg) {
    int order = cfg.jet_order;
    double eps = cfg.eps_zero;
    // model field from the input form: X = b d/dx - a d/dy
    VectorField X(wF.b.with_order(order + 2), wF.a.with_order(order + 2).scale(Cplx(-1)));

    // adjoint-series identities for a constant multiplier
    Cplx beta0(0.2, 0.1);
    JetMap2 e0 = exp_flow(TruncSeries2::constant(order, beta0), X, order, eps);
    Cplx lam = wF.a.at(0, 1) / wF.b.at(1, 0); // a ~ lam*y for the model form
    // x o exp[b0]X = exp(b0) x
    TruncSeries2 ex = e0.f1 - TruncSeries2::var_x(order).scale(std::exp(beta0));
    verdicts.add("x_exp_identity", ex.max_abs() < 1e-10, ex.max_abs(), 1e-10);
    TruncSeries2 ey = e0.f2 - TruncSeries2::var_y(order).scale(std::exp(-lam * beta0));
    int val = ey.valuation(1e-10);
    verdicts.add("y_exp_identity_valuation_ge_2", val >= 2, val >= 2 ? 0.0 : 1.0, 1e-10);

    // composition law exp[b] = exp[b0] o exp[bbar]
    TruncSeries2 bbar(order);
    bbar.set(2, 0, Cplx(0.05, -0.02));
    bbar.set(1, 1, Cplx(-0.03, 0.04));
    TruncSeries2 beta = bbar;
    beta.set(0, 0, beta0);
    JetMap2 lhs = exp_flow(beta, X, order, eps);
    JetMap2 ebar = exp_flow(bbar, X, order, eps);
    JetMap2 rhs = compose22(e0, ebar, eps);
    double dev = std::max((lhs.f1 - rhs.f1).max_abs(), (lhs.f2 - rhs.f2).max_abs());
    verdicts.add("exp_composition_law", dev < 1e-10, dev, 1e-10);

    // alpha solve round-trip on the model tangent curve
    TruncSeries2 tau = wL.b.with_order(order) * wF.a.with_order(order) -
                       wL.a.with_order(order) * wF.b.with_order(order);
    double tscale = tau.max_abs();
    if (tscale > 0) tau = tau.scale(Cplx(1.0 / tscale));
    int n = 2;
    TruncSeries2 alpha_in(order);
    alpha_in.set(1, 0, Cplx(0.04, 0.01));
    alpha_in.set(0, 1, Cplx(-0.03, 0.02));
    TruncSeries2 xy = TruncSeries2::var_x(order) + TruncSeries2::var_y(order);
    TruncSeries2 f_target = lie_series(xy, tau * alpha_in, X, eps);
    TruncSeries2 alpha_out = solve_alpha(f_target, X, tau, n, order, eps);
    double adev = (alpha_out - alpha_in).max_abs();
    verdicts.add("solve_alpha_round_trip", adev < 1e-9, adev, 1e-9);

    // pairing and the divisibility solve
    TruncSeries2 q = tau;
    TruncSeries2 h = wL.a.with_order(order) * q.dy().with_order(order) -
                     wL.b.with_order(order) * q.dx().with_order(order);
    IntersectionNumber iqh{0, ""};
    int n_min = 2;
    if (!h.is_zero(eps) && h.valuation(eps) > 0 && q.valuation(eps) > 0) {
        iqh = intersection_number(q, h, cfg);
        n_min = std::max(2, 2 * iqh.value);
    }
    results["n_min"] = n_min;
    TruncSeries2 f(order);
    if (n_min <= order) {
        f.set(n_min, 0, Cplx(0.3, 0.1));
        f.set(0, n_min, Cplx(-0.2, 0.05));
        SolveUResult su = solve_u(f, q, wL.with_order(order), order, n_min, eps);
        results["solve_u_rounds"] = su.rounds;
        results["solve_u_remainder_valuation"] = su.remainder_valuation;
        verdicts.add("solve_u_divisible", su.remainder_valuation > order - 1,
                     double(order - su.remainder_valuation), 1.0);
    }

    // pairing of the identity vanishes identically
    JetMap2 idm = JetMap2::identity(order);
    double pz = pairing(idm, wL.with_order(order), eps).max_abs();
    verdicts.add("pairing_identity_zero", pz == 0.0, pz, 0.0);

    // centralizer triviality for the holonomy multiplier of the model
    Cplx mu = std::exp(Cplx(0, -2 * 3.14159265358979323846) * lam);
    TruncSeries1 hs(12);
    hs.set(1, mu);
    hs.set(2, Cplx(0.4, -0.1));
    hs.set(3, Cplx(-0.2, 0.3));
    JetDiffeo hj(hs);
    CentralizerReport crep = centralizer_forcing(hj, 12);
    results["centralizer_resonant"] = crep.resonant;
    results["centralizer_max_forced"] = crep.max_forced;
    verdicts.add("centralizer_identity_forced", crep.identity_forced || crep.resonant,
                 crep.max_forced, 1e-10);
}

} // namespace

void JobSpec::validate() const {
    if (command != "reduce" && command != "holonomy" && command != "sliding" &&
        command != "compare" && command != "flows-check")
        throw std::invalid_argument("unknown command: " + command);
    if (input_path.empty()) throw std::invalid_argument("--input is required");
    if (order && *order < 2) throw std::invalid_argument("jet order must be >= 2");
    if ((command == "sliding" || command == "compare" || command == "flows-check") &&
        !fibration_path)
        throw std::invalid_argument(command + " requires --fibration");
    if (command == "compare" && !input2_path)
        throw std::invalid_argument("compare requires --input2");
}

RunResult run(const JobSpec& job) {
    job.validate();
    Config cfg = job.config_path ? Config::from_file(*job.config_path) : Config{};
    if (job.order) cfg.jet_order = *job.order;

    Json report;
    report["schema_version"] = 1;
    report["command"] = job.command;

    Json inputs;
    std::string in_text = read_file(job.input_path);
    inputs["input"] = in_text;
    OneForm wF = parse_oneform(in_text);
    OneForm wF2, wL, wL2;
    if (job.input2_path) {
        std::string t = read_file(*job.input2_path);
        inputs["input2"] = t;
        wF2 = parse_oneform(t);
    }
    if (job.fibration_path) {
        std::string t = read_file(*job.fibration_path);
        inputs["fibration"] = t;
        wL = parse_oneform(t);
    }
    if (job.fibration2_path) {
        std::string t = read_file(*job.fibration2_path);
        inputs["fibration2"] = t;
        wL2 = parse_oneform(t);
    } else if (job.fibration_path) {
        wL2 = wL;
    }
    report["inputs"] = inputs;
    report["config"] = jconfig(cfg);

    Json results;
    VerdictSink verdicts;
    if (job.command == "reduce") {
        cmd_reduce(results, verdicts, wF, cfg);
    } else if (job.command == "holonomy") {
        cmd_holonomy(results, verdicts, wF, cfg);
    } else if (job.command == "sliding") {
        cmd_sliding(results, verdicts, wF, wL, cfg);
    } else if (job.command == "compare") {
        cmd_compare(results, verdicts, wF, wF2, wL, wL2, cfg);
    } else if (job.command == "flows-check") {
        cmd_flows_check(results, verdicts, wF, wL, cfg);
    }
    report["results"] = results;
    report["verdicts"] = verdicts.rows;
    report["warnings"] = Json::array();

    RunResult out;
    out.report_json = report.dump(2) + "\n";
    out.exit_code = verdicts.all_pass ? 0 : 2;
    if (job.out_path) {
        std::ofstream f(*job.out_path);
        if (!f) throw std::runtime_error("cannot write output file: " + *job.out_path);
        f << out.report_json;
    }
    return out;
}

} // namespace folab
