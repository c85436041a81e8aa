#include "geocanvas/verifier.hpp"


#include <cmath>


namespace geocanvas {

const char* to_string(PredicateType t) {
    switch (t) {
        case PredicateType::coll: return "coll";
        case PredicateType::para: return "para";
        case PredicateType::perp: return "perp";
        case PredicateType::cong: return "cong";
        case PredicateType::midp: return "midp";
        case PredicateType::cyclic: return "cyclic";
        case PredicateType::eqangle: return "eqangle";
        case PredicateType::eqratio: return "eqratio";
        case PredicateType::extensible: return "extensible";
    }
    return "coll";
}

const char* to_string(PredicateTier t) {
    switch (t) {
        case PredicateTier::premise: return "premise";
        case PredicateTier::numcheck: return "numcheck";
        case PredicateTier::derived: return "derived";
    }
    return "premise";
}

PredicateType predicate_type_from_string(const std::string& s) {
    if (s == "coll") return PredicateType::coll;
    if (s == "para") return PredicateType::para;
    if (s == "perp") return PredicateType::perp;
    if (s == "cong") return PredicateType::cong;
    if (s == "midp") return PredicateType::midp;
    if (s == "cyclic") return PredicateType::cyclic;
    if (s == "eqangle") return PredicateType::eqangle;
    if (s == "eqratio") return PredicateType::eqratio;
    if (s == "extensible") return PredicateType::extensible;
    throw ToolError(ErrorCode::type_mismatch, "unknown predicate type '" + s + "'");
}

PredicateTier tier_from_string(const std::string& s) {
    if (s == "premise") return PredicateTier::premise;
    if (s == "numcheck") return PredicateTier::numcheck;
    if (s == "derived") return PredicateTier::derived;
    throw ToolError(ErrorCode::type_mismatch, "unknown predicate tier '" + s + "'");
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::na: return "na";
    }
    return "na";
}

const char* to_string(FailureClass c) {
    switch (c) {
        case FailureClass::ok: return "OK";
        case FailureClass::c1: return "C1";
        case FailureClass::c2: return "C2";
        case FailureClass::c3: return "C3";
        case FailureClass::na: return "NA";
    }
    return "NA";
}

VerifierProblem VerifierProblem::from_json(const Json& j) {
    VerifierProblem p;
    p.id = j.value("id", std::string("problem"));
    for (const Json& name : j.value("points_expected", Json::array()))
        p.points_expected.push_back(name.get<std::string>());
    for (const Json& pj : j.value("predicates", Json::array())) {
        Predicate pred;
        pred.type = predicate_type_from_string(pj.at("type").get<std::string>());
        for (const Json& a : pj.value("args", Json::array()))
            pred.args.push_back(a.get<std::string>());
        pred.tier = tier_from_string(pj.value("tier", std::string("premise")));
        if (pred.type == PredicateType::extensible) {
            pred.expr_text = pj.at("expr").get<std::string>();
            pred.target = pj.at("target").get<double>();
        }
        p.predicates.push_back(std::move(pred));
    }
    for (const Json& qj : j.value("queries", Json::array())) {
        QueryTarget q;
        q.expr_text = qj.at("expr").get<std::string>();
        q.target = qj.at("target").get<double>();
        p.queries.push_back(std::move(q));
    }
    return p;
}

Coords coords_from_json(const Json& j) {
    Coords out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        out[it.key()] = Point2{v.at(0).get<double>(), v.at(1).get<double>()};
    }
    return out;
}

Coords coords_from_state(const CanvasState& state) {
    Coords out;
    for (const std::string& name : state.order) {
        const CanvasObject& obj = state.objects.at(name);
        if (obj.is_list || obj.values.empty() || !obj.is_defined()) continue;
        if (const Point2* p = std::get_if<Point2>(&obj.single())) out[name] = *p;
    }
    return out;
}

namespace {

std::size_t expected_arity(PredicateType t) {
    switch (t) {
        case PredicateType::coll: return 3;
        case PredicateType::para: return 4;
        case PredicateType::perp: return 4;
        case PredicateType::cong: return 4;
        case PredicateType::midp: return 3;
        case PredicateType::cyclic: return 4;
        case PredicateType::eqangle: return 8;
        case PredicateType::eqratio: return 8;
        case PredicateType::extensible: return 0;  // free arity
    }
    return 0;
}

std::map<std::string, double> coordinate_bindings(const Coords& coords) {
    std::map<std::string, double> bindings;
    for (const auto& [name, p] : coords) {
        bindings[name + "_x"] = p.x;
        bindings[name + "_y"] = p.y;
    }
    return bindings;
}

/// Directed angle of the line through a->b, degrees in [0, 180).
Scalar directed_angle_deg(Point2 a, Point2 b) {
    const Vec2 d = b - a;
    if (d.norm() == 0.0) return Scalar::undefined();
    double ang = rad_to_deg(std::atan2(d.y, d.x));
    ang = std::fmod(ang, 180.0);
    if (ang < 0.0) ang += 180.0;
    return Scalar(ang);
}

bool angle_pass_mod180(double a, double b, const TolerancePolicy& policy) {
    return policy.pass(a, b) || policy.pass(a + 180.0, b) || policy.pass(a, b + 180.0);
}

}  // namespace

Verdict check_predicate(const Predicate& p, const Coords& coords,
                        const TolerancePolicy& policy) {
    const std::size_t arity = expected_arity(p.type);
    if (arity != 0 && p.args.size() != arity)
        throw ToolError(ErrorCode::type_mismatch,
                        std::string("predicate ") + to_string(p.type) + " needs " +
                            std::to_string(arity) + " points");
    std::vector<Point2> pts;
    for (const std::string& name : p.args) {
        auto it = coords.find(name);
        if (it == coords.end()) return Verdict::na;
        pts.push_back(it->second);
    }

    switch (p.type) {
        case PredicateType::coll:
            return are_collinear(pts[0], pts[1], pts[2], policy) ? Verdict::pass : Verdict::fail;
        case PredicateType::para:
        case PredicateType::perp: {
            const Vec2 d1 = pts[1] - pts[0], d2 = pts[3] - pts[2];
            if (d1.norm() == 0.0 || d2.norm() == 0.0) return Verdict::na;
            const Vec2 u = normalize(d1), v = normalize(d2);
            const double residual = p.type == PredicateType::para ? cross(u, v) : dot(u, v);
            return policy.residual_pass(residual, 1.0) ? Verdict::pass : Verdict::fail;
        }
        case PredicateType::cong:
            return policy.pass(distance(pts[0], pts[1]), distance(pts[2], pts[3]))
                       ? Verdict::pass
                       : Verdict::fail;
        case PredicateType::midp: {
            const bool ok = policy.pass(pts[0].x, 0.5 * (pts[1].x + pts[2].x)) &&
                            policy.pass(pts[0].y, 0.5 * (pts[1].y + pts[2].y));
            return ok ? Verdict::pass : Verdict::fail;
        }
        case PredicateType::cyclic:
            return are_concyclic(pts[0], pts[1], pts[2], pts[3], policy) ? Verdict::pass
                                                                         : Verdict::fail;
        case PredicateType::eqangle: {
            const Scalar ab = directed_angle_deg(pts[0], pts[1]);
            const Scalar cd = directed_angle_deg(pts[2], pts[3]);
            const Scalar ef = directed_angle_deg(pts[4], pts[5]);
            const Scalar gh = directed_angle_deg(pts[6], pts[7]);
            if (!ab.is_defined() || !cd.is_defined() || !ef.is_defined() || !gh.is_defined())
                return Verdict::na;
            double a1 = std::fmod(cd.value() - ab.value() + 360.0, 180.0);
            double a2 = std::fmod(gh.value() - ef.value() + 360.0, 180.0);
            return angle_pass_mod180(a1, a2, policy) ? Verdict::pass : Verdict::fail;
        }
        case PredicateType::eqratio: {
            const double ab = distance(pts[0], pts[1]);
            const double cd = distance(pts[2], pts[3]);
            const double ef = distance(pts[4], pts[5]);
            const double gh = distance(pts[6], pts[7]);
            if (cd == 0.0 || gh == 0.0) return Verdict::na;
            return policy.pass(ab / cd, ef / gh) ? Verdict::pass : Verdict::fail;
        }
        case PredicateType::extensible: {
            ExprPtr e;
            try {
                e = parse_expr(p.expr_text);
            } catch (const ParseError&) {
                return Verdict::na;
            }
            Scalar v;
            try {
                v = eval_expr(e, coordinate_bindings(coords));
            } catch (const UnboundVariable&) {
                return Verdict::na;
            }
            if (!v.is_defined()) return Verdict::na;
            return policy.pass(v.value(), p.target) ? Verdict::pass : Verdict::fail;
        }
    }
    return Verdict::na;
}

Scalar eval_query(const QueryTarget& q, const Coords& coords) {
    ExprPtr e;
    try {
        e = parse_expr(q.expr_text);
    } catch (const ParseError&) {
        return Scalar::undefined();
    }
    try {
        return eval_expr(e, coordinate_bindings(coords));
    } catch (const UnboundVariable&) {
        return Scalar::undefined();
    }
}

FailureClass classify_failure(const QueryTarget& q, const Scalar& measured,
                              const TolerancePolicy& policy, double c1_threshold) {
    if (!measured.is_defined()) return FailureClass::na;
    if (policy.pass(measured.value(), q.target)) return FailureClass::ok;
    const double eps = 1e-12;
    const double e = std::fabs(measured.value() - q.target) / std::fmax(std::fabs(q.target), eps);
    if (e > c1_threshold) return FailureClass::c1;
    if (e > policy.rel_tol) return FailureClass::c2;
    return FailureClass::c3;
}

Json ProblemScore::to_json() const {
    Json j;
    j["id"] = id;
    j["predicates_total"] = predicates_total;
    j["predicates_passed"] = predicates_passed;
    j["predicates_na"] = predicates_na;
    Json tiers = Json::object();
    for (const auto& [tier, pt] : by_tier) {
        Json t;
        t["passed"] = pt.first;
        t["total"] = pt.second;
        tiers[tier] = t;
    }
    j["by_tier"] = tiers;
    j["sc"] = all_pass;
    j["cr"] = non_empty;
    Json vs = Json::array();
    for (Verdict v : verdicts) vs.push_back(to_string(v));
    j["verdicts"] = vs;
    Json qc = Json::array();
    for (FailureClass c : query_classes) qc.push_back(to_string(c));
    j["query_classes"] = qc;
    return j;
}

ProblemScore score_problem(const VerifierProblem& spec, const Coords& coords,
                           const TolerancePolicy& policy) {
    ProblemScore s;
    s.id = spec.id;
    s.non_empty = !coords.empty();
    s.predicates_total = spec.predicates.size();
    for (const Predicate& p : spec.predicates) {
        Verdict v = s.non_empty ? check_predicate(p, coords, policy) : Verdict::na;
        s.verdicts.push_back(v);
        auto& tier = s.by_tier[to_string(p.tier)];
        ++tier.second;
        if (v == Verdict::pass) {
            ++s.predicates_passed;
            ++tier.first;
        }
        if (v == Verdict::na) ++s.predicates_na;
    }
    s.all_pass = s.predicates_total > 0 && s.predicates_passed == s.predicates_total;
    for (const QueryTarget& q : spec.queries)
        s.query_classes.push_back(classify_failure(q, eval_query(q, coords), policy));
    return s;
}

Json AggregateReport::to_json() const {
    Json j;
    j["problems"] = problems;
    j["predicates"] = predicates;
    j["sr"] = sr;
    Json tiers = Json::object();
    for (const auto& [tier, rate] : sr_by_tier) tiers[tier] = rate;
    j["sr_by_tier"] = tiers;
    j["sc"] = sc;
    j["cr"] = cr;
    Json per = Json::array();
    for (const ProblemScore& p : per_problem) per.push_back(p.to_json());
    j["per_problem"] = per;
    return j;
}

AggregateReport aggregate(const std::vector<ProblemScore>& scores) {
    AggregateReport r;
    r.problems = scores.size();
    std::size_t passed = 0, total = 0, sc = 0, cr = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> tiers;
    for (const ProblemScore& s : scores) {
        passed += s.predicates_passed;
        total += s.predicates_total;
        if (s.all_pass) ++sc;
        if (s.non_empty) ++cr;
        for (const auto& [tier, pt] : s.by_tier) {
            tiers[tier].first += pt.first;
            tiers[tier].second += pt.second;
        }
    }
    r.predicates = total;
    r.sr = total ? static_cast<double>(passed) / static_cast<double>(total) : 0.0;
    for (const auto& [tier, pt] : tiers)
        r.sr_by_tier[tier] =
            pt.second ? static_cast<double>(pt.first) / static_cast<double>(pt.second) : 0.0;
    r.sc = scores.empty() ? 0.0 : static_cast<double>(sc) / static_cast<double>(scores.size());
    r.cr = scores.empty() ? 0.0 : static_cast<double>(cr) / static_cast<double>(scores.size());
    r.per_problem = scores;
    return r;
}

std::vector<SweepPoint> tolerance_sweep(const std::vector<QueryTarget>& targets,
                                        const Coords& coords, const std::vector<double>& grid,
                                        double abs_tol) {
    std::vector<Scalar> measured;
    measured.reserve(targets.size());
    for (const QueryTarget& q : targets) measured.push_back(eval_query(q, coords));

    std::vector<SweepPoint> out;
    for (double rel : grid) {
        TolerancePolicy policy{abs_tol, rel};
        SweepPoint pt;
        pt.rel_tol = rel;
        std::size_t s_total = 0, s_pass = 0, n_total = 0, n_pass = 0;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const bool pass = measured[i].is_defined() &&
                              policy.pass(measured[i].value(), targets[i].target);
            if (targets[i].structural()) {
                ++s_total;
                if (pass) ++s_pass;
            } else {
                ++n_total;
                if (pass) ++n_pass;
            }
        }
        pt.structural_rate =
            s_total ? static_cast<double>(s_pass) / static_cast<double>(s_total) : 1.0;
        pt.numerical_rate =
            n_total ? static_cast<double>(n_pass) / static_cast<double>(n_total) : 1.0;
        const std::size_t t = s_total + n_total;
        pt.overall_rate =
            t ? static_cast<double>(s_pass + n_pass) / static_cast<double>(t) : 1.0;
        out.push_back(pt);
    }
    return out;
}

}  // namespace geocanvas
