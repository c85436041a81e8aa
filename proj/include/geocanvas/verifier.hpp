#pragma once

#include <map>
#include <string>
#include <vector>

#include "geocanvas/expr.hpp"
#include "geocanvas/geom2d.hpp"
#include "geocanvas/canvas.hpp"

namespace geocanvas {

enum class PredicateType { coll, para, perp, cong, midp, cyclic, eqangle, eqratio, extensible };
enum class PredicateTier { premise, numcheck, derived };

const char* to_string(PredicateType t);
const char* to_string(PredicateTier t);
PredicateType predicate_type_from_string(const std::string& s);
PredicateTier tier_from_string(const std::string& s);

/// Ground-truth predicate over named points. Extensible predicates carry a
/// residual expression registered through the problem file; point
/// coordinates are exposed to it as <name>_x / <name>_y.
struct Predicate {
    PredicateType type = PredicateType::coll;
    std::vector<std::string> args;
    PredicateTier tier = PredicateTier::premise;
    std::string expr_text;  // extensible only
    double target = 0.0;    // extensible only
};

/// Scalar query with a ground-truth target; structural targets are
/// {0, 1, 90, 180}.
struct QueryTarget {
    std::string expr_text;
    double target = 0.0;

    bool structural() const {
        return target == 0.0 || target == 1.0 || target == 90.0 || target == 180.0;
    }
};

struct VerifierProblem {
    std::string id;
    std::vector<std::string> points_expected;
    std::vector<Predicate> predicates;
    std::vector<QueryTarget> queries;

    static VerifierProblem from_json(const Json& j);
};

using Coords = std::map<std::string, Point2>;

Coords coords_from_json(const Json& j);
/// Named points of a canvas (objects of kind point with defined values).
Coords coords_from_state(const CanvasState& state);

enum class Verdict { pass, fail, na };
const char* to_string(Verdict v);

/// Numeric residual check of one predicate; NA when an argument point is
/// missing or the residual is undefined.
Verdict check_predicate(const Predicate& p, const Coords& coords,
                        const TolerancePolicy& policy = {});

Scalar eval_query(const QueryTarget& q, const Coords& coords);

enum class FailureClass { ok, c1, c2, c3, na };
const char* to_string(FailureClass c);

/// OK under the active policy; otherwise classified by relative error e:
/// C1 above `c1_threshold`, C2 between the policy rel_tol and the threshold,
/// C3 at or below the policy rel_tol (reachable only under sweep policies
/// stricter than the default).
FailureClass classify_failure(const QueryTarget& q, const Scalar& measured,
                              const TolerancePolicy& policy = {}, double c1_threshold = 1e-2);

struct ProblemScore {
    std::string id;
    std::size_t predicates_total = 0;
    std::size_t predicates_passed = 0;
    std::size_t predicates_na = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> by_tier;  // tier -> (passed, total)
    bool all_pass = false;   // SC contribution
    bool non_empty = false;  // CR contribution
    std::vector<Verdict> verdicts;
    std::vector<FailureClass> query_classes;

    Json to_json() const;
};

ProblemScore score_problem(const VerifierProblem& spec, const Coords& coords,
                           const TolerancePolicy& policy = {});

struct AggregateReport {
    double sr = 0.0;
    std::map<std::string, double> sr_by_tier;
    double sc = 0.0;
    double cr = 0.0;
    std::size_t problems = 0;
    std::size_t predicates = 0;
    std::vector<ProblemScore> per_problem;

    Json to_json() const;
};

AggregateReport aggregate(const std::vector<ProblemScore>& scores);

struct SweepPoint {
    double rel_tol = 0.0;
    double structural_rate = 0.0;
    double numerical_rate = 0.0;
    double overall_rate = 0.0;
};

/// Pass-rate curves over an ascending rel_tol grid; abs_tol is held at the
/// policy default. Monotone nondecreasing in the tolerance.
std::vector<SweepPoint> tolerance_sweep(const std::vector<QueryTarget>& targets,
                                        const Coords& coords, const std::vector<double>& grid,
                                        double abs_tol = 4e-7);

}  // namespace geocanvas
