#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pontryagin/invariants.hpp"

namespace pt {

HopfReport hopf_invariant(const SampledField& field, const RegularValue& rv, const ExtractOptions& opts) {
    const PontryaginSet set = extract(field, rv, opts);
    if (set.arc_count() > 0)
        throw InvariantError("hopf_invariant: Pontryagin set has arcs; the field does not extend to S^3");
    const PontryaginSet copies = extract(field, rv.pushoff(), opts);
    if (copies.arc_count() > 0) throw InvariantError("hopf_invariant: pushoff preimage has arcs");
    HopfReport rep;
    rep.regular_value = rv;
    rep.components = set.components.size();
    rep.via_self_linking = framed_class(set.components);
    rep.via_two_fibers = total_linking(set.components, copies.components);
    if (rep.via_self_linking != rep.via_two_fibers)
        throw InvariantError("hopf_invariant: methods disagree (self-linking " + std::to_string(rep.via_self_linking) +
                             ", two-fiber linking " + std::to_string(rep.via_two_fibers) + ")");
    rep.value = rep.via_self_linking;
    return rep;
}

SampledField restrict_to_box(const SampledField& field, const BoxDomain& ball) {
    const BoxDomain& d = field.domain();
    const Vec3 h = d.spacing();
    std::array<int, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
        const double l = (ball.min[a] - d.min[a]) / h[a], u = (ball.max[a] - d.min[a]) / h[a];
        lo[a] = static_cast<int>(std::lround(l));
        hi[a] = static_cast<int>(std::lround(u));
        if (std::abs(l - lo[a]) > 1e-6 || std::abs(u - hi[a]) > 1e-6)
            throw InvariantError("restrict_to_box: ball corners are not lattice points");
    }
    return field.restrict(lo, hi);
}

SampledField doubled_field(const SampledField& lower, const SampledField& upper) {
    const BoxDomain& d = lower.domain();
    if (!(d == upper.domain())) throw InvariantError("doubled_field: fields live on different domains");
    const int nz = d.res[2];
    for (int j = 0; j <= d.res[1]; ++j)
        for (int i = 0; i <= d.res[0]; ++i)
            if (distance(lower.at(i, j, nz), upper.at(i, j, nz)) > 1e-6)
                throw InvariantError("doubled_field: fields disagree on the gluing face");
    BoxDomain dd(d.min, {d.max.x, d.max.y, 2 * d.max.z - d.min.z}, {d.res[0], d.res[1], 2 * nz});
    std::vector<Vec3> vals(dd.vertex_count());
    for (int k = 0; k <= 2 * nz; ++k)
        for (int j = 0; j <= d.res[1]; ++j)
            for (int i = 0; i <= d.res[0]; ++i)
                vals[dd.index(i, j, k)] = k <= nz ? lower.at(i, j, k) : upper.at(i, j, 2 * nz - k);
    return SampledField(dd, std::move(vals));
}

namespace {

double directed_distance(const FramedCurve& a, const FramedCurve& b) {
    double worst = 0;
    for (const Vec3& v : a.vertices) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& w : b.vertices) best = std::min(best, distance(v, w));
        worst = std::max(worst, best);
    }
    return worst;
}

bool same_curve(const FramedCurve& a, const FramedCurve& b, double tol) {
    return a.closed == b.closed && directed_distance(a, b) < tol && directed_distance(b, a) < tol;
}

}  // namespace

ObstructionReport obstruction_o3(const SampledField& f1, const SampledField& f2, const BoxDomain& ball,
                                 const RegularValue& rv, int d, const ExtractOptions& opts) {
    if (!(f1.domain() == f2.domain())) throw InvariantError("obstruction_o3: fields live on different domains");
    if (d < 0) throw InvariantError("obstruction_o3: divisibility must be nonnegative");
    const BoxDomain& dom = f1.domain();
    const double slack = 1e-9;
    for (int k = 0; k <= dom.res[2]; ++k)
        for (int j = 0; j <= dom.res[1]; ++j)
            for (int i = 0; i <= dom.res[0]; ++i) {
                const Vec3 x = dom.vertex(i, j, k);
                bool inside = true;
                for (int a = 0; a < 3; ++a)
                    inside = inside && x[a] > ball.min[a] + slack && x[a] < ball.max[a] - slack;
                if (!inside && distance(f1.at(i, j, k), f2.at(i, j, k)) > 1e-6)
                    throw InvariantError("obstruction_o3: fields differ outside the ball at " + to_string(x));
            }
    const SampledField b1 = restrict_to_box(f1, ball);
    const SampledField b2 = restrict_to_box(f2, ball);
    const SampledField doubled = doubled_field(b2, b1);

    // Find a common certified regular value, jittering deterministically.
    std::optional<RegularValue> chosen;
    for (int attempt = 0; attempt <= 8 && !chosen; ++attempt) {
        const RegularValue cand = attempt == 0 ? rv : rv.jittered(0.05 * attempt);
        if (certify_regular_value(doubled, cand, opts.certify_tol).regular &&
            certify_regular_value(doubled, cand.pushoff(), opts.certify_tol).regular)
            chosen = cand;
    }
    if (!chosen) throw InvariantError("obstruction_o3: no common regular value found after the jitter budget");

    ObstructionReport rep;
    rep.d = d;
    rep.doubled_field = hopf_invariant(doubled, *chosen, opts).value;
    rep.method = "doubled-field";
    std::ostringstream diag;
    diag << "regular value (" << chosen->p.x() << ", " << chosen->p.y() << ", " << chosen->p.z() << ")";

    const PontryaginSet s1 = extract(b1, *chosen, opts);
    const PontryaginSet s2 = extract(b2, *chosen, opts);
    const double tol = 2.0 * b1.domain().cell_diameter();
    std::vector<bool> m1(s1.components.size(), false), m2(s2.components.size(), false);
    for (std::size_t i = 0; i < s1.components.size(); ++i)
        for (std::size_t j = 0; j < s2.components.size(); ++j)
            if (!m2[j] && same_curve(s1.components[i], s2.components[j], tol)) {
                m1[i] = m2[j] = true;
                break;
            }
    std::vector<FramedCurve> extra1, extra2;
    bool closed_only = true;
    for (std::size_t i = 0; i < m1.size(); ++i)
        if (!m1[i]) {
            closed_only = closed_only && s1.components[i].closed;
            extra1.push_back(s1.components[i]);
        }
    for (std::size_t j = 0; j < m2.size(); ++j)
        if (!m2[j]) {
            closed_only = closed_only && s2.components[j].closed;
            extra2.push_back(s2.components[j]);
        }
    rep.compensating_applicable = closed_only;
    if (closed_only) {
        rep.compensating_loop = framed_class(extra2) - framed_class(extra1);
        rep.method = "doubled-field+compensating-loop";
        diag << "; " << extra1.size() << " unmatched closed components in f1, " << extra2.size() << " in f2";
        if (rep.compensating_loop != rep.doubled_field)
            throw InvariantError("obstruction_o3: doubled-field (" + std::to_string(rep.doubled_field) +
                                 ") and compensating-loop (" + std::to_string(rep.compensating_loop) +
                                 ") methods disagree");
    } else {
        diag << "; sets differ by arcs, compensating-loop method not applicable";
    }
    rep.o3 = rep.doubled_field;
    if (d > 0) rep.o3 = ((rep.o3 % d) + d) % d;
    rep.diagnostics = diag.str();
    return rep;
}

}  // namespace pt
