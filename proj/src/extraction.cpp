#include "pontryagin/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace pt {

std::string face_name(BoxFace f) {
    switch (f) {
        case BoxFace::XMin: return "x-";
        case BoxFace::XMax: return "x+";
        case BoxFace::YMin: return "y-";
        case BoxFace::YMax: return "y+";
        case BoxFace::ZMin: return "z-";
        case BoxFace::ZMax: return "z+";
        default: return "none";
    }
}

Vec3 FramedCurve::tangent(std::size_t i) const {
    const std::size_t n = vertices.size();
    if (n < 2) return {};
    Vec3 t;
    if (closed) {
        t = vertices[(i + 1) % n] - vertices[(i + n - 1) % n];
    } else if (i == 0) {
        t = vertices[1] - vertices[0];
    } else if (i + 1 == n) {
        t = vertices[n - 1] - vertices[n - 2];
    } else {
        t = vertices[i + 1] - vertices[i - 1];
    }
    const double len = norm(t);
    return len > 0 ? t / len : t;
}

double FramedCurve::length() const {
    double l = 0;
    for (std::size_t i = 0; i < segment_count(); ++i) l += distance(vertices[i], vertices[(i + 1) % vertices.size()]);
    return l;
}

FramedCurve FramedCurve::reversed() const {
    FramedCurve r = *this;
    std::reverse(r.vertices.begin(), r.vertices.end());
    std::reverse(r.framing.begin(), r.framing.end());
    std::swap(r.endpoint_faces[0], r.endpoint_faces[1]);
    return r;
}

FramedCurve FramedCurve::pushoff(double dist) const {
    FramedCurve r = *this;
    for (std::size_t i = 0; i < vertices.size(); ++i) r.vertices[i] = vertices[i] + framing[i] * dist;
    return r;
}

std::size_t PontryaginSet::closed_count() const {
    return static_cast<std::size_t>(
        std::count_if(components.begin(), components.end(), [](const FramedCurve& c) { return c.closed; }));
}

std::size_t PontryaginSet::arc_count() const { return components.size() - closed_count(); }

namespace {

struct Degenerate {
    const char* reason;
    std::array<int, 3> cell{-1, -1, -1};
};

struct FaceKey {
    std::uint64_t a, b, c;
    bool operator==(const FaceKey&) const = default;
};

struct FaceKeyHash {
    std::size_t operator()(const FaceKey& k) const {
        std::uint64_t h = k.a * 0x9e3779b97f4a7c15ULL;
        h ^= k.b + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
        h ^= k.c + 0x94d049bb133111ebULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

struct Segment {
    FaceKey from, to;
    Vec3 p_from, p_to;
    BoxFace face_from = BoxFace::None, face_to = BoxFace::None;
    std::array<int, 3> cell;
};

struct LatticePoint {
    std::array<int, 3> ijk;
    std::uint64_t gid;
    double a, b, c;
    Vec3 x;
};

// The 6 tetrahedra of the cube sharing the (0,0,0)-(1,1,1) diagonal: walk the axes in each order.
constexpr int kAxisOrders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

BoxFace boundary_face(const BoxDomain& d, const LatticePoint* v[3]) {
    for (int axis = 0; axis < 3; ++axis) {
        if (v[0]->ijk[axis] == 0 && v[1]->ijk[axis] == 0 && v[2]->ijk[axis] == 0) return BoxFace(2 * axis);
        const int n = d.res[axis];
        if (v[0]->ijk[axis] == n && v[1]->ijk[axis] == n && v[2]->ijk[axis] == n) return BoxFace(2 * axis + 1);
    }
    return BoxFace::None;
}

class Extractor {
public:
    Extractor(const SampledField& f, const RegularValue& rv) : field_(f), rv_(rv), dom_(f.domain()) {}

    std::vector<Segment> run() {
        const auto& r = dom_.res;
        for (int k = 0; k < r[2]; ++k)
            for (int j = 0; j < r[1]; ++j)
                for (int i = 0; i < r[0]; ++i) cell(i, j, k);
        return std::move(segments_);
    }

private:
    LatticePoint point(int i, int j, int k) const {
        const Vec3& f = field_.at(i, j, k);
        LatticePoint lp{{i, j, k}, dom_.index(i, j, k), dot(f, rv_.u), dot(f, rv_.v), dot(f, rv_.p),
                        dom_.vertex(i, j, k)};
        if (lp.a == 0.0 || lp.b == 0.0) throw Degenerate{"lattice value on a coordinate plane of the frame", {i, j, k}};
        return lp;
    }

    void cell(int i, int j, int k) {
        LatticePoint corner[8];
        bool apos = false, aneg = false, bpos = false, bneg = false;
        for (int c = 0; c < 8; ++c) {
            corner[c] = point(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
            (corner[c].a > 0 ? apos : aneg) = true;
            (corner[c].b > 0 ? bpos : bneg) = true;
        }
        if (!(apos && aneg && bpos && bneg)) return;
        const Vec3 h = dom_.spacing();
        for (const auto& order : kAxisOrders) {
            const LatticePoint* t[4];
            int code = 0;
            t[0] = &corner[0];
            for (int s = 0; s < 3; ++s) {
                code |= 1 << order[s];
                t[s + 1] = &corner[code];
            }
            tet(t, order, h, {i, j, k});
        }
    }

    void tet(const LatticePoint* t[4], const int order[3], const Vec3& h, std::array<int, 3> cellidx) {
        struct Hit {
            FaceKey key;
            Vec3 x;
            double c;
            BoxFace face;
        };
        Hit hits[4];
        int nhits = 0;
        for (int omit = 0; omit < 4; ++omit) {
            const LatticePoint* v[3];
            int n = 0;
            for (int q = 0; q < 4; ++q)
                if (q != omit) v[n++] = t[q];
            std::sort(v, v + 3, [](const LatticePoint* l, const LatticePoint* r) { return l->gid < r->gid; });
            // Barycentric coordinates of the origin in the (a, b)-image of the face.
            const double ca = v[1]->a * v[2]->b - v[1]->b * v[2]->a;
            const double cb = v[2]->a * v[0]->b - v[2]->b * v[0]->a;
            const double cc = v[0]->a * v[1]->b - v[0]->b * v[1]->a;
            const bool pos = ca > 0 && cb > 0 && cc > 0;
            const bool neg = ca < 0 && cb < 0 && cc < 0;
            if (!pos && !neg) {
                const bool has_zero = ca == 0 || cb == 0 || cc == 0;
                const bool others_agree = (ca >= 0 && cb >= 0 && cc >= 0) || (ca <= 0 && cb <= 0 && cc <= 0);
                if (!(has_zero && others_agree)) continue;
                if (ca == 0 && cb == 0 && cc == 0) {
                    // Image collinear with the origin: degenerate only if it straddles the origin.
                    const LatticePoint* ref = v[0];
                    for (int q = 1; q < 3; ++q)
                        if (v[q]->a * v[q]->a + v[q]->b * v[q]->b > ref->a * ref->a + ref->b * ref->b) ref = v[q];
                    bool below = false, above = false;
                    for (int q = 0; q < 3; ++q) {
                        const double s = v[q]->a * ref->a + v[q]->b * ref->b;
                        (s > 0 ? above : below) = true;
                    }
                    if (!(above && below)) continue;
                }
                throw Degenerate{"preimage passes through a tetrahedron edge", cellidx};
            }
            const double sum = ca + cb + cc;
            const double la = ca / sum, lb = cb / sum, lc = cc / sum;
            if (nhits == 4) throw Degenerate{"more than two face hits in a tetrahedron", cellidx};
            hits[nhits++] = Hit{FaceKey{v[0]->gid, v[1]->gid, v[2]->gid}, v[0]->x * la + v[1]->x * lb + v[2]->x * lc,
                                v[0]->c * la + v[1]->c * lb + v[2]->c * lc, boundary_face(dom_, v)};
        }
        if (nhits == 0) return;
        if (nhits != 2) throw Degenerate{"odd number of face hits in a tetrahedron", cellidx};
        // F.p > 0 at the midpoint selects the preimage of p rather than -p.
        if (!(0.5 * (hits[0].c + hits[1].c) > 0.0)) return;
        Vec3 ga, gb;
        for (int s = 0; s < 3; ++s) {
            ga[order[s]] = (t[s + 1]->a - t[s]->a) / h[order[s]];
            gb[order[s]] = (t[s + 1]->b - t[s]->b) / h[order[s]];
        }
        const Vec3 tangent = cross(ga, gb);
        Hit first = hits[0], second = hits[1];
        if (dot(second.x - first.x, tangent) < 0) std::swap(first, second);
        segments_.push_back(Segment{first.key, second.key, first.x, second.x, first.face, second.face, cellidx});
    }

    const SampledField& field_;
    const RegularValue& rv_;
    const BoxDomain& dom_;
    std::vector<Segment> segments_;
};

void merge_close_vertices(FramedCurve& c, double tol) {
    if (c.vertices.size() < 3) return;
    std::vector<Vec3> out;
    out.reserve(c.vertices.size());
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        const bool last = i + 1 == c.vertices.size();
        if (!out.empty() && distance(out.back(), c.vertices[i]) < tol) {
            if (!c.closed && last) out.back() = c.vertices[i];  // keep the true boundary endpoint
            continue;
        }
        out.push_back(c.vertices[i]);
    }
    if (c.closed) {
        while (out.size() > 3 && distance(out.front(), out.back()) < tol) out.pop_back();
    }
    c.vertices = std::move(out);
}

std::vector<FramedCurve> chain(const std::vector<Segment>& segs, const BoxDomain& dom) {
    std::unordered_map<FaceKey, std::size_t, FaceKeyHash> outgoing, incoming;
    outgoing.reserve(segs.size() * 2);
    incoming.reserve(segs.size() * 2);
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (!outgoing.emplace(segs[s].from, s).second || !incoming.emplace(segs[s].to, s).second)
            throw ExtractionError("chaining failure: two segments leave the same face", segs[s].cell);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<FramedCurve> curves;
    const double merge_tol = 1e-3 * std::min({dom.spacing().x, dom.spacing().y, dom.spacing().z});

    auto follow = [&](std::size_t start, FramedCurve& c) {
        std::size_t s = start;
        c.vertices.push_back(segs[s].p_from);
        while (true) {
            used[s] = true;
            const Segment& seg = segs[s];
            if (seg.face_to != BoxFace::None) {
                c.vertices.push_back(seg.p_to);
                c.endpoint_faces[1] = seg.face_to;
                return;
            }
            auto it = outgoing.find(seg.to);
            if (it == outgoing.end())
                throw ExtractionError("chaining failure: dangling segment inside the domain (resolution too coarse?)",
                                      seg.cell);
            if (it->second == start) return;  // closed loop
            if (used[it->second])
                throw ExtractionError("chaining failure: curve re-enters a visited segment", seg.cell);
            c.vertices.push_back(seg.p_to);
            s = it->second;
        }
    };

    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s] || segs[s].face_from == BoxFace::None) continue;
        FramedCurve c;
        c.closed = false;
        c.endpoint_faces[0] = segs[s].face_from;
        follow(s, c);
        merge_close_vertices(c, merge_tol);
        curves.push_back(std::move(c));
    }
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        if (incoming.find(segs[s].from) == incoming.end())
            throw ExtractionError("chaining failure: dangling segment inside the domain (resolution too coarse?)",
                                  segs[s].cell);
        FramedCurve c;
        c.closed = true;
        follow(s, c);
        merge_close_vertices(c, merge_tol);
        curves.push_back(std::move(c));
    }
    return curves;
}

Vec3 component_gradient(const SampledField& field, const Vec3& x, const Vec3& dir) {
    const BoxDomain& d = field.domain();
    const Vec3 h = d.spacing() * 0.25;
    Vec3 g;
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 e;
        e[axis] = h[axis];
        Vec3 lo = x - e, hi = x + e;
        double span = 2 * h[axis];
        if (lo[axis] < d.min[axis]) {
            lo = x;
            span = h[axis];
        }
        if (hi[axis] > d.max[axis]) {
            hi = x;
            span = h[axis];
        }
        g[axis] = (dot(field.interpolate(hi), dir) - dot(field.interpolate(lo), dir)) / span;
    }
    return g;
}

}  // namespace

PontryaginSet frame_by_jacobian(const PontryaginSet& set, const SampledField& field) {
    PontryaginSet out = set;
    const RegularValue& rv = set.regular_value;
    for (FramedCurve& c : out.components) {
        c.framing.assign(c.vertices.size(), Vec3{});
        for (std::size_t i = 0; i < c.vertices.size(); ++i) {
            const Vec3 ga = component_gradient(field, c.vertices[i], rv.u);
            const Vec3 gb = component_gradient(field, c.vertices[i], rv.v);
            const Vec3 n = cross(ga, gb);
            if (norm(n) < 1e-10 * std::max(1.0, dot(ga, ga) + dot(gb, gb)))
                throw ExtractionError("frame_by_jacobian: singular Jacobian at " + to_string(c.vertices[i]));
            // w with dF(w) proportional to u: b is constant along w, a increases.
            Vec3 w = ga * dot(gb, gb) - gb * dot(ga, gb);
            const Vec3 t = c.tangent(i);
            w -= t * dot(w, t);
            if (!(norm(w) > 0)) throw ExtractionError("frame_by_jacobian: framing parallel to the curve");
            c.framing[i] = normalized(w);
        }
    }
    return out;
}

PontryaginSet extract(const SampledField& field, const RegularValue& rv, const ExtractOptions& opts) {
    if (opts.certify) {
        const RegularityReport rep = certify_regular_value(field, rv, opts.certify_tol);
        if (!rep.regular)
            throw ExtractionError("extract: regular value certification failed near " +
                                  to_string(rep.worst_location) + " (sigma " + std::to_string(rep.worst_sigma) + ")");
    }
    Degenerate last{"none"};
    for (int attempt = 0; attempt <= opts.jitter_budget; ++attempt) {
        const RegularValue used = attempt == 0 ? rv : rv.jittered(opts.jitter_angle * attempt);
        std::vector<Segment> segs;
        try {
            segs = Extractor(field, used).run();
        } catch (const Degenerate& d) {
            last = d;
            continue;
        }
        PontryaginSet set;
        set.regular_value = rv;
        set.field_digest = field.digest();
        set.components = chain(segs, field.domain());
        return frame_by_jacobian(set, field);
    }
    throw ExtractionError(std::string("extract: degenerate configuration persists after the jitter budget (") +
                              last.reason + ")",
                          last.cell);
}

namespace {

Vec3 nearest_on_curve(const FramedCurve& c, const Vec3& x) {
    Vec3 best = c.vertices.front();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < c.segment_count(); ++s) {
        const Vec3& a = c.vertices[s];
        const Vec3& b = c.vertices[(s + 1) % c.vertices.size()];
        const Vec3 ab = b - a;
        const double l2 = dot(ab, ab);
        const double t = l2 > 0 ? std::clamp(dot(x - a, ab) / l2, 0.0, 1.0) : 0.0;
        const Vec3 q = a + ab * t;
        const double d = distance(q, x);
        if (d < bd) {
            bd = d;
            best = q;
        }
    }
    return best;
}

double curve_distance(const FramedCurve& a, const FramedCurve& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& v : a.vertices) best = std::min(best, distance(v, nearest_on_curve(b, v)));
    return best;
}

}  // namespace

PushoffFraming frame_by_pushoff(const SampledField& field, const RegularValue& rv, const ExtractOptions& opts) {
    PushoffFraming out;
    out.set = extract(field, rv, opts);
    const PontryaginSet copies = extract(field, rv.pushoff(), opts);
    const auto& comps = out.set.components;
    if (copies.components.size() != comps.size())
        throw ExtractionError("frame_by_pushoff: p and p' preimages have different component counts; decrease delta");
    out.copies.resize(comps.size());
    std::vector<bool> taken(comps.size(), false);
    for (const FramedCurve& cp : copies.components) {
        std::size_t best = 0, second = 0;
        double bd = std::numeric_limits<double>::infinity(), sd = bd;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const double d = curve_distance(cp, comps[i]);
            if (d < bd) {
                sd = bd;
                second = best;
                bd = d;
                best = i;
            } else if (d < sd) {
                sd = d;
                second = i;
            }
        }
        (void)second;
        if (comps.size() > 1 && sd <= bd * 1.01)
            throw ExtractionError("frame_by_pushoff: ambiguous pairing of p'-component; decrease delta");
        if (taken[best]) throw ExtractionError("frame_by_pushoff: two p'-components pair with one p-component");
        taken[best] = true;
        out.copies[best] = cp;
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
        FramedCurve& c = out.set.components[i];
        for (std::size_t v = 0; v < c.vertices.size(); ++v) {
            Vec3 w = nearest_on_curve(out.copies[i], c.vertices[v]) - c.vertices[v];
            const Vec3 t = c.tangent(v);
            w -= t * dot(w, t);
            if (!(norm(w) > 0)) throw ExtractionError("frame_by_pushoff: copy touches the curve");
            c.framing[v] = normalized(w);
        }
    }
    return out;
}

}  // namespace pt
