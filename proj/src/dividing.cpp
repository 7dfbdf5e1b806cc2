#include "pontryagin/dividing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace pt {

namespace {

struct UnionFind {
    std::vector<int> parent;
    int add() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Boundary points of a box disk: bottom 0,1,2 left to right, then top 3,4,5 right to left.
constexpr std::array<std::pair<int, int>, 3> kIdentityPattern{{{0, 5}, {1, 4}, {2, 3}}};

bool crosses(std::pair<int, int> a, std::pair<int, int> b) {
    return (a.first < b.first && b.first < a.second && a.second < b.second) ||
           (b.first < a.first && a.first < b.second && b.second < a.second);
}

void emit_forest(const std::string& forest, int gap, std::vector<DividingSet::Op>& out) {
    using K = DividingSet::OpKind;
    std::size_t i = 0;
    while (i < forest.size()) {
        if (forest[i] != '(') throw DividingSetError("malformed loop forest '" + forest + "'");
        int depth = 0;
        std::size_t j = i;
        for (; j < forest.size(); ++j) {
            depth += forest[j] == '(' ? 1 : forest[j] == ')' ? -1 : 0;
            if (forest[j] != '(' && forest[j] != ')') throw DividingSetError("malformed loop forest '" + forest + "'");
            if (depth == 0) break;
        }
        if (depth != 0) throw DividingSetError("unbalanced loop forest '" + forest + "'");
        out.push_back({K::Cup, gap, 0});
        emit_forest(forest.substr(i + 1, j - i - 1), gap + 1, out);
        out.push_back({K::Cap, gap, 0});
        i = j + 1;
    }
}

const char* rotation_label(int r) { return r == 0 ? "I" : r == 1 ? "X" : "Y"; }

}  // namespace

DividingSet::DividingSet(int bottom, std::vector<Op> ops) : bottom_(bottom), ops_(std::move(ops)) {
    if (bottom_ < 0) throw DividingSetError("negative endpoint count");
    int n = bottom_;
    strands_.push_back(n);
    for (std::size_t l = 0; l < ops_.size(); ++l) {
        const Op& op = ops_[l];
        const std::string where = " at op " + std::to_string(l);
        switch (op.kind) {
            case OpKind::Cup:
                if (op.pos < 0 || op.pos > n) throw DividingSetError("cup position out of range" + where);
                n += 2;
                break;
            case OpKind::Cap:
                if (op.pos < 0 || op.pos + 1 >= n) throw DividingSetError("cap position out of range" + where);
                n -= 2;
                break;
            case OpKind::Box:
                if (op.pos < 0 || op.pos + 2 >= n) throw DividingSetError("box position out of range" + where);
                if (op.rotation < 0 || op.rotation > 2) throw DividingSetError("box rotation must be 0, 1 or 2" + where);
                break;
        }
        strands_.push_back(n);
    }
    analyse();
}

void DividingSet::analyse() {
    const int B = bottom_, T = strands_.back(), ns = std::max(1, B + T);
    UnionFind faces, pieces;
    for (int s = 0; s < ns; ++s) faces.add();
    std::vector<std::pair<int, int>> sides;
    std::vector<std::vector<int>> piece_endpoints;
    std::vector<int> cur, gaps;
    for (int k = 0; k < B; ++k) {
        cur.push_back(pieces.add());
        sides.emplace_back(k % ns, (k + 1) % ns);
        piece_endpoints.push_back({k});
    }
    for (int k = 0; k <= B; ++k) gaps.push_back(k % ns);
    std::vector<int> loop_roots;

    auto cap = [&](int i) {
        const int a = pieces.find(cur[i]), b = pieces.find(cur[i + 1]);
        if (a == b) loop_roots.push_back(a);
        else pieces.unite(a, b);
        faces.unite(gaps[i], gaps[i + 2]);
        gaps.erase(gaps.begin() + i + 1, gaps.begin() + i + 3);
        cur.erase(cur.begin() + i, cur.begin() + i + 2);
    };
    auto cup = [&](int i) {
        const int f = faces.add(), q = pieces.add();
        sides.emplace_back(gaps[i], f);
        piece_endpoints.emplace_back();
        cur.insert(cur.begin() + i, {q, q});
        gaps.insert(gaps.begin() + i + 1, {f, gaps[i]});
    };

    std::vector<std::vector<int>> level_pieces;
    for (const Op& op : ops_) {
        level_pieces.push_back(cur);
        if (op.kind == OpKind::Cup) cup(op.pos);
        else if (op.kind == OpKind::Cap) cap(op.pos);
        else if (op.rotation == 1) {
            cap(op.pos);
            cup(op.pos + 1);
        } else if (op.rotation == 2) {
            cap(op.pos + 1);
            cup(op.pos);
        }
    }
    level_pieces.push_back(cur);
    for (int j = 0; j < T; ++j) {
        piece_endpoints[cur[j]].push_back(B + T - 1 - j);
        faces.unite(gaps[j], (B + T - j) % ns);
    }
    faces.unite(gaps[T], B % ns);

    // Components: roots of the piece forest.
    std::map<int, int> comp_index;
    for (std::size_t p = 0; p < pieces.parent.size(); ++p) comp_index.emplace(pieces.find(static_cast<int>(p)), 0);
    int nc = 0;
    for (auto& [root, idx] : comp_index) idx = nc++;
    component_endpoints_.assign(nc, {});
    std::vector<std::pair<int, int>> comp_sides(nc, {-1, -1});
    std::vector<bool> is_loop(nc, false);
    for (int r : loop_roots) is_loop[comp_index[r]] = true;
    for (std::size_t p = 0; p < pieces.parent.size(); ++p) {
        const int c = comp_index[pieces.find(static_cast<int>(p))];
        for (int e : piece_endpoints[p]) component_endpoints_[c].push_back(e);
        comp_sides[c] = {faces.find(sides[p].first), faces.find(sides[p].second)};
    }
    level_components_.clear();
    for (const auto& lv : level_pieces) {
        std::vector<int> row;
        for (int p : lv) row.push_back(comp_index[pieces.find(p)]);
        level_components_.push_back(std::move(row));
    }

    chords_.clear();
    loops_ = 0;
    for (int c = 0; c < nc; ++c) {
        auto& eps = component_endpoints_[c];
        std::sort(eps.begin(), eps.end());
        if (is_loop[c]) {
            ++loops_;
            continue;
        }
        if (eps.size() != 2) throw DividingSetError("internal: chord without two endpoints");
        chords_.emplace_back(eps[0], eps[1]);
    }
    std::sort(chords_.begin(), chords_.end());
    if (chords_.empty() && loops_ == 0) throw DividingSetError("dividing set must be nonempty");
    for (std::size_t a = 0; a < chords_.size(); ++a)
        for (std::size_t b = a + 1; b < chords_.size(); ++b)
            if (crosses(chords_[a], chords_[b])) throw DividingSetError("chords cross");

    // Face graph: one vertex per complementary region, one edge per curve component.
    std::map<int, int> face_index;
    for (std::size_t f = 0; f < faces.parent.size(); ++f) face_index.emplace(faces.find(static_cast<int>(f)), 0);
    int nf = 0;
    for (auto& [root, idx] : face_index) idx = nf++;
    struct Edge {
        int to;
        bool loop;
    };
    std::vector<std::vector<Edge>> adj(nf);
    for (int c = 0; c < nc; ++c) {
        const int a = face_index[comp_sides[c].first], b = face_index[comp_sides[c].second];
        if (a == b) throw DividingSetError("a curve does not separate the rectangle");
        adj[a].push_back({b, is_loop[c]});
        adj[b].push_back({a, is_loop[c]});
    }
    if (nf != nc + 1) throw DividingSetError("complementary regions do not form a tree");
    std::vector<int> color(nf, 0);
    const int root = face_index[faces.find(0)];
    color[root] = -1;
    std::queue<int> bfs;
    bfs.push(root);
    while (!bfs.empty()) {
        const int f = bfs.front();
        bfs.pop();
        for (const Edge& e : adj[f]) {
            if (color[e.to] == 0) {
                color[e.to] = -color[f];
                bfs.push(e.to);
            } else if (color[e.to] == color[f]) {
                throw DividingSetError("regions admit no two-colouring");
            }
        }
    }
    if (std::count(color.begin(), color.end(), 0) > 0) throw DividingSetError("complementary regions are disconnected");

    segment_signs_.assign(ns, 0);
    std::map<int, int> face_min_segment;
    for (int s = 0; s < ns; ++s) {
        const int f = face_index[faces.find(s)];
        segment_signs_[s] = color[f];
        face_min_segment.emplace(f, s);
    }

    std::function<std::string(int, int)> encode = [&](int f, int parent) {
        std::vector<std::string> parts;
        for (const Edge& e : adj[f])
            if (e.loop && e.to != parent) parts.push_back("(" + encode(e.to, f) + ")");
        std::sort(parts.begin(), parts.end());
        return std::accumulate(parts.begin(), parts.end(), std::string());
    };
    std::vector<std::pair<int, std::string>> loop_entries;
    for (const auto& [f, s] : face_min_segment) {
        std::string forest = encode(f, -1);
        if (!forest.empty()) loop_entries.emplace_back(s, std::move(forest));
    }
    std::sort(loop_entries.begin(), loop_entries.end());

    std::ostringstream os;
    os << "B=" << B << " T=" << T << " pairs=";
    if (chords_.empty()) os << '-';
    for (std::size_t i = 0; i < chords_.size(); ++i) os << (i ? "," : "") << chords_[i].first << '-' << chords_[i].second;
    os << " loops=";
    if (loop_entries.empty()) os << '-';
    for (std::size_t i = 0; i < loop_entries.size(); ++i)
        os << (i ? ";" : "") << loop_entries[i].first << ':' << loop_entries[i].second;
    normal_form_ = os.str();
}

DividingSet DividingSet::vertical(int n) {
    if (n < 1) throw DividingSetError("vertical: need at least one chord");
    return DividingSet(n, {});
}

DividingSet DividingSet::parse(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    int B = -1, T = -1;
    std::string pairs_txt, loops_txt;
    bool have_pairs = false, have_loops = false;
    while (is >> tok) {
        auto value = [&](const char* key) { return tok.substr(std::string(key).size()); };
        try {
            if (tok.rfind("B=", 0) == 0) B = std::stoi(value("B="));
            else if (tok.rfind("T=", 0) == 0) T = std::stoi(value("T="));
            else if (tok.rfind("pairs=", 0) == 0) pairs_txt = value("pairs="), have_pairs = true;
            else if (tok.rfind("loops=", 0) == 0) loops_txt = value("loops="), have_loops = true;
            else throw DividingSetError("unknown field '" + tok + "'");
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const DividingSetError*>(&e)) throw;
            throw DividingSetError("bad value in '" + tok + "'");
        }
    }
    if (B < 0 || T < 0 || !have_pairs) throw DividingSetError("diagram text needs B=, T= and pairs=");
    const int n = B + T;
    if (n % 2) throw DividingSetError("odd number of endpoints");
    std::vector<int> partner(n, -1);
    std::vector<std::pair<int, int>> chords;
    if (pairs_txt != "-") {
        std::istringstream ps(pairs_txt);
        std::string item;
        while (std::getline(ps, item, ',')) {
            const auto dash = item.find('-');
            if (dash == std::string::npos) throw DividingSetError("bad pair '" + item + "'");
            int a = 0, b = 0;
            try {
                a = std::stoi(item.substr(0, dash));
                b = std::stoi(item.substr(dash + 1));
            } catch (const std::logic_error&) {
                throw DividingSetError("bad pair '" + item + "'");
            }
            if (a < 0 || b < 0 || a >= n || b >= n || a == b || partner[a] != -1 || partner[b] != -1)
                throw DividingSetError("pair '" + item + "' is invalid or reuses an endpoint");
            partner[a] = b;
            partner[b] = a;
            chords.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    if (std::count(partner.begin(), partner.end(), -1) > 0) throw DividingSetError("unpaired endpoint");
    for (std::size_t a = 0; a < chords.size(); ++a)
        for (std::size_t b = a + 1; b < chords.size(); ++b)
            if (crosses(chords[a], chords[b])) throw DividingSetError("chords cross");

    std::vector<Op> ops;
    // Bottom-to-bottom chords close off innermost first.
    std::vector<int> cur(B);
    std::iota(cur.begin(), cur.end(), 0);
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i)
            if (partner[cur[i]] == cur[i + 1]) {
                ops.push_back({OpKind::Cap, static_cast<int>(i), 0});
                cur.erase(cur.begin() + i, cur.begin() + i + 2);
                progress = true;
                break;
            }
    }
    // Top-to-top chords, removed innermost first and replayed as cups in reverse.
    std::vector<int> top(T);
    for (int j = 0; j < T; ++j) top[j] = B + T - 1 - j;
    std::vector<int> removed;
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t j = 0; j + 1 < top.size(); ++j)
            if (partner[top[j]] == top[j + 1]) {
                removed.push_back(static_cast<int>(j));
                top.erase(top.begin() + j, top.begin() + j + 2);
                progress = true;
                break;
            }
    }
    if (cur.size() != top.size()) throw DividingSetError("internal: through-strand mismatch");
    for (auto it = removed.rbegin(); it != removed.rend(); ++it) ops.push_back({OpKind::Cup, *it, 0});

    if (have_loops && loops_txt != "-") {
        std::istringstream ls(loops_txt);
        std::string item;
        const int ns = std::max(1, n);
        std::vector<Op> prefix, suffix;
        while (std::getline(ls, item, ';')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw DividingSetError("bad loop entry '" + item + "'");
            int s = 0;
            try {
                s = std::stoi(item.substr(0, colon));
            } catch (const std::logic_error&) {
                throw DividingSetError("bad loop entry '" + item + "'");
            }
            if (s < 0 || s >= ns) throw DividingSetError("loop segment out of range in '" + item + "'");
            const std::string forest = item.substr(colon + 1);
            if (forest.empty()) throw DividingSetError("empty loop forest in '" + item + "'");
            if (s <= B) emit_forest(forest, s, prefix);
            else emit_forest(forest, B + T - s, suffix);
        }
        ops.insert(ops.begin(), prefix.begin(), prefix.end());
        ops.insert(ops.end(), suffix.begin(), suffix.end());
    }
    return DividingSet(B, std::move(ops));
}

std::vector<int> DividingSet::endpoints_through(std::size_t level, int first, int count) const {
    const auto& row = level_components_.at(level);
    if (first < 0 || count < 0 || first + count > static_cast<int>(row.size()))
        throw DividingSetError("endpoints_through: strand range out of bounds");
    std::vector<int> out;
    for (int k = first; k < first + count; ++k)
        for (int e : component_endpoints_[row[k]]) out.push_back(e);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DividingSet DividingSet::mirrored() const {
    std::vector<Op> out;
    for (std::size_t l = 0; l < ops_.size(); ++l) {
        const Op& op = ops_[l];
        const int n = strands_[l];
        switch (op.kind) {
            case OpKind::Cup: out.push_back({op.kind, n - op.pos, 0}); break;
            case OpKind::Cap: out.push_back({op.kind, n - 2 - op.pos, 0}); break;
            case OpKind::Box: out.push_back({op.kind, n - 3 - op.pos, (3 - op.rotation) % 3}); break;
        }
    }
    return DividingSet(bottom_, std::move(out));
}

std::string DividingSet::render() const {
    int width = 0;
    for (int n : strands_) width = std::max(width, 3 * n + 1);
    auto col = [](int k) { return 3 * k + 1; };
    auto strands_row = [&](int n) {
        std::string row(width, ' ');
        for (int k = 0; k < n; ++k) row[col(k)] = '|';
        return row;
    };
    std::vector<std::string> rows;
    rows.push_back(std::string(width, '='));
    rows.push_back(strands_row(strands_.back()));
    for (std::size_t l = ops_.size(); l-- > 0;) {
        const Op& op = ops_[l];
        std::string row;
        if (op.kind == OpKind::Cup) {
            row = strands_row(strands_[l + 1]);
            row[col(op.pos)] = '\\';
            row[col(op.pos) + 1] = row[col(op.pos) + 2] = '_';
            row[col(op.pos + 1)] = '/';
        } else if (op.kind == OpKind::Cap) {
            row = strands_row(strands_[l]);
            row[col(op.pos)] = '/';
            row[col(op.pos) + 1] = row[col(op.pos) + 2] = '-';
            row[col(op.pos + 1)] = '\\';
        } else {
            row = strands_row(strands_[l]);
            const std::string label = std::string("[--") + rotation_label(op.rotation) + "--]";
            row.replace(col(op.pos), label.size(), label);
        }
        rows.push_back(row);
        rows.push_back(strands_row(strands_[l]));
    }
    rows.push_back(std::string(width, '='));
    std::string out = normal_form_ + "\n";
    for (auto& r : rows) {
        while (!r.empty() && r.back() == ' ') r.pop_back();
        out += r + "\n";
    }
    return out;
}

AttachingArc AttachingArc::at_level(std::size_t level, int first, BypassSide side) {
    AttachingArc a;
    a.kind = Kind::Level;
    a.level = level;
    a.left = first;
    a.right = first + 2;
    a.side = side;
    return a;
}

AttachingArc AttachingArc::in_box(std::size_t box, int click, BypassSide side) {
    AttachingArc a;
    a.kind = Kind::Box;
    a.box = box;
    a.click = click;
    a.side = side;
    return a;
}

std::string AttachingArc::to_string() const {
    std::ostringstream os;
    if (kind == Kind::Level) os << "level " << level << " [" << left << ", " << right << "]";
    else os << "box " << box << " click " << click;
    os << (side == BypassSide::Front ? " front" : " back");
    return os.str();
}

int arc_crossings(const DividingSet& ds, const AttachingArc& arc) {
    if (arc.kind == AttachingArc::Kind::Level) {
        if (arc.level > ds.ops().size()) throw DividingSetError("arc level outside the rectangle");
        if (!(arc.left < arc.right)) throw DividingSetError("arc needs left < right");
        const int n = ds.strands_at(arc.level);
        auto on_strand = [n](double x) {
            return std::abs(x - std::round(x)) < 1e-12 && std::round(x) >= 0 && std::round(x) <= n - 1;
        };
        if (!on_strand(arc.left) || !on_strand(arc.right)) throw DividingSetError("arc endpoint off the dividing set");
        return static_cast<int>(std::lround(arc.right) - std::lround(arc.left)) + 1;
    }
    if (arc.box >= ds.ops().size() || ds.ops()[arc.box].kind != DividingSet::OpKind::Box)
        throw DividingSetError("arc refers to a missing bypass disk");
    if (arc.click < 0 || arc.click > 5) throw DividingSetError("box arc click must be in 0..5");
    const int r = ds.ops()[arc.box].rotation;
    auto in_side = [&](int pt) { return ((pt - arc.click) % 6 + 6) % 6 < 3; };
    int count = 0;
    for (auto [a, b] : kIdentityPattern) count += in_side((a + r) % 6) != in_side((b + r) % 6);
    return count;
}

void validate_arc(const DividingSet& ds, const AttachingArc& arc) {
    const int n = arc_crossings(ds, arc);
    if (n != 3)
        throw DividingSetError("attaching arc must cross the dividing set in exactly 3 points (found " +
                               std::to_string(n) + ")");
}

AttachingArc mirrored(const DividingSet& ds, const AttachingArc& arc) {
    AttachingArc m = arc;
    m.side = arc.side == BypassSide::Front ? BypassSide::Back : BypassSide::Front;
    if (arc.kind == AttachingArc::Kind::Level) {
        const int n = ds.strands_at(arc.level);
        m.left = n - 1 - arc.right;
        m.right = n - 1 - arc.left;
    } else {
        m.click = (6 - arc.click) % 6;
    }
    return m;
}

DividingSet attach_bypass(const DividingSet& ds, const AttachingArc& arc) {
    validate_arc(ds, arc);
    std::vector<DividingSet::Op> ops = ds.ops();
    const int step = arc.side == BypassSide::Front ? 1 : 2;
    if (arc.kind == AttachingArc::Kind::Level) {
        ops.insert(ops.begin() + static_cast<std::ptrdiff_t>(arc.level),
                   {DividingSet::OpKind::Box, static_cast<int>(std::lround(arc.left)), step});
    } else {
        ops[arc.box].rotation = (ops[arc.box].rotation + step) % 3;
    }
    return DividingSet(ds.bottom_count(), std::move(ops));
}

std::pair<AttachingArc, AttachingArc> induced_arcs(const DividingSet& ds, const AttachingArc& arc) {
    const std::size_t box = arc.kind == AttachingArc::Kind::Level ? arc.level : arc.box;
    const DividingSet first = attach_bypass(ds, arc);
    const AttachingArc second = AttachingArc::in_box(box, first.ops()[box].rotation, arc.side);
    const DividingSet after = attach_bypass(first, second);
    const AttachingArc third = AttachingArc::in_box(box, after.ops()[box].rotation, arc.side);
    validate_arc(after, third);
    return {second, third};
}

TriangleResult attach_triangle(const DividingSet& ds, const AttachingArc& arc) {
    auto [second, third] = induced_arcs(ds, arc);
    DividingSet out = attach_bypass(attach_bypass(attach_bypass(ds, arc), second), third);
    return {std::move(out), -1, second, third};
}

void GradingLedger::attach_triangle(const AttachingArc& arc) {
    TriangleResult r = pt::attach_triangle(current_, arc);
    current_ = std::move(r.result);
    grading_ += r.grading_delta;
    ++triangles_;
}

namespace {

void matchings(const std::vector<int>& pts, std::vector<std::vector<std::pair<int, int>>>& out) {
    if (pts.empty()) {
        out.push_back({});
        return;
    }
    for (std::size_t k = 1; k < pts.size(); k += 2) {
        std::vector<int> inner(pts.begin() + 1, pts.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<int> outer(pts.begin() + static_cast<std::ptrdiff_t>(k) + 1, pts.end());
        std::vector<std::vector<std::pair<int, int>>> in_m, out_m;
        matchings(inner, in_m);
        matchings(outer, out_m);
        for (const auto& a : in_m)
            for (const auto& b : out_m) {
                std::vector<std::pair<int, int>> m{{pts[0], pts[k]}};
                m.insert(m.end(), a.begin(), a.end());
                m.insert(m.end(), b.begin(), b.end());
                out.push_back(std::move(m));
            }
    }
}

}  // namespace

std::vector<DividingSet> chord_corpus(int max_chords, bool with_loops) {
    std::vector<DividingSet> out;
    for (int c = with_loops ? 0 : 1; c <= max_chords; ++c) {
        std::vector<int> pts(2 * c);
        std::iota(pts.begin(), pts.end(), 0);
        std::vector<std::vector<std::pair<int, int>>> ms;
        matchings(pts, ms);
        for (int b = 0; b <= 2 * c; ++b)
            for (const auto& m : ms) {
                std::ostringstream os;
                os << "B=" << b << " T=" << 2 * c - b << " pairs=";
                if (m.empty()) os << '-';
                for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i].first << '-' << m[i].second;
                if (c > 0) out.push_back(DividingSet::parse(os.str() + " loops=-"));
                if (with_loops) out.push_back(DividingSet::parse(os.str() + " loops=0:()"));
            }
    }
    return out;
}

std::vector<AttachingArc> all_level_arcs(const DividingSet& ds) {
    std::vector<AttachingArc> out;
    for (std::size_t l = 0; l <= ds.ops().size(); ++l)
        for (int p = 0; p + 2 < ds.strands_at(l); ++p)
            for (BypassSide s : {BypassSide::Front, BypassSide::Back}) out.push_back(AttachingArc::at_level(l, p, s));
    return out;
}

}  // namespace pt
