#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pt {

class DividingSetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Side of the surface a bypass is attached from. Front rotates the local pattern forward,
/// back rotates it backward.
enum class BypassSide { Front, Back };

/// A dividing set on a rectangle with endpoints on the bottom and top edges, stored as a Morse
/// presentation read bottom to top: `bottom` strands, then a list of local moves.
///
/// Boundary endpoints are numbered cyclically: bottom endpoints 0..B-1 left to right, then top
/// endpoints right to left (top strand j gets index B + T - 1 - j). Boundary segment s is the
/// stretch of boundary just before endpoint s; segment 0 contains the left edge.
class DividingSet {
public:
    enum class OpKind { Cup, Cap, Box };
    /// Cup(i): new arc with strands i, i+1 above. Cap(i): joins strands i, i+1.
    /// Box(i, r): three strands i..i+2 through a disk carrying the pattern rotated r clicks.
    struct Op {
        OpKind kind = OpKind::Cup;
        int pos = 0;
        int rotation = 0;
        bool operator==(const Op&) const = default;
    };

    DividingSet(int bottom, std::vector<Op> ops);

    /// n parallel vertical chords.
    static DividingSet vertical(int n);
    /// Canonical presentation of a normal-form string.
    static DividingSet parse(const std::string& text);

    int bottom_count() const { return bottom_; }
    int top_count() const { return strands_.back(); }
    const std::vector<Op>& ops() const { return ops_; }
    /// Number of strands below op `level` (level == ops().size() is the top edge).
    int strands_at(std::size_t level) const { return strands_.at(level); }

    /// Chord pairs of cyclic endpoint indices, each pair (lo, hi), sorted.
    const std::vector<std::pair<int, int>>& chords() const { return chords_; }
    std::size_t loop_count() const { return loops_; }
    /// +1 (positive region) or -1 (negative region) per boundary segment. Segment 0 is negative.
    const std::vector<int>& segment_signs() const { return segment_signs_; }
    /// Endpoints of chords passing through strands [first, first + count) at `level`.
    std::vector<int> endpoints_through(std::size_t level, int first, int count) const;

    /// Canonical text: "B=<n> T=<n> pairs=a-b,... loops=<segment>:<forest>;...".
    const std::string& normal_form() const { return normal_form_; }
    bool isotopic(const DividingSet& other) const { return normal_form_ == other.normal_form_; }

    /// Reflection of the rectangle left to right.
    DividingSet mirrored() const;
    /// ASCII drawing, top edge first.
    std::string render() const;

private:
    void analyse();

    int bottom_;
    std::vector<Op> ops_;
    std::vector<int> strands_;
    std::vector<std::vector<int>> level_components_;
    std::vector<std::vector<int>> component_endpoints_;
    std::vector<std::pair<int, int>> chords_;
    std::size_t loops_ = 0;
    std::vector<int> segment_signs_;
    std::string normal_form_;
};

inline bool isotopy_equal(const DividingSet& a, const DividingSet& b) { return a.isotopic(b); }

/// Attaching arc. A level arc runs horizontally below op `level` between strand positions `left`
/// and `right`; it is valid when both endpoints sit on strands and it meets exactly three.
/// A box arc lies in the disk of op `box`, cut off by the boundary points click..click+2.
struct AttachingArc {
    enum class Kind { Level, Box };
    Kind kind = Kind::Level;
    std::size_t level = 0;
    double left = 0.0;
    double right = 2.0;
    std::size_t box = 0;
    int click = 0;
    BypassSide side = BypassSide::Front;

    static AttachingArc at_level(std::size_t level, int first, BypassSide side = BypassSide::Front);
    static AttachingArc in_box(std::size_t box, int click, BypassSide side = BypassSide::Front);
    std::string to_string() const;
};

/// Number of transverse intersections of `arc` with the dividing set; throws if the arc leaves the
/// rectangle or (level arcs) has an endpoint off the dividing set.
int arc_crossings(const DividingSet& ds, const AttachingArc& arc);
/// Throws DividingSetError unless the arc meets the dividing set in exactly three points.
void validate_arc(const DividingSet& ds, const AttachingArc& arc);
/// Reflection of an arc matching DividingSet::mirrored(); the attachment side flips.
AttachingArc mirrored(const DividingSet& ds, const AttachingArc& arc);

DividingSet attach_bypass(const DividingSet& ds, const AttachingArc& arc);

/// Second and third arcs of the bypass triangle started along `arc`.
std::pair<AttachingArc, AttachingArc> induced_arcs(const DividingSet& ds, const AttachingArc& arc);

struct TriangleResult {
    DividingSet result;
    int grading_delta = -1;
    AttachingArc second;
    AttachingArc third;
};

TriangleResult attach_triangle(const DividingSet& ds, const AttachingArc& arc);

/// Running grading under repeated triangle attachments.
class GradingLedger {
public:
    explicit GradingLedger(DividingSet start) : current_(std::move(start)) {}
    void attach_triangle(const AttachingArc& arc);
    const DividingSet& current() const { return current_; }
    int grading() const { return grading_; }
    std::size_t triangles() const { return triangles_; }

private:
    DividingSet current_;
    int grading_ = 0;
    std::size_t triangles_ = 0;
};

/// Every dividing set with at most `max_chords` chords, in canonical presentation. With
/// `with_loops`, each diagram also appears with one loop added in segment 0's region.
std::vector<DividingSet> chord_corpus(int max_chords, bool with_loops = false);
/// Every level arc (both sides) valid on `ds`.
std::vector<AttachingArc> all_level_arcs(const DividingSet& ds);

}  // namespace pt
