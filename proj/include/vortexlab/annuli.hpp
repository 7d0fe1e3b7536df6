#pragma once

#include "vortexlab/core.hpp"
#include "vortexlab/geometry.hpp"

#include <iosfwd>
#include <vector>

namespace vlab {

/// {x | inner < |x − center| ≤ outer}.
struct Annulus {
    Point2 center;
    double inner = 0.0;
    double outer = 0.0;

    bool contains(const Point2& x) const {
        const double d = distance(x, center);
        return d > inner && d <= outer;
    }
};

/// Which growth node (and which inter-event phase) produced an annulus.
struct AnnulusOrigin {
    int node_id = -1;
    std::size_t phase = 0;
};

struct AnnuliCollection {
    std::vector<Annulus> annuli;
    // Empty when the collection was not generated from a trace.
    std::vector<AnnulusOrigin> origins;

    std::size_t size() const { return annuli.size(); }
    bool has_provenance() const { return !annuli.empty() && origins.size() == annuli.size(); }
};

/// A partition of annulus indices into concentrically rearrangeable classes.
struct McrPartition {
    std::vector<std::vector<std::size_t>> classes;

    std::size_t count() const { return classes.size(); }
};

/// Annuli swept between consecutive events of a growth, one per ball per phase.
AnnuliCollection annuli_from_trace(const GrowthTrace& trace);

/// True iff the radial intervals (inner, outer] of the selected annuli are
/// pairwise disjoint, i.e. r₁ < s₁ ≤ r₂ < s₂ ≤ ⋯ after sorting.
bool concentrically_rearrangeable(const std::vector<Annulus>& annuli, const std::vector<std::size_t>& subset);
bool is_valid_partition(const AnnuliCollection& collection, const McrPartition& partition);

/// max over t of #{i | innerᵢ < t ≤ outerᵢ}.
std::size_t max_overlap_depth(const AnnuliCollection& collection);

/// Minimal partition. Rearrangeability of a class is disjointness of its
/// half-open radial intervals, so this is interval-graph colouring, solved
/// optimally by a left-endpoint sweep.
McrPartition mcr_exact(const AnnuliCollection& collection);

/// Exhaustive minimum over set partitions; at most 10 annuli.
std::size_t mcr_brute(const AnnuliCollection& collection);

/// Merge-tree construction: leaves start one class each and at every merge
/// the merged ball's annuli join a class of its largest child. Uses at most
/// n classes for n initial balls. Indices refer to annuli_from_trace(trace).
McrPartition mcr_construction_partition(const GrowthTrace& trace);
McrPartition mcr_construction_partition(const GrowthTrace& trace, const AnnuliCollection& collection);

/// CSV columns center_x,center_y,inner,outer,class_id.
void write_annuli_csv(std::ostream& out, const AnnuliCollection& collection, const McrPartition& partition);

/// Two panels: annuli in place (coloured by class) and each class translated
/// to a common center.
void write_annuli_svg(std::ostream& out, const AnnuliCollection& collection, const McrPartition& partition);

} // namespace vlab
