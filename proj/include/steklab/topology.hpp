#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace steklab::topo {

/// Combinatorial identity of a surface: genus g, b geodesic boundary
/// components, p cusps. Hyperbolic iff chi = 2 - 2g - b - p < 0.
struct Signature {
    int g = 0;
    int b = 0;
    int p = 0;
    bool operator==(const Signature&) const = default;
};

int euler_number(const Signature& sig);

/// Largest k for which a separating multi-geodesic system exists:
///   b-1 if (g >= 1 or p >= 2), b-2 if g = 0, p = 1, b >= 2,
///   b-3 if g = 0, p = 0, b >= 3.
/// Requires a hyperbolic signature (chi < 0) with b >= 1.
int k_max(const Signature& sig);

enum class CkStatus { empty, nonempty };

/// Whether the family of multicurves cutting the surface into k+1
/// boundary-containing components is nonempty: 1 <= k <= k_max.
CkStatus ck_status(const Signature& sig, int k);

// --- Pants decomposition graph ---

enum class CuffType { boundary, cusp, glued };

struct Cuff {
    CuffType type = CuffType::boundary;
    int index = -1;      // boundary label index or interior edge index
    double length = 0.0; // boundary cuffs only; glued cuffs take the edge length
};

struct CuffSlot {
    int pants = -1;
    int slot = -1;  // 0..2
    bool operator==(const CuffSlot&) const = default;
};

struct InteriorEdge {
    CuffSlot end1, end2;
    double length = 0.0;
    std::string name;
};

struct BoundaryLabel {
    CuffSlot at;
    double length = 0.0;
    std::string name;
};

/// Pants decomposition with boundary labels and interior-curve lengths.
/// Every cuff slot is either a labeled boundary, a cusp, or one endpoint of
/// exactly one interior edge.
struct PantsGraph {
    std::vector<std::array<Cuff, 3>> pants;
    std::vector<InteriorEdge> edges;
    std::vector<BoundaryLabel> boundaries;

    int num_pants() const { return static_cast<int>(pants.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_boundaries() const { return static_cast<int>(boundaries.size()); }
    int num_cusps() const;

    double cuff_length(const CuffSlot& cs) const;

    Signature signature() const;
    double alpha() const;  // minimum boundary length
    double beta() const;   // maximum boundary length
    bool connected() const;

    /// Full structural validation; throws StructuralError/DomainError.
    void validate() const;

    /// Components of the graph after deleting the given interior edges.
    /// Returns per-pants component ids, 0..n_comp-1.
    std::vector<int> components_without(const std::vector<int>& removed_edges,
                                        int* n_comp) const;
};

/// Builder helpers.
PantsGraph make_sphere_chain(const std::vector<double>& boundary_lengths,
                             const std::vector<double>& interior_lengths);
PantsGraph make_four_holed_sphere(double boundary_length, double interior_length);
PantsGraph make_ring(int b, const std::vector<double>& boundary_lengths,
                     const std::vector<double>& ring_lengths);
/// Canonical decomposition realizing signature (g,b;p); interior curves get
/// `interior_length`, boundaries `boundary_length`. Used to witness the
/// separating-system table combinatorially.
PantsGraph canonical_pants_graph(const Signature& sig, double boundary_length = 1.0,
                                 double interior_length = 1.0);

/// A union of disjoint interior curves cutting the surface into
/// components_after_cut.size() pieces, each containing >= 1 boundary label.
struct MultiCurve {
    std::vector<int> curves;  // interior edge indices
    double total_length = 0.0;
    struct Component {
        std::vector<int> pants;
        std::vector<int> boundary_labels;
    };
    std::vector<Component> components_after_cut;
};

inline constexpr int kMaxEnumerableEdges = 20;

/// All subsets S of interior edges such that graph - S has exactly k+1
/// connected components, each containing at least one boundary label.
/// Exhaustive over subsets; throws CapacityError above kMaxEnumerableEdges.
std::vector<MultiCurve> enumerate_separating_multicurves(const PantsGraph& graph, int k);

inline constexpr double kInfiniteLength = std::numeric_limits<double>::infinity();

/// Minimal total length over the separating systems of the pants-curve
/// system (the value written as an ell-hat in reports); +infinity when none.
/// When epsilon is given, only systems all of whose member curves have
/// length <= 2*epsilon are admissible.
double ell_k(const PantsGraph& graph, int k, std::optional<double> epsilon = std::nullopt);

/// As ell_k, but also returns the minimizing multicurve when finite.
std::optional<MultiCurve> minimizing_multicurve(const PantsGraph& graph, int k,
                                                std::optional<double> epsilon = std::nullopt);

}  // namespace steklab::topo
