#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mot/structures.hpp"
#include "mot/urysohn.hpp"

namespace mot {

// A tuple of (possibly repeated) points of one structure.
struct Tuple {
    const FiniteMetricOrder* structure = nullptr;
    std::vector<int> idx;
};

// sup over index pairs of |d(a_i,a_j) - d(b_i,b_j)|. Tuples are
// epsilon-isometric iff this is < epsilon.
Rat iso_defect(const Tuple& a, const Tuple& b);

// Adds the two ray-value discrepancies to the distance discrepancy. Both
// structures must have mlo_defect = 0.
Rat order_iso_defect(const Tuple& a, const Tuple& b);

// The space a single-step extension searches for a witness in. Finite
// structures expose their points; a U_S generator can additionally create an
// exact witness at any rational distance on either side of an anchor.
class ExtendTarget {
  public:
    virtual ~ExtendTarget() = default;
    virtual int point_count() const = 0;
    virtual Rat dist(int i, int j) const = 0;
    virtual bool less(int i, int j) const = 0;
    virtual bool can_create() const { return false; }
    // Creates a point at exactly distance `rho` from `anchor` on `side`.
    virtual std::optional<int> create(int anchor, const Rat& rho, Side side) {
        return std::nullopt;
    }
    // Any point at all (base case for empty tuples); may create one.
    virtual std::optional<int> any_point() = 0;
};

class FiniteTarget final : public ExtendTarget {
  public:
    explicit FiniteTarget(const FiniteMetricOrder& m) : m_(&m) {}
    int point_count() const override { return m_->size(); }
    Rat dist(int i, int j) const override { return m_->dist(i, j); }
    bool less(int i, int j) const override { return i < j; }
    std::optional<int> any_point() override {
        return m_->size() ? std::optional<int>(0) : std::nullopt;
    }

  private:
    const FiniteMetricOrder* m_;
};

// A growing sample of U_S; witnesses are built with us_make_at, so every
// rational distance in (0,1] is realized exactly.
class USTarget final : public ExtendTarget {
  public:
    USTarget() = default;
    explicit USTarget(std::vector<USPoint> points) : points_(std::move(points)) {}
    int point_count() const override { return static_cast<int>(points_.size()); }
    Rat dist(int i, int j) const override { return us_distance(points_[i], points_[j]); }
    bool less(int i, int j) const override { return us_compare(points_[i], points_[j]) < 0; }
    bool can_create() const override { return true; }
    std::optional<int> create(int anchor, const Rat& rho, Side side) override;
    std::optional<int> any_point() override;
    const std::vector<USPoint>& points() const { return points_; }

  private:
    std::vector<USPoint> points_;
};

// Reported when no witness exists: the last candidate window searched, its
// punctures, and which case of the extension lemma was reached.
struct ExtendFailure {
    std::string case_label;
    Rat window_lo{0}, window_hi{0};
    std::vector<Rat> punctures;
};

struct ExtendResult {
    std::optional<int> witness;  // index into the target
    ExtendFailure failure;       // meaningful when !ok()
    bool ok() const { return witness.has_value(); }
};

// Single epsilon-isometric extension step: given epsilon-isometric (a, b)
// and a new point of a's structure, finds (or creates) a target point whose
// distance to the anchor b_{i0} lies in the punctured window
// (d(a_{i0}, new) - eps, d(a_{i0}, new) + eps) \ {existing anchor distances},
// where i0 minimizes d(a_{i0}, new). The extension is verified to satisfy
// iso_defect < eps before being returned. `guard`, when given, is a
// multiplicative bound g: accepted pairs must satisfy 1/g < dM/dN < g.
ExtendResult extend_step(const Tuple& a, const std::vector<int>& b, ExtendTarget& target,
                         int new_point, const Rat& eps, const Rat* guard = nullptr);

// Order-preserving variant: anchors at the nearest order-adjacent neighbor,
// intersects the distance window with the ray-value window
// (max_{m_i < m_{i0}} r(n_i,n_{i0}), min_{m_i > m_{i0}} r(n_i,n_{i0})),
// and on an empty window falls through the narrow-window and re-anchoring
// cases of the extension lemma. Output verified by order_iso_defect < eps.
ExtendResult extend_step_ordered(const Tuple& a, const std::vector<int>& b,
                                 ExtendTarget& target, int new_point, const Rat& eps,
                                 const Rat* guard = nullptr);

// Convenience overloads for a finite target given as the structure of b.
ExtendResult extend_step(const Tuple& a, const Tuple& b, int new_point, const Rat& eps);
ExtendResult extend_step_ordered(const Tuple& a, const Tuple& b, int new_point,
                                 const Rat& eps);

// A total surjective relation between the points of two structures.
struct Correlation {
    const FiniteMetricOrder* M = nullptr;
    const FiniteMetricOrder* N = nullptr;
    std::vector<std::pair<int, int>> pairs;
};

// Distortion over the atomic set {d} resp. {d, r}: exact max over pairs of
// related pairs of the formula-value discrepancies.
Rat dis_gh(const Correlation& r);
Rat dis_ogh(const Correlation& r);

struct CorrelationResult {
    std::optional<Correlation> correlation;
    ExtendFailure failure;
    Rat guard{0};  // the multiplicative bound 1 + 2^-k that was used
};

// Back-and-forth construction: alternates single-step extensions over the
// points of M and N in stored index order, starting from the seed pair. The
// multiplicative guard is the tightest rational bound of the form 1 + 2^-k
// consistent with the seed ratios. Fails with the blocking window if some
// step has no witness (finite targets need not be existentially closed).
CorrelationResult build_correlation(const FiniteMetricOrder& M, const FiniteMetricOrder& N,
                                    const Tuple& seed_a, const Tuple& seed_b,
                                    const Rat& eps, bool ordered = true);

// For finite quantifier-free types the type distance
// inf{eps : any/all realizations are eps-(order-)isometric} collapses to the
// tuple defect itself.
Rat type_distance_gh(const Tuple& a, const Tuple& b);
Rat type_distance_ogh(const Tuple& a, const Tuple& b);

}  // namespace mot
