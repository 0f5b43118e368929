#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mot/rational.hpp"

namespace mot {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A finite linearly ordered metric space with exact rational distances in
// [0,1]. The linear order is the index order of `points`. Construction
// checks the metric axioms exactly (symmetry, zero diagonal, positivity off
// the diagonal, triangle inequality, range). Order-convexity of balls is
// deliberately NOT an invariant: it is what the defect checkers measure.
class FiniteMetricOrder {
  public:
    FiniteMetricOrder(std::vector<std::string> points,
                      std::vector<std::vector<Rat>> dist);

    int size() const { return static_cast<int>(points_.size()); }
    const std::string& name(int i) const { return points_.at(i); }
    const std::vector<std::string>& names() const { return points_; }
    const Rat& dist(int i, int j) const { return dist_.at(i).at(j); }
    std::optional<int> index_of(const std::string& name) const;

    bool operator==(const FiniteMetricOrder& other) const = default;

  private:
    std::vector<std::string> points_;
    std::vector<std::vector<Rat>> dist_;
};

// A finite metric space with a ternary nonstrict cyclic-order relation.
// Construction closes the given triples under reflexivity and cyclicity and
// then checks the five nonstrict cyclic-order axioms exhaustively:
//   (a) ceq(x,x,y)
//   (b) ceq(x,y,z) -> ceq(y,z,x)
//   (c) ceq(x,y,z) and ceq(x,z,y) -> x=y or x=z or y=z
//   (d) ceq(w,x,z) -> ceq(w,x,y) or ceq(w,y,z)
//   (e) ceq(x,y,z) or ceq(x,z,y)
// Metric compatibility (ball convexity) is again left to the defect checker.
class FiniteCyclicOrder {
  public:
    FiniteCyclicOrder(std::vector<std::string> points,
                      std::vector<std::vector<Rat>> dist,
                      const std::vector<std::array<int, 3>>& ceq_triples);

    int size() const { return static_cast<int>(points_.size()); }
    const std::string& name(int i) const { return points_.at(i); }
    const std::vector<std::string>& names() const { return points_; }
    const Rat& dist(int i, int j) const { return dist_.at(i).at(j); }
    std::optional<int> index_of(const std::string& name) const;
    bool ceq(int i, int j, int k) const;

    // All triples (i,j,k) with ceq, in lexicographic index order.
    std::vector<std::array<int, 3>> ceq_triples() const;

    bool operator==(const FiniteCyclicOrder& other) const = default;

  private:
    int at(int i, int j, int k) const;
    std::vector<std::string> points_;
    std::vector<std::vector<Rat>> dist_;
    std::vector<char> ceq_;  // n^3 flattened
};

// An order interval with optional finite endpoints (indices into a
// FiniteMetricOrder) and inclusion flags. A missing endpoint means the
// interval extends to -inf / +inf on that side.
struct IntervalSpec {
    std::optional<int> lower;  // nullopt = -inf
    std::optional<int> upper;  // nullopt = +inf
    bool lower_closed = false;
    bool upper_closed = false;

    bool contains(int i) const {
        if (lower && (lower_closed ? i < *lower : i <= *lower)) return false;
        if (upper && (upper_closed ? i > *upper : i >= *upper)) return false;
        return true;
    }
};

// --- Textual formats -------------------------------------------------------
//
// metric-order v1
//   n <count>
//   order <names ascending>
//   d <a> <b> <p>/<q>        (strict upper triangle; omitted pairs = error)
//
// cyclic-order v1
//   n / order / d lines as above, then
//   ceq <a> <b> <c>          (loader closes under reflexivity/cyclicity)
//
// pred v1
//   <point-name> <p>/<q>     (one line per point)

FiniteMetricOrder load_metric_order(std::istream& in);
void save_metric_order(std::ostream& out, const FiniteMetricOrder& m);
FiniteCyclicOrder load_cyclic_order(std::istream& in);
void save_cyclic_order(std::ostream& out, const FiniteCyclicOrder& c);
std::vector<Rat> load_pred(std::istream& in, const FiniteMetricOrder& m);
void save_pred(std::ostream& out, const FiniteMetricOrder& m,
               const std::vector<Rat>& values);

// Named fixtures used throughout the test-suite and docs.
FiniteMetricOrder fixture_chain3();  // ultrametric 3-chain
FiniteMetricOrder fixture_bad3();    // violates convexity: mlo defect 3/10
FiniteMetricOrder fixture_euc3();    // {0, 2/5, 1} with |x-y|

}  // namespace mot
