#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fraclog {

// A point (or offset) of Z^d.
class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(std::vector<int> coords) : coords_(std::move(coords)) {}
    LatticePoint(std::initializer_list<int> coords) : coords_(coords) {}
    static LatticePoint origin(int d) { return LatticePoint(std::vector<int>(static_cast<std::size_t>(d), 0)); }

    int dim() const { return static_cast<int>(coords_.size()); }
    int operator[](int j) const { return coords_[static_cast<std::size_t>(j)]; }
    std::span<const int> coords() const { return coords_; }
    int l1() const;
    int linf() const;
    double l2() const;
    bool is_origin() const { return l1() == 0; }

    // Representative under the hyperoctahedral symmetry of Z^d: absolute
    // values sorted ascending. Every standard-lattice kernel depends only on it.
    LatticePoint canonical() const;

    LatticePoint operator-(const LatticePoint& other) const;
    LatticePoint operator+(const LatticePoint& other) const;
    LatticePoint operator-() const;
    auto operator<=>(const LatticePoint&) const = default;
    bool operator==(const LatticePoint&) const = default;

    std::string to_string() const;  // "(1,-2)"

private:
    std::vector<int> coords_;
};

// All points with l1 norm at most r, lexicographic order.
std::vector<LatticePoint> l1_ball(int d, int r);
// All points with sup norm at most r, lexicographic order.
std::vector<LatticePoint> linf_box(int d, int r);

// Finitely supported function on Z^d.
class LatticeFunction {
public:
    explicit LatticeFunction(int d) : dim_(d) {}
    // Throws InputError on dimension mismatch or repeated support points.
    LatticeFunction(int d, std::vector<LatticePoint> support, std::vector<double> values);

    int dim() const { return dim_; }
    std::span<const LatticePoint> support() const { return support_; }
    std::span<const double> values() const { return values_; }
    double operator()(const LatticePoint& x) const;
    double sup_norm() const;
    std::size_t size() const { return support_.size(); }

    static LatticeFunction delta(const LatticePoint& at);
    // Values uniform in [-1, 1] on `count` distinct points of the sup-norm box
    // of the given radius. Deterministic in the seed.
    static LatticeFunction random(int d, int radius, std::size_t count, std::uint64_t seed);

private:
    int dim_ = 1;
    std::vector<LatticePoint> support_;
    std::vector<double> values_;
};

}  // namespace fraclog
