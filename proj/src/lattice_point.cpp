#include "fraclog/lattice_point.hpp"

#include "fraclog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace fraclog {

int LatticePoint::l1() const {
    int total = 0;
    for (int c : coords_) total += std::abs(c);
    return total;
}

int LatticePoint::linf() const {
    int m = 0;
    for (int c : coords_) m = std::max(m, std::abs(c));
    return m;
}

double LatticePoint::l2() const {
    double total = 0.0;
    for (int c : coords_) total += static_cast<double>(c) * c;
    return std::sqrt(total);
}

LatticePoint LatticePoint::canonical() const {
    std::vector<int> abs_coords(coords_.size());
    std::transform(coords_.begin(), coords_.end(), abs_coords.begin(), [](int c) { return std::abs(c); });
    std::sort(abs_coords.begin(), abs_coords.end());
    return LatticePoint(std::move(abs_coords));
}

LatticePoint LatticePoint::operator-(const LatticePoint& other) const {
    if (other.dim() != dim()) throw InputError("lattice point dimension mismatch");
    std::vector<int> out(coords_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = coords_[j] - other.coords_[j];
    return LatticePoint(std::move(out));
}

LatticePoint LatticePoint::operator+(const LatticePoint& other) const {
    if (other.dim() != dim()) throw InputError("lattice point dimension mismatch");
    std::vector<int> out(coords_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = coords_[j] + other.coords_[j];
    return LatticePoint(std::move(out));
}

LatticePoint LatticePoint::operator-() const {
    std::vector<int> out(coords_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = -coords_[j];
    return LatticePoint(std::move(out));
}

std::string LatticePoint::to_string() const {
    std::string out = "(";
    for (std::size_t j = 0; j < coords_.size(); ++j) {
        if (j) out += ",";
        out += std::to_string(coords_[j]);
    }
    return out + ")";
}

std::vector<LatticePoint> linf_box(int d, int r) {
    if (d < 1 || r < 0) throw InputError("linf_box: need d >= 1 and r >= 0");
    std::vector<LatticePoint> out;
    std::vector<int> x(static_cast<std::size_t>(d), -r);
    while (true) {
        out.emplace_back(x);
        int j = d - 1;
        while (j >= 0 && x[static_cast<std::size_t>(j)] == r) x[static_cast<std::size_t>(j--)] = -r;
        if (j < 0) break;
        ++x[static_cast<std::size_t>(j)];
    }
    return out;
}

std::vector<LatticePoint> l1_ball(int d, int r) {
    std::vector<LatticePoint> out;
    for (auto& p : linf_box(d, r)) {
        if (p.l1() <= r) out.push_back(std::move(p));
    }
    return out;
}

LatticeFunction::LatticeFunction(int d, std::vector<LatticePoint> support, std::vector<double> values)
    : dim_(d), support_(std::move(support)), values_(std::move(values)) {
    if (support_.size() != values_.size()) throw InputError("lattice function: support and values differ in length");
    std::set<LatticePoint> seen;
    for (const auto& p : support_) {
        if (p.dim() != d) throw InputError("lattice function: support point " + p.to_string() + " has wrong dimension");
        if (!seen.insert(p).second) throw InputError("lattice function: repeated support point " + p.to_string());
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InputError("lattice function: non-finite value");
    }
}

double LatticeFunction::operator()(const LatticePoint& x) const {
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (support_[i] == x) return values_[i];
    }
    return 0.0;
}

double LatticeFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

LatticeFunction LatticeFunction::delta(const LatticePoint& at) { return LatticeFunction(at.dim(), {at}, {1.0}); }

LatticeFunction LatticeFunction::random(int d, int radius, std::size_t count, std::uint64_t seed) {
    std::vector<LatticePoint> box = linf_box(d, radius);
    if (count > box.size()) throw InputError("lattice function: more support points than the box holds");
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates with an explicit index draw keeps the result
    // independent of the standard library's shuffle implementation.
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (box.size() - i));
        std::swap(box[i], box[j]);
    }
    box.resize(count);
    std::sort(box.begin(), box.end());
    std::vector<double> values(count);
    for (double& v : values) v = -1.0 + 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    return LatticeFunction(d, std::move(box), std::move(values));
}

}  // namespace fraclog
