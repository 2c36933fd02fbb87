#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyad {

/// A dyadic cube inside the root cube [0,1)^n: the product of intervals
/// [k_i 2^{-level}, (k_i+1) 2^{-level}) with integer coordinates k_i.
class DyadicCube {
public:
    /// Right shift that saturates for counts >= 64 (deep grids store small
    /// coordinates, but shift counts can exceed the word size).
    static std::uint64_t shr(std::uint64_t v, int count) {
        return count >= 64 ? 0 : v >> count;
    }

    DyadicCube(int dim, int level, std::vector<std::uint64_t> coords)
        : dim_(dim), level_(level), coords_(std::move(coords)) {
        if (dim_ < 1) throw std::invalid_argument("DyadicCube: dim must be >= 1");
        if (level_ < 0) throw std::invalid_argument("DyadicCube: level must be >= 0");
        if (level_ * dim_ > 1050) throw std::invalid_argument("DyadicCube: level too deep");
        if (coords_.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("DyadicCube: coords size != dim");
        if (level_ < 64) {
            const std::uint64_t bound = std::uint64_t{1} << level_;
            for (auto c : coords_)
                if (c >= bound)
                    throw std::invalid_argument("DyadicCube: coordinate out of [0,2^level)");
        }
    }

    static DyadicCube root(int dim) {
        return DyadicCube(dim, 0, std::vector<std::uint64_t>(static_cast<std::size_t>(dim), 0));
    }

    int dim() const { return dim_; }
    int level() const { return level_; }
    const std::vector<std::uint64_t>& coords() const { return coords_; }

    double side_length() const { return std::ldexp(1.0, -level_); }
    double measure() const { return std::ldexp(1.0, -level_ * dim_); }

    bool is_root() const { return level_ == 0; }

    DyadicCube parent() const {
        if (level_ == 0) throw std::invalid_argument("DyadicCube: root has no parent");
        std::vector<std::uint64_t> c(coords_);
        for (auto& x : c) x >>= 1;
        return DyadicCube(dim_, level_ - 1, std::move(c));
    }

    /// tau-th generation ancestor Q^tau with |Q^tau| = 2^{tau n}|Q|.
    DyadicCube ancestor(int tau) const {
        if (tau < 0 || tau > level_)
            throw std::invalid_argument("DyadicCube: ancestor generation out of range");
        std::vector<std::uint64_t> c(coords_);
        for (auto& x : c) x = shr(x, tau);
        return DyadicCube(dim_, level_ - tau, std::move(c));
    }

    /// Children are ordered lexicographically in coords: the child index is the
    /// big-endian bit pattern (b_0 ... b_{n-1}) appended to each coordinate.
    DyadicCube child(unsigned index) const {
        if (index >= (1u << dim_)) throw std::invalid_argument("DyadicCube: bad child index");
        std::vector<std::uint64_t> c(coords_);
        for (int i = 0; i < dim_; ++i) {
            auto& ci = c[static_cast<std::size_t>(i)];
            if (ci >> 62) throw std::invalid_argument("DyadicCube: coordinate overflow");
            const unsigned bit = (index >> (dim_ - 1 - i)) & 1u;
            ci = (ci << 1) | bit;
        }
        return DyadicCube(dim_, level_ + 1, std::move(c));
    }

    /// Child index taken while descending from the root: the bits of each
    /// coordinate at depth `depth` (0 = the root's split).
    unsigned child_index_at_depth(int depth) const {
        unsigned idx = 0;
        const int shift = level_ - depth - 1;
        for (int i = 0; i < dim_; ++i)
            idx = (idx << 1) |
                  static_cast<unsigned>(shr(coords_[static_cast<std::size_t>(i)], shift) & 1u);
        return idx;
    }

    unsigned child_count() const { return 1u << dim_; }

    unsigned index_in_parent() const {
        if (level_ == 0) throw std::invalid_argument("DyadicCube: root has no parent");
        unsigned idx = 0;
        for (int i = 0; i < dim_; ++i)
            idx = (idx << 1) | static_cast<unsigned>(coords_[static_cast<std::size_t>(i)] & 1u);
        return idx;
    }

    /// True if q is contained in *this (q may equal *this).
    bool contains(const DyadicCube& q) const {
        if (q.dim_ != dim_ || q.level_ < level_) return false;
        const int shift = q.level_ - level_;
        for (int i = 0; i < dim_; ++i)
            if (shr(q.coords_[static_cast<std::size_t>(i)], shift) !=
                coords_[static_cast<std::size_t>(i)])
                return false;
        return true;
    }

    bool contains_point(std::span<const double> x) const {
        if (x.size() != static_cast<std::size_t>(dim_)) return false;
        const double s = side_length();
        for (int i = 0; i < dim_; ++i) {
            const double lo = static_cast<double>(coords_[static_cast<std::size_t>(i)]) * s;
            if (!(x[static_cast<std::size_t>(i)] >= lo && x[static_cast<std::size_t>(i)] < lo + s))
                return false;
        }
        return true;
    }

    /// Lower corner of the cube.
    std::vector<double> lower_corner() const {
        std::vector<double> v(static_cast<std::size_t>(dim_));
        const double s = side_length();
        for (int i = 0; i < dim_; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(coords_[static_cast<std::size_t>(i)]) * s;
        return v;
    }

    friend bool operator==(const DyadicCube& a, const DyadicCube& b) {
        return a.dim_ == b.dim_ && a.level_ == b.level_ && a.coords_ == b.coords_;
    }
    friend bool operator!=(const DyadicCube& a, const DyadicCube& b) { return !(a == b); }
    friend bool operator<(const DyadicCube& a, const DyadicCube& b) {
        if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
        if (a.level_ != b.level_) return a.level_ < b.level_;
        return a.coords_ < b.coords_;
    }

    std::string to_string() const {
        std::string s = "Q(l=" + std::to_string(level_) + ",[";
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(coords_[i]);
        }
        return s + "])";
    }

private:
    int dim_;
    int level_;
    std::vector<std::uint64_t> coords_;
};

/// The dyadic interval [k 2^{-l}, (k+1) 2^{-l}) on the line.
inline DyadicCube interval(int level, std::uint64_t k) {
    return DyadicCube(1, level, {k});
}

}  // namespace dyad
