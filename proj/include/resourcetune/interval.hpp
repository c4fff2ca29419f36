#ifndef RESOURCETUNE_INTERVAL_HPP
#define RESOURCETUNE_INTERVAL_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace rtune {

// Frequencies are MHz throughout, left implicit. Endpoint comparisons are
// exact double comparisons; no epsilon.

/// A closed frequency band [lo, hi] with lo < hi.
struct SingleInterval {
    double lo = 0.0;
    double hi = 0.0;

    SingleInterval() = default;
    SingleInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo >= 0.0) || !(lo < hi)) {
            throw std::invalid_argument("SingleInterval: need 0 <= lo < hi");
        }
    }

    double width() const { return hi - lo; }

    bool contains(double f) const { return lo <= f && f <= hi; }
    bool contains(const SingleInterval& inner) const {
        return lo <= inner.lo && inner.hi <= hi;
    }

    friend bool operator==(const SingleInterval&, const SingleInterval&) = default;
    friend bool operator<(const SingleInterval& a, const SingleInterval& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    }
};

/// Subset test: outer.lo <= inner.lo and inner.hi <= outer.hi.
inline bool contains(const SingleInterval& outer, const SingleInterval& inner) {
    return outer.contains(inner);
}

/// The widths and gaps of a multiple-interval, left to right: an odd-length
/// vector of positive reals where entries at even indices (0-based) are
/// band widths and entries at odd indices are gaps.
struct Shape {
    std::vector<double> entries;

    Shape() = default;
    explicit Shape(std::vector<double> e) : entries(std::move(e)) {
        if (entries.empty() || entries.size() % 2 == 0) {
            throw std::invalid_argument("Shape: length must be odd");
        }
        for (double v : entries) {
            if (!(v > 0.0)) throw std::invalid_argument("Shape: entries must be > 0");
        }
    }
    Shape(std::initializer_list<double> e) : Shape(std::vector<double>(e)) {}

    std::size_t single_count() const { return entries.size() / 2 + 1; }

    double single_width(std::size_t i) const { return entries[2 * i]; }

    // Distance from the leftmost point of a realized body to the i-th band's lo.
    double single_offset(std::size_t i) const {
        return std::accumulate(entries.begin(), entries.begin() + 2 * i, 0.0);
    }

    // Total width observed by a receiver with this shape.
    double observed_width() const {
        double w = 0.0;
        for (std::size_t i = 0; i < entries.size(); i += 2) w += entries[i];
        return w;
    }

    // Width from leftmost to rightmost point.
    double span() const { return std::accumulate(entries.begin(), entries.end(), 0.0); }

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// A union of pairwise disjoint single-intervals, kept canonical: sorted
/// ascending with strictly positive gaps between consecutive bands.
class MultipleInterval {
public:
    MultipleInterval() = default;

    /// Canonicalizes: sorts and merges overlapping or touching bands.
    explicit MultipleInterval(std::vector<SingleInterval> singles) {
        std::sort(singles.begin(), singles.end());
        for (const SingleInterval& s : singles) {
            if (!singles_.empty() && s.lo <= singles_.back().hi) {
                singles_.back().hi = std::max(singles_.back().hi, s.hi);
            } else {
                singles_.push_back(s);
            }
        }
    }

    const std::vector<SingleInterval>& singles() const { return singles_; }
    bool empty() const { return singles_.empty(); }

    double measure() const {
        double m = 0.0;
        for (const SingleInterval& s : singles_) m += s.width();
        return m;
    }

    double leftmost() const {
        if (singles_.empty()) throw std::logic_error("MultipleInterval: empty");
        return singles_.front().lo;
    }

    bool covers(double f) const {
        for (const SingleInterval& s : singles_) {
            if (s.contains(f)) return true;
        }
        return false;
    }

    /// True iff some constituent band contains `inner` entirely.
    bool any_single_contains(const SingleInterval& inner) const {
        for (const SingleInterval& s : singles_) {
            if (s.contains(inner)) return true;
        }
        return false;
    }

    friend bool operator==(const MultipleInterval&, const MultipleInterval&) = default;

private:
    std::vector<SingleInterval> singles_;
};

inline double measure(const MultipleInterval& m) { return m.measure(); }

/// Widths-and-gaps vector of a non-empty multiple-interval.
inline Shape shape_of(const MultipleInterval& m) {
    if (m.empty()) throw std::invalid_argument("shape_of: empty multiple-interval");
    std::vector<double> entries;
    entries.reserve(2 * m.singles().size() - 1);
    for (std::size_t i = 0; i < m.singles().size(); ++i) {
        if (i > 0) entries.push_back(m.singles()[i].lo - m.singles()[i - 1].hi);
        entries.push_back(m.singles()[i].width());
    }
    return Shape(std::move(entries));
}

/// Canonical union; overlapping or touching bands merge.
inline MultipleInterval union_all(std::span<const MultipleInterval> ms) {
    std::vector<SingleInterval> all;
    for (const MultipleInterval& m : ms) {
        all.insert(all.end(), m.singles().begin(), m.singles().end());
    }
    return MultipleInterval(std::move(all));
}

inline MultipleInterval union_all(std::initializer_list<MultipleInterval> ms) {
    return union_all(std::span<const MultipleInterval>(ms.begin(), ms.size()));
}

/// The member of the shape's induced family whose leftmost point is `origin`.
inline MultipleInterval realize_shape(const Shape& shape, double origin) {
    if (!(origin > 0.0)) {
        throw std::invalid_argument("realize_shape: origin must be > 0");
    }
    std::vector<SingleInterval> singles;
    singles.reserve(shape.single_count());
    double at = origin;
    for (std::size_t i = 0; i < shape.entries.size(); ++i) {
        if (i % 2 == 0) {
            singles.emplace_back(at, at + shape.entries[i]);
        }
        at += shape.entries[i];
    }
    return MultipleInterval(std::move(singles));
}

inline std::ostream& operator<<(std::ostream& os, const SingleInterval& s) {
    return os << "[" << s.lo << "," << s.hi << "]";
}

inline std::ostream& operator<<(std::ostream& os, const MultipleInterval& m) {
    if (m.empty()) return os << "{}";
    for (std::size_t i = 0; i < m.singles().size(); ++i) {
        if (i > 0) os << "u";
        os << m.singles()[i];
    }
    return os;
}

}  // namespace rtune

#endif  // RESOURCETUNE_INTERVAL_HPP
