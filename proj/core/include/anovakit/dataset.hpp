#pragma once

#include <cstddef>
#include <vector>

namespace anovakit {

enum class LayoutKind { Single, OneWay, TwoWay };

// Design shape of an experiment: one sample, a one-way design with per-group
// sizes, or a balanced two-way design with a*b cells of n observations each.
// Constructed through the named factories, which enforce the shape rules
// (a >= 2, every group/cell size >= 2).
class Layout {
public:
    static Layout single(int n);
    static Layout one_way(std::vector<int> group_sizes);
    static Layout two_way(int a, int b, int cell_size);

    LayoutKind kind() const { return kind_; }
    int total() const { return total_; }

    // Number of groups: 1 (single), a (one-way), a*b cells (two-way).
    int group_count() const { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& group_sizes() const { return sizes_; }
    int group_size(int g) const { return sizes_[static_cast<std::size_t>(g)]; }
    int group_offset(int g) const { return offsets_[static_cast<std::size_t>(g)]; }

    // Two-way accessors; cell (i,j) is group i*b + j.
    int factor_a() const;
    int factor_b() const;
    int cell_size() const;

    bool operator==(const Layout& other) const = default;

private:
    Layout(LayoutKind kind, std::vector<int> sizes, int a, int b);

    LayoutKind kind_;
    std::vector<int> sizes_;
    std::vector<int> offsets_;
    int total_;
    int a_ = 0;
    int b_ = 0;
};

// Observations arranged to match a layout: group after group (cells in
// (i,j) row-major order for two-way). Construction checks the length and
// that every value is finite.
class Dataset {
public:
    Dataset(Layout layout, std::vector<double> values);

    const Layout& layout() const { return layout_; }
    const std::vector<double>& values() const { return values_; }

    double value(int g, int k) const {
        return values_[static_cast<std::size_t>(layout_.group_offset(g) + k)];
    }

private:
    Layout layout_;
    std::vector<double> values_;
};

// A Gaussian product state: one mean per group plus a common standard
// deviation. Means are matched against a layout where it matters.
class State {
public:
    State(std::vector<double> means, double sigma);

    const std::vector<double>& means() const { return means_; }
    double sigma() const { return sigma_; }

private:
    std::vector<double> means_;
    double sigma_;
};

} // namespace anovakit
