#include "anovakit/dataset.hpp"

#include <cmath>
#include <string>

#include "anovakit/errors.hpp"

namespace anovakit {

Layout::Layout(LayoutKind kind, std::vector<int> sizes, int a, int b)
    : kind_(kind), sizes_(std::move(sizes)), a_(a), b_(b) {
    offsets_.reserve(sizes_.size());
    int running = 0;
    for (int s : sizes_) {
        offsets_.push_back(running);
        running += s;
    }
    total_ = running;
}

Layout Layout::single(int n) {
    if (n < 2) throw LayoutError("single layout needs n >= 2, got n=" + std::to_string(n));
    return Layout(LayoutKind::Single, {n}, 0, 0);
}

Layout Layout::one_way(std::vector<int> group_sizes) {
    if (group_sizes.size() < 2)
        throw LayoutError("one-way layout needs at least 2 groups, got " +
                          std::to_string(group_sizes.size()));
    for (std::size_t i = 0; i < group_sizes.size(); ++i)
        if (group_sizes[i] < 2)
            throw LayoutError("one-way layout needs every group size >= 2; group " +
                              std::to_string(i) + " has " + std::to_string(group_sizes[i]));
    return Layout(LayoutKind::OneWay, std::move(group_sizes), 0, 0);
}

Layout Layout::two_way(int a, int b, int cell_size) {
    if (a < 2 || b < 2)
        throw LayoutError("two-way layout needs a >= 2 and b >= 2, got a=" + std::to_string(a) +
                          ", b=" + std::to_string(b));
    if (cell_size < 2)
        throw LayoutError("two-way layout needs cell size >= 2, got n=" +
                          std::to_string(cell_size));
    return Layout(LayoutKind::TwoWay, std::vector<int>(static_cast<std::size_t>(a * b), cell_size),
                  a, b);
}

int Layout::factor_a() const {
    if (kind_ != LayoutKind::TwoWay) throw LayoutError("factor_a: layout is not two-way");
    return a_;
}

int Layout::factor_b() const {
    if (kind_ != LayoutKind::TwoWay) throw LayoutError("factor_b: layout is not two-way");
    return b_;
}

int Layout::cell_size() const {
    if (kind_ != LayoutKind::TwoWay) throw LayoutError("cell_size: layout is not two-way");
    return sizes_.front();
}

Dataset::Dataset(Layout layout, std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != layout_.total())
        throw LayoutError("dataset has " + std::to_string(values_.size()) +
                          " values, layout expects " + std::to_string(layout_.total()));
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("dataset contains a non-finite value");
}

State::State(std::vector<double> means, double sigma) : means_(std::move(means)), sigma_(sigma) {
    if (means_.empty()) throw DomainError("state needs at least one mean");
    for (double m : means_)
        if (!std::isfinite(m)) throw DomainError("state mean is not finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw DomainError("state sigma must be positive and finite");
}

} // namespace anovakit
