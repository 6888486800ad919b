#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace infocoh {

class StructuralInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Set partition of {0..n-1} in restricted-growth form: block labels appear in
// order of first occurrence.
class Partition {
public:
    Partition() = default;
    // Relabels arbitrary block labels into canonical form.
    explicit Partition(const std::vector<int>& labels);

    static Partition trivial(std::size_t n);
    static Partition points(std::size_t n);

    std::size_t ground_size() const { return assignment_.size(); }
    std::size_t block_count() const { return blocks_; }
    int block_of(std::size_t point) const { return assignment_[point]; }
    const std::vector<int>& assignment() const { return assignment_; }
    std::vector<std::vector<std::size_t>> blocks() const;

    friend bool operator==(const Partition& a, const Partition& b) { return a.assignment_ == b.assignment_; }
    friend bool operator<(const Partition& a, const Partition& b) { return a.assignment_ < b.assignment_; }

private:
    std::vector<int> assignment_;
    std::size_t blocks_ = 0;
};

// blocks are 0-based point indices
Partition canonical_partition(const std::vector<std::vector<std::size_t>>& blocks, std::size_t ground_size);
bool partition_refines(const Partition& x, const Partition& y);
Partition partition_product(const Partition& x, const Partition& y);

}  // namespace infocoh

template <>
struct std::hash<infocoh::Partition> {
    std::size_t operator()(const infocoh::Partition& p) const noexcept {
        std::size_t h = p.ground_size();
        for (int a : p.assignment()) h = h * 31 + static_cast<std::size_t>(a);
        return h;
    }
};
