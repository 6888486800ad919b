#include "infocoh/partition.hpp"

#include <map>

namespace infocoh {

Partition::Partition(const std::vector<int>& labels) {
    std::map<int, int> relabel;
    assignment_.reserve(labels.size());
    for (int l : labels) {
        auto [it, inserted] = relabel.emplace(l, static_cast<int>(relabel.size()));
        assignment_.push_back(it->second);
    }
    blocks_ = relabel.size();
}

Partition Partition::trivial(std::size_t n) { return Partition(std::vector<int>(n, 0)); }

Partition Partition::points(std::size_t n) {
    std::vector<int> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<int>(i);
    return Partition(a);
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
    std::vector<std::vector<std::size_t>> out(blocks_);
    for (std::size_t i = 0; i < assignment_.size(); ++i) out[assignment_[i]].push_back(i);
    return out;
}

Partition canonical_partition(const std::vector<std::vector<std::size_t>>& blocks, std::size_t ground_size) {
    if (ground_size == 0) throw StructuralInputError("partition of an empty ground set");
    std::vector<int> labels(ground_size, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw StructuralInputError("empty block in partition");
        for (std::size_t p : blocks[b]) {
            if (p >= ground_size)
                throw StructuralInputError("point " + std::to_string(p) + " outside the ground set");
            if (labels[p] != -1)
                throw StructuralInputError("point " + std::to_string(p) + " lies in two blocks");
            labels[p] = static_cast<int>(b);
        }
    }
    for (std::size_t p = 0; p < ground_size; ++p)
        if (labels[p] == -1) throw StructuralInputError("point " + std::to_string(p) + " is not covered");
    return Partition(labels);
}

bool partition_refines(const Partition& x, const Partition& y) {
    if (x.ground_size() != y.ground_size()) throw StructuralInputError("ground size mismatch");
    std::vector<int> image(x.block_count(), -1);
    for (std::size_t i = 0; i < x.ground_size(); ++i) {
        int& img = image[x.block_of(i)];
        if (img == -1)
            img = y.block_of(i);
        else if (img != y.block_of(i))
            return false;
    }
    return true;
}

Partition partition_product(const Partition& x, const Partition& y) {
    if (x.ground_size() != y.ground_size()) throw StructuralInputError("ground size mismatch");
    std::vector<int> labels(x.ground_size());
    const int nb = static_cast<int>(y.block_count());
    for (std::size_t i = 0; i < x.ground_size(); ++i) labels[i] = x.block_of(i) * nb + y.block_of(i);
    return Partition(labels);
}

}  // namespace infocoh
