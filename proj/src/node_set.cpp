#include "ucg/node_set.hpp"

#include <bit>

#include "ucg/error.hpp"

namespace ucg {

NodeSet::NodeSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

NodeSet::NodeSet(std::size_t universe, std::initializer_list<NodeIndex> members) : NodeSet(universe) {
    for (NodeIndex v : members) insert(v);
}

NodeSet NodeSet::full(std::size_t universe) {
    NodeSet s(universe);
    for (NodeIndex v = 0; v < universe; ++v) s.insert(v);
    return s;
}

NodeSet NodeSet::from_indices(std::size_t universe, const std::vector<NodeIndex>& members) {
    NodeSet s(universe);
    for (NodeIndex v : members) s.insert(v);
    return s;
}

NodeSet NodeSet::from_mask(std::size_t universe, std::uint64_t mask) {
    if (universe > 64) throw Error(ErrorCode::InvalidArgument, "from_mask supports at most 64 nodes");
    NodeSet s(universe);
    if (universe > 0) {
        const std::uint64_t keep = universe == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << universe) - 1);
        s.words_[0] = mask & keep;
    }
    return s;
}

void NodeSet::insert(NodeIndex v) {
    if (v >= universe_) throw Error(ErrorCode::UnknownNode, "node index " + std::to_string(v) + " out of range");
    words_[v / 64] |= std::uint64_t{1} << (v % 64);
}

void NodeSet::erase(NodeIndex v) {
    if (v >= universe_) return;
    words_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
}

bool NodeSet::empty() const noexcept {
    for (auto w : words_)
        if (w != 0) return false;
    return true;
}

std::size_t NodeSet::size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<NodeIndex> NodeSet::members() const {
    std::vector<NodeIndex> out;
    out.reserve(size());
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
        std::uint64_t w = words_[wi];
        while (w != 0) {
            const int bit = std::countr_zero(w);
            out.push_back(wi * 64 + static_cast<std::size_t>(bit));
            w &= w - 1;
        }
    }
    return out;
}

bool NodeSet::is_subset_of(const NodeSet& other) const {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
}

bool NodeSet::intersects(const NodeSet& other) const {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
}

NodeSet& NodeSet::operator|=(const NodeSet& other) {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
}

NodeSet& NodeSet::operator&=(const NodeSet& other) {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

NodeSet& NodeSet::operator-=(const NodeSet& other) {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    return *this;
}

void NodeSet::check_same_universe(const NodeSet& other) const {
    if (universe_ != other.universe_)
        throw Error(ErrorCode::InvalidArgument, "node sets over different universes");
}

}  // namespace ucg
