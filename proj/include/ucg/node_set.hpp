#ifndef UCG_NODE_SET_HPP
#define UCG_NODE_SET_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ucg {

using NodeIndex = std::size_t;

/// Fixed-universe set of node indices backed by a bitset.
///
/// All binary operators require both operands to share the same universe size.
/// Set expressions are written left to right (`a - b - c | d`), which together
/// with C++ operator precedence for `-` and `|` must be parenthesised explicitly
/// when mixing: `((a - b) - c) | d`.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe);
    NodeSet(std::size_t universe, std::initializer_list<NodeIndex> members);

    static NodeSet full(std::size_t universe);
    static NodeSet from_indices(std::size_t universe, const std::vector<NodeIndex>& members);

    std::size_t universe() const noexcept { return universe_; }

    bool contains(NodeIndex v) const noexcept {
        return v < universe_ && ((words_[v / 64] >> (v % 64)) & 1u) != 0;
    }
    void insert(NodeIndex v);
    void erase(NodeIndex v);

    bool empty() const noexcept;
    std::size_t size() const noexcept;
    std::vector<NodeIndex> members() const;

    bool is_subset_of(const NodeSet& other) const;
    bool intersects(const NodeSet& other) const;

    NodeSet& operator|=(const NodeSet& other);
    NodeSet& operator&=(const NodeSet& other);
    NodeSet& operator-=(const NodeSet& other);

    friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
    friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
    friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }

    friend bool operator==(const NodeSet& a, const NodeSet& b) {
        return a.universe_ == b.universe_ && a.words_ == b.words_;
    }
    friend bool operator<(const NodeSet& a, const NodeSet& b) {
        if (a.universe_ != b.universe_) return a.universe_ < b.universe_;
        return a.words_ < b.words_;
    }

    /// The set whose bit pattern equals `mask` (universe at most 64).
    static NodeSet from_mask(std::size_t universe, std::uint64_t mask);

private:
    void check_same_universe(const NodeSet& other) const;

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace ucg

#endif  // UCG_NODE_SET_HPP
