#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace qastel {

/**
 * @brief Dense bitmap set over a fixed universe [0, n).
 *
 * Used for node sets (winning regions, co-Büchi regions) and edge sets
 * (unsafe/co-live edges, deleted edges). Keeps an element count so size()
 * is O(1).
 */
class DenseSet {
public:
    DenseSet() = default;
    explicit DenseSet(std::size_t universe, bool full = false)
        : bits_(universe, full ? 1 : 0), count_(full ? universe : 0) {}

    static DenseSet of(std::size_t universe, std::initializer_list<std::uint32_t> ids) {
        DenseSet s(universe);
        for (auto id : ids) {
            s.insert(id);
        }
        return s;
    }

    template <typename Range>
    static DenseSet from(std::size_t universe, const Range& ids) {
        DenseSet s(universe);
        for (auto id : ids) {
            s.insert(static_cast<std::uint32_t>(id));
        }
        return s;
    }

    std::size_t universe() const { return bits_.size(); }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    bool full() const { return count_ == bits_.size(); }

    bool contains(std::uint32_t id) const { return id < bits_.size() && bits_[id] != 0; }

    void insert(std::uint32_t id) {
        check(id);
        if (bits_[id] == 0) {
            bits_[id] = 1;
            ++count_;
        }
    }

    void erase(std::uint32_t id) {
        check(id);
        if (bits_[id] != 0) {
            bits_[id] = 0;
            --count_;
        }
    }

    std::vector<std::uint32_t> members() const {
        std::vector<std::uint32_t> out;
        out.reserve(count_);
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i] != 0) {
                out.push_back(static_cast<std::uint32_t>(i));
            }
        }
        return out;
    }

    DenseSet complement() const {
        DenseSet out(universe());
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i] == 0) {
                out.bits_[i] = 1;
                ++out.count_;
            }
        }
        return out;
    }

    DenseSet& intersect_with(const DenseSet& other) {
        same_universe(other);
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i] != 0 && other.bits_[i] == 0) {
                bits_[i] = 0;
                --count_;
            }
        }
        return *this;
    }

    DenseSet& unite_with(const DenseSet& other) {
        same_universe(other);
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i] == 0 && other.bits_[i] != 0) {
                bits_[i] = 1;
                ++count_;
            }
        }
        return *this;
    }

    DenseSet& subtract(const DenseSet& other) {
        same_universe(other);
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i] != 0 && other.bits_[i] != 0) {
                bits_[i] = 0;
                --count_;
            }
        }
        return *this;
    }

    bool is_subset_of(const DenseSet& other) const {
        same_universe(other);
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i] != 0 && other.bits_[i] == 0) {
                return false;
            }
        }
        return true;
    }

    friend DenseSet operator&(DenseSet a, const DenseSet& b) { return a.intersect_with(b); }
    friend DenseSet operator|(DenseSet a, const DenseSet& b) { return a.unite_with(b); }
    friend DenseSet operator-(DenseSet a, const DenseSet& b) { return a.subtract(b); }
    friend bool operator==(const DenseSet& a, const DenseSet& b) { return a.bits_ == b.bits_; }

    friend std::ostream& operator<<(std::ostream& os, const DenseSet& s) {
        os << '{';
        bool first = true;
        for (auto id : s.members()) {
            os << (first ? "" : ",") << id;
            first = false;
        }
        return os << '}';
    }

private:
    void check(std::uint32_t id) const {
        if (id >= bits_.size()) {
            throw std::out_of_range("DenseSet: id outside universe");
        }
    }
    void same_universe(const DenseSet& other) const {
        if (other.universe() != universe()) {
            throw std::invalid_argument("DenseSet: universe mismatch");
        }
    }

    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

using NodeSet = DenseSet;
using EdgeSet = DenseSet;

} // namespace qastel
