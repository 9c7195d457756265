#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace scanplan {

/// Fixed-size bitset sized at runtime; one row of the coverage matrix.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t(1) << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (const std::uint64_t w : words_) n += std::size_t(std::popcount(w));
        return n;
    }

    bool any() const {
        for (const std::uint64_t w : words_) {
            if (w) return true;
        }
        return false;
    }

    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    bool operator==(const Bitset& o) const { return size_ == o.size_ && words_ == o.words_; }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace scanplan
