#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace htri {

// A permutation of {0,1,2,3}, used both for tetrahedron relabellings and
// for face gluing maps.  Kept as a plain image array; the 24 permutations
// are also addressable by a stable index (lexicographic rank) for
// serialisation.
class Perm4 {
public:
    constexpr Perm4() : img_{0, 1, 2, 3} {}
    constexpr Perm4(int a, int b, int c, int d) : img_{static_cast<uint8_t>(a), static_cast<uint8_t>(b), static_cast<uint8_t>(c), static_cast<uint8_t>(d)} {}

    constexpr int operator[](int i) const { return img_[i]; }

    constexpr bool is_valid() const {
        int seen = 0;
        for (int i = 0; i < 4; ++i) {
            if (img_[i] > 3) return false;
            seen |= 1 << img_[i];
        }
        return seen == 0xF;
    }

    constexpr Perm4 inverse() const {
        Perm4 r;
        for (int i = 0; i < 4; ++i) r.img_[img_[i]] = static_cast<uint8_t>(i);
        return r;
    }

    // (a * b)[i] = a[b[i]]  -- apply b first, then a.
    friend constexpr Perm4 operator*(const Perm4& a, const Perm4& b) {
        Perm4 r;
        for (int i = 0; i < 4; ++i) r.img_[i] = static_cast<uint8_t>(a.img_[b.img_[i]]);
        return r;
    }

    constexpr bool operator==(const Perm4& o) const { return img_ == o.img_; }
    constexpr bool operator!=(const Perm4& o) const { return !(*this == o); }
    constexpr bool operator<(const Perm4& o) const { return img_ < o.img_; }

    // +1 for even permutations, -1 for odd.
    constexpr int sign() const {
        int s = 1;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (img_[i] > img_[j]) s = -s;
        return s;
    }
    constexpr bool is_even() const { return sign() == 1; }

    // Lexicographic rank among all 24 permutations; inverse of from_index.
    constexpr int index() const {
        int idx = 0;
        for (int i = 0; i < 4; ++i) {
            int smaller = 0;
            for (int j = i + 1; j < 4; ++j)
                if (img_[j] < img_[i]) ++smaller;
            int fact = 1;
            for (int k = 2; k <= 3 - i; ++k) fact *= k;
            idx += smaller * fact;
        }
        return idx;
    }

    static constexpr Perm4 from_index(int idx) {
        bool used[4] = {false, false, false, false};
        Perm4 r;
        int fact[4] = {6, 2, 1, 1};
        for (int i = 0; i < 4; ++i) {
            int q = idx / fact[i];
            idx %= fact[i];
            for (int v = 0; v < 4; ++v) {
                if (used[v]) continue;
                if (q == 0) {
                    r.img_[i] = static_cast<uint8_t>(v);
                    used[v] = true;
                    break;
                }
                --q;
            }
        }
        return r;
    }

    // Transposition (a b).
    static constexpr Perm4 transposition(int a, int b) {
        Perm4 r;
        r.img_[a] = static_cast<uint8_t>(b);
        r.img_[b] = static_cast<uint8_t>(a);
        return r;
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < 4; ++i) s += static_cast<char>('0' + img_[i]);
        return s + ")";
    }

private:
    std::array<uint8_t, 4> img_;
};

}  // namespace htri
