#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <string>

namespace rwre {

inline constexpr int MAX_DIM = 6;

// Lattice site in Z^d, d <= MAX_DIM. Unused coordinates stay zero so that
// lexicographic comparison over the full array equals comparison over the
// first d entries for sites of equal dimension.
struct Site {
    std::array<std::int32_t, MAX_DIM> c{};

    Site() = default;
    Site(std::initializer_list<std::int32_t> xs) {
        int i = 0;
        for (auto v : xs) c[static_cast<std::size_t>(i++)] = v;
    }
    static Site unit(int axis, std::int32_t v = 1) {
        Site s;
        s.c[static_cast<std::size_t>(axis)] = v;
        return s;
    }

    std::int32_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    std::int32_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    friend Site operator+(const Site& a, const Site& b) {
        Site r;
        for (int i = 0; i < MAX_DIM; ++i) r.c[i] = a.c[i] + b.c[i];
        return r;
    }
    friend Site operator-(const Site& a, const Site& b) {
        Site r;
        for (int i = 0; i < MAX_DIM; ++i) r.c[i] = a.c[i] - b.c[i];
        return r;
    }
    Site shifted(int axis, std::int32_t dv) const {
        Site r = *this;
        r.c[static_cast<std::size_t>(axis)] += dv;
        return r;
    }

    auto operator<=>(const Site&) const = default;

    double norm2sq(int d) const {
        double s = 0;
        for (int i = 0; i < d; ++i) s += double(c[i]) * double(c[i]);
        return s;
    }
    double norm2(int d) const { return std::sqrt(norm2sq(d)); }
    long norm1(int d) const {
        long s = 0;
        for (int i = 0; i < d; ++i) s += std::labs(c[i]);
        return s;
    }
    std::string str(int d) const {
        std::string out = "(";
        for (int i = 0; i < d; ++i) {
            out += std::to_string(c[i]);
            if (i + 1 < d) out += ",";
        }
        return out + ")";
    }
};

}  // namespace rwre
