#include "mot/gen.hpp"

#include "mot/checks.hpp"

namespace mot {

std::vector<Rat> gen_grid(int size) {
    if (size < 1) throw Error("gen_grid: size must be positive");
    long long capacity = 7;  // values in [-3,3] per key
    int keys = 1;
    while (capacity < size) {
        capacity *= 7;
        ++keys;
    }
    if (keys < 2) keys = 2;
    std::vector<Rat> grid;
    for (int k = 0; k < keys; ++k) grid.push_back(Rat(1, k + 2));  // 1/2, 1/3, ...
    return grid;
}

std::vector<USPoint> gen_us_points(std::uint64_t seed, int size) {
    return us_sample(seed, gen_grid(size), size);
}

FiniteMetricOrder gen_ulo(std::uint64_t seed, int size) {
    return us_export(gen_us_points(seed, size));
}

FiniteCyclicOrder gen_cyclic(std::uint64_t seed, int size) {
    return roll_up(gen_ulo(seed, size));
}

}  // namespace mot
