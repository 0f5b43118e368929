#include "mot/urysohn.hpp"

#include <algorithm>
#include <sstream>

#include "mot/rng.hpp"

namespace mot {

USPoint us_normalize(std::map<Rat, long long> support) {
    for (auto it = support.begin(); it != support.end();) {
        if (it->first <= 0 || it->first > 1) throw Error("USPoint key outside (0,1]");
        it = it->second == 0 ? support.erase(it) : std::next(it);
    }
    return USPoint{std::move(support)};
}

Rat us_distance(const USPoint& f, const USPoint& g) {
    Rat best(0);
    for (const auto& [s, v] : f.support)
        if (g.value_at(s) != v) best = std::max(best, s);
    for (const auto& [s, v] : g.support)
        if (f.value_at(s) != v) best = std::max(best, s);
    return best;
}

int us_compare(const USPoint& f, const USPoint& g) {
    const Rat s = us_distance(f, g);
    if (s == 0) return 0;
    return f.value_at(s) < g.value_at(s) ? -1 : 1;
}

USPoint us_make_at(const USPoint& f, const Rat& s, Side side) {
    if (s <= 0 || s > 1) throw Error("us_make_at: s outside (0,1]");
    auto support = f.support;
    support[s] = f.value_at(s) + (side == Side::above ? 1 : -1);
    return us_normalize(std::move(support));
}

std::vector<USPoint> us_sample(std::uint64_t seed, const std::vector<Rat>& grid,
                               int count) {
    if (grid.empty()) throw Error("us_sample: empty support grid");
    for (const auto& s : grid)
        if (s <= 0 || s > 1) throw Error("us_sample: grid value outside (0,1]");
    SplitMix64 rng(seed);
    std::vector<USPoint> out;
    while (static_cast<int>(out.size()) < count) {
        std::map<Rat, long long> support;
        for (const auto& s : grid) {
            const long long v = rng.range(-3, 3);
            if (v != 0) support[s] = v;
        }
        USPoint p = us_normalize(std::move(support));
        const bool duplicate =
            std::any_of(out.begin(), out.end(), [&](const USPoint& q) { return q == p; });
        if (!duplicate) out.push_back(std::move(p));
    }
    return out;
}

FiniteMetricOrder us_export(const std::vector<USPoint>& points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw Error("us_export: duplicate points");
    std::vector<USPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const USPoint& a, const USPoint& b) { return us_compare(a, b) < 0; });
    const int n = static_cast<int>(sorted.size());
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("u" + std::to_string(i));
    std::vector<std::vector<Rat>> dist(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = us_distance(sorted[i], sorted[j]);
    return FiniteMetricOrder(std::move(names), std::move(dist));
}

std::string us_str(const USPoint& f) {
    if (f.support.empty()) return "{}";
    std::ostringstream out;
    out << "{ ";
    bool first = true;
    for (auto it = f.support.rbegin(); it != f.support.rend(); ++it) {
        if (!first) out << ", ";
        first = false;
        out << rat_str(it->first) << ":" << it->second;
    }
    out << " }";
    return out.str();
}

USPoint us_parse(const std::string& text) {
    std::string body = text;
    auto lb = body.find('{');
    auto rb = body.rfind('}');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb)
        throw Error("USPoint literal must be wrapped in { }");
    body = body.substr(lb + 1, rb - lb - 1);
    std::map<Rat, long long> support;
    std::istringstream in(body);
    std::string entry;
    while (std::getline(in, entry, ',')) {
        std::string trimmed;
        for (char ch : entry)
            if (!isspace(static_cast<unsigned char>(ch))) trimmed += ch;
        if (trimmed.empty()) continue;
        auto colon = trimmed.find(':');
        if (colon == std::string::npos) throw Error("bad USPoint entry: " + entry);
        auto key = rat_parse(trimmed.substr(0, colon));
        if (!key) throw Error("bad USPoint key in: " + entry);
        try {
            support[*key] = std::stoll(trimmed.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error("bad USPoint value in: " + entry);
        }
    }
    return us_normalize(std::move(support));
}

}  // namespace mot
