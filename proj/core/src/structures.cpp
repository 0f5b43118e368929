#include "mot/structures.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mot {

std::optional<Rat> rat_parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(Int(text));
        }
        Int p(text.substr(0, slash));
        Int q(text.substr(slash + 1));
        if (q == 0) return std::nullopt;
        return Rat(p, q);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

namespace {

void validate_metric(const std::vector<std::string>& points,
                     const std::vector<std::vector<Rat>>& dist) {
    const int n = static_cast<int>(points.size());
    if (static_cast<int>(dist.size()) != n)
        throw Error("distance matrix size does not match point count");
    for (const auto& row : dist)
        if (static_cast<int>(row.size()) != n)
            throw Error("distance matrix is not square");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (dist[i][j] < 0 || dist[i][j] > 1)
                throw Error("distance out of [0,1]: d(" + points[i] + "," + points[j] + ")");
            if (dist[i][j] != dist[j][i])
                throw Error("distance matrix not symmetric at (" + points[i] + "," + points[j] + ")");
            if (i == j && dist[i][j] != 0)
                throw Error("nonzero diagonal at " + points[i]);
            if (i != j && dist[i][j] == 0)
                throw Error("distinct points at distance 0: " + points[i] + "," + points[j]);
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (dist[i][k] > dist[i][j] + dist[j][k])
                    throw Error("triangle inequality fails at (" + points[i] + "," +
                                points[j] + "," + points[k] + ")");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (points[i] == points[j]) throw Error("duplicate point name: " + points[i]);
}

}  // namespace

FiniteMetricOrder::FiniteMetricOrder(std::vector<std::string> points,
                                     std::vector<std::vector<Rat>> dist)
    : points_(std::move(points)), dist_(std::move(dist)) {
    validate_metric(points_, dist_);
}

std::optional<int> FiniteMetricOrder::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (points_[i] == name) return i;
    return std::nullopt;
}

FiniteCyclicOrder::FiniteCyclicOrder(std::vector<std::string> points,
                                     std::vector<std::vector<Rat>> dist,
                                     const std::vector<std::array<int, 3>>& ceq_triples)
    : points_(std::move(points)), dist_(std::move(dist)) {
    validate_metric(points_, dist_);
    const int n = size();
    ceq_.assign(static_cast<std::size_t>(n) * n * n, 0);
    // Reflexivity: every degenerate triple is in the relation.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (i == j || j == k || i == k) ceq_[at(i, j, k)] = 1;
    // Close the given triples under cyclicity.
    for (const auto& t : ceq_triples) {
        for (int v : t)
            if (v < 0 || v >= n) throw Error("ceq triple index out of range");
        ceq_[at(t[0], t[1], t[2])] = 1;
        ceq_[at(t[1], t[2], t[0])] = 1;
        ceq_[at(t[2], t[0], t[1])] = 1;
    }
    // Exhaustive nonstrict cyclic-order axiom check.
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const bool xyz = ceq_[at(x, y, z)];
                const bool xzy = ceq_[at(x, z, y)];
                if (!xyz && !xzy)
                    throw Error("ceq totality fails at (" + points_[x] + "," + points_[y] +
                                "," + points_[z] + ")");
                if (xyz && xzy && x != y && y != z && x != z)
                    throw Error("ceq antisymmetry fails at (" + points_[x] + "," +
                                points_[y] + "," + points_[z] + ")");
            }
    for (int w = 0; w < n; ++w)
        for (int x = 0; x < n; ++x)
            for (int z = 0; z < n; ++z) {
                if (!ceq_[at(w, x, z)]) continue;
                for (int y = 0; y < n; ++y)
                    if (!ceq_[at(w, x, y)] && !ceq_[at(w, y, z)])
                        throw Error("ceq transitivity fails at (" + points_[w] + "," +
                                    points_[x] + "," + points_[y] + "," + points_[z] + ")");
            }
}

int FiniteCyclicOrder::at(int i, int j, int k) const {
    const int n = size();
    return (i * n + j) * n + k;
}

bool FiniteCyclicOrder::ceq(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= size() || j >= size() || k >= size())
        throw Error("ceq index out of range");
    return ceq_[at(i, j, k)] != 0;
}

std::optional<int> FiniteCyclicOrder::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (points_[i] == name) return i;
    return std::nullopt;
}

std::vector<std::array<int, 3>> FiniteCyclicOrder::ceq_triples() const {
    std::vector<std::array<int, 3>> out;
    const int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (ceq_[at(i, j, k)]) out.push_back({i, j, k});
    return out;
}

// --- File formats ----------------------------------------------------------

namespace {

// Reads the shared n/order/d section of metric-order and cyclic-order files.
// Extra lines (e.g. "ceq") are returned untouched for the caller.
struct StructureFile {
    std::vector<std::string> points;
    std::vector<std::vector<Rat>> dist;
    std::vector<std::vector<std::string>> extra_lines;
};

StructureFile load_structure_body(std::istream& in, const std::string& header) {
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw Error("expected header '" + header + "'");

    StructureFile f;
    int n = -1;
    std::map<std::string, int> index;
    std::vector<std::vector<char>> seen;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;  // blank line
        if (key == "n") {
            if (!(ls >> n) || n < 0) throw Error("bad 'n' line");
        } else if (key == "order") {
            std::string name;
            while (ls >> name) f.points.push_back(name);
            if (n < 0 || static_cast<int>(f.points.size()) != n)
                throw Error("'order' line does not list exactly n names");
            for (int i = 0; i < n; ++i) index[f.points[i]] = i;
            f.dist.assign(n, std::vector<Rat>(n, Rat(0)));
            seen.assign(n, std::vector<char>(n, 0));
        } else if (key == "d") {
            std::string a, b, val;
            if (!(ls >> a >> b >> val)) throw Error("bad 'd' line: " + line);
            if (!index.count(a) || !index.count(b)) throw Error("unknown point in: " + line);
            auto r = rat_parse(val);
            if (!r) throw Error("bad rational in: " + line);
            int i = index[a], j = index[b];
            f.dist[i][j] = f.dist[j][i] = *r;
            seen[i][j] = seen[j][i] = 1;
        } else {
            std::vector<std::string> toks{key};
            std::string t;
            while (ls >> t) toks.push_back(t);
            f.extra_lines.push_back(std::move(toks));
        }
    }
    if (n < 0) throw Error("missing 'n' line");
    if (f.points.empty() && n > 0) throw Error("missing 'order' line");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!seen[i][j])
                throw Error("missing distance for pair (" + f.points[i] + "," + f.points[j] + ")");
    return f;
}

}  // namespace

FiniteMetricOrder load_metric_order(std::istream& in) {
    StructureFile f = load_structure_body(in, "metric-order v1");
    if (!f.extra_lines.empty())
        throw Error("unexpected line starting with '" + f.extra_lines[0][0] + "'");
    return FiniteMetricOrder(std::move(f.points), std::move(f.dist));
}

void save_metric_order(std::ostream& out, const FiniteMetricOrder& m) {
    out << "metric-order v1\n";
    out << "n " << m.size() << "\n";
    out << "order";
    for (const auto& p : m.names()) out << " " << p;
    out << "\n";
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j)
            out << "d " << m.name(i) << " " << m.name(j) << " " << rat_str(m.dist(i, j)) << "\n";
}

FiniteCyclicOrder load_cyclic_order(std::istream& in) {
    StructureFile f = load_structure_body(in, "cyclic-order v1");
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(f.points.size()); ++i) index[f.points[i]] = i;
    std::vector<std::array<int, 3>> triples;
    for (const auto& toks : f.extra_lines) {
        if (toks[0] != "ceq" || toks.size() != 4)
            throw Error("unexpected line starting with '" + toks[0] + "'");
        std::array<int, 3> t;
        for (int k = 0; k < 3; ++k) {
            auto it = index.find(toks[k + 1]);
            if (it == index.end()) throw Error("unknown point in ceq line: " + toks[k + 1]);
            t[k] = it->second;
        }
        triples.push_back(t);
    }
    return FiniteCyclicOrder(std::move(f.points), std::move(f.dist), triples);
}

void save_cyclic_order(std::ostream& out, const FiniteCyclicOrder& c) {
    out << "cyclic-order v1\n";
    out << "n " << c.size() << "\n";
    out << "order";
    for (const auto& p : c.names()) out << " " << p;
    out << "\n";
    for (int i = 0; i < c.size(); ++i)
        for (int j = i + 1; j < c.size(); ++j)
            out << "d " << c.name(i) << " " << c.name(j) << " " << rat_str(c.dist(i, j)) << "\n";
    // Degenerate triples are implied by reflexivity; emit only distinct ones.
    for (const auto& t : c.ceq_triples())
        if (t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
            out << "ceq " << c.name(t[0]) << " " << c.name(t[1]) << " " << c.name(t[2]) << "\n";
}

std::vector<Rat> load_pred(std::istream& in, const FiniteMetricOrder& m) {
    std::string line;
    if (!std::getline(in, line) || line != "pred v1") throw Error("expected header 'pred v1'");
    std::vector<Rat> values(m.size(), Rat(0));
    std::vector<char> seen(m.size(), 0);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string name, val;
        if (!(ls >> name)) continue;
        if (!(ls >> val)) throw Error("bad pred line: " + line);
        auto idx = m.index_of(name);
        if (!idx) throw Error("unknown point in pred file: " + name);
        auto r = rat_parse(val);
        if (!r || *r < 0 || *r > 1) throw Error("pred value not a rational in [0,1]: " + line);
        values[*idx] = *r;
        seen[*idx] = 1;
    }
    for (int i = 0; i < m.size(); ++i)
        if (!seen[i]) throw Error("missing pred value for point " + m.name(i));
    return values;
}

void save_pred(std::ostream& out, const FiniteMetricOrder& m, const std::vector<Rat>& values) {
    if (static_cast<int>(values.size()) != m.size())
        throw Error("pred value count does not match structure");
    out << "pred v1\n";
    for (int i = 0; i < m.size(); ++i)
        out << m.name(i) << " " << rat_str(values[i]) << "\n";
}

// --- Fixtures --------------------------------------------------------------

FiniteMetricOrder fixture_chain3() {
    std::vector<std::vector<Rat>> d(3, std::vector<Rat>(3, Rat(0)));
    d[0][1] = d[1][0] = rat(3, 10);
    d[1][2] = d[2][1] = rat(1, 2);
    d[0][2] = d[2][0] = rat(1, 2);
    return FiniteMetricOrder({"p0", "p1", "p2"}, d);
}

FiniteMetricOrder fixture_bad3() {
    std::vector<std::vector<Rat>> d(3, std::vector<Rat>(3, Rat(0)));
    d[0][1] = d[1][0] = rat(1, 2);
    d[1][2] = d[2][1] = rat(3, 10);
    d[0][2] = d[2][0] = rat(1, 5);
    return FiniteMetricOrder({"p0", "p1", "p2"}, d);
}

FiniteMetricOrder fixture_euc3() {
    std::vector<std::vector<Rat>> d(3, std::vector<Rat>(3, Rat(0)));
    d[0][1] = d[1][0] = rat(2, 5);
    d[1][2] = d[2][1] = rat(3, 5);
    d[0][2] = d[2][0] = rat(1, 1);
    return FiniteMetricOrder({"0", "2/5", "1"}, d);
}

}  // namespace mot
