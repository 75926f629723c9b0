#include "hybridspin/field_io.hpp"

#include <fstream>
#include <sstream>

namespace hybridspin {

namespace {

struct Header {
    int nt = 0, np = 0;
    std::string kind;
};

void write_header(std::ostream& os, const SphereGrid& g, const char* kind) {
    os << "# hybridspin-field v1, n_theta=" << g.n_theta() << ", n_phi=" << g.n_phi()
       << ", kind=" << kind << "\n";
}

Header parse_header(const std::string& line) {
    Header h;
    auto get = [&](const std::string& key) -> std::string {
        const auto pos = line.find(key + "=");
        if (pos == std::string::npos)
            throw ConfigError("snapshot header missing '" + key + "': " + line);
        auto end = line.find_first_of(", \n", pos + key.size() + 1);
        return line.substr(pos + key.size() + 1, end - pos - key.size() - 1);
    };
    if (line.rfind("# hybridspin-field v1", 0) != 0)
        throw ConfigError("not a hybridspin field snapshot: " + line);
    h.nt = std::stoi(get("n_theta"));
    h.np = std::stoi(get("n_phi"));
    h.kind = get("kind");
    return h;
}

}  // namespace

void write_snapshot(std::ostream& os, const ModelState& s) {
    os.precision(17);
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, ClassicalDensityState>) {
                write_header(os, *st.rho.grid, "real");
                for (const double x : st.rho.v) os << x << "\n";
            } else if constexpr (std::is_same_v<T, KoopmanState>) {
                write_header(os, *st.chi.grid, "complex");
                for (const complexd x : st.chi.v) os << x.real() << "," << x.imag() << "\n";
            } else if constexpr (std::is_same_v<T, HybridSpinorState>) {
                write_header(os, *st.upsilon.grid, "spinor");
                for (const Spinor2& p : st.upsilon.v)
                    os << p.c0.real() << "," << p.c0.imag() << "," << p.c1.real() << ","
                       << p.c1.imag() << "\n";
            } else if constexpr (std::is_same_v<T, FactoredState>) {
                write_header(os, *st.rho.grid, "factored");
                for (std::size_t k = 0; k < st.rho.v.size(); ++k) {
                    const Spinor2& p = st.psi.v[k];
                    os << st.rho.v[k] << "," << p.c0.real() << "," << p.c0.imag() << ","
                       << p.c1.real() << "," << p.c1.imag() << "\n";
                }
            } else {
                write_header(os, *st.P.grid, "hermitian");
                for (const HermitianOp2& a : st.P.v)
                    os << a.a0 << "," << a.a.x << "," << a.a.y << "," << a.a.z << "\n";
            }
        },
        s);
}

void write_snapshot(const std::string& path, const ModelState& s) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open snapshot file '" + path + "' for writing");
    write_snapshot(os, s);
}

ModelState read_snapshot(std::istream& is, const SphereGrid& g) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty snapshot");
    const Header h = parse_header(line);
    if (h.nt != g.n_theta() || h.np != g.n_phi())
        throw ConfigError("snapshot grid " + std::to_string(h.nt) + "x" + std::to_string(h.np) +
                          " does not match " + std::to_string(g.n_theta()) + "x" +
                          std::to_string(g.n_phi()));
    const int n = g.node_count();
    auto next_row = [&](int expected) {
        if (!std::getline(is, line)) throw ConfigError("snapshot truncated");
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (static_cast<int>(vals.size()) != expected)
            throw ConfigError("snapshot row has " + std::to_string(vals.size()) +
                              " values, expected " + std::to_string(expected));
        return vals;
    };
    if (h.kind == "real") {
        ClassicalDensityState st{RealField(g)};
        for (int k = 0; k < n; ++k) st.rho.v[k] = next_row(1)[0];
        return st;
    }
    if (h.kind == "complex") {
        KoopmanState st{ComplexField(g)};
        for (int k = 0; k < n; ++k) {
            auto r = next_row(2);
            st.chi.v[k] = {r[0], r[1]};
        }
        return st;
    }
    if (h.kind == "spinor") {
        HybridSpinorState st{SpinorField(g)};
        for (int k = 0; k < n; ++k) {
            auto r = next_row(4);
            st.upsilon.v[k] = {{r[0], r[1]}, {r[2], r[3]}};
        }
        return st;
    }
    if (h.kind == "factored") {
        FactoredState st{RealField(g), SpinorField(g)};
        for (int k = 0; k < n; ++k) {
            auto r = next_row(5);
            st.rho.v[k] = r[0];
            st.psi.v[k] = {{r[1], r[2]}, {r[3], r[4]}};
        }
        return st;
    }
    if (h.kind == "hermitian") {
        HybridDensityState st{OpField(g)};
        for (int k = 0; k < n; ++k) {
            auto r = next_row(4);
            st.P.v[k] = {r[0], {r[1], r[2], r[3]}};
        }
        return st;
    }
    throw ConfigError("unknown snapshot kind '" + h.kind + "'");
}

ModelState read_snapshot(const std::string& path, const SphereGrid& g) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open snapshot file '" + path + "'");
    return read_snapshot(is, g);
}

}  // namespace hybridspin
