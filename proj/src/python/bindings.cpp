#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "padicjac/jacobian.hpp"
#include "padicjac/runner.hpp"

namespace py = pybind11;
using namespace padicjac;

namespace {

std::string padic_str(const Padic& x) { return padic_to_json(x).dump(); }

// Schottky group handle holding the parsed config.
class Group {
public:
    Group(long prime, long precision,
          const std::vector<std::vector<std::vector<std::string>>>& gens, int depth, int trunc)
        : prec_user_(precision), depth_(depth), trunc_(trunc) {
        std::vector<Moebius> ms;
        for (const auto& g : gens) {
            if (g.size() != 2 || g[0].size() != 2 || g[1].size() != 2)
                throw usage_error("generators must be 2x2 matrices of rational strings");
            std::array<BigRat, 4> m{parse_rational(g[0][0]), parse_rational(g[0][1]),
                                    parse_rational(g[1][0]), parse_rational(g[1][1])};
            ms.push_back(Moebius::from_rationals(prime, precision + 8, m));
        }
        G_ = std::make_unique<SchottkyGroup>(prime, precision + 8, std::move(ms));
        G_->set_default_depth(depth);
    }

    int genus() const { return G_->genus(); }

    std::vector<long> translation_lengths() const {
        std::vector<long> out;
        for (int i = 0; i < G_->genus(); ++i) out.push_back(G_->fixed(i).translation_length);
        return out;
    }

    size_t limit_set_size(int N) const { return G_->limit_set(N).size(); }

    py::dict graph() const {
        const QuotientGraphData& Q = G_->quotient(depth_);
        py::dict d;
        d["vertices"] = Q.graph.num_vertices();
        d["betti"] = Q.graph.betti();
        py::list edges;
        for (size_t e = 0; e < Q.graph.num_directed_edges(); e += 2)
            edges.append(py::make_tuple(Q.graph.src(static_cast<int>(e)),
                                        Q.graph.dst(static_cast<int>(e)),
                                        Q.graph.length(static_cast<int>(e))));
        d["edges"] = edges;
        return d;
    }

    std::vector<std::vector<long>> gram() const {
        G_->set_default_depth(depth_);
        return G_->gram_matrix();
    }

    long pairing(const std::vector<int>& w1, const std::vector<int>& w2) const {
        return G_->pairing_gamma(GroupWord(w1), GroupWord(w2));
    }

    py::dict periods(long digits) const {
        ThetaOptions opt;
        opt.trunc_cap = trunc_;
        opt.requested_digits = digits;
        PeriodMatrix P = period_matrix(*G_, opt);
        long shown = std::min(P.digits, prec_user_);
        py::dict d;
        py::list Q;
        for (int i = 0; i < P.g; ++i) {
            py::list row;
            for (int j = 0; j < P.g; ++j) row.append(padic_str(P.Q[i][j].truncated(shown)));
            Q.append(row);
        }
        d["Q"] = Q;
        d["gram"] = P.gram;
        d["digits"] = std::min(P.digits, prec_user_);
        return d;
    }

    std::vector<std::string> abel_jacobi_point(const std::string& z, const std::string& z0,
                                               long digits) const {
        ThetaOptions opt;
        opt.trunc_cap = trunc_;
        opt.requested_digits = digits;
        ProjPoint pz = parse_point(G_->prime(), G_->prec(), z);
        ProjPoint pz0 = parse_point(G_->prime(), G_->prec(), z0);
        TorusPoint t = abel_jacobi(*G_, pz, pz0, opt);
        std::vector<std::string> out;
        for (const auto& c : t.coords) out.push_back(padic_str(c.truncated(prec_user_)));
        return out;
    }

private:
    std::unique_ptr<SchottkyGroup> G_;
    long prec_user_;
    int depth_;
    int trunc_;
};

std::string run_json(const std::string& command, const std::string& config,
                     const py::kwargs& kwargs) {
    JobConfig cfg = parse_config_text(config);
    RunOptions opt;
    for (auto item : kwargs) {
        std::string key = py::cast<std::string>(item.first);
        if (key == "point")
            opt.point = py::cast<std::string>(item.second);
        else if (key == "base")
            opt.base = py::cast<std::string>(item.second);
        else if (key == "divisor")
            opt.divisor = py::cast<std::string>(item.second);
        else if (key == "at")
            opt.at = py::cast<std::string>(item.second);
        else if (key == "measure")
            opt.measure = py::cast<std::string>(item.second);
        else if (key == "depth")
            opt.depth = py::cast<int>(item.second);
        else if (key == "trunc")
            opt.trunc = py::cast<int>(item.second);
        else if (key == "digits")
            opt.digits = py::cast<long>(item.second);
        else
            throw usage_error("unknown option '" + key + "'");
    }
    return run_command(command, cfg, opt).dump();
}

long cross_ratio_valuation(long prime, const std::string& a1, const std::string& z1,
                           const std::string& a2, const std::string& z2) {
    long prec = 32;
    Padic cr = cross_ratio(parse_point(prime, prec, a1), parse_point(prime, prec, z1),
                           parse_point(prime, prec, a2), parse_point(prime, prec, z2));
    if (cr.is_zero()) throw usage_error("cross ratio vanishes to precision");
    return cr.valuation();
}

long apartment_pairing_py(long prime, const std::string& a1, const std::string& a2,
                          const std::string& z1, const std::string& z2) {
    long prec = 32;
    return apartment_pairing(parse_point(prime, prec, a1), parse_point(prime, prec, a2),
                             parse_point(prime, prec, z1), parse_point(prime, prec, z2));
}

} // namespace

PYBIND11_MODULE(_padicjac, m) {
    m.doc() = "p-adic Schottky groups: Bruhat-Tits trees, harmonic measures, "
              "theta periods, and the Abel-Jacobi map";

    py::register_exception<math_error>(m, "MathError");
    py::register_exception<usage_error>(m, "UsageError");

    py::class_<Group>(m, "Group")
        .def(py::init<long, long, const std::vector<std::vector<std::vector<std::string>>>&, int,
                      int>(),
             py::arg("prime"), py::arg("precision"), py::arg("generators"), py::arg("depth") = 3,
             py::arg("trunc") = 16)
        .def("genus", &Group::genus)
        .def("translation_lengths", &Group::translation_lengths)
        .def("limit_set_size", &Group::limit_set_size, py::arg("depth"))
        .def("graph", &Group::graph)
        .def("gram", &Group::gram)
        .def("pairing", &Group::pairing, py::arg("word1"), py::arg("word2"))
        .def("periods", &Group::periods, py::arg("digits") = 0)
        .def("abel_jacobi", &Group::abel_jacobi_point, py::arg("point"), py::arg("base"),
             py::arg("digits") = 0);

    m.def("run", &run_json, py::arg("command"), py::arg("config"),
          "Run a CLI command against a JSON config; returns the JSON result");
    m.def("cross_ratio_valuation", &cross_ratio_valuation, py::arg("prime"), py::arg("a1"),
          py::arg("z1"), py::arg("a2"), py::arg("z2"));
    m.def("apartment_pairing", &apartment_pairing_py, py::arg("prime"), py::arg("a1"),
          py::arg("a2"), py::arg("z1"), py::arg("z2"));
}
