// Python bindings for the main operations: spectral fields and norms,
// Diophantine margins, linear spectra, solver runs, and decay fitting.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/diophantine.hpp"
#include "mhdlab/linear_analysis.hpp"
#include "mhdlab/solver.hpp"

namespace py = pybind11;
using namespace mhdlab;

namespace {

SpectralField field_from_array(const Grid3& g, const py::array_t<double>& samples) {
    if (samples.size() != g.size())
        throw std::invalid_argument("sample array must hold n^3 values");
    const auto buf = samples.request();
    std::vector<double> v(static_cast<const double*>(buf.ptr),
                          static_cast<const double*>(buf.ptr) + g.size());
    return from_physical(g, v);
}

py::array_t<double> array_from_field(const SpectralField& f) {
    const std::vector<double> v = to_physical(f);
    py::array_t<double> out({f.grid.n, f.grid.n, f.grid.n});
    std::copy(v.begin(), v.end(), static_cast<double*>(out.request().ptr));
    return out;
}

Vec3 to_vec3(const std::array<double, 3>& v) { return {v[0], v[1], v[2]}; }

} // namespace

PYBIND11_MODULE(_mhdlab, m) {
    m.doc() = "pseudo-spectral MHD laboratory on the periodic box";

    py::class_<Grid3>(m, "Grid3")
        .def(py::init<int>(), py::arg("n"))
        .def_readonly("n", &Grid3::n)
        .def("dealias_cutoff", &Grid3::dealias_cutoff);

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init([](const Grid3& g, const py::array_t<double>& samples) {
                 return field_from_array(g, samples);
             }),
             py::arg("grid"), py::arg("samples"))
        .def("to_physical", &array_from_field)
        .def("sobolev_norm", [](const SpectralField& f, double s) { return sobolev_norm(f, s); })
        .def("l2_norm", [](const SpectralField& f) { return l2_norm(f); })
        .def("mean", [](const SpectralField& f) { return mean_value(f); });

    m.def("dealiased_product", &dealiased_product);
    m.def("lambda_pow", [](const SpectralField& f, double s) { return lambda_pow(f, s); });

    m.def(
        "dot_margin",
        [](const std::array<double, 3>& w, double r, int K) {
            const MarginEntry e = dot_margin(to_vec3(w), r, K);
            return py::make_tuple(e.margin, e.argmin);
        },
        py::arg("w"), py::arg("r"), py::arg("K"));
    m.def(
        "cross_margin",
        [](const std::array<double, 3>& w, double r, int K) {
            const MarginEntry e = cross_margin(to_vec3(w), r, K);
            return py::make_tuple(e.margin, e.argmin);
        },
        py::arg("w"), py::arg("r"), py::arg("K"));
    m.def("default_diophantine_w", &default_diophantine_w, py::arg("scale") = 1.0);

    m.def(
        "mode_eigenvalues",
        [](const std::array<int, 3>& k, const std::array<double, 3>& w, double beta, double nu) {
            const SpectrumReport rep = mode_spectrum(ModeSystem(k, to_vec3(w), beta, nu));
            std::vector<std::complex<double>> out;
            for (const auto& p : rep.pairs) out.push_back(p.lambda);
            return out;
        },
        py::arg("k"), py::arg("w"), py::arg("beta"), py::arg("nu") = 1.0);

    m.def(
        "decay_fit",
        [](const std::vector<double>& t, const std::vector<double>& e) {
            const DecayFit f = decay_fit(t, e);
            py::dict d;
            d["C"] = f.C;
            d["alpha"] = f.alpha;
            d["p"] = f.p;
            d["residual"] = f.residual;
            d["degenerate"] = f.degenerate;
            return d;
        },
        py::arg("t"), py::arg("e"));

    m.def(
        "run_decay",
        [](int n, double t_end, double amplitude, int kmax, std::uint64_t seed,
           const std::array<double, 3>& w, double gamma, double cadence) {
            const Grid3 grid(n);
            SolverConfig cfg(grid);
            cfg.t_end = t_end;
            cfg.w = to_vec3(w);
            cfg.pressure = make_gamma_law(gamma);
            cfg.output_cadence = cadence;
            InitSpec init;
            init.kind = InitSpec::Kind::random;
            init.amplitude = amplitude;
            init.kmax = kmax;
            init.seed = seed;
            const PerturbationState s0 = make_initial_state(grid, init);
            const RunResult res = run(cfg, s0);
            py::dict d;
            std::vector<double> t, e_phys, diss, h_energy;
            for (const auto& f : res.fine) {
                t.push_back(f.t);
                e_phys.push_back(f.e_phys);
                diss.push_back(f.dissipation);
                h_energy.push_back(f.h_energy);
            }
            d["completed"] = res.status == RunStatus::completed;
            d["t"] = t;
            d["E_phys"] = e_phys;
            d["dissipation"] = diss;
            d["h_energy"] = h_energy;
            d["steps"] = res.steps;
            d["dt"] = res.dt;
            return d;
        },
        py::arg("n") = 16, py::arg("t_end") = 1.0, py::arg("amplitude") = 1e-2,
        py::arg("kmax") = 1, py::arg("seed") = 20260808,
        py::arg("w") = std::array<double, 3>{2.0, 2.8284271247461903, 3.4641016151377544},
        py::arg("gamma") = 1.4, py::arg("cadence") = 0.1);
}
