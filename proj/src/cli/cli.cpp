#include "cimmino/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cimmino/error.hpp"
#include "cimmino/io.hpp"
#include "cimmino/solver.hpp"
#include "cimmino/spherequad.hpp"
#include "cimmino/theta.hpp"
#include "cimmino/zeta.hpp"

namespace cimmino {

namespace {

using io::Json;

enum Exit : int { kOk = 0, kRuntime = 1, kValidation = 2, kPole = 3, kCheckFailed = 4, kSingular = 5 };

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::Validation, what); }

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::NotSymmetric:
        case ErrorKind::NotPositiveDefinite:
        case ErrorKind::InvalidArgument:
        case ErrorKind::OutsideConvergence:
        case ErrorKind::NonPositiveX:
        case ErrorKind::DegenerateGrid:
            return kValidation;
        case ErrorKind::TooCloseToPole:
        case ErrorKind::PoleOfGamma:
            return kPole;
        case ErrorKind::SingularMatrix:
            return kSingular;
        case ErrorKind::NumericalInconsistency:
            return kCheckFailed;
        default:
            return kRuntime;
    }
}

// ---------------------------------------------------------------------------
// Input file

constexpr const char* kInputKeys[] = {"A", "Q", "B", "b", "c", "lattice", "s", "s_list", "s_range", "t", "t_list",
                                      "route", "quadrature", "tolerance", "bound_override", "cases", "repeat"};

struct Input {
    std::optional<Matrix> A;
    std::optional<SymMatrix> Q;
    std::optional<SymMatrix> B;
    std::optional<Vector> b;
    std::optional<Vector> c;
    std::optional<Matrix> lattice;
    std::vector<Complex> s;
    bool has_range = false;
    double range_step = 0.0;
    std::vector<double> t;
    std::optional<std::string> route;
    std::optional<QuadratureSpec> quadrature;
    std::optional<double> tolerance;
    std::optional<double> bound_override;
    std::optional<Json> cases;
    int repeat = 3;
};

std::vector<Complex> parse_range(const Json& j, double& step) {
    if (!j.is_object()) invalid("s_range must be an object");
    for (const auto& [k, v] : j.items())
        if (k != "start" && k != "end" && k != "steps") invalid("unknown field '" + k + "' in s_range");
    if (!j.contains("start") || !j.contains("end") || !j.contains("steps")) invalid("s_range needs start, end, steps");
    if (!j["steps"].is_number_integer() || j["steps"].get<long long>() < 1) invalid("s_range steps must be >= 1");
    const auto steps = j["steps"].get<long long>();
    if (steps > 1000000) invalid("s_range steps too large");
    const Complex a = io::complex_from_json(j["start"]);
    const Complex e = io::complex_from_json(j["end"]);
    if (steps == 1 && a != e) invalid("s_range with one step needs start == end");
    std::vector<Complex> out;
    step = steps > 1 ? std::abs(e - a) / static_cast<double>(steps - 1) : 0.0;
    for (long long k = 0; k < steps; ++k)
        out.push_back(steps == 1 ? a : a + (e - a) * (static_cast<double>(k) / static_cast<double>(steps - 1)));
    return out;
}

void parse_fields(const Json& j, Input& in, bool allow_cases) {
    if (!j.is_object()) invalid("input must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* key : kInputKeys) known = known || k == key;
        if (!known) invalid("unknown field '" + k + "'");
    }
    if (j.contains("A")) in.A = io::matrix_from_json(j["A"]);
    if (j.contains("Q")) in.Q = SymMatrix(io::matrix_from_json(j["Q"]));
    if (j.contains("B")) in.B = SymMatrix(io::matrix_from_json(j["B"]));
    if (j.contains("b")) in.b = io::vector_from_json(j["b"]);
    if (j.contains("c")) in.c = io::vector_from_json(j["c"]);
    if (j.contains("lattice")) in.lattice = io::matrix_from_json(j["lattice"]);
    const int s_fields = int(j.contains("s")) + int(j.contains("s_list")) + int(j.contains("s_range"));
    if (s_fields > 1) invalid("give only one of s, s_list, s_range");
    if (j.contains("s")) in.s.push_back(io::complex_from_json(j["s"]));
    if (j.contains("s_list")) {
        if (!j["s_list"].is_array() || j["s_list"].empty()) invalid("s_list must be a non-empty array");
        for (const auto& x : j["s_list"]) in.s.push_back(io::complex_from_json(x));
    }
    if (j.contains("s_range")) {
        in.s = parse_range(j["s_range"], in.range_step);
        in.has_range = true;
    }
    auto positive = [](const Json& x, const char* what) {
        if (!x.is_number() || !(x.get<double>() > 0.0) || !std::isfinite(x.get<double>()))
            invalid(std::string(what) + " must be a positive number");
        return x.get<double>();
    };
    if (j.contains("t") && j.contains("t_list")) invalid("give only one of t, t_list");
    if (j.contains("t")) in.t.push_back(positive(j["t"], "t"));
    if (j.contains("t_list")) {
        if (!j["t_list"].is_array() || j["t_list"].empty()) invalid("t_list must be a non-empty array");
        for (const auto& x : j["t_list"]) in.t.push_back(positive(x, "t"));
    }
    if (j.contains("route")) {
        if (!j["route"].is_string()) invalid("route must be a string");
        in.route = j["route"].get<std::string>();
    }
    if (j.contains("quadrature")) in.quadrature = io::quadrature_from_json(j["quadrature"]);
    if (j.contains("tolerance")) {
        const double tol = positive(j["tolerance"], "tolerance");
        if (tol < 1e-14 || tol > 1e-2) invalid("tolerance must lie in [1e-14, 1e-2]");
        in.tolerance = tol;
    }
    if (j.contains("bound_override")) in.bound_override = positive(j["bound_override"], "bound_override");
    if (j.contains("cases")) {
        if (!allow_cases) invalid("nested 'cases' are not allowed");
        if (!j["cases"].is_array() || j["cases"].empty()) invalid("cases must be a non-empty array");
        in.cases = j["cases"];
    }
    if (j.contains("repeat")) {
        if (!j["repeat"].is_number_integer() || j["repeat"].get<long long>() < 1 || j["repeat"].get<long long>() > 1000)
            invalid("repeat must be an integer in [1, 1000]");
        in.repeat = static_cast<int>(j["repeat"].get<long long>());
    }
}

Json load_json(const std::string& path) {
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream f(path);
        if (!f) invalid("cannot open input file '" + path + "'");
        ss << f.rdbuf();
    }
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        invalid(std::string("malformed JSON: ") + e.what());
    }
}

Input load_input(const std::string& path) {
    Input in;
    if (!path.empty()) parse_fields(load_json(path), in, true);
    return in;
}

const SymMatrix& need(const std::optional<SymMatrix>& m, const char* name) {
    if (!m) invalid(std::string("input needs '") + name + "'");
    return *m;
}
const Matrix& need(const std::optional<Matrix>& m, const char* name) {
    if (!m) invalid(std::string("input needs '") + name + "'");
    return *m;
}
const Vector& need(const std::optional<Vector>& v, const char* name) {
    if (!v) invalid(std::string("input needs '") + name + "'");
    return *v;
}
const std::vector<Complex>& need_s(const Input& in) {
    if (in.s.empty()) invalid("input needs one of s, s_list, s_range");
    return in.s;
}

Lattice lattice_of(const Input& in, std::size_t n) {
    if (!in.lattice) return Lattice::integer(n);
    if (in.lattice->dim() != n) invalid("lattice dimension does not match Q");
    return Lattice(*in.lattice);
}

// ---------------------------------------------------------------------------
// zeta / scan

struct ZetaFamily {
    std::function<std::vector<ZetaValue>(Complex)> eval;
    double pole;
    bool vector;
};

ZetaFamily zeta_family(const Input& in, bool direct, double tol) {
    if (in.b) {
        const Matrix a = need(in.A, "A");
        const Vector b = *in.b;
        if (b.size() != a.dim()) invalid("b dimension does not match A");
        return {[a, b, direct, tol](Complex s) {
                    return direct ? vector_zeta_direct(a, b, s, tol) : vector_zeta(a, b, s);
                },
                0.5 * static_cast<double>(a.dim()) + 1.0, true};
    }
    const SymMatrix q = need(in.Q, "Q");
    const std::size_t n = q.dim();
    const Lattice lat = lattice_of(in, n);
    const SPDForm form = cholesky(q);
    const double h = 0.5 * static_cast<double>(n);
    if (in.B) {
        const SymMatrix bm = *in.B;
        if (bm.dim() != n) invalid("B dimension does not match Q");
        if (direct) {
            const SPDForm g = cholesky(gram_transform(q, lat.gen()));
            const SymMatrix gb = gram_transform(bm, lat.gen());
            return {[g, gb, tol](Complex s) { return std::vector<ZetaValue>{weighted_direct(g, gb, s, tol)}; }, h + 1.0,
                    false};
        }
        return {[lat, form, bm](Complex s) { return std::vector<ZetaValue>{lattice_weighted_zeta(lat, form, bm, s)}; },
                h + 1.0, false};
    }
    if (direct) {
        const SPDForm g = cholesky(gram_transform(q, lat.gen()));
        return {[g, tol](Complex s) { return std::vector<ZetaValue>{epstein_direct(g, s, tol)}; }, h, false};
    }
    return {[lat, form](Complex s) { return std::vector<ZetaValue>{lattice_zeta(lat, form, s)}; }, h, false};
}

bool direct_route(const Input& in) {
    if (!in.route || *in.route == "continued") return false;
    if (*in.route == "direct") return true;
    invalid("zeta route must be 'continued' or 'direct'");
}

int cmd_zeta(const Input& in, const std::string& format, std::ostream& out) {
    const double tol = in.tolerance.value_or(1e-12);
    const ZetaFamily fam = zeta_family(in, direct_route(in), tol);
    const bool csv = format == "csv";
    if (csv) out << (fam.vector ? "re_s,im_s,component,re_zeta,im_zeta,abs_err\n" : "re_s,im_s,re_zeta,im_zeta,abs_err\n");
    for (const Complex s : need_s(in)) {
        const auto vals = fam.eval(s);
        if (csv) {
            for (std::size_t j = 0; j < vals.size(); ++j) {
                out << fmt17(s.real()) << ',' << fmt17(s.imag()) << ',';
                if (fam.vector) out << j << ',';
                out << fmt17(vals[j].value.real()) << ',' << fmt17(vals[j].value.imag()) << ','
                    << fmt17(vals[j].abs_error) << '\n';
            }
            continue;
        }
        Json rec;
        rec["s"] = io::to_json(s);
        if (fam.vector) {
            Json comps = Json::array();
            for (const auto& v : vals)
                comps.push_back({{"value_re", v.value.real()}, {"value_im", v.value.imag()}, {"abs_error", v.abs_error}});
            rec["components"] = comps;
        } else {
            rec["value_re"] = vals[0].value.real();
            rec["value_im"] = vals[0].value.imag();
            rec["abs_error"] = vals[0].abs_error;
        }
        out << rec.dump() << '\n';
    }
    return kOk;
}

int cmd_scan(const Input& in, std::ostream& out) {
    if (!in.has_range) invalid("scan needs s_range");
    const ZetaFamily fam = zeta_family(in, false, 0.0);
    if (fam.vector) invalid("scan evaluates scalar zeta functions; drop b");
    out << "re_s,im_s,re_zeta,im_zeta,abs_err,flag\n";
    for (const Complex s : in.s) {
        out << fmt17(s.real()) << ',' << fmt17(s.imag()) << ',';
        const double dist = std::abs(s - fam.pole);
        if (dist <= tol::pole_exclusion) {
            out << ",,,pole\n";
            continue;
        }
        const ZetaValue v = fam.eval(s)[0];
        const bool near = in.range_step > 0.0 && dist < 0.5 * in.range_step;
        out << fmt17(v.value.real()) << ',' << fmt17(v.value.imag()) << ',' << fmt17(v.abs_error) << ','
            << (near ? "near_pole" : "ok") << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// theta

int cmd_theta(const Input& in, const std::string& format, std::ostream& out) {
    const SPDForm form = cholesky(need(in.Q, "Q"));
    if (in.t.empty()) invalid("theta needs t or t_list");
    const double tol = in.tolerance.value_or(1e-12);
    const bool csv = format == "csv";
    if (csv) out << (in.B ? "t,value\n" : "t,value,transform_residual\n");
    for (double t : in.t) {
        const double v = in.B ? theta_star_weighted(form, *in.B, t, tol) : theta_star_gaussian(form, t, tol);
        std::optional<double> resid;
        if (!in.B && t >= 0.01 && t <= 100.0) resid = theta_transform_residual(form, t);
        if (csv) {
            out << fmt17(t) << ',' << fmt17(v);
            if (!in.B) out << ',' << (resid ? fmt17(*resid) : "");
            out << '\n';
            continue;
        }
        Json rec{{"t", t}, {"value", v}, {"tolerance", tol}};
        if (resid) rec["transform_residual"] = *resid;
        out << rec.dump() << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// residue

Json complex_list(const std::vector<Complex>& v) {
    Json a = Json::array();
    for (const auto& z : v) a.push_back(io::to_json(z));
    return a;
}

int cmd_residue(const Input& in, std::ostream& out) {
    PoleReport analytic, numeric;
    if (in.b) {
        const Matrix a = need(in.A, "A");
        const Vector b = *in.b;
        analytic = residue_vector(a, b);
        numeric = residue_numeric(
            [&](Complex s) {
                std::vector<Complex> r;
                for (const auto& z : vector_zeta(a, b, s)) r.push_back(z.value);
                return r;
            },
            analytic.location);
    } else {
        const SymMatrix q = need(in.Q, "Q");
        const SPDForm form = cholesky(q);
        const Lattice lat = lattice_of(in, q.dim());
        if (in.B) {
            analytic = residue_weighted(lat, form, *in.B);
            numeric = residue_numeric(
                [&](Complex s) { return std::vector<Complex>{lattice_weighted_zeta(lat, form, *in.B, s).value}; },
                analytic.location);
        } else {
            analytic = residue_epstein(lat, form);
            numeric = residue_numeric([&](Complex s) { return std::vector<Complex>{lattice_zeta(lat, form, s).value}; },
                                      analytic.location);
        }
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < analytic.residue.size(); ++j)
        diff = std::max(diff, std::abs(analytic.residue[j] - numeric.residue[j]));
    Json rec{{"location", analytic.location},
             {"analytic", complex_list(analytic.residue)},
             {"numeric", complex_list(numeric.residue)},
             {"difference", diff}};
    out << rec.dump() << '\n';
    if (in.tolerance && diff > *in.tolerance) return kCheckFailed;
    return kOk;
}

// ---------------------------------------------------------------------------
// funceq

FuncEqResidual funceq_for(const Input& in, Complex s) {
    if (in.b || in.c) {
        const Matrix a = need(in.A, "A");
        return funceq_residual_vector(a, need(in.b, "b"), need(in.c, "c"), s);
    }
    const SymMatrix q = need(in.Q, "Q");
    const SPDForm form = cholesky(q);
    const Lattice lat = lattice_of(in, q.dim());
    if (in.B) return funceq_residual_weighted(lat, form, *in.B, s);
    return funceq_residual_lattice(lat, form, s);
}

int cmd_funceq(const Input& in, const std::string& format, std::ostream& out) {
    const bool csv = format == "csv";
    if (csv) out << "re_s,im_s,re_lhs,im_lhs,re_rhs,im_rhs,residual\n";
    bool failed = false;
    for (const Complex s : need_s(in)) {
        const FuncEqResidual r = funceq_for(in, s);
        if (in.tolerance && r.residual > *in.tolerance) failed = true;
        if (csv) {
            out << fmt17(s.real()) << ',' << fmt17(s.imag()) << ',' << fmt17(r.lhs.real()) << ','
                << fmt17(r.lhs.imag()) << ',' << fmt17(r.rhs.real()) << ',' << fmt17(r.rhs.imag()) << ','
                << fmt17(r.residual) << '\n';
            continue;
        }
        Json rec{{"s", io::to_json(s)}, {"lhs", io::to_json(r.lhs)}, {"rhs", io::to_json(r.rhs)}, {"residual", r.residual}};
        out << rec.dump() << '\n';
    }
    return failed ? kCheckFailed : kOk;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const Input& in, std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
    const Matrix a = need(in.A, "A");
    const Vector b = need(in.b, "b");
    if (b.size() != a.dim()) invalid("b dimension does not match A");
    const std::string route = in.route.value_or("residues");
    SolveReport rep;
    double default_tol = 1e-10;
    if (route == "residues") {
        if (in.quadrature) invalid("quadrature applies only to the integrals route");
        rep = solve_via_residues(a, b);
    } else if (route == "numeric_residues") {
        if (in.quadrature) invalid("quadrature applies only to the integrals route");
        rep = numeric_residue_solve(a, b);
        default_tol = 1e-7;
    } else if (route == "integrals") {
        QuadratureSpec spec = in.quadrature.value_or(suggested_quadrature(a));
        if (seed) spec.seed = *seed;
        rep = solve_via_integrals(a, b, spec);
        default_tol = spec.method == QuadMethod::monte_carlo ? 1e-2 : 1e-8;
    } else {
        invalid("route must be residues, integrals or numeric_residues");
    }
    for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
    const double tol = in.tolerance.value_or(default_tol);
    Json j = io::to_json(rep);
    j["tolerance"] = tol;
    out << j.dump() << '\n';
    return rep.max_rel_err() < tol ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// verify

struct CheckRow {
    std::string name;
    double measured;
    double bound;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double theta_relative_residual(const SPDForm& f, double t) {
    const double theta = 1.0 + theta_star_gaussian(f, t, 1e-16);
    return theta_transform_residual(f, t) / std::max(1.0, theta);
}

double overlap_epstein(const SPDForm& f, Complex s) {
    const Complex d = epstein_direct(f, s, 1e-15 * std::max(1.0, std::abs(epstein_continued(f, s).value))).value;
    return rel(epstein_continued(f, s).value, d);
}

double overlap_weighted(const SPDForm& f, const SymMatrix& b, Complex s) {
    const Complex c = weighted_continued(f, b, s).value;
    return rel(c, weighted_direct(f, b, s, 1e-15 * std::max(std::abs(c), 1e-300)).value);
}

double overlap_vector(const Matrix& a, const Vector& b, Complex s) {
    const auto c = vector_zeta(a, b, s);
    double scale = 0.0;
    for (const auto& z : c) scale = std::max(scale, std::abs(z.value));
    const auto d = vector_zeta_direct(a, b, s, 1e-15 * std::max(scale, 1e-300));
    double worst = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) worst = std::max(worst, std::abs(c[j].value - d[j].value) / scale);
    return worst;
}

double residue_gap(const ZetaEvaluator& f, const PoleReport& analytic) {
    const PoleReport num = residue_numeric(f, analytic.location);
    double worst = 0.0;
    for (std::size_t j = 0; j < num.residue.size(); ++j)
        worst = std::max(worst, std::abs(num.residue[j] - analytic.residue[j]));
    return worst;
}

std::vector<CheckRow> default_suite() {
    std::vector<CheckRow> rows;
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    const SPDForm d14 = cholesky(SymMatrix::diagonal({1.0, 4.0}));
    const SPDForm q213 = cholesky(SymMatrix{{2.0, 1.0}, {1.0, 3.0}});
    const SymMatrix bw{{1.0, 0.5}, {0.5, -2.0}};
    const Matrix a2 = Matrix::from_rows({{2.0, 1.0}, {1.0, 3.0}});
    const Vector b2{5.0, 10.0};

    rows.push_back({"theta_transform_I2_t1", theta_relative_residual(i2, 1.0), 1e-12});
    rows.push_back({"theta_transform_diag14_t0.5", theta_relative_residual(d14, 0.5), 1e-12});
    rows.push_back({"theta_transform_Q213_t2", theta_relative_residual(q213, 2.0), 1e-12});
    rows.push_back({"zeta_at_zero_Q213", std::abs(epstein_continued(q213, 0.0).value + 1.0), 1e-10});
    rows.push_back({"overlap_epstein_Q213", overlap_epstein(q213, Complex(3.0, 0.5)), 1e-11});
    rows.push_back({"overlap_weighted_Q213", overlap_weighted(q213, bw, Complex(4.0, 0.5)), 1e-11});
    rows.push_back({"overlap_vector_A213", overlap_vector(a2, Vector{1.0, 0.0}, Complex(4.0, 0.5)), 1e-11});
    rows.push_back({"residue_epstein_I2",
                    residue_gap([&](Complex s) { return std::vector<Complex>{epstein_continued(i2, s).value}; },
                                residue_epstein(Lattice::integer(2), i2)),
                    1e-8});
    rows.push_back({"residue_weighted_Q213",
                    residue_gap([&](Complex s) { return std::vector<Complex>{weighted_continued(q213, bw, s).value}; },
                                residue_weighted(Lattice::integer(2), q213, bw)),
                    1e-8});
    rows.push_back({"residue_vector_A213",
                    residue_gap(
                        [&](Complex s) {
                            std::vector<Complex> r;
                            for (const auto& z : vector_zeta(a2, Vector{1.0, 0.0}, s)) r.push_back(z.value);
                            return r;
                        },
                        residue_vector(a2, Vector{1.0, 0.0})),
                    1e-8});
    rows.push_back({"funceq_lattice_diag23",
                    funceq_residual_lattice(Lattice(Matrix::diagonal({2.0, 3.0})), i2, Complex(0.8, 0.0)).residual,
                    1e-8});
    rows.push_back({"funceq_weighted_I2",
                    funceq_residual_weighted(Lattice::integer(2), i2, SymMatrix{{1.0, 1.0}, {1.0, 1.0}},
                                             Complex(0.75, 0.0))
                        .residual,
                    1e-8});
    rows.push_back({"funceq_vector_A213",
                    funceq_residual_vector(a2, Vector{1.0, 0.0}, Vector{0.0, 1.0}, Complex(0.7, 0.0)).residual,
                    1e-8});
    {
        const Matrix a = Matrix::diagonal({2.0, 3.0});
        const double expect = 2.0 * residue_epstein(Lattice(a), i2).residue[0].real();
        const double got = epstein_residue_integral(a, SymMatrix::identity(2), {QuadMethod::circle_trapezoid, 512, 0}).value;
        rows.push_back({"integral_epstein_n2", std::abs(got - expect) / expect, 1e-10});
    }
    {
        const Matrix a = Matrix::from_rows({{2.0, 0.5, 0.0}, {0.5, 1.5, 0.2}, {0.0, 0.2, 1.0}});
        const SymMatrix q = SymMatrix::identity(3);
        const SymMatrix bm{{1.0, 0.2, 0.0}, {0.2, 2.0, 0.1}, {0.0, 0.1, 0.5}};
        const double expect = 2.0 * residue_weighted(Lattice(a), cholesky(q), bm).residue[0].real();
        const double got = weighted_residue_integral(a, q, bm, {QuadMethod::product_gauss, 32, 0}).value;
        rows.push_back({"integral_weighted_n3", std::abs(got - expect) / std::abs(expect), 1e-8});
    }
    rows.push_back({"solve_residues_A213", solve_via_residues(a2, b2).max_rel_err(), 1e-12});
    rows.push_back({"solve_integrals_A213",
                    solve_via_integrals(a2, b2, {QuadMethod::circle_trapezoid, 1024, 0}).max_rel_err(), 1e-8});
    rows.push_back({"solve_numeric_residues_A213", numeric_residue_solve(a2, b2).max_rel_err(), 1e-7});
    return rows;
}

CheckRow run_case(const Json& j, std::optional<std::uint64_t> seed) {
    if (!j.is_object() || !j.contains("check") || !j["check"].is_string()) invalid("each case needs a 'check' string");
    Json data = j;
    const std::string kind = data["check"].get<std::string>();
    std::optional<double> bound;
    if (data.contains("bound")) {
        if (!data["bound"].is_number()) invalid("case bound must be a number");
        bound = data["bound"].get<double>();
    }
    std::string name = kind;
    if (data.contains("name")) {
        if (!data["name"].is_string()) invalid("case name must be a string");
        name = data["name"].get<std::string>();
    }
    data.erase("check");
    data.erase("bound");
    data.erase("name");
    Input in;
    parse_fields(data, in, false);
    auto first_s = [&] { return need_s(in).front(); };

    if (kind == "theta_transform") {
        if (in.t.empty()) invalid("theta_transform case needs t");
        return {name, theta_relative_residual(cholesky(need(in.Q, "Q")), in.t.front()), bound.value_or(1e-12)};
    }
    if (kind == "zeta_at_zero")
        return {name, std::abs(epstein_continued(cholesky(need(in.Q, "Q")), 0.0).value + 1.0), bound.value_or(1e-10)};
    if (kind == "overlap_epstein") return {name, overlap_epstein(cholesky(need(in.Q, "Q")), first_s()), bound.value_or(1e-11)};
    if (kind == "overlap_weighted")
        return {name, overlap_weighted(cholesky(need(in.Q, "Q")), need(in.B, "B"), first_s()), bound.value_or(1e-11)};
    if (kind == "overlap_vector")
        return {name, overlap_vector(need(in.A, "A"), need(in.b, "b"), first_s()), bound.value_or(1e-11)};
    if (kind == "residue_epstein" || kind == "residue_weighted") {
        const SymMatrix q = need(in.Q, "Q");
        const SPDForm f = cholesky(q);
        const Lattice lat = lattice_of(in, q.dim());
        if (kind == "residue_epstein")
            return {name,
                    residue_gap([&](Complex s) { return std::vector<Complex>{lattice_zeta(lat, f, s).value}; },
                                residue_epstein(lat, f)),
                    bound.value_or(1e-8)};
        const SymMatrix bm = need(in.B, "B");
        return {name,
                residue_gap([&](Complex s) { return std::vector<Complex>{lattice_weighted_zeta(lat, f, bm, s).value}; },
                            residue_weighted(lat, f, bm)),
                bound.value_or(1e-8)};
    }
    if (kind == "funceq_lattice" || kind == "funceq_weighted" || kind == "funceq_vector") {
        if (kind == "funceq_vector" && !(in.b && in.c)) invalid("funceq_vector case needs A, b and c");
        if (kind == "funceq_weighted" && !in.B) invalid("funceq_weighted case needs B");
        if (kind == "funceq_lattice" && (in.B || in.b || in.c)) invalid("funceq_lattice case takes Q and lattice only");
        return {name, funceq_for(in, first_s()).residual, bound.value_or(1e-8)};
    }
    if (kind == "solve") {
        const Matrix a = need(in.A, "A");
        const Vector b = need(in.b, "b");
        const std::string route = in.route.value_or("residues");
        if (route == "residues") return {name, solve_via_residues(a, b).max_rel_err(), bound.value_or(1e-12)};
        if (route == "numeric_residues") return {name, numeric_residue_solve(a, b).max_rel_err(), bound.value_or(1e-7)};
        if (route == "integrals") {
            QuadratureSpec spec = in.quadrature.value_or(suggested_quadrature(a));
            if (seed) spec.seed = *seed;
            const double def = spec.method == QuadMethod::monte_carlo ? 1e-2 : 1e-8;
            return {name, solve_via_integrals(a, b, spec).max_rel_err(), bound.value_or(def)};
        }
        invalid("unknown solve route '" + route + "'");
    }
    invalid("unknown check '" + kind + "'");
}

int cmd_verify(const Input& in, const std::string& format, std::optional<std::uint64_t> seed, std::ostream& out) {
    std::vector<CheckRow> rows;
    if (in.cases) {
        for (const auto& c : *in.cases) rows.push_back(run_case(c, seed));
    } else {
        rows = default_suite();
    }
    bool all = true;
    const bool json = format == "json";
    if (!json) out << "name,measured,bound,pass\n";
    for (auto& r : rows) {
        if (in.bound_override) r.bound = *in.bound_override;
        const bool pass = std::isfinite(r.measured) && r.measured <= r.bound;
        all = all && pass;
        if (json)
            out << Json{{"name", r.name}, {"measured", r.measured}, {"bound", r.bound}, {"pass", pass}}.dump() << '\n';
        else
            out << r.name << ',' << fmt17(r.measured) << ',' << fmt17(r.bound) << ',' << (pass ? "pass" : "fail") << '\n';
    }
    return all ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const Input& in, std::ostream& out) {
    const SymMatrix q = in.Q ? *in.Q : SymMatrix{{2.0, 1.0}, {1.0, 3.0}};
    const SPDForm f = cholesky(q);
    const std::size_t n = q.dim();
    const Complex s = in.s.empty() ? Complex(0.5 * static_cast<double>(n) + 2.0, 0.5) : in.s.front();
    const SymMatrix b = in.B ? *in.B : SymMatrix::identity(n);
    auto time = [&](const std::string& name, const std::function<void()>& fn) {
        double best = 1e300;
        for (int r = 0; r < in.repeat; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            fn();
            const auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        out << Json{{"operation", name}, {"n", n}, {"best_seconds", best}, {"repeat", in.repeat}}.dump() << '\n';
    };
    time("epstein_continued", [&] { (void)epstein_continued(f, s); });
    time("weighted_continued", [&] { (void)weighted_continued(f, b, s + 1.0); });
    if (s.real() >= 0.5 * static_cast<double>(n) + 0.5)
        time("epstein_direct", [&] { (void)epstein_direct(f, s, 1e-12); });
    time("theta_star_gaussian", [&] { (void)theta_star_gaussian(f, 0.1, 1e-14); });
    time("residue_numeric_epstein", [&] {
        (void)residue_numeric([&](Complex z) { return std::vector<Complex>{epstein_continued(f, z).value}; },
                              0.5 * static_cast<double>(n));
    });
    return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Epstein zeta machinery and residue-based linear solves"};
    app.require_subcommand(1);
    std::string input_path, format;
    std::optional<std::uint64_t> seed;

    struct Sub {
        CLI::App* app;
        bool needs_input;
    };
    std::vector<std::pair<std::string, Sub>> subs;
    auto add = [&](const std::string& name, const std::string& desc, bool needs_input, bool has_format,
                   bool has_seed) {
        CLI::App* s = app.add_subcommand(name, desc);
        auto* opt = s->add_option("-i,--input", input_path, "input JSON file ('-' for standard input)");
        if (needs_input) opt->required();
        if (has_format) s->add_option("-f,--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
        if (has_seed) s->add_option("--seed", seed, "Monte Carlo seed (overrides the input file)");
        subs.push_back({name, {s, needs_input}});
    };
    add("zeta", "evaluate zeta functions at the requested s", true, true, false);
    add("theta", "evaluate theta series", true, true, false);
    add("residue", "analytic and numeric residues", true, false, false);
    add("funceq", "functional-equation residuals", true, true, false);
    add("solve", "solve A x = b by one of the residue or integral routes", true, false, true);
    add("verify", "run the invariant suite or a case file", false, true, true);
    add("bench", "time the main evaluators", false, false, false);
    add("scan", "zeta along a segment of the s-plane as CSV", true, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub.app->parsed()) command = name;

    try {
        const Input in = load_input(input_path);
        if (command == "zeta") return cmd_zeta(in, format, out);
        if (command == "theta") return cmd_theta(in, format, out);
        if (command == "residue") return cmd_residue(in, out);
        if (command == "funceq") return cmd_funceq(in, format, out);
        if (command == "solve") return cmd_solve(in, seed, out, err);
        if (command == "verify") return cmd_verify(in, format.empty() ? "csv" : format, seed, out);
        if (command == "bench") return cmd_bench(in, out);
        if (command == "scan") return cmd_scan(in, out);
        err << "error: unknown command\n";
        return kValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace cimmino
