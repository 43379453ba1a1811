#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cimmino/error.hpp"
#include "cimmino/zeta.hpp"

using namespace cimmino;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZetaI2At3 = 4.6589136156038434402;  // 4 zeta(3) beta(3)

const SymMatrix kQ213{{2, 1}, {1, 3}};

double rel(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::EvaluationFailure;
}

struct Reference {
    SymMatrix q;
    Complex s;
    Complex value;
};

// Independent values from tests/oracles/compute_oracles.py.
std::vector<Reference> epstein_references() {
    return {
        {SymMatrix::identity(2), {3, 0}, {kZetaI2At3, 0}},
        {SymMatrix::identity(2), {3, 1}, {4.3714814778420068795, -0.46404771261026516832}},
        {SymMatrix::identity(2), {0.5, 2}, {2.4013875989325206798, -0.63778186923617255834}},
        {SymMatrix::identity(2), {0.7, 0.3}, {-2.7604667852471057188, -5.1125793972097996822}},
        {SymMatrix::identity(2), {-0.5, 1}, {0.46538619718550285607, -0.35823912041714019625}},
        {SymMatrix::identity(2), {0.25, 0}, {-1.9216892211799301182, 0}},
        {kQ213, {3, 0.5}, {0.37166604867193010443, -0.18298649769668675927}},
        {kQ213, {0.25, 0}, {-1.5712110914823174216, 0}},
        {kQ213, {-1.5, 0.5}, {0.21026133572097220266, 0.028067110178253605296}},
        {kQ213, {0.6, -0.8}, {-0.58858985799969825452, 1.7175509812036583429}},
        {SymMatrix::diagonal({1, 4}), {1.25, 0.5}, {2.0779338421036977596, -2.3471281710940025396}},
        {SymMatrix::identity(3), {0.7, 0.4}, {-2.7344965657166630378, -2.9740876337826703975}},
        {SymMatrix::identity(3), {3.5, 0}, {7.4670577809188105309, 0}},
    };
}

const SymMatrix kWeight{{1, 0.5}, {0.5, -2}};

std::vector<SymMatrix> test_forms() {
    return {SymMatrix::identity(1), SymMatrix::diagonal({2.5}), SymMatrix::identity(2), SymMatrix::diagonal({1, 4}),
            kQ213, SymMatrix{{1, 0.3, -0.2}, {0.3, 2, 0.5}, {-0.2, 0.5, 1.5}}};
}

}  // namespace

TEST(EpsteinDirect, Examples) {
    EXPECT_NEAR(epstein_direct(cholesky(SymMatrix::identity(2)), 3.0, 1e-13).value.real(), kZetaI2At3, 1e-12);
    EXPECT_NEAR(epstein_direct(cholesky(SymMatrix::identity(1)), 2.0, 1e-13).value.real(), std::pow(kPi, 4) / 45, 1e-12);
    EXPECT_NEAR(epstein_direct(cholesky(SymMatrix::diagonal({4, 4})), 3.0, 1e-14).value.real(), kZetaI2At3 / 64, 1e-13);
    EXPECT_NEAR(kZetaI2At3 / 64, 0.0727955, 1e-7);
}

TEST(EpsteinDirect, OutsideConvergence) {
    EXPECT_EQ(kind_of([] { (void)epstein_direct(cholesky(SymMatrix::identity(2)), {1.4, 3}, 1e-10); }),
              ErrorKind::OutsideConvergence);
    EXPECT_EQ(kind_of([] { (void)weighted_direct(cholesky(SymMatrix::identity(2)), SymMatrix::identity(2), 2.4, 1e-10); }),
              ErrorKind::OutsideConvergence);
}

TEST(EpsteinDirect, ErrorEstimateIsHonest) {
    const ZetaValue v = epstein_direct(cholesky(kQ213), {3, 0.5}, 1e-12);
    const Complex want{0.37166604867193010443, -0.18298649769668675927};
    EXPECT_LT(v.abs_error, 1e-12);
    EXPECT_LT(std::abs(v.value - want), 1e-12);
}

TEST(EpsteinDirect, EstimateCoversTrueError) {
    for (const auto& ref : epstein_references()) {
        const SPDForm f = cholesky(ref.q);
        if (ref.s.real() < 0.5 * static_cast<double>(f.dim()) + 0.5) continue;
        for (double t : {1e-6, 1e-8, 1e-10, 1e-12}) {
            const ZetaValue v = epstein_direct(f, ref.s, t);
            EXPECT_LE(std::abs(v.value - ref.value), v.abs_error) << "tol " << t;
            EXPECT_LT(v.abs_error, t);
        }
    }
}

TEST(WeightedDirect, Examples) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    EXPECT_NEAR(weighted_direct(i2, SymMatrix::diagonal({1, 0}), 4.0, 1e-13).value.real(), kZetaI2At3 / 2, 1e-12);
    EXPECT_NEAR(kZetaI2At3 / 2, 2.329457, 1e-6);
    EXPECT_EQ(weighted_direct(i2, SymMatrix::zero(2), 4.0, 1e-13).value, Complex(0.0));
    const SPDForm f = cholesky(kQ213);
    const Complex s{4.5, 1};
    EXPECT_LT(rel(weighted_direct(f, kQ213, s, 1e-14).value, epstein_direct(f, s - 1.0, 1e-14).value), 1e-12);
}

TEST(EpsteinContinued, ReferenceValues) {
    for (const auto& r : epstein_references()) {
        const ZetaValue v = epstein_continued(cholesky(r.q), r.s);
        EXPECT_LT(rel(v.value, r.value), 1e-12) << r.q.dim() << ' ' << r.s;
    }
}

TEST(EpsteinContinued, Examples) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    EXPECT_NEAR(epstein_continued(i2, 0.0).value.real(), -1.0, 1e-14);
    EXPECT_NEAR(epstein_continued(i2, 3.0).value.real(), epstein_direct(i2, 3.0, 1e-14).value.real(), 1e-12);
    EXPECT_LT(funceq_residual_lattice(Lattice::integer(2), i2, 0.5).residual, 1e-10);
}

TEST(EpsteinContinued, PoleExclusion) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    EXPECT_EQ(kind_of([&] { (void)epstein_continued(i2, 1.0); }), ErrorKind::TooCloseToPole);
    EXPECT_EQ(kind_of([&] { (void)epstein_continued(i2, {1.0, 5e-7}); }), ErrorKind::TooCloseToPole);
    EXPECT_NO_THROW((void)epstein_continued(i2, {1.0, 2e-6}));
}

TEST(EpsteinContinued, TrivialZerosAtNegativeIntegers) {
    for (const auto& q : test_forms())
        for (int k = 1; k <= 3; ++k) EXPECT_LT(std::abs(epstein_continued(cholesky(q), double(-k)).value), 1e-12);
}

TEST(EpsteinContinued, ValueAtZero) {
    for (const auto& q : test_forms()) EXPECT_NEAR(std::abs(epstein_continued(cholesky(q), 0.0).value + 1.0), 0.0, 1e-10);
}

TEST(EpsteinContinued, Homogeneity) {
    for (const auto& q : test_forms()) {
        const SPDForm f = cholesky(q);
        for (double c : {2.0, 5.0})
            for (Complex s : {Complex(0.3, 1), Complex(-1.2, 0.4), Complex(3.1, -2)}) {
                const Complex a = epstein_continued(cholesky(q.scaled(c)), s).value;
                const Complex b = std::pow(Complex(c), -s) * epstein_continued(f, s).value;
                EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(b)));
            }
    }
}

TEST(WeightedContinued, ReferenceValues) {
    const SPDForm f = cholesky(kQ213);
    const std::pair<Complex, Complex> refs[] = {
        {{4, 0.5}, {0.033211392212274103786, 0.010688033599253575634}},
        {{0.3, 0.2}, {0.070346045577136499976, 0.058823091832243208687}},
        {{2.5, -1}, {0.13453776861171967256, -0.22163186357797910107}},
    };
    for (const auto& [s, want] : refs) EXPECT_LT(rel(weighted_continued(f, kWeight, s).value, want), 1e-11) << s;
}

TEST(WeightedContinued, Examples) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    EXPECT_NEAR(weighted_continued(i2, SymMatrix::identity(2), 4.0).value.real(),
                weighted_direct(i2, SymMatrix::identity(2), 4.0, 1e-14).value.real(), 1e-12);
    EXPECT_EQ(weighted_continued(i2, SymMatrix::zero(2), {0.3, 2}).value, Complex(0.0));
    EXPECT_EQ(kind_of([&] { (void)weighted_continued(i2, SymMatrix::identity(2), 2.0); }), ErrorKind::TooCloseToPole);
}

TEST(WeightedContinued, ShiftIdentity) {
    for (const auto& q : test_forms()) {
        const SPDForm f = cholesky(q);
        const double half = q.dim() / 2.0;
        for (Complex s : {Complex(half + 3, 0.5), Complex(0.4, 1), Complex(-0.7, -2), Complex(half + 1.5, 0)}) {
            const Complex a = weighted_continued(f, q, s).value;
            const Complex b = epstein_continued(f, s - 1.0).value;
            EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(b))) << q.dim() << ' ' << s;
        }
    }
}

TEST(WeightedContinued, MultiMatchesSingle) {
    const SPDForm f = cholesky(kQ213);
    const std::vector<SymMatrix> bs{kWeight, SymMatrix::identity(2), kQ213};
    const Complex s{0.8, -1.5};
    const auto multi = weighted_continued_multi(f, bs, s);
    ASSERT_EQ(multi.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LT(rel(multi[k].value, weighted_continued(f, bs[k], s).value), 1e-14);
}

TEST(LatticeZeta, Examples) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    for (Complex s : {Complex(3, 0), Complex(0.3, 1)}) {
        EXPECT_EQ(lattice_zeta(Lattice::integer(2), i2, s).value, epstein_continued(i2, s).value);
        EXPECT_EQ(lattice_weighted_zeta(Lattice::integer(2), i2, kWeight, s + 1.0).value,
                  weighted_continued(i2, kWeight, s + 1.0).value);
    }
    EXPECT_NEAR(lattice_zeta(Lattice(Matrix::diagonal({2, 2})), i2, 3.0).value.real(), kZetaI2At3 / 64, 1e-14);
    // [[1,1],[0,1]] is unimodular, so the value coincides with the identity lattice.
    const ZetaValue v = lattice_zeta(Lattice(Matrix::from_rows({{1, 1}, {0, 1}})), i2, 3.0);
    EXPECT_NEAR(v.value.real(), kZetaI2At3, 1e-12);
    EXPECT_LT(rel(v.value, epstein_continued(cholesky(SymMatrix{{1, 1}, {1, 2}}), 3.0).value), 1e-13);
}

TEST(VectorZeta, Examples) {
    const Matrix i2 = Matrix::identity(2);
    const auto v = vector_zeta(i2, unit_vector(2, 0), 4.0);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(v[0].value.real(), epstein_continued(cholesky(SymMatrix::identity(2)), 3.0).value.real() / 2, 1e-12);
    EXPECT_LT(std::abs(v[1].value), 1e-14);

    for (const auto& c : vector_zeta(Matrix::from_rows({{2, 1}, {0, 3}}), Vector{0, 0}, {0.4, 1}))
        EXPECT_EQ(c.value, Complex(0.0));

    // Oracle: A = diag(2,3), b = (2,3), s = 4.
    const auto d = vector_zeta(Matrix::diagonal({2, 3}), Vector{2, 3}, 4.0);
    EXPECT_LT(rel(d[0].value, 0.032594774573599942682), 1e-10);
    EXPECT_LT(rel(d[1].value, 0.0042556984088251874261), 1e-10);
    const auto dd = vector_zeta_direct(Matrix::diagonal({2, 3}), Vector{2, 3}, 4.0, 1e-14);
    EXPECT_LT(rel(dd[0].value, d[0].value), 1e-10);
    EXPECT_LT(rel(dd[1].value, d[1].value), 1e-10);
}

TEST(VectorZeta, SingularMatrix) {
    EXPECT_EQ(kind_of([] { (void)vector_zeta(Matrix::from_rows({{1, 2}, {2, 4}}), Vector{1, 0}, 4.0); }),
              ErrorKind::SingularMatrix);
}

TEST(NormZeta, MatchesGramForm) {
    const Matrix a = Matrix::from_rows({{2, 1}, {1, 3}});
    const Complex s{0.3, 0.9};
    EXPECT_LT(rel(norm_zeta(a, s).value, epstein_continued(cholesky(gram_transform(SymMatrix::identity(2), a)), s).value),
              1e-14);
}

TEST(Residues, AnalyticExamples) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    EXPECT_NEAR(residue_epstein(Lattice::integer(2), i2).residue[0].real(), kPi, 1e-14);
    EXPECT_NEAR(residue_epstein(Lattice::integer(1), cholesky(SymMatrix::identity(1))).residue[0].real(), 1.0, 1e-14);
    EXPECT_NEAR(residue_epstein(Lattice(Matrix::diagonal({2, 3})), i2).residue[0].real(), kPi / 6, 1e-14);
    EXPECT_EQ(residue_epstein(Lattice::integer(2), i2).location, 1.0);

    EXPECT_NEAR(residue_weighted(Lattice::integer(2), i2, SymMatrix::identity(2)).residue[0].real(), kPi, 1e-14);
    EXPECT_EQ(residue_weighted(Lattice::integer(2), i2, SymMatrix::zero(2)).residue[0], Complex(0.0));
    EXPECT_NEAR(residue_weighted(Lattice::integer(2), i2, SymMatrix::diagonal({1, 0})).residue[0].real(), kPi / 2, 1e-14);
    EXPECT_EQ(residue_weighted(Lattice::integer(2), i2, SymMatrix::zero(2)).location, 2.0);

    const auto r = residue_vector(Matrix::identity(2), unit_vector(2, 0)).residue;
    EXPECT_NEAR(r[0].real(), kPi / 2, 1e-14);
    EXPECT_EQ(r[1], Complex(0.0));
    for (const auto& c : residue_vector(Matrix::identity(2), Vector{0, 0}).residue) EXPECT_EQ(c, Complex(0.0));
    const auto d = residue_vector(Matrix::diagonal({2, 3}), Vector{2, 3}).residue;
    EXPECT_NEAR(d[0].real(), kPi / 12, 1e-14);
    EXPECT_NEAR(d[1].real(), kPi / 12, 1e-14);
}

TEST(Residues, NumericExamples) {
    const PoleReport rational = residue_numeric([](Complex s) { return std::vector<Complex>{1.0 / (s - 2.0)}; }, 2.0);
    EXPECT_NEAR(std::abs(rational.residue[0] - 1.0), 0.0, 1e-12);
    EXPECT_EQ(rational.source, ResidueSource::numeric);

    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    const PoleReport e = residue_numeric([&](Complex s) { return std::vector<Complex>{epstein_continued(i2, s).value}; }, 1.0);
    EXPECT_LT(std::abs(e.residue[0] - kPi), 1e-8);
    const PoleReport w = residue_numeric(
        [&](Complex s) { return std::vector<Complex>{weighted_continued(i2, SymMatrix::identity(2), s).value}; }, 2.0);
    EXPECT_LT(std::abs(w.residue[0] - kPi), 1e-8);
}

TEST(Residues, NumericFailurePropagates) {
    EXPECT_EQ(kind_of([] {
                  (void)residue_numeric([](Complex) -> std::vector<Complex> { throw Error(ErrorKind::NotConverged, "x"); },
                                        1.0);
              }),
              ErrorKind::EvaluationFailure);
}

TEST(Residues, NumericMatchesAnalyticEverywhere) {
    const std::vector<Matrix> gens{Matrix::identity(2), Matrix::diagonal({2, 3}), Matrix::from_rows({{1, 0.5}, {0.2, 1.3}})};
    for (const auto& q : test_forms()) {
        const std::size_t n = q.dim();
        const SPDForm f = cholesky(q);
        const Lattice l = n == 2 ? Lattice(gens[2]) : Lattice::integer(n);
        const PoleReport a = residue_epstein(l, f);
        const PoleReport m = residue_numeric([&](Complex s) { return std::vector<Complex>{lattice_zeta(l, f, s).value}; },
                                             a.location);
        EXPECT_LT(std::abs(a.residue[0] - m.residue[0]), 1e-8);

        const SymMatrix b = n == 2 ? kWeight : SymMatrix::identity(n);
        const PoleReport aw = residue_weighted(l, f, b);
        const PoleReport mw = residue_numeric(
            [&](Complex s) { return std::vector<Complex>{lattice_weighted_zeta(l, f, b, s).value}; }, aw.location);
        EXPECT_LT(std::abs(aw.residue[0] - mw.residue[0]), 1e-8);
    }
    const Matrix a = Matrix::from_rows({{2, 1}, {1, 3}});
    const Vector b{1, -2};
    const PoleReport av = residue_vector(a, b);
    const PoleReport mv = residue_numeric(
        [&](Complex s) {
            std::vector<Complex> out;
            for (const auto& z : vector_zeta(a, b, s)) out.push_back(z.value);
            return out;
        },
        av.location);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_LT(std::abs(av.residue[j] - mv.residue[j]), 1e-8);
}

TEST(FuncEq, LatticeExamples) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    EXPECT_LT(funceq_residual_lattice(Lattice::integer(2), i2, 0.5).residual, 1e-10);
    EXPECT_LT(funceq_residual_lattice(Lattice::integer(2), i2, {0.7, 0.3}).residual, 1e-8);
    EXPECT_LT(funceq_residual_lattice(Lattice(Matrix::diagonal({2, 3})), i2, 0.8).residual, 1e-8);
}

TEST(FuncEq, WeightedExamples) {
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    EXPECT_LT(funceq_residual_weighted(Lattice::integer(2), i2, SymMatrix::identity(2), 0.6).residual, 1e-8);
    const FuncEqResidual z = funceq_residual_weighted(Lattice::integer(2), i2, SymMatrix::zero(2), 0.6);
    EXPECT_EQ(z.lhs, Complex(0.0));
    EXPECT_EQ(z.rhs, Complex(0.0));
    EXPECT_LT(funceq_residual_weighted(Lattice::integer(2), i2, SymMatrix{{1, 1}, {1, 1}}, 0.75).residual, 1e-8);
}

TEST(FuncEq, VectorExamples) {
    const Matrix i2 = Matrix::identity(2);
    const FuncEqResidual odd = funceq_residual_vector(i2, unit_vector(2, 0), unit_vector(2, 1), 0.6);
    EXPECT_LT(odd.residual, 1e-12);
    EXPECT_LT(std::abs(odd.rhs), 1e-12);
    EXPECT_LT(funceq_residual_vector(i2, unit_vector(2, 0), unit_vector(2, 0), 0.6).residual, 1e-8);
    EXPECT_LT(funceq_residual_vector(Matrix::from_rows({{2, 1}, {1, 3}}), Vector{1, 0}, Vector{0, 1}, 0.7).residual, 1e-8);
}

TEST(FuncEq, StripGrid) {
    const std::vector<Complex> grid{{0.3, 0.5}, {0.6, -1.2}, {-0.4, 2}, {1.3, 0.7}, {0.9, -0.1}};
    const Lattice l(Matrix::from_rows({{1, 0.5}, {0.2, 1.3}}));
    const Matrix a = Matrix::from_rows({{2, 1}, {0.5, 3}});
    for (const auto& q : {SymMatrix::identity(2), kQ213, SymMatrix::diagonal({1, 4})}) {
        const SPDForm f = cholesky(q);
        for (const Complex s : grid) {
            EXPECT_LT(funceq_residual_lattice(l, f, s).residual, 1e-8) << s;
            EXPECT_LT(funceq_residual_weighted(l, f, kWeight, s).residual, 1e-8) << s;
        }
    }
    for (const Complex s : grid) EXPECT_LT(funceq_residual_vector(a, Vector{1, 2}, Vector{-1, 0.5}, s).residual, 1e-8) << s;
}

TEST(Overlap, RandomPointsAllFamilies) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> im(-10.0, 10.0);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (const auto& q : {SymMatrix::identity(2), SymMatrix::diagonal({1, 4}), kQ213}) {
        const SPDForm f = cholesky(q);
        const Vector u{coord(rng), coord(rng)}, v{coord(rng), coord(rng)};
        const std::vector<SymMatrix> weights{q, SymMatrix::identity(2), sym_outer(u, v)};
        for (int k = 0; k < 20; ++k) {
            const Complex s(3.0, im(rng));
            const Complex c = epstein_continued(f, s).value;
            EXPECT_LT(rel(epstein_direct(f, s, 1e-14 * std::abs(c)).value, c), 1e-11) << s;
            const Complex sw = s + 1.0;
            for (const auto& b : weights) {
                const Complex cw = weighted_continued(f, b, sw).value;
                EXPECT_LT(rel(weighted_direct(f, b, sw, 1e-14 * std::abs(cw)).value, cw), 1e-11) << sw;
            }
        }
    }
}

TEST(GammaFactor, Bookkeeping) {
    const GammaFactorSpec g{};
    for (const auto& q : test_forms()) {
        const SPDForm f = cholesky(q);
        const double n = q.dim();
        const Complex lhs = g(n / 2) * residue_epstein(Lattice::integer(q.dim()), f).residue[0];
        EXPECT_LT(std::abs(lhs - 1.0 / std::sqrt(f.det())), 1e-10);
        EXPECT_LT(std::abs(epstein_continued(f, 0.0).value * g.residue_at_pole(0) + 1.0), 1e-10);
    }
    const GammaFactorSpec shifted{1.0, 1.0, 1.0};
    EXPECT_LT(std::abs(shifted(2.0) - gamma_complex(3.0) / std::pow(kPi, 3.0)), 1e-15);
    EXPECT_DOUBLE_EQ(shifted.residue_at_pole(0), 1.0);
    EXPECT_NEAR(shifted.residue_at_pole(1), -kPi, 1e-15);
    EXPECT_DOUBLE_EQ(GammaFactorSpec{}.residue_at_pole(2), 0.5 * kPi * kPi);
}

TEST(UnitBall, Volumes) {
    EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
    EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-15);
    EXPECT_NEAR(unit_ball_volume(3), 4 * kPi / 3, 1e-15);
    EXPECT_NEAR(unit_ball_volume(4), kPi * kPi / 2, 1e-14);
}
