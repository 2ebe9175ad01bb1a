#include "ancilla/entanglement.hpp"
#include "ancilla/hamiltonian.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ancilla;

namespace {

ModelParams point(int L, int q, double J, double h, double omega, double lambda) {
    ModelParams p;
    p.L = L;
    p.q = q;
    p.J = J;
    p.h = h;
    p.omega_c = omega;
    p.lambda = lambda;
    return p;
}

PureState random_state(Index dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    PureState s;
    s.amplitudes = Vector::NullaryExpr(dim, [&] { return Complex(g(rng), g(rng)); }).normalized();
    return s;
}

// Reduced spin density matrix from the flat layout boson * 2^L + spins.
Matrix spin_rho(const Vector& psi, int L, int q) {
    const Index ns = Index{1} << L;
    Matrix rho = Matrix::Zero(ns, ns);
    for (int b = 0; b < q; ++b)
        for (Index s = 0; s < ns; ++s)
            for (Index t = 0; t < ns; ++t) rho(s, t) += psi(b * ns + s) * std::conj(psi(b * ns + t));
    return rho;
}

// F = 2 sum_{ab} (l_a - l_b)^2 / (l_a + l_b) |<a|O|b>|^2 over the full eigenbasis.
double dense_qfi(const Matrix& rho, const Matrix& O) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    const Matrix o = es.eigenvectors().adjoint() * O * es.eigenvectors();
    double f = 0.0;
    for (Index a = 0; a < rho.rows(); ++a)
        for (Index b = 0; b < rho.rows(); ++b) {
            const double la = std::max(es.eigenvalues()(a), 0.0), lb = std::max(es.eigenvalues()(b), 0.0);
            if (la + lb > 1e-14) f += (la - lb) * (la - lb) / (la + lb) * std::norm(o(a, b));
        }
    return 2.0 * f;
}

double dense_mel(const Vector& psi, char axis, int L, int q) {
    const Matrix S = ref::collective(axis, L, q);
    const double mean = psi.dot(S * psi).real();
    const double var = (S * psi).squaredNorm() - mean * mean;
    return var - 0.25 * dense_qfi(spin_rho(psi, L, q), ref::collective(axis, L, 1));
}

} // namespace

TEST_CASE("entropy of explicit spectra") {
    CHECK(entropy_from_spectrum(RealVector::Constant(4, 0.25)) == doctest::Approx(std::log(4.0)));
    CHECK(entropy_from_spectrum(RealVector::Unit(3, 1)) == 0.0);
    RealVector v(3);
    v << 0.5, 0.5, -1e-15;   // round-off negatives are clamped
    CHECK(entropy_from_spectrum(v) == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("Bell pair between two spins") {
    const ModelParams p = point(2, 1, -1.0, 1.0, 0.5, 0.0);
    PureState s;
    s.amplitudes = Vector::Zero(4);
    s.amplitudes(0) = s.amplitudes(3) = 1.0 / std::sqrt(2.0);
    const ReducedDensityMatrix rho = partial_trace(s, {{0}, false}, p);
    CHECK(rho.dim() == 2);
    CHECK((rho.matrix - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
    CHECK(vn_entropy(rho) == doctest::Approx(std::numbers::ln2));
    CHECK(subsystem_entropy(s, {{1}, false}, p) == doctest::Approx(std::numbers::ln2));
    // Spins | trivial ancilla.
    CHECK(subsystem_entropy(s, SubsystemSpec::all_spins(2), p) == doctest::Approx(0.0).scale(1.0));
    CHECK(mutual_information_half(s, p) == doctest::Approx(2 * std::numbers::ln2));
    CHECK(mutual_information_half(s, p, MiConvention::half) == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("spin-ancilla GHZ state") {
    // (|up up up, 0> + |down down down, 1>) / sqrt 2
    const ModelParams p = point(3, 2, -1.0, 1.0, 0.5, 0.1);
    PureState s;
    s.amplitudes = Vector::Zero(16);
    s.amplitudes(7) = s.amplitudes(8) = 1.0 / std::sqrt(2.0);
    CHECK(subsystem_entropy(s, SubsystemSpec::all_spins(3), p) == doctest::Approx(std::numbers::ln2));
    CHECK(subsystem_entropy(s, SubsystemSpec::ancilla_only(), p) == doctest::Approx(std::numbers::ln2));
    CHECK(subsystem_entropy(s, {{1}, false}, p) == doctest::Approx(std::numbers::ln2));

    const SchmidtSpectrum sc = spin_ancilla_schmidt(s, p);
    CHECK(sc.weights.size() == 2);
    CHECK(sc.weights.sum() == doctest::Approx(1.0));
    const ModelParams sp = spin_only(p);
    // The two branches are not connected by S_z and mix as a classical pair.
    CHECK(qfi(sc, collective_spin(Axis::z, sp).matrix()) == doctest::Approx(0.0).scale(1.0));
    // S_x leaves the branch span: F = 4 sum_a v_a <a|S_x^2|a> = 4 L.
    CHECK(qfi(sc, collective_spin(Axis::x, sp).matrix()) == doctest::Approx(12.0));
    CHECK(variance(s, collective_spin(Axis::z, p)) == doctest::Approx(9.0));
    CHECK(mel(s, Axis::z, p) == doctest::Approx(9.0));
    CHECK(mel(s, Axis::x, p) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("pure spin states: F = 4 Var and zero MEL") {
    const ModelParams p = point(4, 3, -1.0, 1.0, 0.5, 0.0);
    for (unsigned seed = 0; seed < 5; ++seed) {
        PureState s;
        s.amplitudes = Vector::Zero(48);
        s.amplitudes.head(16) = random_state(16, seed).amplitudes;
        for (Axis mu : {Axis::x, Axis::y, Axis::z}) {
            const double var = variance(s, collective_spin(mu, p));
            CHECK(qfi(spin_ancilla_schmidt(s, p), collective_spin(mu, spin_only(p)).matrix()) ==
                  doctest::Approx(4 * var).epsilon(1e-10));
            CHECK(std::abs(mel(s, mu, p)) < 1e-10);
        }
    }
}

TEST_CASE("random states: reduced spectra on complementary sides agree") {
    const ModelParams p = point(4, 5, -1.0, 1.0, 0.5, 0.1);
    for (unsigned seed = 0; seed < 6; ++seed) {
        const PureState s = random_state(composite_dim(p), seed);
        const std::vector<SubsystemSpec> cuts = {
            SubsystemSpec::all_spins(4), {{0}, false}, {{1, 3}, false}, {{0, 1}, true}, {{2}, true}};
        for (const auto& keep : cuts) {
            SubsystemSpec rest;
            for (int i = 0; i < 4; ++i)
                if (std::find(keep.retained_spins.begin(), keep.retained_spins.end(), i) == keep.retained_spins.end())
                    rest.retained_spins.push_back(i);
            rest.retain_ancilla = !keep.retain_ancilla;
            const ReducedDensityMatrix a = partial_trace(s, keep, p);
            const ReducedDensityMatrix b = partial_trace(s, rest, p);
            CHECK_NOTHROW(a.check_invariants());
            CHECK(a.matrix.trace().real() == doctest::Approx(1.0));
            RealVector ea = Eigen::SelfAdjointEigenSolver<Matrix>(a.matrix).eigenvalues().reverse();
            RealVector eb = Eigen::SelfAdjointEigenSolver<Matrix>(b.matrix).eigenvalues().reverse();
            const Index n = std::min(ea.size(), eb.size());
            CHECK((ea.head(n) - eb.head(n)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(vn_entropy(a) == doctest::Approx(vn_entropy(b)).epsilon(1e-11));
            CHECK(vn_entropy(a) <= std::log(static_cast<double>(n)) + 1e-12);
        }
        const ReducedDensityMatrix spins = partial_trace(s, SubsystemSpec::all_spins(4), p);
        CHECK((spins.matrix - spin_rho(s.amplitudes, 4, 5)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("low-rank QFI equals the dense eigenbasis sum") {
    for (int q : {1, 2, 3, 20}) {
        const ModelParams p = point(4, q, -1.0, 1.0, 0.5, 0.0);
        for (unsigned seed = 0; seed < 4; ++seed) {
            const PureState s = random_state(composite_dim(p), 100 * q + seed);
            const SchmidtSpectrum sc = spin_ancilla_schmidt(s, p);
            CHECK(sc.weights.size() <= std::min(q, 16));
            const ReducedDensityMatrix rho = partial_trace(s, SubsystemSpec::all_spins(4), p);
            for (Axis mu : {Axis::x, Axis::y, Axis::z}) {
                const HermitianOperator O = collective_spin(mu, spin_only(p));
                const double dense = qfi(rho, O);
                CHECK(qfi(sc, O.matrix()) == doctest::Approx(dense).epsilon(1e-10));
                CHECK(dense == doctest::Approx(dense_qfi(rho.matrix, Matrix(O.matrix()))).epsilon(1e-10));
                // F <= 4 Var for any state.
                CHECK(dense <= 4 * variance(s, collective_spin(mu, p)) + 1e-10);
            }
        }
    }
}

TEST_CASE("MEL vanishes without coupling") {
    const ModelParams p = point(4, 6, -1.0, 1.3, 0.5, 0.0);
    const auto H = std::make_shared<const HermitianOperator>(build_full(p));
    const MetricEvaluator eval(p, H);
    evolve(prepare_polarized(p), *H, {0.0, 5.0, 0.5}, [&](const PureState& s) {
        const MetricSample m = eval.evaluate(s);
        CHECK(std::abs(m.MEL_Sx) < 1e-10);
        CHECK(std::abs(m.MEL_Sz) < 1e-10);
        CHECK(std::abs(m.S_vN_A) < 1e-10);
        CHECK(std::abs(m.n_boson) < 1e-20);
    });
}

TEST_CASE("MEL against a dense Kronecker-product oracle") {
    const double lambda = std::sqrt(0.63 * 0.5);
    const ModelParams p = point(4, 12, -1.0, 1.5, 0.5, lambda);
    const Matrix Href = ref::hamiltonian(4, 12, -1.0, 1.5, 0.5, lambda);
    Vector psi0 = Vector::Zero(Href.rows());
    psi0(15) = 1.0;
    for (double t : {1.7, 6.3}) {
        const Vector psi = ref::expm_i(Href, t) * psi0;
        const PureState s{psi, t};
        CHECK(mel(s, Axis::x, p) == doctest::Approx(dense_mel(psi, 'x', 4, 12)).epsilon(1e-9));
        CHECK(mel(s, Axis::z, p) == doctest::Approx(dense_mel(psi, 'z', 4, 12)).epsilon(1e-9));

        const MetricSample m = MetricEvaluator(p, std::make_shared<const HermitianOperator>(build_full(p))).evaluate(s);
        CHECK(m.t == t);
        CHECK(m.MEL_Sx == doctest::Approx(dense_mel(psi, 'x', 4, 12)).epsilon(1e-9));
        CHECK(m.MEL_Sz == doctest::Approx(dense_mel(psi, 'z', 4, 12)).epsilon(1e-9));
        Eigen::SelfAdjointEigenSolver<Matrix> es(spin_rho(psi, 4, 12));
        CHECK(m.S_vN_A == doctest::Approx(entropy_from_spectrum(es.eigenvalues())).epsilon(1e-10));
        CHECK(m.MEL_Sz > 0.0);
    }
}

TEST_CASE("metric sample fields are mutually consistent") {
    const ModelParams p = point(4, 8, -1.0, 2.0, 0.5, 0.5);
    const auto H = std::make_shared<const HermitianOperator>(build_full(p));
    const MetricEvaluator eval(p, H);
    const auto states = evolve(prepare_polarized(p), *H, {0.0, 3.0, 1.5});
    for (const auto& s : states) {
        const MetricSample m = eval.evaluate(s);
        CHECK(m.f_Sx == doctest::Approx(m.F_Sx / 4));
        CHECK(m.f_Sz == doctest::Approx(m.F_Sz / 4));
        CHECK(m.MEL_Sx == doctest::Approx(m.var_Sx - m.F_Sx / 4));
        CHECK(m.var_Sx == doctest::Approx(variance(s, collective_spin(Axis::x, p))).epsilon(1e-12));
        CHECK(m.mag_z == doctest::Approx(collective_spin(Axis::z, p).expectation(s.amplitudes) / 4));
        CHECK(m.zz_nn == doctest::Approx(zz_bonds(p).expectation(s.amplitudes) / 4));
        CHECK(m.energy == doctest::Approx(H->expectation(s.amplitudes)));
        CHECK(m.MI_half == doctest::Approx(mutual_information_half(s, p)).epsilon(1e-12));
        CHECK(m.norm_err < 1e-12);
        CHECK(m.S_vN_A == doctest::Approx(subsystem_entropy(s, SubsystemSpec::all_spins(4), p)).scale(1.0));
    }
    const MetricSample m0 = eval.evaluate(states.front());
    CHECK(m0.mag_z == doctest::Approx(1.0));
    CHECK(m0.zz_nn == doctest::Approx(1.0));
    CHECK(m0.var_Sx == doctest::Approx(4.0));
    CHECK(m0.F_Sx == doctest::Approx(16.0));
}

TEST_CASE("odd chains report no half-chain mutual information") {
    const ModelParams p = point(3, 3, -1.0, 1.0, 0.5, 0.3);
    const MetricEvaluator eval(p, std::make_shared<const HermitianOperator>(build_full(p)));
    CHECK(std::isnan(eval.evaluate(prepare_polarized(p)).MI_half));
    CHECK_THROWS_AS(mutual_information_half(prepare_polarized(p), p), ConfigError);
}

TEST_CASE("Fisher density and witness level") {
    const ModelParams p = point(8, 2, -1.0, 1.0, 0.5, 0.0);
    CHECK(fisher_density(12.0, p).density == 1.5);
    CHECK(fisher_density(12.0, p).partite_level == 2);
    CHECK(fisher_density(0.0, p).partite_level == 0);
    CHECK(fisher_density(64.0, p).partite_level == 9);
    CHECK_THROWS_AS(fisher_density(-1.0, p), ConfigError);
    CHECK(cramer_rao_bound(4.0) == 0.25);
    CHECK(std::isinf(cramer_rao_bound(0.0)));
}

TEST_CASE("partial trace guards") {
    const ModelParams p = point(3, 2, -1.0, 1.0, 0.5, 0.1);
    const PureState s = random_state(16, 1);
    CHECK_THROWS_AS(partial_trace(s, {{0, 1, 2}, true}, p, 8), ConfigError);
    CHECK_THROWS_AS(partial_trace(random_state(8, 1), {{0}, false}, p), ConfigError);
    ReducedDensityMatrix bad{Matrix::Identity(2, 2), {{0}, false}};
    CHECK_THROWS_AS(bad.check_invariants(), NumericalError);
}

TEST_CASE("small closed-form values") {
    const ModelParams p = point(2, 1, -1.0, 1.0, 0.5, 0.0);
    PureState ghz;
    ghz.amplitudes = Vector::Zero(4);
    ghz.amplitudes(0) = ghz.amplitudes(3) = 1.0 / std::sqrt(2.0);
    CHECK(variance(ghz, collective_spin(Axis::z, p)) == doctest::Approx(4.0));
    const ReducedDensityMatrix pure = partial_trace(ghz, SubsystemSpec::all_spins(2), p);
    CHECK(qfi(pure, collective_spin(Axis::z, p)) == doctest::Approx(16.0));
    CHECK(vn_entropy(pure) == doctest::Approx(0.0).scale(1.0));

    const PureState up = prepare_polarized(point(5, 2, -1.0, 1.0, 0.5, 0.0));
    const ModelParams p5 = point(5, 2, -1.0, 1.0, 0.5, 0.0);
    CHECK(variance(up, collective_spin(Axis::z, p5)) == doctest::Approx(0.0).scale(1.0));
    CHECK(variance(up, collective_spin(Axis::x, p5)) == doctest::Approx(5.0));
    CHECK(mel(up, Axis::x, p5) == doctest::Approx(0.0).scale(1.0));

    // Maximally mixed qubit: no Fisher information about sigma_z.
    ReducedDensityMatrix mixed{0.5 * Matrix::Identity(2, 2), {{0}, false}};
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;
    CHECK(qfi(mixed, sz) == 0.0);
    CHECK(fisher_density(24.0, point(8, 1, -1.0, 1.0, 0.5, 0.0)).density == 3.0);
}
