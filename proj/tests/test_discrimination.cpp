#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "multirail/dilation.hpp"
#include "multirail/discrimination.hpp"
#include "multirail/states.hpp"
#include "support.hpp"

using namespace multirail;
using testsupport::random_independent_ensemble;

namespace {

StateEnsemble two_state(double overlap, double eta1) {
    Vector v1(2), v2(2);
    v1 << 1.0, 0.0;
    v2 << overlap, std::sqrt(1.0 - overlap * overlap);
    return StateEnsemble({PureState(v1), PureState(v2)}, {eta1, 1.0 - eta1});
}

Matrix average_density(const StateEnsemble& ens) {
    Matrix rho = Matrix::Zero(ens.dim(), ens.dim());
    for (int i = 0; i < ens.size(); ++i) {
        const Vector& a = ens.state(i).amplitudes();
        rho += ens.prior(i) * (a * a.adjoint());
    }
    return rho;
}

// Independent 1-D check for filtering: scan the target failure weight q and
// keep the best feasible objective value.
double filtering_scan(const StateEnsemble& ens, int target) {
    const Matrix g = gram(ens);
    const int n = ens.size();
    double coupling = 0.0;
    double q_lo = 0.0;
    for (int k = 0; k < n; ++k) {
        if (k == target) continue;
        const double c2 = std::norm(g(target, k));
        coupling += ens.prior(k) * c2;
        q_lo = std::max(q_lo, c2);
    }
    // q must also keep the subset conclusive Gram PSD.
    double best = -1.0;
    for (int step = 0; step <= 20000; ++step) {
        const double q = q_lo + (1.0 - q_lo) * step / 20000.0;
        if (q <= 0.0) continue;
        double value = ens.prior(target) * (1.0 - q);
        bool ok = true;
        Matrix c(n - 1, n - 1);
        int row = 0;
        for (int j = 0; j < n; ++j) {
            if (j == target) continue;
            int col = 0;
            for (int k = 0; k < n; ++k) {
                if (k == target) continue;
                c(row, col) = g(j, k) - std::conj(g(target, j)) * g(target, k) / q;
                ++col;
            }
            ++row;
        }
        ok = min_eigenvalue(c) > -1e-11;
        if (!ok) continue;
        row = 0;
        for (int k = 0; k < n; ++k) {
            if (k == target) continue;
            value += ens.prior(k) * c(row, row).real();
            ++row;
        }
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

TEST_CASE("two-state discrimination closed form") {
    SUBCASE("equal priors give the 1 - s optimum") {
        for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            CAPTURE(s);
            const UDSolution sol = optimize_ud(two_state(s, 0.5));
            CHECK(sol.average_success == doctest::Approx(1.0 - s).epsilon(1e-12));
            CHECK(sol.success_probs[0] == doctest::Approx(1.0 - s).epsilon(1e-12));
            CHECK(sol.success_probs[1] == doctest::Approx(1.0 - s).epsilon(1e-12));
            CHECK(sol.status == SolutionStatus::optimal);
        }
    }

    SUBCASE("interior unequal priors match 1 - 2 sqrt(eta1 eta2) s") {
        const double s = 0.5;
        const double eta1 = 0.6;
        const UDSolution sol = optimize_ud(two_state(s, eta1));
        const double want = 1.0 - 2.0 * std::sqrt(eta1 * (1.0 - eta1)) * s;
        CHECK(sol.average_success == doctest::Approx(want).epsilon(1e-12));
    }

    SUBCASE("lopsided priors hit the ignore-one-state boundary") {
        // eta2/eta1 < s^2: give up on state 2 entirely.
        const UDSolution sol = optimize_ud(two_state(0.5, 0.9));
        CHECK(sol.average_success == doctest::Approx(0.9 * 0.75).epsilon(1e-12));
        CHECK(sol.success_probs[1] == doctest::Approx(0.0));
        CHECK(sol.status == SolutionStatus::boundary);
    }
}

TEST_CASE("canonical three-state optimum") {
    const StateEnsemble ens = sd_paper_set();
    const UDSolution sol = optimize_ud(ens);

    CHECK(sol.average_success == doctest::Approx(5.0 / 9).epsilon(1e-9));
    CHECK(sol.success_probs[0] == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(sol.success_probs[1] == doctest::Approx(2.0 / 3).epsilon(1e-9));
    CHECK(sol.success_probs[2] == doctest::Approx(2.0 / 3).epsilon(1e-9));
    CHECK(sol.status == SolutionStatus::optimal);

    // The failure operator collapses to a single ancilla direction here.
    Eigen::SelfAdjointEigenSolver<Matrix> es(sol.failure_gram, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) > -1e-9);
    CHECK(es.eigenvalues()(1) < 1e-9);
    CHECK(es.eigenvalues()(2) == doctest::Approx(4.0 / 3).epsilon(1e-9));

    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(sol.failure_gram(i, i).real() - (1.0 - sol.success_probs[i])) < 1e-12);
    }
}

TEST_CASE("optimizer output is always feasible") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const StateEnsemble ens = random_independent_ensemble(n, n, rng);
        const UDSolution sol = optimize_ud(ens);
        CHECK(min_eigenvalue(sol.failure_gram) >= -1e-9);
        CHECK(sol.average_success >= 0.0);
        CHECK(sol.average_success <= 1.0 + 1e-12);
        for (double p : sol.success_probs) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("relabeling invariance") {
    std::mt19937_64 rng(37);
    const StateEnsemble ens = random_independent_ensemble(3, 3, rng);
    const UDSolution base = optimize_ud(ens);

    const std::vector<int> perm{2, 0, 1};
    std::vector<PureState> states;
    std::vector<double> priors;
    for (int i : perm) {
        states.push_back(ens.state(i));
        priors.push_back(ens.prior(i));
    }
    const UDSolution permuted = optimize_ud(StateEnsemble(states, priors));

    CHECK(permuted.average_success == doctest::Approx(base.average_success).epsilon(1e-9));
    for (int i = 0; i < 3; ++i) {
        CHECK(permuted.success_probs[static_cast<std::size_t>(i)] ==
              doctest::Approx(base.success_probs[static_cast<std::size_t>(perm[i])])
                  .epsilon(1e-7));
    }
}

TEST_CASE("success never improves when overlaps grow") {
    double prev = 1.0;
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double p = optimize_ud(two_state(s, 0.5)).average_success;
        CHECK(p <= prev + 1e-12);
        prev = p;
    }

    prev = 1.0;
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double p = optimize_ud(filter_family(a)).average_success;
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
}

TEST_CASE("degenerate and out-of-range ensembles are rejected") {
    const PureState s(PureState::normalized([] {
        Vector v(3);
        v << 1.0, 1.0, 0.0;
        return v;
    }()));
    CHECK_THROWS_AS(optimize_ud(StateEnsemble({s, s}, {0.5, 0.5})), InfeasibleError);
    CHECK_THROWS_AS(optimize_ud(filter_family(1.0)), InfeasibleError);

    Vector e1(5), e2(5), e3(5), e4(5), e5(5);
    e1 << 1, 0, 0, 0, 0;
    e2 << 0, 1, 0, 0, 0;
    e3 << 0, 0, 1, 0, 0;
    e4 << 0, 0, 0, 1, 0;
    e5 << 0, 0, 0, 0, 1;
    const StateEnsemble five({PureState(e1), PureState(e2), PureState(e3), PureState(e4),
                              PureState(e5)},
                             {0.2, 0.2, 0.2, 0.2, 0.2});
    CHECK_THROWS_AS(optimize_ud(five), std::invalid_argument);

    const StateEnsemble one({PureState(e1)}, {1.0});
    CHECK_THROWS_AS(optimize_ud(one), std::invalid_argument);
}

TEST_CASE("orthonormal ensembles are discriminated perfectly") {
    Vector e1(4), e2(4), e3(4), e4(4);
    e1 << 1, 0, 0, 0;
    e2 << 0, 1, 0, 0;
    e3 << 0, 0, 1, 0;
    e4 << 0, 0, 0, 1;
    const StateEnsemble ens({PureState(e1), PureState(e2), PureState(e3), PureState(e4)},
                            {0.4, 0.3, 0.2, 0.1});
    const UDSolution sol = optimize_ud(ens);
    CHECK(sol.average_success == doctest::Approx(1.0).epsilon(1e-9));
    for (double p : sol.success_probs) CHECK(p == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("filtering family closed form") {
    for (double a : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        CAPTURE(a);
        const StateEnsemble ens = filter_family(a);
        const FilteringSolution sol = optimize_filtering(ens, 0);

        CHECK(sol.average_success == doctest::Approx(1.0 - 2.0 * a / 3).epsilon(1e-9));
        CHECK(sol.q1 == doctest::Approx(a).epsilon(1e-9));
        CHECK(sol.success_target == doctest::Approx(1.0 - a).epsilon(1e-9));
        REQUIRE(sol.success_subset.size() == 2);
        CHECK(sol.success_subset[0] == doctest::Approx(1.0 - a / 2).epsilon(1e-9));
        CHECK(sol.success_subset[1] == doctest::Approx(1.0 - a / 2).epsilon(1e-9));

        // Failure amplitudes must reproduce the target/subset overlaps.
        const Matrix g = gram(ens);
        REQUIRE(sol.failure_amplitudes.size() == 3);
        CHECK(std::abs(std::norm(sol.failure_amplitudes[0]) - sol.q1) < 1e-12);
        for (int k = 1; k < 3; ++k) {
            const Complex cross =
                std::conj(sol.failure_amplitudes[0]) * sol.failure_amplitudes[static_cast<std::size_t>(k)];
            CHECK(std::abs(cross - g(0, k)) < 1e-10);
        }
    }
}

TEST_CASE("filtering handles degenerate geometries") {
    SUBCASE("orthogonal target is filtered perfectly") {
        Vector e1(3), e2(3), e3(3);
        e1 << 1, 0, 0;
        e2 << 0, 1, 0;
        e3 << 0, 0, 1;
        const StateEnsemble ens({PureState(e1), PureState(e2), PureState(e3)},
                                {1.0 / 3, 1.0 / 3, 1.0 / 3});
        const FilteringSolution sol = optimize_filtering(ens, 0);
        CHECK(sol.q1 == doctest::Approx(0.0));
        CHECK(sol.success_target == doctest::Approx(1.0));
        CHECK(sol.average_success == doctest::Approx(1.0));
    }

    SUBCASE("target inside the subset span degrades gracefully") {
        const FilteringSolution sol = optimize_filtering(filter_family(1.0), 0);
        CHECK(sol.q1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.success_target == doctest::Approx(0.0));
        CHECK(sol.average_success == doctest::Approx(1.0 / 3).epsilon(1e-9));
    }
}

TEST_CASE("filtering optimum agrees with a one-parameter scan") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 4; ++rep) {
        const StateEnsemble ens = random_independent_ensemble(3, 3, rng);
        const int target = static_cast<int>(rng() % 3);
        CAPTURE(rep);
        CAPTURE(target);
        const FilteringSolution sol = optimize_filtering(ens, target);
        const double scanned = filtering_scan(ens, target);
        CHECK(sol.average_success == doctest::Approx(scanned).epsilon(5e-6));
    }
}

TEST_CASE("projective baseline for the canonical set") {
    const PVMOutcome pvm = optimal_pvm_ud(sd_paper_set());
    CHECK(pvm.success == doctest::Approx(16.0 / 63).epsilon(1e-12));
    CHECK(pvm.best_index == 1);  // psi2 and psi3 tie; lowest index wins
    REQUIRE(pvm.per_state.size() == 3);
    CHECK(pvm.per_state[0] == doctest::Approx(2.0 / 9).epsilon(1e-12));
    CHECK(pvm.per_state[1] == doctest::Approx(16.0 / 63).epsilon(1e-12));
    CHECK(pvm.per_state[2] == doctest::Approx(16.0 / 63).epsilon(1e-12));
    CHECK(pvm.success <= 1.0 / 3 + 1e-9);
}

TEST_CASE("projective baseline needs an exclusion direction") {
    // Three states spanning C^2: no vector is orthogonal to the other two.
    Vector v1(2), v2(2), v3(2);
    v1 << 1.0, 0.0;
    v2 << 0.5, std::sqrt(0.75);
    v3 << 0.5, -std::sqrt(0.75);
    const StateEnsemble trine({PureState(v1), PureState(v2), PureState(v3)},
                              {1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK_THROWS_AS(optimal_pvm_ud(trine), InfeasibleError);
}

TEST_CASE("projective filtering search reaches the family optimum") {
    for (double a : {0.25, 0.5}) {
        CAPTURE(a);
        const PVMFilterResult pvm = optimal_pvm_filtering(filter_family(a), 0);
        const double want = (2.0 - a * a) / 3.0;
        CHECK(pvm.success == doctest::Approx(want).epsilon(1e-6));

        const Matrix& b = pvm.basis;
        CHECK((b.adjoint() * b - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::count(pvm.kinds.begin(), pvm.kinds.end(), 't') >= 1);
        CHECK(std::count(pvm.kinds.begin(), pvm.kinds.end(), 's') >= 1);

        const double povm = optimize_filtering(filter_family(a), 0).average_success;
        CHECK(pvm.success <= povm + 1e-9);
    }
}

TEST_CASE("POVM elements realize the solution unambiguously") {
    const StateEnsemble ens = sd_paper_set();
    const UDSolution sol = optimize_ud(ens);
    const POVMSet povm = povm_from_solution(ens, sol);

    REQUIRE(povm.elements.size() == 3);
    Matrix total = povm.inconclusive;
    for (const Matrix& e : povm.elements) total += e;
    CHECK((total - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(min_eigenvalue(povm.inconclusive) > -1e-10);

    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const Vector& psi = ens.state(j).amplitudes();
            const double mass = (psi.adjoint() * povm.elements[static_cast<std::size_t>(i)] * psi)(0).real();
            if (i == j) {
                CHECK(mass == doctest::Approx(sol.success_probs[static_cast<std::size_t>(i)]).epsilon(1e-9));
            } else {
                CHECK(std::abs(mass) < 1e-10);
            }
        }
    }

    const double inconclusive_mass = (povm.inconclusive * average_density(ens)).trace().real();
    CHECK(inconclusive_mass == doctest::Approx(4.0 / 9).epsilon(1e-9));
}

TEST_CASE("POVM properties hold on random ensembles") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 20; ++rep) {
        const StateEnsemble ens = random_independent_ensemble(3, 3, rng);
        const UDSolution sol = optimize_ud(ens);
        const POVMSet povm = povm_from_solution(ens, sol);

        Matrix total = povm.inconclusive;
        for (const Matrix& e : povm.elements) total += e;
        CHECK((total - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(min_eigenvalue(povm.inconclusive) > -1e-10);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const Vector& psi = ens.state(j).amplitudes();
                CHECK(std::abs((psi.adjoint() * povm.elements[static_cast<std::size_t>(i)] * psi)(0)) < 1e-10);
            }
        }
    }
}

TEST_CASE("two-state failure element is rank one at the optimum") {
    const StateEnsemble ens = two_state(0.6, 0.5);
    const POVMSet povm = povm_from_solution(ens, optimize_ud(ens));
    Eigen::SelfAdjointEigenSolver<Matrix> es(povm.inconclusive, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) < 1e-10);
    CHECK(es.eigenvalues()(1) > 0.1);
}

TEST_CASE("mixed-state view of filtering cross-checks the pure-state solution") {
    const double a = 0.25;
    const StateEnsemble ens = filter_family(a);
    const FilteringSolution sol = optimize_filtering(ens, 0);
    const DilatedStates dil = build_outputs_filtering(ens, 0, sol);
    const Matrix u = build_unitary(ens, dil);
    const POVMSet povm = extract_povm(u, ens.dim(),
                                      {{"target", {1}}, {"subset", {2, 3}}, {"inconclusive", {4}}});

    const MixedCheckReport report = verify_mixed_discrimination(ens, 0, povm);
    CHECK(report.unambiguous);
    CHECK(report.matches_reference);
    CHECK(report.average_success == doctest::Approx(5.0 / 6).epsilon(1e-9));
    CHECK(report.target_success == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(report.subset_success == doctest::Approx(0.875).epsilon(1e-9));
    CHECK(report.target_false_positive < 1e-10);
    CHECK(report.subset_false_positive < 1e-10);

    SUBCASE("the degenerate give-up-on-the-target strategy is still unambiguous") {
        const Vector& t = ens.state(0).amplitudes();
        POVMSet degenerate;
        degenerate.elements = {Matrix::Zero(3, 3),
                               Matrix::Identity(3, 3) - t * t.adjoint()};
        degenerate.labels = {"target", "subset"};
        degenerate.inconclusive = t * t.adjoint();
        const MixedCheckReport weak = verify_mixed_discrimination(ens, 0, degenerate);
        CHECK(weak.unambiguous);
        CHECK_FALSE(weak.matches_reference);
        CHECK(weak.average_success ==
              doctest::Approx((2.0 / 3) * (1.0 - a * a / 2)).epsilon(1e-9));
    }

    SUBCASE("POVMs without the expected labels are rejected") {
        POVMSet unlabeled;
        unlabeled.elements = {Matrix::Identity(3, 3)};
        unlabeled.labels = {"whatever"};
        unlabeled.inconclusive = Matrix::Zero(3, 3);
        CHECK_THROWS_AS(verify_mixed_discrimination(ens, 0, unlabeled), std::invalid_argument);
    }
}

TEST_CASE("grid oracle sanity") {
    SUBCASE("orthonormal corner is found exactly") {
        Vector e1(2), e2(2);
        e1 << 1, 0;
        e2 << 0, 1;
        const StateEnsemble ens({PureState(e1), PureState(e2)}, {0.5, 0.5});
        const UDSolution sol = grid_oracle_ud(ens, 10);
        CHECK(sol.average_success == doctest::Approx(1.0));
    }

    SUBCASE("two-state oracle matches the closed form") {
        const StateEnsemble ens = two_state(0.5, 0.5);
        const UDSolution oracle = grid_oracle_ud(ens, 120);
        CHECK(std::abs(oracle.average_success - 0.5) < 1e-3);
    }

    SUBCASE("canonical anchor at high resolution") {
        const UDSolution oracle = grid_oracle_ud(sd_paper_set(), 200);
        CHECK(std::abs(oracle.average_success - 5.0 / 9) < 1e-3);
    }

    SUBCASE("invalid requests are rejected") {
        Vector e1(4), e2(4), e3(4), e4(4);
        e1 << 1, 0, 0, 0;
        e2 << 0, 1, 0, 0;
        e3 << 0, 0, 1, 0;
        e4 << 0, 0, 0, 1;
        const StateEnsemble four({PureState(e1), PureState(e2), PureState(e3), PureState(e4)},
                                 {0.25, 0.25, 0.25, 0.25});
        CHECK_THROWS_AS(grid_oracle_ud(four, 10), std::invalid_argument);
        CHECK_THROWS_AS(grid_oracle_ud(sd_paper_set(), 1), std::invalid_argument);
    }
}
