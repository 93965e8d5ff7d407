#include <doctest.h>

#include "vbs/mpsprep.hpp"
#include "vbs/prepare.hpp"
#include "vbs/statesim.hpp"

using namespace vbs;

namespace {

bool unitary(const Mat& u) { return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-12; }

Lattice chain(int n, Boundary b, int l = 0, int r = 0) { return build_chain(n, b, l, r); }

}  // namespace

TEST_CASE("bulk tensor is left-normalized with bond dimension 2") {
    const MpsTensor t = vbs_bulk_tensor();
    CHECK(t.left_dim == 2);
    CHECK(t.right_dim == 2);
    CHECK(t.left_normalized());
    const MpsTensor back = MpsTensor::from_matrix(t.as_matrix(), 2);
    for (int s = 0; s < 4; ++s) CHECK((back.a[s] - t.a[s]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("contracted MPS equals the symmetrized valence-bond state") {
    for (int n = 2; n <= 6; ++n) {
        for (int l : {0, 1})
            for (int r : {0, 1}) {
                const Vec mps = contract_mps(vbs_mps(n, Boundary::open_chain, l, r), false);
                CHECK(fidelity(mps.normalized(), oracle_vbs_state(chain(n, Boundary::open_chain, l, r))) ==
                      doctest::Approx(1.0).epsilon(1e-12));
            }
        if (n >= 3) {
            const Vec mps = contract_mps(vbs_mps(n, Boundary::ring), true);
            CHECK(fidelity(mps.normalized(), oracle_vbs_state(chain(n, Boundary::ring))) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("left canonicalization keeps the state and normalizes every site") {
    double cut = 1;
    const auto chain5 = left_canonicalize(vbs_mps(5, Boundary::open_chain, 0, 1), &cut);
    CHECK(cut < 1e-12);
    for (std::size_t i = 0; i + 1 < chain5.size(); ++i) CHECK(chain5[i].left_normalized());
}

TEST_CASE("disentanglers are unitary and carry the tensor columns") {
    const auto ch = vbs_mps(4, Boundary::open_chain);
    const Disentangler first = build_disentangler(ch[0], DisentanglerRole::first_open);
    CHECK(first.matrix.rows() == 4);
    CHECK(unitary(first.matrix));
    const Disentangler bulk = build_disentangler(vbs_bulk_tensor(), DisentanglerRole::bulk);
    CHECK(bulk.matrix.rows() == 8);
    CHECK(unitary(bulk.matrix));
    CHECK((bulk.matrix.leftCols(2) - vbs_bulk_tensor().as_matrix()).cwiseAbs().maxCoeff() < 1e-12);
    const Disentangler last = build_disentangler(ch[3], DisentanglerRole::last_open);
    CHECK(last.matrix.size() == 8);
    CHECK(last.matrix.norm() == doctest::Approx(1.0));

    // a tensor that is not left-normalized is refused
    MpsTensor bad = vbs_bulk_tensor();
    bad.a[0] *= 2.0;
    CHECK_THROWS(build_disentangler(bad, DisentanglerRole::bulk));
}

TEST_CASE("completion seed order changes the matrix but not the prepared state") {
    const std::vector<int> seed{7, 3, 5, 1, 6, 2, 4, 0};
    for (Boundary b : {Boundary::open_chain, Boundary::ring}) {
        MpsOptions o1, o2;
        o2.completion_seed = seed;
        const MpsPreparation a = prepare_via_mps(4, b, 0, 0, o1), c = prepare_via_mps(4, b, 0, 0, o2);
        CHECK(fidelity(a.state, c.state) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(a.success_prob == doctest::Approx(c.success_prob).epsilon(1e-12));
    }
}

TEST_CASE("circuit preparation matches the oracle on chains and rings") {
    for (int n = 2; n <= 6; ++n) {
        const MpsPreparation open = prepare_via_mps(n, Boundary::open_chain, 1, 0);
        CHECK(open.success_prob == doctest::Approx(1.0));
        CHECK(fidelity(open.state, oracle_vbs_state(chain(n, Boundary::open_chain, 1, 0))) == doctest::Approx(1.0).epsilon(1e-12));
        if (n < 3) continue;
        const MpsPreparation ring = prepare_via_mps(n, Boundary::ring);
        CHECK(fidelity(ring.state, oracle_vbs_state(chain(n, Boundary::ring))) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ring.success_prob == doctest::Approx(mps_periodic_success(n, ring.scale)).epsilon(1e-12));
        CHECK(ring.circuit.n_qubits == 2 * n + 1);
    }
}

TEST_CASE("ring success follows n^2 (1 + 3 (-1/3)^N) / 2 and depends on the scale") {
    const Mat a = periodic_first_site_matrix(vbs_bulk_tensor());
    const double bound = embedding_scale_bound(a);
    CHECK(bound == doctest::Approx(std::sqrt(1.5)).epsilon(1e-9));
    CHECK(default_embedding_scale(a) < bound);
    for (double scale : {0.3, 0.55, 1.0}) {
        MpsOptions o;
        o.scale = scale;
        const MpsPreparation p = prepare_via_mps(5, Boundary::ring, 0, 0, o);
        CHECK(p.success_prob == doctest::Approx(scale * scale * (1 - 3.0 / 243) / 2).epsilon(1e-10));
    }
    CHECK_THROWS(embed_nonunitary_periodic(a, bound * 1.01));
    CHECK_THROWS(embed_nonunitary_periodic(a, 0.0));
    CHECK(unitary(embed_nonunitary_periodic(a, 0.9 * bound).matrix));
    CHECK(periodic_last_site_state(vbs_bulk_tensor()).norm() == doctest::Approx(1.0));
}

TEST_CASE("printed bulk operator: as printed it is not real, the corrected constant is unitary") {
    const Mat printed = printed_bulk_disentangler(false);
    CHECK(printed.hasNaN());
    const Mat fixed = printed_bulk_disentangler(true);
    CHECK(unitary(fixed));
    // same tensor columns as the bulk tensor up to a sign
    const Mat cols = vbs_bulk_tensor().as_matrix();
    const double overlap = std::abs((fixed.leftCols(2).adjoint() * cols).trace());
    CHECK(overlap == doctest::Approx(2.0).epsilon(1e-12));
    MpsOptions o;
    o.bulk_override = fixed;
    const MpsPreparation p = prepare_via_mps(5, Boundary::ring, 0, 0, o);
    CHECK(fidelity(p.state, oracle_vbs_state(chain(5, Boundary::ring))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("argument checks") {
    CHECK_THROWS(prepare_via_mps(2, Boundary::ring));
    CHECK_THROWS(prepare_via_mps(1, Boundary::open_chain));
    CHECK_THROWS(mps_periodic_success(4, 0.0));
}
