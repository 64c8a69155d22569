from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qtrick.abelian import (
    FiniteQuotient,
    Isotropy,
    kernel_of_polarization,
    make_polarized,
    power_polarization,
)
from qtrick.acceptance import brute_force_four_squares, random_instance
from qtrick.errors import DegreeMismatch, HypothesisFailed, NotIsotropic, NotIntegral
from qtrick.exact_linalg import IntMatrix, RatMatrix, block, block_diag, det, inv, kron, lattice_equal, symplectic_type
from qtrick.instances import generate_instance
from qtrick.rings import RingAction, delta_m, iota, iota_of_star, kappa4, kappa4_from
from qtrick.trick import (
    FourSquares,
    TrickConfig,
    build_pi,
    check_graph_isotropy,
    decompose_four_squares,
    descend,
    descent_route,
    four_squares,
    graph_V,
    principal_mu,
    quaternion_I,
    run_trick,
    transport_action,
)

GAUSS_I = IntMatrix([[0, -1], [1, 0]])


@pytest.mark.parametrize("n, s, quad", [
    (1, 1, (1, 0, 0, 0)),
    (2, 1, (1, 0, 0, 0)),
    (5, 4, (2, 0, 0, 0)),
    (9, 8, (2, 2, 0, 0)),
])
def test_four_squares_examples(n, s, quad):
    q = four_squares(n)
    assert (q.s, q.quadruple) == (s, quad)
    assert brute_force_four_squares(n) == (s, quad)


@given(st.integers(1, 300))
def test_four_squares_against_brute_force(n):
    q = four_squares(n)
    assert q.is_valid
    assert (q.s, q.quadruple) == brute_force_four_squares(n)


@given(st.integers(1, 10**6))
def test_decompose_four_squares(s):
    a, b, c, d = decompose_four_squares(s)
    assert a * a + b * b + c * c + d * d == s
    assert a >= b >= c >= d >= 0


def test_quaternion_examples():
    assert quaternion_I(FourSquares(1, 1, 0, 0, 0)) == IntMatrix.identity(4)
    assert quaternion_I(FourSquares(1, 0, 1, 0, 0)) == IntMatrix(
        [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
    )
    I = quaternion_I(FourSquares(3, 1, 1, 1, 1))
    assert I.T @ I == IntMatrix.identity(4).scale(4)


@given(st.tuples(*[st.integers(-20, 20)] * 4))
def test_quaternion_norm_identity(quad):
    q = FourSquares(1, *quad)
    I = quaternion_I(q)
    sId = IntMatrix.identity(4).scale(q.s)
    assert I.T @ I == sId and I @ I.T == sId


@given(st.tuples(*[st.integers(-5, 5)] * 4), st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_I_commutes_with_diagonal(quad, entries):
    M = IntMatrix([entries[:2], entries[2:]])
    Ibig = kron(quaternion_I(FourSquares(1, *quad)), IntMatrix.identity(2))
    assert Ibig @ delta_m(M, 4) == delta_m(M, 4) @ Ibig


def test_build_pi_principal(J):
    X = make_polarized(J)
    pi = build_pi(X, four_squares(1))
    E4 = block_diag(J, J, J, J)
    Id8 = IntMatrix.identity(8)
    assert pi == block([[E4, IntMatrix.zeros(8)], [Id8, -Id8]])
    assert abs(det(pi)) == 1


def test_build_pi_degree_four(J):
    X = make_polarized(J.scale(2))
    q = four_squares(4)
    pi = build_pi(X, q)
    assert abs(det(pi)) == 256
    with pytest.raises(DegreeMismatch):
        build_pi(X, four_squares(9))
    # every lift of a graph point lands in the lattice
    for v in graph_V(X, q).lifts():
        assert all(Fraction(x).denominator == 1 for x in pi.apply(v))


def test_graph_V_examples(J):
    assert graph_V(make_polarized(J), four_squares(1)).is_trivial()
    X = make_polarized(J.scale(2))
    V = graph_V(X, four_squares(4))
    assert V.order == 256
    assert V.order**2 == kernel_of_polarization(power_polarization(X, 8)).order == 4**8


def test_graph_V_is_kernel_of_pi():
    for seed in range(6):
        X = random_instance(seed, max_g=2).polarized()
        q = four_squares(X.degree)
        from qtrick.abelian import kernel_of_isogeny

        assert graph_V(X, q).same_subgroup(kernel_of_isogeny(build_pi(X, q)))


def test_graph_isotropy_examples(J):
    X = make_polarized(J.scale(2))
    q = FourSquares(4, 1, 1, 1, 0)
    assert q.is_valid
    assert check_graph_isotropy(X, q) is Isotropy.MAXIMAL_ISOTROPIC
    assert check_graph_isotropy(make_polarized(J), four_squares(1)) is Isotropy.MAXIMAL_ISOTROPIC


def test_graph_isotropy_depends_on_exponent_not_degree(J):
    # 2J has degree 4 but its kernel has exponent 2: s = 1 is -1 mod 2, so V stays isotropic
    X = make_polarized(J.scale(2))
    bad_mod_n = FourSquares(4, 1, 0, 0, 0)
    assert not bad_mod_n.is_valid
    assert check_graph_isotropy(X, bad_mod_n) is Isotropy.MAXIMAL_ISOTROPIC
    # 2J with s = 2: s + 1 = 3 is odd, pairing (1 + s)/2 is not integral
    assert check_graph_isotropy(X, FourSquares(4, 1, 1, 0, 0)) is Isotropy.NOT_ISOTROPIC
    # 3J (exponent 3) with s = 1
    assert check_graph_isotropy(make_polarized(J.scale(3)), FourSquares(9, 1, 0, 0, 0)) is Isotropy.NOT_ISOTROPIC


@pytest.mark.parametrize("ty", [(2,), (3,), (1, 2), (2, 4)])
def test_isotropy_iff_s_minus_one_mod_exponent(ty):
    X = generate_instance(len(ty), ty, "integers", seed=2).polarized()
    n = X.degree
    exponent = kernel_of_polarization(X).exponent
    for s in range(1, min(n, 20)):
        iso = check_graph_isotropy(X, FourSquares(n, *decompose_four_squares(s)))
        assert (iso is Isotropy.MAXIMAL_ISOTROPIC) == ((s + 1) % exponent == 0)


def test_flipped_pairing_sign_breaks_isotropy(J):
    X = make_polarized(J.scale(3))
    q = four_squares(9)
    assert check_graph_isotropy(X, q) is Isotropy.MAXIMAL_ISOTROPIC
    assert check_graph_isotropy(X, q, flip_pairing_sign=True) is Isotropy.NOT_ISOTROPIC


def test_principal_mu_hand_computed(J):
    X = make_polarized(J)
    pi = build_pi(X, four_squares(1))
    mu = principal_mu(X, pi)
    A = block_diag(J, J, J, J)
    Id8 = IntMatrix.identity(8)
    # block inverse of [[A, 0], [Id, -Id]] is [[A^-1, 0], [A^-1, -Id]] and A^-1 = -A
    assert mu == block([[A.scale(2), Id8], [-Id8, A]])
    assert det(mu) == 1
    assert pi.T @ mu @ pi == power_polarization(X, 8).E


def test_principal_mu_rejects_bad_pi(J):
    X = make_polarized(J.scale(3))
    pi = build_pi(X, FourSquares(9, 1, 0, 0, 0))
    with pytest.raises(NotIntegral):
        principal_mu(X, pi)


@given(st.integers(0, 10**6))
def test_principal_mu_properties(seed):
    X = random_instance(seed, max_g=2).polarized()
    pi = build_pi(X, four_squares(X.degree))
    mu = principal_mu(X, pi)
    assert mu.is_alternating()
    assert abs(det(mu)) == 1
    assert pi.T @ mu @ pi == power_polarization(X, 8).E


def test_descend_examples(J):
    E = J.scale(2)
    Ed, B = descend(E, FiniteQuotient.generated_by(2, []))
    assert Ed == E
    half = Fraction(1, 2)
    Ed, B = descend(E, FiniteQuotient.generated_by(2, [(half, 0)]))
    assert Ed == J
    assert B == RatMatrix([[half, 0], [0, 1]])
    with pytest.raises(NotIsotropic):
        descend(E, kernel_of_polarization(make_polarized(E)))


@pytest.mark.parametrize("ty", [(1,), (2,), (3,), (1, 2)])
def test_descend_graph_is_principal(ty):
    X = generate_instance(len(ty), ty, "integers", seed=1).polarized()
    q = four_squares(X.degree)
    Ed, _ = descend(power_polarization(X, 8).E, graph_V(X, q))
    assert abs(det(Ed)) == 1
    assert symplectic_type(Ed) == (1,) * (Ed.nrows // 2)


def test_transport_identity(J):
    lam = J.scale(2)
    j = {"i": GAUSS_I, "mi": -GAUSS_I, "1": IntMatrix.identity(2)}
    star = {"i": "mi", "mi": "i", "1": "1"}
    checks = transport_action(IntMatrix.identity(2), lam, lam, j, j, star)
    assert [c.name for c in checks] == ["lambdaMu", "lambdaJ", "Desc", "interm", "muJpi"]


def _trick_transport(A):
    X = A.X
    pi = build_pi(X, four_squares(X.degree))
    mu = principal_mu(X, pi)
    j, j_pi, star = {}, {}, {}
    for w in ["1"] + [n for n in A.generators if n != "1"]:
        m, ms = iota(A, w), iota_of_star(A, w)
        j[w], j[w + "*"] = delta_m(m, 8), delta_m(ms, 8)
        j_pi[w], j_pi[w + "*"] = kappa4_from(m, ms), kappa4_from(ms, m)
        star[w], star[w + "*"] = w + "*", w
    return pi, power_polarization(X, 8).E, mu, j, j_pi, star


def test_transport_quaternion_instance():
    A = generate_instance(1, (2,), "gauss", seed=4).ring_action()
    checks = transport_action(*_trick_transport(A))
    assert all(c.ok for c in checks) and checks[-1].name == "muJpi"


def test_transport_swapped_blocks_fails_desc():
    A = generate_instance(1, (2,), "gauss", seed=4).ring_action()
    pi, lam, mu, j, j_pi, star = _trick_transport(A)
    M = j_pi["i"]
    top, bottom = M.submatrix(0, 8, 0, 8), M.submatrix(8, 16, 8, 16)
    assert top != bottom
    with pytest.raises(HypothesisFailed) as err:
        transport_action(pi, lam, mu, j, {**j_pi, "i": block_diag(bottom, top)}, star)
    assert err.value.name == "Desc"


def test_transport_reports_failed_hypotheses(J):
    lam = J.scale(2)
    Id = IntMatrix.identity(2)
    with pytest.raises(HypothesisFailed) as err:
        transport_action(Id, lam, J, {"1": Id}, {"1": Id})
    assert err.value.name == "lambdaMu"
    with pytest.raises(HypothesisFailed) as err:
        transport_action(Id, lam, lam, {"i": GAUSS_I}, {"i": GAUSS_I})  # i is not self-adjoint
    assert err.value.name == "lambdaJ"


def test_run_trick_scalar(J):
    X = make_polarized(J)
    res = run_trick(X, RingAction(X, {}))
    assert res.ok
    assert res.squares.s == 1 and res.I == IntMatrix.identity(4)
    assert kappa4(RingAction(X, {}), "3") == IntMatrix.identity(16).scale(3)


def test_run_trick_gaussian_kappa4(J):
    X = make_polarized(J)
    A = RingAction(X, {"i": J})
    res = run_trick(X, A)
    assert res.ok
    k_i = kappa4(A, "i")
    k_mi = kappa4(A, "-i")
    assert res.mu @ k_i == k_mi.T @ res.mu


def test_run_trick_degree_four(J):
    X = make_polarized(J.scale(2))
    res = run_trick(X, RingAction(X, {}))
    assert res.ok
    assert res.squares.quadruple == (1, 1, 1, 0)
    assert res.V.order == 256
    assert abs(det(res.mu)) == 1


def test_run_trick_required_checks():
    A = generate_instance(2, (1, 3), "zeta3", seed=9).ring_action()
    res = run_trick(A.X, A)
    names = {c.name for c in res.report}
    required = {"action_valid", "degree_power_law", "V_order", "V_maximal_isotropic", "mu_integral",
                "mu_alternating", "mu_unimodular", "pullback_identity", "kappa4_compat",
                "oracle_lattice_equal", "prop21_transport"}
    assert required <= names
    assert res.ok, [c for c in res.report if not c.ok]


def test_run_trick_bad_override_records_failures(J):
    X = make_polarized(J.scale(3))
    res = run_trick(X, RingAction(X, {}), TrickConfig(quaternion_override=(1, 0, 0, 0)))
    assert not res.ok
    assert not res.check("V_maximal_isotropic").ok
    assert not res.check("mu_integral").ok
    assert "InternalInconsistency" not in res.check("mu_integral").detail
    assert res.mu is None


@given(st.integers(0, 10**6))
def test_oracle_equivalence(seed):
    X = random_instance(seed, max_g=2).polarized()
    q = four_squares(X.degree)
    pi = build_pi(X, q)
    mu = principal_mu(X, pi)
    assert descent_route(X, pi, graph_V(X, q), mu) == (True, True)
    assert lattice_equal(inv(pi), descend(power_polarization(X, 8).E, graph_V(X, q))[1])


def test_unimodular_invariance():
    base = generate_instance(1, (3,), "gauss", seed=0, steps=0).ring_action()
    other = generate_instance(1, (3,), "gauss", seed=11).ring_action()
    r1, r2 = run_trick(base.X, base), run_trick(other.X, other)
    assert r1.ok and r2.ok
    assert symplectic_type(r1.mu) == symplectic_type(r2.mu) == (1,) * 8
