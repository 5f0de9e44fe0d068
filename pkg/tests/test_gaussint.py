import pytest
from hypothesis import given, settings, strategies as st

from cmlv.errors import InputError
from cmlv.gaussint import (
    UNITS,
    GaussInt,
    IdealRep,
    ResidueSystem,
    divides,
    euler_phi,
    factor,
    gcd,
    is_primary,
    norm,
    normalize,
    normalize_primary,
    quartic_symbol,
    ray_class_reps,
    unit_part,
)

small = st.integers(-300, 300)
gauss = st.builds(GaussInt, small, small)
nonzero = gauss.filter(bool)


def test_norm_examples():
    assert norm(GaussInt(0, 0)) == 0
    assert norm(GaussInt(1, 1)) == 2
    assert norm(GaussInt(2, 1)) == 5


@given(gauss, gauss)
def test_norm_multiplicative(a, b):
    assert norm(a * b) == norm(a) * norm(b)


def test_gcd_examples():
    assert gcd(GaussInt(2, 0), GaussInt(1, 1)) == GaussInt(1, 1)
    assert gcd(GaussInt(3, 0), GaussInt(5, 0)) == GaussInt(1, 0)
    z = GaussInt(-3, 7)
    assert gcd(z, GaussInt(0, 0)) == normalize(z)
    with pytest.raises(InputError):
        gcd(GaussInt(0, 0), GaussInt(0, 0))


@given(nonzero, nonzero)
def test_gcd_divides_both(a, b):
    g = gcd(a, b)
    assert divides(g, a) and divides(g, b)


@given(gauss, nonzero)
def test_divmod_remainder_smaller(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert 2 * norm(r) <= norm(b)


def test_factor_examples():
    assert factor(GaussInt(5, 0)) == [(GaussInt(1, 2), 1), (GaussInt(2, 1), 1)]
    assert factor(GaussInt(1, 1)) == [(GaussInt(1, 1), 1)]
    assert factor(GaussInt(56, 0)) == [(GaussInt(1, 1), 6), (GaussInt(7, 0), 1)]


@settings(max_examples=200)
@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_factor_round_trip(a, b):
    z = GaussInt(a, b)
    if not z:
        return
    fac = factor(z)
    u = unit_part(z, fac)
    assert u in UNITS
    prod = u
    for pi, e in fac:
        assert len(factor(pi)) == 1
        prod = prod * pi ** e
    assert prod == z


def test_normalize_primary():
    for z in (GaussInt(2, 1), GaussInt(1, 2), GaussInt(3, 0), GaussInt(5, 2)):
        w = normalize_primary(z)
        assert is_primary(w)
        assert w in [u * z for u in UNITS]
    assert normalize_primary(GaussInt(2, 1)) == GaussInt(-1, 2)
    assert normalize_primary(GaussInt(1, 0)) == GaussInt(1, 0)
    assert normalize_primary(GaussInt(-1, 0)) == GaussInt(1, 0)
    with pytest.raises(InputError):
        normalize_primary(GaussInt(1, 1))


def _brute_phi(h: GaussInt) -> int:
    return sum(1 for z in ResidueSystem(h) if gcd(z, h).norm() == 1 or not z and h.norm() == 1)


def test_euler_phi_examples():
    assert euler_phi(GaussInt(1, 0)) == 1
    assert euler_phi(GaussInt(5, 0)) == 16
    assert euler_phi(GaussInt(2, 0) * GaussInt(1, 1) * 17) == 1024


def test_euler_phi_brute_force():
    checked = 0
    for a in range(0, 45):
        for b in range(0, 45):
            h = GaussInt(a, b)
            if not h or h.norm() > 2000 or h != normalize(h):
                continue
            if h.norm() > 300 and (a + b) % 7:
                continue  # thin out the large norms to keep this quick
            assert euler_phi(h) == _brute_phi(h), h
            checked += 1
    assert checked > 100


def test_residue_system_complete():
    f = GaussInt(6, 4)
    rs = ResidueSystem(f)
    keys = {rs.key(z) for z in rs}
    assert len(keys) == len(rs) == f.norm()
    for z in (GaussInt(17, -5), GaussInt(-40, 33)):
        assert divides(f, z - rs.reduce(z))


def test_quartic_symbol_examples():
    pi = GaussInt(-1, 2)
    assert quartic_symbol(GaussInt(0, 1), pi) == GaussInt(0, 1)
    assert quartic_symbol(1, pi) == GaussInt(1, 0)
    assert quartic_symbol(GaussInt(3, 4) ** 4, normalize_primary(GaussInt(3, 2))) == GaussInt(1, 0)
    with pytest.raises(InputError):
        quartic_symbol(2, GaussInt(2, 1))  # not primary
    with pytest.raises(InputError):
        quartic_symbol(GaussInt(-1, 2), GaussInt(-1, 2))


PRIMARY_PRIMES = [normalize_primary(p) for p in
                  (GaussInt(2, 1), GaussInt(3, 2), GaussInt(4, 1), GaussInt(7, 0), GaussInt(5, 4), GaussInt(10, 1))]


@given(st.sampled_from(PRIMARY_PRIMES), nonzero, nonzero)
def test_quartic_symbol_multiplicative(pi, a, b):
    if divides(pi, a) or divides(pi, b):
        return
    assert quartic_symbol(a * b, pi) == quartic_symbol(a, pi) * quartic_symbol(b, pi)


def test_ideal_rep_equality():
    assert IdealRep(GaussInt(2, 1)) == IdealRep(GaussInt(-1, 2))
    assert hash(IdealRep(GaussInt(2, 1))) == hash(IdealRep(GaussInt(1, -2)))
    assert IdealRep(GaussInt(2, 1)) != IdealRep(GaussInt(1, 2))
    with pytest.raises(InputError):
        IdealRep(GaussInt(0, 0))


@pytest.mark.parametrize("f, count", [
    (GaussInt(1, 1) ** 3, 1),
    (GaussInt(2, 0) * GaussInt(1, 1) * 17, 256),
    (GaussInt(56, 0), 384),
    (GaussInt(12, 0), 16),
])
def test_ray_class_reps(f, count):
    reps = ray_class_reps(f)
    assert len(reps) == count == euler_phi(f) // 4
    rs = ResidueSystem(f)
    seen = set()
    for r in reps:
        assert gcd(r.gen, f).norm() == 1
        orbit = {rs.key(u * r.gen) for u in UNITS}
        assert not orbit & seen
        seen |= orbit
