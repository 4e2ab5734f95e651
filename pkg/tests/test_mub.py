import cmath
import json
import math
from itertools import combinations

import numpy as np
import pytest

from mubkit.errors import FormatError, IntegrityError, NoConstructionError, ShapeError
from mubkit.linalg import unitary_from_gaussian
from mubkit.mub import (
    SUPPORTED_DIMS,
    MubSet,
    OrthonormalBasis,
    build_full_mub_set,
    computational_basis,
    load_bases,
    mubset_to_dict,
    save_bases,
    verify_orthonormal,
    verify_unbiased,
)
from mubkit.rng import RandomStream


def test_computational_basis():
    assert np.array_equal(computational_basis(2).vectors, [[1, 0], [0, 1]])
    assert np.array_equal(computational_basis(3).vectors, np.eye(3))
    assert verify_orthonormal(computational_basis(7)) == 0
    with pytest.raises(Exception):
        computational_basis(1)


def test_verify_orthonormal_examples():
    u = unitary_from_gaussian(6, RandomStream(5))
    assert verify_orthonormal(u.T) <= 1e-12
    assert verify_orthonormal(np.array([[1, 0], [1, 0]])) == 1
    with pytest.raises(IntegrityError):
        OrthonormalBasis(np.array([[1, 0], [1, 0]]))


def test_verify_unbiased_examples():
    ms = build_full_mub_set(2)
    z, x = ms[0], ms[1]
    assert verify_unbiased(z, x) <= 1e-15
    assert verify_unbiased(z, z) == pytest.approx(0.5)
    ms3 = build_full_mub_set(3)
    assert verify_unbiased(ms3[1], ms3[2]) <= 1e-12
    with pytest.raises(ShapeError):
        verify_unbiased(z, ms3[0])


@pytest.mark.parametrize("d", SUPPORTED_DIMS)
def test_full_sets_certified(d):
    ms = build_full_mub_set(d)
    assert len(ms) == d + 1 and ms.complete
    assert ms.labels[0] == "computational"
    for b in ms:
        assert verify_orthonormal(b) <= 1e-12
    # independent overlap oracle: explicit double loop over vector pairs
    for b1, b2 in combinations(ms, 2):
        worst = max(abs(abs(np.vdot(u, v)) ** 2 - 1 / d) for u in b1.vectors for v in b2.vectors)
        assert worst <= 1e-10


@pytest.mark.parametrize("d", SUPPORTED_DIMS)
def test_deterministic_and_phase_convention(d):
    a, b = build_full_mub_set(d), build_full_mub_set(d)
    for x, y in zip(a, b):
        assert np.array_equal(x.vectors, y.vectors)
    for basis in a.bases[1:]:
        for vec in basis.vectors:
            first = vec[np.flatnonzero(np.abs(vec) > 1e-15)[0]]
            assert first.imag == 0 and first.real > 0


def test_d2_pauli_eigenbases():
    ms = build_full_mub_set(2)
    s = 1 / math.sqrt(2)
    assert np.allclose(ms[1].vectors, [[s, s], [s, -s]], atol=1e-16)
    assert np.allclose(ms[2].vectors, [[s, 1j * s], [s, -1j * s]], atol=1e-16)


def test_d3_wootters_fields_component():
    ms = build_full_mub_set(3)
    # basis a=1 is index 2 (after computational and a=0); vector b=0; coordinate x=1
    expected = cmath.exp(2j * math.pi / 3) / math.sqrt(3)
    assert abs(ms[2].vectors[0, 1] - expected) <= 1e-15


def test_d4_d8_entries_are_powers_of_i():
    for d in (4, 8):
        for b in build_full_mub_set(d).bases[1:]:
            scaled = b.vectors * math.sqrt(d)
            assert np.allclose(np.minimum.reduce([np.abs(scaled - z) for z in (1, 1j, -1, -1j)]), 0, atol=1e-15)


@pytest.mark.parametrize("d", [1, 6, 10, 12, 14, 16])
def test_unsupported_dimension(d):
    with pytest.raises(NoConstructionError, match=f"no construction available for d={d}"):
        build_full_mub_set(d)
    assert not issubclass(NoConstructionError, ShapeError)


def test_mubset_rejects_biased_pair():
    b = computational_basis(2)
    with pytest.raises(IntegrityError):
        MubSet((b, b))
    partial = MubSet(build_full_mub_set(3).bases[:2])
    assert not partial.complete


def test_round_trip(tmp_path):
    ms = build_full_mub_set(3)
    path = tmp_path / "b3.json"
    save_bases(ms, path)
    back = load_bases(path)
    assert back.labels == ms.labels
    for (b1, b2), (c1, c2) in zip(combinations(ms, 2), combinations(back, 2)):
        assert abs(verify_unbiased(b1, b2) - verify_unbiased(c1, c2)) <= 1e-12
    for x, y in zip(ms, back):
        assert np.array_equal(x.vectors, y.vectors)


def test_tampered_norm_is_integrity_error(tmp_path):
    data = mubset_to_dict(build_full_mub_set(3))
    data["bases"][1][0][0] = [0.9, 0.0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(IntegrityError, match=r"bases\[1\]"):
        load_bases(path)


def test_wrong_d_is_format_error(tmp_path):
    data = mubset_to_dict(build_full_mub_set(3))
    data["d"] = 4
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(FormatError, match="bases"):
        load_bases(path)


@pytest.mark.parametrize(
    "mutate,match",
    [
        (lambda t: t.replace('"d"', '"dim"'), "'d'"),
        (lambda t: t[:-5], "line"),
        (lambda t: t.replace("computational", "x").replace('"labels": [', '"labels": [1, '), "labels"),
    ],
)
def test_malformed_files(tmp_path, mutate, match):
    path = tmp_path / "b.json"
    save_bases(build_full_mub_set(2), path)
    path.write_text(mutate(path.read_text()))
    with pytest.raises(FormatError, match=match):
        load_bases(path)


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        load_bases(tmp_path / "nope.json")


def test_schema_layout(tmp_path):
    path = tmp_path / "b.json"
    save_bases(build_full_mub_set(2), path)
    data = json.loads(path.read_text())
    assert set(data) == {"d", "bases", "labels"}
    assert np.array(data["bases"]).shape == (3, 2, 2, 2)
