"""Tests for the annular (tube) algebras and their block decomposition.

Expected dimensions come from the raw-data counting oracle in
test_oracles; expected block counts come from the group-theory oracle
there and from the known simple counts of the small doubles.
"""

import json

import numpy as np
import pytest

from gct import (
    build_tube,
    build_twisted_tube,
    bundled_path,
    decompose,
    twisted_untwisted_iso,
    verify_algebra,
)
from gct.fusion_core import GroupAction, ValidationError
from test_oracles import tube_dim_oracle


def _raw(name):
    with open(bundled_path(name)) as fh:
        return json.load(fh)


# ------------------------------------------------------------------ axioms


@pytest.mark.parametrize("key", ["fib", "vec_z2", "ising", "vec_s3"])
def test_algebra_axioms(request, key, fib_center, z2_center, ising_center,
                        s3_center):
    tube = {"fib": fib_center, "vec_z2": z2_center, "ising": ising_center,
            "vec_s3": s3_center}[key]["tube"]
    rep = verify_algebra(tube)
    assert rep["pass"], rep
    assert rep["grade_mismatch_max"] == 0.0


def test_twisted_algebra_axioms(z3_twisted):
    rep = verify_algebra(z3_twisted["tube"])
    assert rep["pass"], rep


def test_corrupted_constant_is_caught(cats):
    tube = build_tube(cats["vec_z2"], subcat=[0, 1])
    rep = verify_algebra(tube)
    assert rep["pass"]
    saved = tube.constants.copy()
    try:
        tube.constants[0, 1, 2] += 0.37
        bad = verify_algebra(tube)
        assert not bad["pass"]
        assert bad["associativity"] > 1e-3 or bad["star_anti_mult"] > 1e-3
    finally:
        tube.constants = saved


# ------------------------------------------------------- dims and blocks


def test_dims_match_counting_oracle(fib_center, z2_center, ising_center,
                                    s3_center, z3_twisted):
    assert z2_center["tube"].dim == tube_dim_oracle(_raw("vec_z2"),
                                                    [0, 1], [0, 1]) == 4
    assert fib_center["tube"].dim == tube_dim_oracle(_raw("fib"),
                                                     [0, 1], [0, 1]) == 7
    it = ising_center["tube"]
    raw = _raw("ising")
    s0 = it.grade_slice(0)
    s1 = it.grade_slice(1)
    assert s0.stop - s0.start == tube_dim_oracle(raw, [0, 1], [0, 1]) == 4
    assert s1.stop - s1.start == tube_dim_oracle(raw, [0, 1], [2]) == 2
    assert s3_center["tube"].dim == tube_dim_oracle(
        _raw("vec_s3"), list(range(6)), list(range(6))) == 36
    zt = z3_twisted["tube"]
    inv = _raw("vec_z3")["action"]["perm"]["i"]
    for g, perm in ((0, None), (1, inv)):
        sl = zt.grade_slice(g)
        assert sl.stop - sl.start == tube_dim_oracle(
            _raw("vec_z3"), [0, 1, 2], [0, 1, 2], perm=perm) == 9


def test_block_ranks_frozen(fib_center, z2_center, ising_center, s3_center,
                            z3_twisted):
    assert sorted(z2_center["decs"][0].block_ranks()) == [1, 1, 1, 1]
    assert sorted(fib_center["decs"][0].block_ranks()) == [1, 1, 1, 2]
    assert sorted(ising_center["decs"][0].block_ranks()) == [1, 1, 1, 1]
    assert sorted(ising_center["decs"][1].block_ranks()) == [1, 1]
    assert sorted(s3_center["decs"][0].block_ranks()) == [1, 1, 2, 2, 2, 2, 3, 3]
    assert sorted(z3_twisted["decs"][0].block_ranks()) == [1] * 9
    assert sorted(z3_twisted["decs"][1].block_ranks()) == [3]


def test_sum_of_squared_ranks_exhausts_each_component(fib_center, z2_center,
                                                      ising_center, s3_center,
                                                      z3_twisted):
    for bundle in (fib_center, z2_center, ising_center, s3_center, z3_twisted):
        tube = bundle["tube"]
        for dec in bundle["decs"].values():
            sl = tube.grade_slice(dec.grade)
            assert sum(r * r for r in dec.block_ranks()) == sl.stop - sl.start
            assert dec.center_dim == len(dec.blocks)


def test_full_ising_tube_has_nine_blocks(cats):
    # the double of the Ising fusion rules has 9 simples, one with a
    # two-dimensional loop representation
    tube = build_tube(cats["ising"], subcat=[0, 1, 2])
    assert tube.dim == 12
    assert tube.grades == (0,)
    dec = decompose(tube, 0)
    assert sorted(dec.block_ranks()) == [1, 1, 1, 1, 1, 1, 1, 1, 2]


def test_empty_component_decomposes_to_nothing(cats):
    tube = build_tube(cats["vec_z3"])  # grade 'i' has no outer objects
    dec = decompose(tube, 1)
    assert dec.dim == 0
    assert dec.center_dim == 0
    assert dec.blocks == []


# ------------------------------------------------------------- subcat rules


def test_loop_set_must_be_closed(cats):
    ising = cats["ising"]
    with pytest.raises(ValidationError):
        build_tube(ising, subcat=[2])          # sigma alone is not closed
    with pytest.raises(ValidationError):
        build_tube(ising, subcat=[0, 2])


def test_twisted_tube_needs_trivial_grading(cats):
    with pytest.raises(ValidationError):
        build_twisted_tube(cats["ising"], GroupAction(
            "id", np.tile(np.arange(3), (2, 1))))


def test_trivial_group_twisted_tube_is_the_plain_one(cats):
    fib = cats["fib"]
    ident = GroupAction("id", np.arange(fib.rank)[None, :])
    tw = build_twisted_tube(fib, ident)
    plain = build_tube(fib, subcat=[0, 1])
    assert tw.dim == plain.dim
    assert np.allclose(tw.constants, plain.constants, atol=1e-12)
    assert np.allclose(tw.star_matrix, plain.star_matrix, atol=1e-12)


def test_identity_action_matches_plain_component(cats):
    z3 = cats["vec_z3"]
    ident = GroupAction("id", np.tile(np.arange(3), (2, 1)))
    tw = build_twisted_tube(z3, ident)
    plain = build_tube(z3)
    sl = tw.grade_slice(0)
    assert sl == plain.grade_slice(0)
    assert np.allclose(tw.constants[sl, sl, sl], plain.constants[sl, sl, sl],
                       atol=1e-12)
    # the untwisted odd component repeats the even one for this action
    so = tw.grade_slice(1)
    assert so.stop - so.start == 9


# ------------------------------------------------- twisted/untwisted bridge


def test_crossed_extension_tube_matches_twisted(z3_ext_tube, z3_twisted):
    rep = twisted_untwisted_iso(z3_twisted["tube"], z3_ext_tube)
    assert rep["pass"], rep
    assert rep["max_deviation"] < 1e-12
    assert rep["star_deviation"] < 1e-12
    assert rep["trace_deviation"] < 1e-12
    assert rep["unit_deviation"] < 1e-12
    # the identification inverts the grade; every element of this group
    # is its own inverse, so the map reads as the identity
    assert rep["grade_map"] == {"e": "e", "i": "i"}


# ----------------------------------------------------------- determinism


def test_decomposition_is_deterministic(cats):
    tube = build_tube(cats["vec_z2"], subcat=[0, 1])
    a = decompose(tube, 0, seed=7)
    b = decompose(tube, 0, seed=7)
    assert a.block_ranks() == b.block_ranks()
    for ba, bb in zip(a.blocks, b.blocks):
        assert np.array_equal(ba.projection, bb.projection)


def test_block_structure_is_seed_independent(fib_center):
    tube = fib_center["tube"]
    alt = decompose(tube, 0, seed=987654321)
    assert sorted(alt.block_ranks()) == sorted(
        fib_center["decs"][0].block_ranks())
    assert alt.center_dim == fib_center["decs"][0].center_dim
