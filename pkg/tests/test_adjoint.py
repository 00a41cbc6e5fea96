"""Adjoint flows checked against hand-computed exponentials.

The flow goldens were derived by exponentiating the small adjoint
matrices directly: nilpotent series written out term by term, scaling
actions read off the weight spaces, and rotation blocks integrated as
plane rotations.  Wedge expansions were multiplied out by hand with the
usual alternating signs before the exterior routine existed, and the
normalizer chains follow the bracket tables step by step.
"""

import random
from fractions import Fraction

import pytest

from solvlie.adjoint import (
    FlowGenerator,
    GroupWord,
    classify_generator,
    exterior_flow_apply,
    flow_apply,
    normalizer_chain_factorization,
)
from solvlie.algfile import parse_element_expr
from solvlie.corpus import CORPUS_NAMES, corpus_algebra
from solvlie.errors import (
    IrreducibleDegreeTooHigh,
    MixedGeneratorUnsupported,
    ParameterizedEntriesUnsupported,
)
from solvlie.liealg import LieAlgebra
from solvlie.linalg import (
    unit_vector,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_subs,
    wedge_coords,
)
from solvlie.scalars import is_zero_scalar, param, scalar_params

rng = random.Random(60103)


def elem(g, text):
    return parse_element_expr(g, text)


def rand_vec(n, bound=4):
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))


def veq(u, v):
    return all(is_zero_scalar(a - b) for a, b in zip(u, v))


#----------------------------------------------------------------------------
# classification

def test_heisenberg_y_is_unipotent_index_two():
    g = corpus_algebra("heisenberg")
    f = classify_generator(g, elem(g, "Y"))
    assert f.kind == "unipotent"
    assert f.nilpotency_index == 2
    assert f.matrix == g.ad(elem(g, "Y"))
    assert (f.matrix * f.matrix).is_zero()


def test_central_element_is_unipotent_index_one():
    g = corpus_algebra("heisenberg")
    f = classify_generator(g, elem(g, "Z"))
    assert f.kind == "unipotent"
    assert f.nilpotency_index == 1


def test_lemma3d_x_is_scaling_with_weights_0_1_2():
    g = corpus_algebra("lemma3d")
    f = classify_generator(g, elem(g, "X"))
    assert f.kind == "scaling"
    assert sorted(f.weights) == [0, 1, 2]
    # diagonal in the stated eigenbasis
    for row, w in zip(f.eigenbasis.rows, f.weights):
        assert f.matrix.matvec(row) == vec_scale(w, row)


def test_example43_e2_is_scaling_with_negative_weights():
    g = corpus_algebra("example43")
    f = classify_generator(g, elem(g, "e2"))
    assert f.kind == "scaling"
    assert sorted(f.weights) == [-3, -1, 0, 2]


def test_example41_x_is_rotation_on_the_yz_plane():
    g = corpus_algebra("example41")
    f = classify_generator(g, elem(g, "X"))
    assert f.kind == "rotation"
    assert f.data["fixed"] == (elem(g, "X"),)
    assert len(f.pairs) == 1
    (v, w), beta = f.pairs[0]
    assert beta == 1
    assert f.matrix.matvec(v) == vec_scale(beta, w)
    assert f.matrix.matvec(w) == vec_scale(-beta, v)
    assert f.data["full_circle"] is True


def test_example44a_w_is_rotation():
    g = corpus_algebra("example44a")
    f = classify_generator(g, elem(g, "W"))
    assert f.kind == "rotation"
    assert len(f.pairs) == 1


def test_classify_matrix_matches_adjoint_on_all_corpus_basis_vectors():
    for name in CORPUS_NAMES:
        g = corpus_algebra(name)
        for i in range(g.dim):
            x = unit_vector(g.dim, i)
            f = classify_generator(g, x)
            assert f.matrix == g.ad(x)
            assert f.kind in ("unipotent", "scaling", "rotation", "mixed")


def test_classify_rejects_symbolic_coordinates():
    g = corpus_algebra("lemma3d")
    with pytest.raises(ParameterizedEntriesUnsupported):
        classify_generator(g, (Fraction(0), Fraction(1), param("k")))


def test_remark41_x_is_mixed_off_the_imaginary_axis():
    # eigenvalues 1 +- i: neither all rational nor purely imaginary
    g = corpus_algebra("remark41")
    f = classify_generator(g, elem(g, "X"))
    assert f.kind == "mixed"
    assert "imaginary axis" in f.data["obstruction"]
    with pytest.raises(MixedGeneratorUnsupported):
        flow_apply(f, elem(g, "Y"))


def test_remark41_complexified_x_becomes_scaling_with_two_units():
    g = corpus_algebra("remark41").complexify()
    f = classify_generator(g, (1, 0, 0))
    assert f.kind == "scaling"
    assert f.data["unit"] is not None
    assert f.data["irr_unit"] is not None
    kinds = {c.kind for c in f.conditions()}
    assert kinds == {"nonzero"}


def test_example41_complexified_x_becomes_scaling():
    g = corpus_algebra("example41").complexify()
    f = classify_generator(g, (1, 0, 0))
    assert f.kind == "scaling"
    # weights 0, -i, +i: only the radical unit is needed
    assert f.data["unit"] is None
    assert f.data["irr_unit"] is not None
    out = flow_apply(f, (0, 1, param("k")))
    assert veq(vec_subs(out, f.identity_env()), (0, 1, param("k")))


def test_irrational_rotation_speed_is_mixed():
    # ad X on (Y, Z) has characteristic polynomial t**2 + 2
    g = LieAlgebra(("X", "Y", "Z"), {(0, 1): (0, 0, 1), (0, 2): (0, -2, 0)})
    f = classify_generator(g, (1, 0, 0))
    assert f.kind == "mixed"
    assert "Gaussian" in f.data["obstruction"]
    with pytest.raises(MixedGeneratorUnsupported):
        flow_apply(f, (0, 1, 0))


def test_two_rotation_speeds_are_mixed():
    g = LieAlgebra(("X", "Y", "Z", "U", "V"),
                   {(0, 1): (0, 0, 1, 0, 0), (0, 2): (0, -1, 0, 0, 0),
                    (0, 3): (0, 0, 0, 0, 2), (0, 4): (0, 0, 0, -2, 0)})
    f = classify_generator(g, (1, 0, 0, 0, 0))
    assert f.kind == "mixed"
    assert "different speeds" in f.data["obstruction"]


def test_rotation_on_a_quadratic_base_field_needs_a_second_extension():
    g = LieAlgebra(("X", "Y", "Z"), {(0, 1): (0, 0, 1), (0, 2): (0, -1, 0)},
                   radicand=2)
    with pytest.raises(IrreducibleDegreeTooHigh, match="second square root"):
        classify_generator(g, (1, 0, 0))


def test_defective_rational_action_is_mixed_but_flowable():
    # ad X = [[1, 0], [1, 1]] on (Y, Z): one Jordan block, eigenvalue 1
    g = LieAlgebra(("X", "Y", "Z"), {(0, 1): (0, 1, 1), (0, 2): (0, 0, 1)})
    f = classify_generator(g, (1, 0, 0))
    assert f.kind == "mixed"
    assert f.data["blocks"] is not None
    u = param(f.data["unit"])
    t = param(f.time_symbol)
    out = flow_apply(f, (0, 1, 0))
    assert veq(out, (0, u, t * u))
    assert veq(vec_subs(out, f.identity_env()), (0, 1, 0))
    assert {c.kind for c in f.conditions()} == {"pos"}


def test_flow_generator_rejects_unknown_kind():
    g = corpus_algebra("heisenberg")
    with pytest.raises(ValueError):
        FlowGenerator(g, (0, 1, 0), g.ad((0, 1, 0)), "loxodromic", "t", {})


def test_kind_accessors_guard_their_kind():
    g = corpus_algebra("heisenberg")
    f = classify_generator(g, elem(g, "Y"))
    with pytest.raises(ValueError):
        f.weights
    with pytest.raises(ValueError):
        f.pairs


#----------------------------------------------------------------------------
# flows

def test_heisenberg_flow_translates_the_center_coordinate():
    g = corpus_algebra("heisenberg")
    f = classify_generator(g, elem(g, "Y"))
    t = param(f.time_symbol)
    k, l = param("k"), param("l")
    out = flow_apply(f, (Fraction(1), k, l))
    assert veq(out, (Fraction(1), k, l - t))
    # the center coordinate sweeps every value, so the line through
    # X + kY is reachable from X + kY + lZ regardless of orientation
    assert veq(vec_subs(out, {f.time_symbol: l}), (1, k, 0))


def test_lemma3d_scaling_flow_on_a_weight_combination():
    g = corpus_algebra("lemma3d")
    f = classify_generator(g, elem(g, "X"))
    u = param(f.data["unit"])
    k = param("k")
    out = flow_apply(f, (Fraction(0), Fraction(1), k))
    assert veq(out, (0, u, k * u * u))
    # projectively the line <Y + kZ> moves to <Y + k*u*Z>
    scaled = tuple(e / u for e in out)
    assert veq(scaled, (0, 1, k * u))
    assert {c.kind for c in f.conditions()} == {"pos"}


def test_example41_rotation_flow_mixes_the_plane_coordinates():
    g = corpus_algebra("example41")
    f = classify_generator(g, elem(g, "X"))
    c, s = param(f.data["cos"]), param(f.data["sin"])
    k = param("k")
    out = flow_apply(f, (Fraction(0), Fraction(1), k))
    assert veq(out, (0, c - k * s, s + k * c))
    assert veq(vec_subs(out, f.identity_env()), (0, 1, k))


def test_time_zero_is_the_identity_for_every_corpus_generator():
    for name in CORPUS_NAMES:
        g = corpus_algebra(name)
        for i in range(g.dim):
            f = classify_generator(g, unit_vector(g.dim, i))
            if f.kind == "mixed" and f.data.get("blocks") is None:
                continue
            v = rand_vec(g.dim)
            out = flow_apply(f, v)
            assert veq(vec_subs(out, f.identity_env()), v), (name, i)


def test_unipotent_flows_compose_additively_in_time():
    g = corpus_algebra("example43")
    f = classify_generator(g, elem(g, "e3"))
    t, s = f.time_symbol, param("s")
    v = rand_vec(g.dim)
    once = flow_apply(f, v)
    twice = flow_apply(f, vec_subs(once, {t: s}))
    direct = vec_subs(flow_apply(f, v), {t: param(t) + s})
    assert veq(twice, direct)


def test_unipotent_flows_are_bracket_automorphisms():
    cases = (("heisenberg", "Y"), ("example43", "e1"), ("example43", "e3"),
             ("example44a", "U"))
    for name, label in cases:
        g = corpus_algebra(name)
        f = classify_generator(g, elem(g, label))
        assert f.kind == "unipotent"
        for _ in range(4):
            u, v = rand_vec(g.dim), rand_vec(g.dim)
            lhs = flow_apply(f, g.bracket(u, v))
            rhs = g.bracket(flow_apply(f, u), flow_apply(f, v))
            assert veq(lhs, rhs), (name, label)


def test_flow_entries_only_use_declared_symbols():
    for name in ("heisenberg", "lemma3d", "example41", "example44b"):
        g = corpus_algebra(name)
        for i in range(g.dim):
            f = classify_generator(g, unit_vector(g.dim, i))
            if f.kind == "mixed" and f.data.get("blocks") is None:
                continue
            out = flow_apply(f, rand_vec(g.dim))
            used = set()
            for e in out:
                used |= set(scalar_params(e))
            assert used <= set(f.symbols()), (name, i)


def test_scaling_units_are_positive_over_a_real_base_field():
    g = corpus_algebra("example44b")
    f = classify_generator(g, elem(g, "H"))
    assert f.kind == "scaling"
    assert sorted(f.weights) == [-1, 0, 0, 1, 2]
    assert {c.kind for c in f.conditions()} == {"pos"}
    # the weight -1 coordinate picks up the inverse unit exactly
    u = param(f.data["unit"])
    out = flow_apply(f, elem(g, "E5"))
    assert veq(out, (0, 0, 0, 0, Fraction(1) / u))


#----------------------------------------------------------------------------
# exterior powers

def test_single_factor_wedge_agrees_with_the_plain_flow():
    for name in ("heisenberg", "lemma3d", "example43"):
        g = corpus_algebra(name)
        for i in range(g.dim):
            f = classify_generator(g, unit_vector(g.dim, i))
            if f.kind == "mixed" and f.data.get("blocks") is None:
                continue
            v = rand_vec(g.dim)
            assert veq(exterior_flow_apply(f, [v]), flow_apply(f, v))


def test_central_flow_is_the_identity_on_wedges():
    g = corpus_algebra("heisenberg")
    f = classify_generator(g, elem(g, "Z"))
    pair = [elem(g, "X"), elem(g, "Y")]
    assert exterior_flow_apply(f, pair) == wedge_coords(pair, g.dim)


def test_example43_triple_wedge_flow_has_the_3t_term():
    # exp(t ad e3) fixes e4, moves e1 to e1 + t e4 and e2 to e2 + 3t e3,
    # so e4 ^ e1 ^ e2 gains exactly one wedge term, in the e4 ^ e1 ^ e3
    # direction with coefficient 3t
    g = corpus_algebra("example43")
    f = classify_generator(g, elem(g, "e3"))
    t = param(f.time_symbol)
    e = [unit_vector(4, i) for i in range(4)]
    out = exterior_flow_apply(f, [e[3], e[0], e[1]])
    expect = vec_add(wedge_coords([e[3], e[0], e[1]], 4),
                     vec_scale(3 * t, wedge_coords([e[3], e[0], e[2]], 4)))
    assert veq(out, expect)


def test_example43_two_factor_word_on_a_wedge():
    # exp(s ad e1) exp(t ad e3) applied to e4 ^ e2 picks up 3t e4 ^ e3
    # and -2s e4 ^ e1
    g = corpus_algebra("example43")
    f3 = classify_generator(g, elem(g, "e3"))
    f1 = classify_generator(g, elem(g, "e1"))
    word = GroupWord([f3, f1])
    t, s = param(f3.time_symbol), param(f1.time_symbol)
    e = [unit_vector(4, i) for i in range(4)]
    out = word.apply_wedge([e[3], e[1]])
    expect = wedge_coords([e[3], e[1]], 4)
    expect = vec_add(expect, vec_scale(3 * t, wedge_coords([e[3], e[2]], 4)))
    expect = vec_add(expect, vec_scale(-2 * s, wedge_coords([e[3], e[0]], 4)))
    assert veq(out, expect)
    assert word.symbols() == (f3.time_symbol, f1.time_symbol)


def test_word_apply_chains_the_factor_flows_in_listed_order():
    g = corpus_algebra("example43")
    f3 = classify_generator(g, elem(g, "e3"))
    f1 = classify_generator(g, elem(g, "e1"))
    word = GroupWord([f3, f1])
    v = rand_vec(g.dim)
    assert veq(word.apply(v), flow_apply(f1, flow_apply(f3, v)))
    assert veq(vec_subs(word.apply(v), word.identity_env()), v)


#----------------------------------------------------------------------------
# normalizer chain factorizations

def test_example43_chain_climbs_e4_then_e3_then_e2():
    g = corpus_algebra("example43")
    x = elem(g, "e1 + 5*e3 + 7*e4")
    word = normalizer_chain_factorization(g, x)
    texts = [g.element_text(f.element) for f in word.factors]
    # the chain climbs e4, e3, e2; the trailing e1 factor covers the
    # coordinate direction the line itself occupies
    assert texts == ["e1 + 5*e3 + 7*e4", "e4", "e3", "e2", "e1"]
    assert [sp.dim for sp in word.chain] == [1, 2, 3, 4, 4]
    assert word.factors[0].element == x
    # the leading factor is generated by x itself, so it fixes <x>
    assert veq(flow_apply(word.factors[0], x), x)


def test_example43_chain_with_symbolic_coefficients():
    g = corpus_algebra("example43")
    x = elem(g, "e1 + c*e3 + d*e4")
    word = normalizer_chain_factorization(g, x)
    texts = [g.element_text(f.element) for f in word.factors]
    assert texts == ["e1 + c*e3 + d*e4", "e4", "e3", "e2", "e1"]
    # the symbolic leading factor cannot be expanded, only recorded
    assert word.factors[0].kind == "mixed"
    with pytest.raises(MixedGeneratorUnsupported):
        flow_apply(word.factors[0], x)
    assert [f.kind for f in word.factors[1:]] == ["unipotent", "unipotent",
                                                  "scaling", "unipotent"]


def test_lemma3d_chain_adds_z_then_x():
    g = corpus_algebra("lemma3d")
    x = elem(g, "Y + k*Z")
    word = normalizer_chain_factorization(g, x)
    texts = [g.element_text(f.element) for f in word.factors]
    assert texts == ["Y + k*Z", "Z", "X", "Y"]
    assert [f.kind for f in word.factors] == ["mixed", "unipotent",
                                              "scaling", "unipotent"]
    # the Z factor fixes the target element outright
    assert veq(flow_apply(word.factors[1], x), x)
    # the X factor does the actual moving: <Y + kZ> to <Y + k*u*Z>
    fx = word.factors[2]
    u = param(fx.data["unit"])
    assert veq(flow_apply(fx, x), (0, u, param("k") * u * u))


def test_lemma2d_word_is_complement_first():
    g = corpus_algebra("lemma2d")
    x = elem(g, "X + k*Y")
    word = normalizer_chain_factorization(g, x)
    texts = [g.element_text(f.element) for f in word.factors]
    assert texts == ["X + k*Y", "X", "Y"]
    # the Y flow reaches <X> at time k
    fy = word.factors[2]
    out = flow_apply(fy, x)
    assert veq(out, (1, param("k") - param(fy.time_symbol)))
    assert veq(vec_subs(out, {fy.time_symbol: param("k")}), (1, 0))


def test_heisenberg_top_word_includes_every_complement_direction():
    # the line <X + k*Y + l*Z> needs the Y flow to clear its Z part, and
    # that flow sits at a coordinate the element already touches
    g = corpus_algebra("heisenberg")
    x = elem(g, "X + k*Y + l*Z")
    word = normalizer_chain_factorization(g, x)
    texts = [g.element_text(f.element) for f in word.factors]
    assert texts == ["X + k*Y + l*Z", "X", "Y", "Z"]
    fy = word.factors[2]
    out = flow_apply(fy, x)
    t = param(fy.time_symbol)
    assert veq(out, (1, param("k"), param("l") - t))


def test_full_normalizer_gives_a_basis_completion_word():
    g = corpus_algebra("heisenberg")
    word = normalizer_chain_factorization(g, elem(g, "Z"))
    assert len(word) == g.dim
    texts = [g.element_text(f.element) for f in word.factors]
    assert texts == ["Z", "X", "Y"]


def test_abelian_word_is_any_basis_completion():
    g = LieAlgebra(("A", "B", "C"), {})
    word = normalizer_chain_factorization(g, (0, 1, 0))
    assert len(word) == g.dim
    assert [g.element_text(f.element) for f in word.factors] == ["B", "A",
                                                                 "C"]


def test_chain_spaces_are_nested_subalgebras():
    # the normalizing branch (x inside the derived subalgebra) climbs a
    # genuine flag of subalgebras; the complement-first branch only
    # promises a full basis sweep
    cases = (("example43", "e1 + 5*e3 + 7*e4"),
             ("lemma3d", "Y + k*Z"),
             ("example44b", "E1 + 2*E3"),
             ("example44a", "C"))
    for name, text in cases:
        g = corpus_algebra(name)
        word = normalizer_chain_factorization(g, elem(g, text))
        assert word.chain[-1].dim == g.dim
        prev = None
        for sp in word.chain:
            assert g.is_subalgebra(sp), (name, text)
            if prev is not None:
                assert sp.contains_space(prev)
                # strict growth until the whole algebra is reached; the
                # trailing pivot-direction factors repeat the full space
                assert sp.dim == prev.dim + 1 or prev.dim == g.dim
            prev = sp


def test_complement_branch_sweeps_the_whole_basis():
    g = corpus_algebra("example43")
    word = normalizer_chain_factorization(g, elem(g, "e2"))
    texts = [g.element_text(f.element) for f in word.factors]
    assert texts == ["e2", "e1", "e3", "e4"]
    assert [sp.dim for sp in word.chain] == [1, 2, 3, 4]


def test_every_corpus_basis_line_gets_a_word():
    for name in CORPUS_NAMES:
        g = corpus_algebra(name)
        for i in range(g.dim):
            word = normalizer_chain_factorization(g, unit_vector(g.dim, i))
            assert len(word) == g.dim
            assert word.chain[0].dim == 1
            assert word.chain[-1].dim == g.dim


def test_zero_element_is_rejected():
    g = corpus_algebra("heisenberg")
    with pytest.raises(ValueError):
        normalizer_chain_factorization(g, (0, 0, 0))
