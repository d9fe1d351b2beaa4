"""Formulas, the two models and schema instantiation."""

import pytest
from hypothesis import given, strategies as st

from setmatrix.core import EMPTY, mk_matrix, mk_set
from setmatrix.encode import encode_zfm, kpair, vn_ordinal
from setmatrix.logic import (
    EMPTY_CONST,
    And,
    Equal,
    Exists,
    ExistsIn,
    ExistsMat,
    ExistsSet,
    Forall,
    ForallIn,
    ForallMat,
    ForallSet,
    FormulaError,
    Iff,
    Implies,
    MatVar,
    Mem,
    Not,
    Or,
    SchemaError,
    SetVar,
    THEORIES,
    enum_universe,
    evaluate,
    first_counterexample,
    free_vars,
    instantiate_schema,
    semantics,
    suite_instances,
    validate,
)
from setmatrix.logic.formula import matrix_of, strip_unit
from setmatrix.logic.schemas import canonical_name, instances_of, shapes_up_to
from setmatrix.logic.semantics import residual

x, y, z = SetVar("x"), SetVar("y"), SetVar("z")
a, b, g = MatVar("α"), MatVar("β"), MatVar("γ")
M12 = mk_matrix((1, 2), [EMPTY, EMPTY])


# ------------------------------------------------------------------ formulas


def test_rendering():
    f = ForallMat(a, Not(Mem(a, EMPTY_CONST)))
    assert str(f) == "∀α(α ∉ ∅)"
    assert str(MatVar("α12")) == "α₁₂"
    assert str(matrix_of("2x1", [a, b])) == "[α ; β]"


def test_free_vars_and_validate():
    body = And(Mem(a, x), Equal(y, matrix_of("1x2", [a, a])))
    assert free_vars(body) == {a, x, y}
    assert free_vars(ForallSet(x, body)) == {a, y}
    with pytest.raises(FormulaError, match="unbound"):
        validate(ForallSet(x, body))
    validate(ForallSet(x, ForallSet(y, ForallMat(a, body))))
    with pytest.raises(FormulaError, match="both sorts"):
        validate(ForallSet(SetVar("v"), ForallMat(MatVar("v"), Mem(SetVar("v"), MatVar("v")))))


def test_rebinding_is_rejected():
    with pytest.raises(FormulaError, match="bound again"):
        validate(ForallSet(x, ExistsSet(x, Mem(x, x))))
    with pytest.raises(FormulaError, match="bound again"):
        validate(ForallSet(x, ForallIn(x, x, Mem(x, x))))
    # sibling scopes may reuse a name
    validate(And(ForallSet(x, Mem(x, x)), ExistsSet(x, Mem(x, x))))


def test_matrix_term_arity():
    with pytest.raises(FormulaError):
        matrix_of("2x2", [a, b])


def test_strip_unit():
    t = matrix_of("1x1", [matrix_of("1x2", [matrix_of("1x1", [a]), b])])
    assert strip_unit(t) == matrix_of("1x2", [a, b])


def test_sorted_constructors():
    assert isinstance(Forall(x, Mem(x, x)), ForallSet)
    assert isinstance(Forall(a, Mem(a, a)), ForallMat)
    assert isinstance(Exists(x, Mem(x, x)), ExistsSet)
    assert isinstance(Exists(a, Mem(a, a)), ExistsMat)


# ------------------------------------------------------------------ semantics


@pytest.fixture(scope="module")
def u():
    return enum_universe(1, ["1x2", "2x1", "2x2"], 1)


def test_nothing_in_empty(u):
    f = ForallMat(a, Not(Mem(a, EMPTY_CONST)))
    assert evaluate(f, u, "native")
    assert evaluate(f, u, "zfm-image")


def test_matrix_has_no_members_only_natively(u):
    f = ForallMat(b, Not(Mem(b, matrix_of("1x2", [EMPTY_CONST, EMPTY_CONST]))))
    assert evaluate(f, u, "native")
    assert not evaluate(f, u, "zfm-image")
    hit = first_counterexample(f, u, "zfm-image")
    one = vn_ordinal(1)
    assert hit == {"β": kpair(kpair(one, one), EMPTY)}


def test_zfm_domain_is_membership_closure(u):
    sem = semantics(u, "zfm")
    dom = set(sem.domain_all)
    assert len(dom) == 68
    assert len(semantics(enum_universe(0, ["1x2", "2x1", "2x2"], 1), "zfm").domain_all) == 25
    for v in u.values:
        assert encode_zfm(v) in dom
    for s in dom:
        assert set(s.elements) <= dom


def test_semantics_is_cached(u):
    assert semantics(u, "native") is semantics(u, "smt")
    assert semantics(u, "zfm") is semantics(u, "zfm-image")
    with pytest.raises(ValueError):
        semantics(u, "classical")


def test_forall_mat_is_conjunction_over_values(u):
    bodies = [
        Mem(a, x),
        Equal(a, matrix_of("1x2", [x, x])),
        Or(Mem(x, a), Equal(a, x)),
        ExistsSet(y, Mem(a, y)),
    ]
    for body in bodies:
        for xv in u.sets:
            quant = evaluate(ForallMat(a, body), u, "native", env={"x": xv})
            conj = all(evaluate(body, u, "native", env={"x": xv, "α": v}) for v in u.values)
            assert quant == conj


def _greek_to_roman(body):
    return ForallSet(x, body(x))


def test_greek_quantifier_implies_roman(u):
    """∀α Ψ(α) implies ∀x Ψ(x): Greek variables range over a superset."""
    bodies = [
        lambda v: ExistsSet(y, Equal(y, v)),
        lambda v: Not(Mem(EMPTY_CONST, v)),
        lambda v: ForallMat(b, Implies(Mem(b, v), Mem(b, v))),
        lambda v: Or(Equal(v, EMPTY_CONST), ExistsMat(b, Mem(b, v))),
    ]
    checked = 0
    for body in bodies:
        for model in ("native", "zfm"):
            if evaluate(ForallMat(a, body(a)), u, model):
                checked += 1
                assert evaluate(_greek_to_roman(body), u, model)
    assert checked >= 2


def test_roman_quantifier_does_not_imply_greek_natively(u):
    """The converse needs every value to be a set, which only the encoded model has."""
    body = lambda v: ExistsSet(y, Equal(y, v))  # noqa: E731
    assert evaluate(_greek_to_roman(body), u, "native")
    assert not evaluate(ForallMat(a, body(a)), u, "native")
    assert evaluate(ForallMat(a, body(a)), u, "zfm")


def test_bounded_quantifiers(u):
    two = mk_set([EMPTY, mk_set([EMPTY])])
    env = {"x": two}
    assert evaluate(ExistsIn(y, x, Equal(y, EMPTY_CONST)), u, env=env)
    assert not evaluate(ForallIn(y, x, Equal(y, EMPTY_CONST)), u, env=env)
    assert evaluate(ForallIn(a, matrix_of("1x2", [x, x]), Mem(a, a)), u, env=env)


def test_witness_builders(u):
    f = ForallSet(x, ExistsSet(y, ForallMat(a, Iff(Mem(a, y), Mem(a, x)))))
    assert evaluate(f, u, witnesses={"y": lambda env, sem: env["x"]})
    assert not evaluate(f, u, witnesses={"y": lambda env, sem: EMPTY})
    hit = first_counterexample(f, u, witnesses={"y": lambda env, sem: EMPTY})
    assert hit["x"] == u.sets[1] and hit["y"] == EMPTY and "α" in hit
    assert residual(f, {"y": None}) == f.body.body.body


# ------------------------------------------------------------------ random formulas
#
# At depth 0 every value is a pure set and the encoding is the identity, so
# the native and encoded models must agree on every closed formula.

_vars = [x, y, a, b]
_terms = st.sampled_from(_vars + [EMPTY_CONST])
_atoms = st.builds(Mem, _terms, _terms) | st.builds(Equal, _terms, _terms)


def _compound(kids):
    return (
        st.builds(Not, kids)
        | st.builds(lambda p, q: And(p, q), kids, kids)
        | st.builds(lambda p, q: Or(p, q), kids, kids)
        | st.builds(Implies, kids, kids)
        | st.builds(Iff, kids, kids)
        | st.builds(lambda v, p: Forall(v, p), st.sampled_from(_vars), kids)
        | st.builds(lambda v, p: Exists(v, p), st.sampled_from(_vars), kids)
    )


formulas = st.recursive(_atoms, _compound, max_leaves=6)


def _close(f):
    for v in sorted(free_vars(f), key=lambda v: v.name):
        f = Forall(v, f)
    return f


@given(formulas, st.sampled_from([(1, 0), (2, 0)]))
def test_models_agree_on_pure_universes(f, rd):
    u = enum_universe(rd[0], ["1x2"], rd[1])
    f = _close(f)
    assert evaluate(f, u, "native") == evaluate(f, u, "zfm")


def test_models_disagree_once_matrices_exist(u):
    """With matrices present the quantifier domains differ, so agreement is
    not a property of arbitrary closed formulas (see the notes)."""
    some_nonset = ExistsMat(a, Not(ExistsSet(y, Equal(y, a))))
    assert evaluate(some_nonset, u, "native")
    assert not evaluate(some_nonset, u, "zfm")


# ------------------------------------------------------------------ schemas


def test_instances_render():
    assert str(instantiate_schema("epsilon", ["1x2"]).formula) == "∀α₁₁∀α₁₂∀β(β ∉ [α₁₁ α₁₂])"
    assert str(instantiate_schema("reduction").formula) == "∀x([x] = x)"
    d = instantiate_schema("division-4b", ["1x2", "2x1"])
    assert d.label == "division-matrices(1x2,2x1)"
    assert str(d.formula).endswith("([α₁₁ α₁₂] ≠ [β₁₁ ; β₂₁])")


def test_every_instance_is_closed():
    for theory in THEORIES:
        for s in suite_instances(theory, "2x2"):
            validate(s.formula)


@pytest.mark.parametrize(
    "name, shapes, phi",
    [
        ("epsilon", [], None),
        ("epsilon", ["1x1"], None),
        ("division-matrices", ["1x2", "1x2"], None),
        ("division-matrices", ["1x2", "1x1"], None),
        ("separation", [], None),
        ("separation", [], "wrap-1x2"),
        ("replacement", [], "is-set"),
        ("pairing", [], "is-set"),
        ("frobnicate", [], None),
    ],
)
def test_bad_instances(name, shapes, phi):
    with pytest.raises(SchemaError):
        instantiate_schema(name, shapes, phi)


def test_suites():
    smt = suite_instances("smt", "2x2")
    minus = suite_instances("SMT⁻", "2x2")
    assert len(smt) == 42 and len(minus) == 36
    dropped = [s.label for s in smt if s.label not in {m.label for m in minus}]
    assert dropped == [
        "division-sets(1x2)",
        "division-sets(2x1)",
        "division-sets(2x2)",
        "epsilon(1x2)",
        "epsilon(2x1)",
        "epsilon(2x2)",
    ]
    with pytest.raises(SchemaError):
        suite_instances("zf", "2x2")


def test_shape_enumeration():
    assert [str(s) for s in shapes_up_to("2x2")] == ["1x1", "1x2", "2x1", "2x2"]
    assert len(instances_of("division-matrices", "2x2")) == 6
    assert canonical_name(" Ext-Sets ") == "set-extensionality"
