import itertools
import random

import pytest

from edgegroups.sgraph import (
    delete_letters,
    disjoint_union,
    make_graph,
    signed_alphabet,
    trivial_completion,
    weak_completion,
    word_content,
    word_inverse,
)
from edgegroups.egroup import (
    BudgetExceeded,
    EGroup,
    Expansion,
    abelian_p_group,
    cayley_covers,
    cayley_graph,
    completed_subgroup_graph,
    content,
    egroup_from_json,
    egroup_to_json,
    element_words,
    eval_word,
    extend_automorphism,
    find_canonical_morphism,
    group_order,
    identity_perm,
    inv_perm,
    is_k_retractable,
    is_k_stable,
    is_retractable,
    is_stable,
    mul_perm,
    retractability_report,
    subgroup,
    subgroup_elements,
    transition_group,
)


def x1(graph):
    return trivial_completion(weak_completion(graph))


def closure_oracle(perms):
    """Independent brute-force closure under composition."""
    elems = {identity_perm(len(perms[0]))}
    frontier = list(elems)
    while frontier:
        new = []
        for p in frontier:
            for q in perms:
                for r in (tuple(q[i] for i in p), tuple(inv_perm(q)[i] for i in p)):
                    if r not in elems:
                        elems.add(r)
                        new.append(r)
        frontier = new
    return elems


# ---------------------------------------------------------------------------
# transition groups


def test_transition_group_single_edge(se):
    G = transition_group(x1(se))
    assert group_order(G) == 2
    # gen(e) is the transposition of the two endpoints
    assert G.gen["e"] != G.identity
    assert mul_perm(G.gen["e"], G.gen["e"]) == G.identity


def test_transition_group_single_loop(sl):
    G = transition_group(x1(sl))
    assert group_order(G) == 1
    assert G.gen["e"] == G.identity  # loop edges act as the identity


def test_transition_group_p2_is_order_six(p2):
    G = transition_group(x1(p2))
    assert group_order(G) == 6
    assert closure_oracle([G.gen["a"], G.gen["b"]]) == set(
        subgroup_elements(G, {"a", "b"})
    )


def test_transition_group_requires_complete(p2):
    with pytest.raises(Exception):
        transition_group(p2)


# ---------------------------------------------------------------------------
# word evaluation


def test_eval_word_examples(se, p2, w):
    G = transition_group(x1(se))
    assert eval_word(G, w("e e")) == G.identity
    assert eval_word(G, ()) == G.identity

    H = transition_group(x1(p2))
    r = eval_word(H, w("a b"))
    act = {v: H.carrier[r[i]] for i, v in enumerate(H.carrier)}
    assert act == {"u": "w", "w": "v", "v": "u"}


def test_eval_word_homomorphism_laws(p2, w):
    G = transition_group(x1(p2))
    rng = random.Random(11)
    sls = signed_alphabet(G.alphabet)
    for _ in range(300):
        p = tuple(rng.choice(sls) for _ in range(rng.randrange(0, 8)))
        q = tuple(rng.choice(sls) for _ in range(rng.randrange(0, 8)))
        assert eval_word(G, p + q) == mul_perm(eval_word(G, p), eval_word(G, q))
        assert eval_word(G, word_inverse(p)) == inv_perm(eval_word(G, p))


def test_eval_word_rejects_foreign_letter(se, w):
    G = transition_group(x1(se))
    with pytest.raises(KeyError):
        eval_word(G, w("z"))


# ---------------------------------------------------------------------------
# subgroups and Cayley graphs


def test_subgroup_and_cayley_se(se):
    G = transition_group(x1(se))
    cay = cayley_graph(G, {"e"})
    assert len(cay.vertices) == 2
    assert cay.is_weakly_complete()
    # one e-cycle through both vertices
    assert cay.step(G.identity, ("e", 1)) == G.gen["e"]
    assert cay.step(G.gen["e"], ("e", 1)) == G.identity


def test_cayley_empty_letterset(p2):
    G = transition_group(x1(p2))
    cay = cayley_graph(G, set())
    assert cay.vertices == {G.identity}
    assert not cay.darts


def test_cayley_p2_full(p2):
    G = transition_group(x1(p2))
    cay = cayley_graph(G, {"a", "b"})
    assert len(cay.vertices) == 6
    assert cay.is_complete()  # alphabet {a, b} fully present
    assert cay.is_connected()


def test_subgroup_elements_budget(p2):
    G = transition_group(x1(p2))
    with pytest.raises(BudgetExceeded) as exc:
        subgroup_elements(transition_group(x1(p2)), {"a", "b"}, budget=3)
    assert exc.value.count == 4


def test_subgroup_reduct(p2):
    G = transition_group(x1(p2))
    GA = subgroup(G, {"a"})
    assert GA.alphabet == {"a"}
    assert group_order(GA) == 2
    assert GA.graph.is_complete()


# ---------------------------------------------------------------------------
# canonical morphisms


def test_canonical_morphism_identity_like(se):
    G = transition_group(x1(se))
    cay = cayley_graph(G, {"e"})
    target = trivial_completion(cay)
    m = find_canonical_morphism(cay, target, G.identity, G.identity)
    assert m is not None
    assert m.vertex_map == {v: v for v in cay.vertices}
    assert m.is_surjective()


def test_canonical_morphism_collapsing(se, sl):
    G = transition_group(x1(se))
    cay = cayley_graph(G, {"e"})
    point = x1(sl)  # one vertex, e-loop
    m = find_canonical_morphism(cay, point, G.identity, "u")
    assert m is not None
    assert set(m.vertex_map.values()) == {"u"}


def test_canonical_morphism_absent(sl, se):
    G = transition_group(x1(sl))  # trivial group, gen(e) = id
    cay = trivial_completion(cayley_graph(G, {"e"}))
    target = x1(se)  # 2-cycle on u, v
    m, witness = find_canonical_morphism(cay, target, G.identity, "u", want_witness=True)
    assert m is None
    # witness is a relation of the trivial group that moves u in the target
    assert eval_word(G, witness) == G.identity
    path = target.path_from("u", witness)
    assert path.end != "u"


def test_cayley_covers_some_base(se):
    G = transition_group(x1(se))
    cay = cayley_graph(G, {"e"})
    assert cayley_covers(cay, x1(se))


# ---------------------------------------------------------------------------
# retractability


def test_every_group_is_1_retractable(p2, se):
    for g in (p2, se):
        G = transition_group(x1(g))
        assert is_k_retractable(G, 1)


def test_single_letter_group_retractable(se):
    G = transition_group(x1(se))
    assert is_retractable(G)


def test_p2_level_one_group_not_retractable(p2):
    # (ab)^3 = 1 but a^3 = a != 1, so deleting b breaks the relation
    G = transition_group(x1(p2))
    ok, witness = retractability_report(G)
    assert not ok
    A, word = witness
    assert eval_word(G, word) == G.identity
    dropped = delete_letters(word, G.alphabet - A)
    assert eval_word(G, dropped) != G.identity


def test_abelian_group_retractable():
    G = abelian_p_group(["a", "b"], 2)
    assert is_retractable(G)
    assert is_k_retractable(G, 2)


def test_retractable_iff_word_level_sampled(p2):
    """Prop: covering decision agrees with the deletion-of-generators
    definition, sampled over random word pairs with equal values."""
    rng = random.Random(23)
    retractable = abelian_p_group(["a", "b"], 3)
    non_retractable = transition_group(x1(p2))
    for G, expected in ((retractable, True), (non_retractable, False)):
        assert is_retractable(G) == expected
        _, words = element_words(G)
        violations = 0
        sls = signed_alphabet(G.alphabet)
        for _ in range(400):
            p = tuple(rng.choice(sls) for _ in range(rng.randrange(0, 12)))
            # q has the same value by construction
            q = p + tuple(rng.choice(sls) for _ in range(rng.randrange(0, 4)))
            q = q + word_inverse(words[eval_word(G, q)]) + words[eval_word(G, p)]
            assert eval_word(G, p) == eval_word(G, q)
            for a in G.alphabet:
                if eval_word(G, delete_letters(p, {a})) != eval_word(
                    G, delete_letters(q, {a})
                ):
                    violations += 1
        if expected:
            assert violations == 0


# ---------------------------------------------------------------------------
# content


def test_content_trivial_cases(w):
    G = abelian_p_group(["a", "b"], 2)
    assert content(G, ()) == frozenset()
    assert content(G, w("a a'")) == frozenset()
    assert content(G, w("a b")) == {"a", "b"}


def test_content_requires_retractable(p2, w):
    G = transition_group(x1(p2))
    with pytest.raises(ValueError):
        content(G, w("a b"), check=True)


def exhaustive_content(G, value, maxlen):
    """Oracle: intersect letter sets over all words of bounded length with
    the given value."""
    sls = signed_alphabet(G.alphabet)
    inter = None
    frontier = [((), G.identity)]
    for _ in range(maxlen + 1):
        for word, perm in frontier:
            if perm == value:
                co = word_content(word)
                inter = co if inter is None else inter & co
        frontier = [
            (wd + (sl,), mul_perm(pm, G.gen_signed(sl)))
            for wd, pm in frontier
            for sl in sls
        ]
    return inter


def test_content_matches_exhaustive_search():
    G = abelian_p_group(["a", "b"], 2)  # order 4
    elements, words = element_words(G)
    for g in elements:
        assert content(G, words[g]) == exhaustive_content(G, g, 6)


def test_content_laws_sampled():
    G = abelian_p_group(["a", "b"], 3)
    rng = random.Random(5)
    sls = signed_alphabet(G.alphabet)
    for _ in range(300):
        p = tuple(rng.choice(sls) for _ in range(rng.randrange(0, 10)))
        q = tuple(rng.choice(sls) for _ in range(rng.randrange(0, 10)))
        assert content(G, word_inverse(p)) == content(G, p)
        assert content(G, p + q) <= content(G, p) | content(G, q)


def test_two_acyclicity_on_retractable_group():
    G = abelian_p_group(["a", "b"], 2)
    letters = sorted(G.alphabet)
    for ka in range(3):
        for kb in range(3):
            for A in itertools.combinations(letters, ka):
                for B in itertools.combinations(letters, kb):
                    inter = set(subgroup_elements(G, A)) & set(subgroup_elements(G, B))
                    assert inter == set(subgroup_elements(G, set(A) & set(B)))


# ---------------------------------------------------------------------------
# stability


def test_identity_expansion_stable(p2):
    G = transition_group(x1(p2))
    exp = Expansion(G, G)
    assert exp.is_valid()
    for k in (1, 2):
        assert is_k_stable(exp, k)


def test_collapse_expansion_not_stable(se, sl):
    H = transition_group(x1(se))  # order 2
    G = transition_group(x1(sl))  # trivial
    # same alphabet {e}; H ->> G is the collapse
    exp = Expansion(H, G)
    assert exp.is_valid()
    assert not is_stable(exp, {"e"})


def test_se_level_one_stability(se):
    X1 = x1(se)
    G1 = transition_group(X1)
    Y1 = disjoint_union(
        [X1, completed_subgroup_graph(G1, {"e"})], share_letters=True
    )
    H1 = transition_group(Y1)
    assert group_order(H1) == 2
    exp = Expansion(H1, G1)
    assert exp.is_valid()
    assert is_k_stable(exp, 1)


# ---------------------------------------------------------------------------
# abelian baseline


def test_abelian_p_orders():
    assert group_order(abelian_p_group(["a"], 2)) == 2
    G = abelian_p_group(["a", "b"], 3)
    assert group_order(G) == 9
    assert mul_perm(G.gen["a"], G.gen["b"]) == mul_perm(G.gen["b"], G.gen["a"])


def test_abelian_p_rejects_composite():
    with pytest.raises(ValueError):
        abelian_p_group(["a"], 4)


# ---------------------------------------------------------------------------
# automorphisms


def test_extend_automorphism_identity(se):
    G = transition_group(x1(se))
    auto = extend_automorphism(G, {"e": "e"})
    assert auto is not None
    for g in subgroup_elements(G, G.alphabet):
        assert auto.apply(g) == g


def test_extend_automorphism_swap_on_symmetric_group():
    G = abelian_p_group(["a", "b"], 2)
    auto = extend_automorphism(G, {"a": "b", "b": "a"})
    assert auto is not None
    assert auto.apply(G.gen["a"]) == G.gen["b"]
    # compatibility with evaluation
    rng = random.Random(3)
    sls = signed_alphabet(G.alphabet)
    for _ in range(100):
        p = tuple(rng.choice(sls) for _ in range(rng.randrange(0, 8)))
        assert auto.apply(eval_word(G, p)) == eval_word(G, auto.apply_word(p))


def test_extend_automorphism_refuses_asymmetric():
    # a acts with order 2, b with order 3: the letters are not exchangeable
    verts = [0, 1, 2, 3, 4]
    darts = set()
    alpha = {}
    inv = {}
    label = {}

    def add(name, a, s, src, dst):
        e = (name, s)
        darts.add(e)
        alpha[e] = src
        label[e] = (a, s)
        return e

    pairs = [
        ("a01", "a", 0, 1),
        ("b234", "b", 2, 3),
        ("b345", "b", 3, 4),
        ("b452", "b", 4, 2),
        ("aloop2", "a", 2, 2),
        ("aloop3", "a", 3, 3),
        ("aloop4", "a", 4, 4),
        ("bloop0", "b", 0, 0),
        ("bloop1", "b", 1, 1),
        ("a10", "a", 1, 0),
    ]
    for name, a, src, dst in pairs:
        e = add(name, a, 1, src, dst)
        f = add(name, a, -1, dst, src)
        inv[e], inv[f] = f, e
    g = make_graph(verts, darts, alpha, inv, label, {"a", "b"})
    G = transition_group(g)
    assert extend_automorphism(G, {"a": "b", "b": "a"}) is None
    assert extend_automorphism(G, {"a": "a", "b": "b"}) is not None


# ---------------------------------------------------------------------------
# serialization


def test_egroup_json_roundtrip(p2):
    G = transition_group(x1(p2))
    text = egroup_to_json(G)
    H = egroup_from_json(text)
    assert H.carrier == G.carrier
    assert H.gen == G.gen
    assert group_order(H) == group_order(G)
    assert egroup_to_json(H) == text


def test_egroup_json_rejects_bad_perm(p2):
    G = transition_group(x1(p2))
    import json

    doc = json.loads(egroup_to_json(G))
    doc["gens"][0]["image"][0] = doc["gens"][0]["image"][1]
    with pytest.raises(ValueError):
        egroup_from_json(json.dumps(doc))
