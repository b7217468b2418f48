import dataclasses
import json

import pytest

from edgegroups.sgraph import (
    canonical_form,
    labelled_isomorphic,
    spanned_subgraph,
)
from edgegroups.egroup import (
    abelian_p_group,
    cayley_graph,
    mul_perm,
    subgroup_elements,
)
from edgegroups.cosetext import (
    ClusterPropertyError,
    InadmissibleError,
    augmented_cluster,
    augmented_ce,
    ce_diagnostics,
    ce_morphism,
    classify_component,
    cluster,
    cluster_assembled,
    coset_extension,
    coset_extension_full,
    coset_subgraph,
    has_cluster_property,
    is_admissible,
    is_bridge_free,
    minimal_support,
    proper_subsets,
    vertex_supports,
)


@pytest.fixture
def G2():
    return abelian_p_group(["a", "b"], 2)


@pytest.fixture
def G3():
    return abelian_p_group(["a", "b", "c"], 2)


def elem(G, *letters):
    p = G.identity
    for a in letters:
        p = mul_perm(p, G.gen[a])
    return p


# ---------------------------------------------------------------------------
# clusters


def test_cluster_two_cosets(G2):
    cl = cluster(G2, {"a", "b"}, [{"a"}, {"b"}])
    assert len(cl.graph.vertices) == 3
    assert cl.core.vertices == {G2.identity}
    assert cl.graph.vertices == {G2.identity, elem(G2, "a"), elem(G2, "b")}


def test_cluster_singleton_family_is_coset(G2):
    cl = cluster(G2, {"a", "b"}, [{"a"}])
    model = coset_subgraph(G2, G2.identity, {"a"})
    assert labelled_isomorphic(cl.graph, model) is not None


def test_cluster_absorbs_empty_subset(G2):
    cl = cluster(G2, {"a", "b"}, [frozenset(), {"a"}])
    assert len(cl.graph.vertices) == 2  # {1} is inside the a-coset


def test_cluster_requires_proper_subsets(G2):
    with pytest.raises(ValueError):
        cluster(G2, {"a", "b"}, [{"a", "b"}])
    with pytest.raises(ValueError):
        cluster(G2, {"a", "b"}, [])


def test_cluster_assembly_equivalence(G2, G3):
    cases = [
        (G2, {"a", "b"}, [{"a"}, {"b"}]),
        (G2, {"a", "b"}, [frozenset(), {"a"}]),
        (G3, {"a", "b", "c"}, [{"a", "b"}, {"b", "c"}]),
        (G3, {"a", "b", "c"}, [{"a"}, {"b"}, {"c"}]),
    ]
    for G, A, fam in cases:
        direct = cluster(G, A, fam).graph
        assembled = cluster_assembled(G, A, fam)
        assert canonical_form(direct) == canonical_form(assembled)


def test_augmented_cluster_existing_coset_unchanged(G2):
    cl = cluster(G2, {"a", "b"}, [{"a"}, {"b"}])
    aug = augmented_cluster(G2, {"a", "b"}, [{"a"}, {"b"}], G2.identity, {"a"})
    assert aug.vertices == cl.graph.vertices
    assert aug.darts == cl.graph.darts


def test_augmented_cluster_grows(G2):
    aug = augmented_cluster(
        G2, {"a", "b"}, [{"a"}, {"b"}], elem(G2, "b"), {"a"}
    )
    # cluster {1, a, b} plus the a-coset of b = {b, ab}
    assert len(aug.vertices) == 4


# ---------------------------------------------------------------------------
# admissibility


def test_admissible_two_letters_always(G2):
    cay = cayley_graph(G2)
    K = spanned_subgraph(
        cay, [(G2.identity, ("b", 1)), (elem(G2, "b"), ("a", 1))]
    )
    ok, witness = is_admissible(G2, {"a", "b"}, K)
    assert ok and witness is None


def test_admissible_full_cayley_and_point(G2):
    cay = cayley_graph(G2)
    ok, _ = is_admissible(G2, {"a", "b"}, cay)
    assert ok
    point = spanned_subgraph(cay, [G2.identity])
    ok, _ = is_admissible(G2, {"a", "b"}, point)
    assert ok


def zigzag_skeleton(G):
    """Path 1 -b-> b -a-> ab -b-> a: two singleton a-components (1 and a)
    lying in the same ambient a-coset."""
    cay = cayley_graph(G, {"a", "b"}, alphabet=G.alphabet)
    return spanned_subgraph(
        cay,
        [
            (G.identity, ("b", 1)),
            (elem(G, "b"), ("a", 1)),
            (elem(G, "a", "b"), ("b", 1)),
        ],
    )


def test_inadmissible_three_letter_witness(G3):
    from edgegroups.cosetext import coset

    K = zigzag_skeleton(G3)
    ok, witness = is_admissible(G3, {"a", "b", "c"}, K)
    assert not ok
    assert witness["B"] == ("a", "b")
    # the witness names a genuine violation: disjoint components of the
    # B-component whose ambient cosets meet
    c1 = coset(G3, witness["v1"], frozenset(witness["B1"]))
    c2 = coset(G3, witness["v2"], frozenset(witness["B2"]))
    assert c1 & c2


def test_same_skeleton_admissible_for_two_letters(G2):
    K = zigzag_skeleton(G2)
    ok, _ = is_admissible(G2, {"a", "b"}, K)
    assert ok


# ---------------------------------------------------------------------------
# coset extensions


def test_ce_point_skeleton_reduces_to_cluster(G2):
    cay = cayley_graph(G2)
    point = spanned_subgraph(cay, [G2.identity])
    fam = [frozenset(), frozenset({"a"}), frozenset({"b"})]
    ce = coset_extension_full(G2, {"a", "b"}, point, fam)
    cl = cluster(G2, {"a", "b"}, [{"a"}, {"b"}])
    assert labelled_isomorphic(ce.graph, cl.graph) is not None


def test_ce_single_component_single_gluing(G2):
    cay = cayley_graph(G2)
    K = spanned_subgraph(cay, [(G2.identity, ("a", 1))])  # one a-edge
    ce = coset_extension(G2, {"a", "b"}, K, {"a"})
    # the a-component is already the full coset: nothing new
    assert ce.graph.vertices == K.vertices
    ce_b = coset_extension(G2, {"a", "b"}, K, {"b"})
    # each of the two vertices grows its own b-coset copy
    assert len(ce_b.graph.vertices) == 4


def test_ce_unfolding_two_copies(G2):
    K = zigzag_skeleton(G2)
    ce = coset_extension(G2, {"a", "b"}, K, {"a"})
    # three a-components (two singletons, one full), each gets a full copy
    a_comps = [c for c in ce.graph.components({"a"}) if len(c.vertices) == 2]
    assert len(a_comps) == 3
    assert len(ce.graph.vertices) == 6
    vmap, injective = ce_morphism(ce)
    assert not injective  # the two singleton copies land on one ambient coset


def test_ce_morphism_injective_on_skeleton_and_cosets(G2):
    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    vmap, injective = ce_morphism(ce)
    # restricted to the skeleton it is the identity inclusion
    for v in ce.skeleton.vertices:
        assert vmap[v] == v
    for cons in ce.constituents.values():
        images = {vmap[x] for x in cons.image_vertices}
        assert len(images) == len(cons.image_vertices)


def test_ce_point_embedding(G2):
    cay = cayley_graph(G2)
    point = spanned_subgraph(cay, [G2.identity])
    ce = coset_extension(G2, {"a", "b"}, point, {"a"})
    vmap, injective = ce_morphism(ce)
    assert injective
    model = coset_subgraph(G2, G2.identity, {"a"})
    assert set(vmap.values()) == set(model.vertices)


def test_ce_rejects_inadmissible(G3):
    K = zigzag_skeleton(G3)
    with pytest.raises(InadmissibleError):
        coset_extension_full(G3, {"a", "b", "c"}, K)


# ---------------------------------------------------------------------------
# supports


def test_minimal_support_single_vertex(G2):
    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    for x in ce.graph.vertices:
        ms = minimal_support(ce, [x])
        assert ms is not None
        assert vertex_supports(ce, x)


def test_minimal_support_of_constituent(G2):
    # constituents over one-vertex skeleton components always have a
    # least support; larger glued components may have incomparable
    # vertex supports and then no least element exists
    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    for (bkey, i), cons in ce.constituents.items():
        if not cons.letters:
            continue
        assert all(
            (bkey, i) in vertex_supports(ce, x) for x in cons.image_vertices
        )
        if len(cons.component_vertices) == 1:
            ms = minimal_support(ce, cons.image_vertices)
            assert ms is not None
            assert ms.letters <= cons.letters


def test_support_off_skeleton_component(G2):
    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    for B in ({"a"}, {"b"}):
        for comp in ce.graph.components(B):
            if comp.vertices & ce.skeleton.vertices:
                continue
            ms = minimal_support(ce, comp.vertices)
            assert ms is not None and ms.attained_at


# ---------------------------------------------------------------------------
# cluster property and bridge freeness


def test_cluster_property_two_letters(G2):
    for K in (
        zigzag_skeleton(G2),
        spanned_subgraph(cayley_graph(G2), [G2.identity]),
    ):
        ce = coset_extension_full(G2, {"a", "b"}, K)
        ok, witness = has_cluster_property(ce)
        assert ok, witness


def test_cluster_property_detects_corruption(G2):
    from edgegroups.sgraph import make_graph, sorted_ids

    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    # drop one gluing: detach a coset copy from its skeleton vertex, so
    # the detached 2-cycle is an off-skeleton component with no support
    key = next(
        k
        for k, c in ce.constituents.items()
        if c.letters == frozenset({"a"}) and len(c.component_vertices) == 1
    )
    cons = ce.constituents[key]
    base = cons.base
    g = ce.graph
    old = {e for e in g.darts if g.alpha[e] in cons.image_vertices and g.label[e][0] == "a" and g.omega(e) in cons.image_vertices}
    darts = set(g.darts) - old
    alpha = {e: g.alpha[e] for e in darts}
    inv = {e: g.inv[e] for e in darts}
    label = {e: g.label[e] for e in darts}
    verts = set(g.vertices) | {("det", 0), ("det", 1)}
    for i in (0, 1):
        e, f = ("detd", i, 1), ("detd", i, -1)
        darts |= {e, f}
        alpha[e], alpha[f] = ("det", i), ("det", 1 - i)
        inv[e], inv[f] = f, e
        label[e], label[f] = ("a", 1), ("a", -1)
    broken = make_graph(verts, darts, alpha, inv, label, g.alphabet)
    ce_broken = dataclasses.replace(ce, graph=broken)
    ok, witness = has_cluster_property(ce_broken)
    assert not ok
    assert witness["reason"] == "no unique minimal support"


def test_bridge_free_full_cayley_skeleton(G2):
    cay = cayley_graph(G2)
    ce = coset_extension_full(G2, {"a", "b"}, cay)
    ok, witness = is_bridge_free(ce)
    assert ok, witness


def test_bridge_free_fails_on_unfolding(G2):
    K = zigzag_skeleton(G2)
    ce = coset_extension(G2, {"a", "b"}, K, {"a"})
    ok, witness = is_bridge_free(ce)
    assert not ok
    assert witness["reason"].startswith("morphism")


# ---------------------------------------------------------------------------
# augmentations and classification


def test_augmented_ce_empty_is_identity(G2):
    from edgegroups.sgraph import sorted_ids

    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    v = sorted_ids(ce.graph.vertices)[0]
    assert augmented_ce(ce, v, frozenset()) is ce.graph


def test_augmented_ce_full_component_unchanged(G2):
    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    # the a-component of the skeleton vertex 1 is already a full coset copy
    aug = augmented_ce(ce, G2.identity, {"a"})
    assert labelled_isomorphic(aug, ce.graph) is not None


def test_augmented_ce_grows_on_partial_component(G2):
    cay = cayley_graph(G2)
    K = spanned_subgraph(cay, [(G2.identity, ("a", 1))])
    ce = coset_extension(G2, {"a", "b"}, K, {"a"})  # graph == K, 2 vertices
    aug = augmented_ce(ce, G2.identity, {"b"})
    # the glued b-coset of 1 has two elements, one of them new
    assert len(aug.vertices) == 3
    assert aug.step_dart(G2.identity, ("b", 1)) is not None


def test_classify_component_shapes(G2):
    # full coset
    model = coset_subgraph(G2, elem(G2, "b"), {"a"})
    cls = classify_component(G2, model, {"a"})
    assert cls.kind == "coset"
    # point = the {empty} cluster
    point = spanned_subgraph(cayley_graph(G2), [G2.identity])
    cls = classify_component(G2, point, {"a"})
    assert cls.kind in ("coset", "cluster")
    # genuine 2-subset cluster
    cl = cluster(G2, {"a", "b"}, [{"a"}, {"b"}])
    cls = classify_component(G2, cl.graph, {"a", "b"})
    assert cls.kind == "cluster"
    assert cls.core_vertices == {G2.identity}
    # augmented cluster
    aug = augmented_cluster(G2, {"a", "b"}, [{"a"}, {"b"}], elem(G2, "b"), {"a"})
    cls = classify_component(G2, aug, {"a", "b"})
    assert cls.kind == "augmented-cluster"


def test_classify_component_other():
    G4 = abelian_p_group(["a"], 5)
    cay = cayley_graph(G4)
    # a 2-edge path inside the 5-cycle: neither coset nor cluster
    piece = spanned_subgraph(
        cay, [(G4.identity, ("a", 1)), (elem(G4, "a"), ("a", 1))]
    )
    cls = classify_component(G4, piece, {"a"})
    assert cls.kind == "other"


def test_augmented_ce_components_classify(G2):
    from edgegroups.sgraph import sorted_ids

    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    aug = augmented_ce(ce, sorted_ids(ce.graph.vertices)[0], {"b"})
    for C in ({"a"}, {"b"}):
        for comp in aug.components(C):
            cls = classify_component(G2, comp, C)
            assert cls.kind in ("coset", "cluster", "augmented-cluster")


def test_augmented_ce_needs_embeddable_component(G2):
    from edgegroups.sgraph import make_graph

    # a 4-cycle all labelled b cannot embed into the 2-element b-coset
    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    verts = [("q", i) for i in range(4)]
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    for i in range(4):
        e, f = ("qd", i, 1), ("qd", i, -1)
        darts |= {e, f}
        alpha[e], alpha[f] = ("q", i), ("q", (i + 1) % 4)
        inv[e], inv[f] = f, e
        label[e], label[f] = ("b", 1), ("b", -1)
    four_cycle = make_graph(verts, darts, alpha, inv, label, {"a", "b"})
    ce_fake = dataclasses.replace(ce, graph=four_cycle)
    with pytest.raises(ClusterPropertyError):
        augmented_ce(ce_fake, ("q", 0), {"b"})


# ---------------------------------------------------------------------------
# diagnostics report


def test_ce_diagnostics_json(G2):
    K = zigzag_skeleton(G2)
    ce = coset_extension_full(G2, {"a", "b"}, K)
    report = ce_diagnostics(ce)
    text = json.dumps(report, sort_keys=True)
    assert json.loads(text)["cluster_property"] is True
    assert json.loads(text)["bridge_free"] in (True, False)


def test_proper_subsets_order():
    out = proper_subsets({"b", "a"})
    assert out[0] == frozenset()
    assert set(out) == {frozenset(), frozenset({"a"}), frozenset({"b"})}
