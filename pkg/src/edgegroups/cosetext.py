"""Clusters and coset extensions inside the Cayley graph of a group.

For letters A and proper subsets B of A, the coset graphs v.G[B] sitting
inside the Cayley graph of G[A] are glued into two kinds of composite
graphs: *clusters* (unions of coset graphs through a common vertex) and
*coset extensions* (a connected skeleton K whose B-components are each
blown up to a full disjoint coset copy).  The module also implements the
diagnostics these constructions support: admissibility of a skeleton,
unique minimal support, the cluster property, bridge-freeness, and the
classification of letter-components against reconstructed model shapes.

Throughout, the ambient group element set is the vertex set, cosets are
right cosets v.G[B], and all dart names follow the Cayley convention
``(element, signed_letter)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .sgraph import (
    GraphCongruence,
    GraphError,
    LabelledGraph,
    disjoint_union,
    fold,
    labelled_isomorphic,
    make_graph,
    quotient,
    signed_alphabet,
    sletter_inv,
    sort_key,
    sorted_ids,
)
from .egroup import (
    DEFAULT_BUDGET,
    EGroup,
    cayley_graph,
    inv_perm,
    is_retractable,
    mul_perm,
    subgroup,
    subgroup_elements,
)


class NotRetractableError(ValueError):
    """The ambient subgroup fails the retractability proviso."""


class InadmissibleError(ValueError):
    """The skeleton violates the freeness condition for coset extension."""


class ClusterPropertyError(ValueError):
    """An operation needed the cluster property and it does not hold."""


# ---------------------------------------------------------------------------
# ambient bookkeeping


def _cache(G: EGroup):
    return G._scratch.setdefault("cosetext", {})


def _key(letters):
    return tuple(sorted_ids(letters))


def proper_subsets(letters):
    """All proper subsets, smallest first, lexicographic within a size."""
    letters = sorted_ids(letters)
    out = []
    for size in range(len(letters)):
        out.extend(frozenset(c) for c in itertools.combinations(letters, size))
    return out


def sub_elements(G: EGroup, letters, budget=DEFAULT_BUDGET):
    cache = _cache(G).setdefault("subsets", {})
    key = _key(letters)
    if key not in cache:
        els = subgroup_elements(G, letters, budget)
        cache[key] = (els, frozenset(els))
    return cache[key]


def coset(G: EGroup, v, letters, budget=DEFAULT_BUDGET):
    """The right coset v.G[B] as a frozenset of elements."""
    els, _ = sub_elements(G, letters, budget)
    return frozenset(mul_perm(v, x) for x in els)


def coset_subgraph(G: EGroup, v, letters, budget=DEFAULT_BUDGET) -> LabelledGraph:
    """The coset graph on v.G[B], with Cayley dart names, alphabet = B."""
    letters = frozenset(letters)
    els, _ = sub_elements(G, letters, budget)
    vertices = {mul_perm(v, x) for x in els}
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    for g in vertices:
        for sl in signed_alphabet(letters):
            e = (g, sl)
            h = mul_perm(g, G.gen_signed(sl))
            darts.add(e)
            alpha[e] = g
            inv[e] = (h, sletter_inv(sl))
            label[e] = sl
    return make_graph(vertices, darts, alpha, inv, label, letters)


def require_a_retractable(G: EGroup, letters, budget=DEFAULT_BUDGET):
    GA = subgroup(G, letters)
    if not is_retractable(GA, budget):
        raise NotRetractableError(
            "G[%s] is not retractable" % (sorted_ids(letters),)
        )
    return GA


# ---------------------------------------------------------------------------
# clusters


@dataclass(frozen=True, eq=False)
class Cluster:
    """Union of the coset graphs G[B], B in subsets, inside the Cayley
    graph of G[A]; the core is their intersection."""

    group: EGroup
    letters: frozenset
    subsets: frozenset  # of frozensets, all proper subsets of letters
    graph: LabelledGraph
    core: LabelledGraph
    constituents: dict  # frozenset B -> coset subgraph at 1


def cluster(G: EGroup, letters, subsets, budget=DEFAULT_BUDGET, check=True) -> Cluster:
    """The cluster of the coset graphs 1.G[B] for B in ``subsets``."""
    letters = frozenset(letters)
    subsets = frozenset(frozenset(B) for B in subsets)
    if not subsets:
        raise ValueError("cluster needs a nonempty set of subsets")
    for B in subsets:
        if not B < letters:
            raise ValueError("%r is not a proper subset" % (sorted_ids(B),))
    if check:
        require_a_retractable(G, letters, budget)
    one = G.identity
    parts = {B: coset_subgraph(G, one, B, budget) for B in subsets}
    vertices = set()
    darts = set()
    for p in parts.values():
        vertices |= p.vertices
        darts |= p.darts
    alphabet = letters
    graph = make_graph(
        vertices,
        darts,
        {e: p.alpha[e] for p in parts.values() for e in p.darts},
        {e: p.inv[e] for p in parts.values() for e in p.darts},
        {e: p.label[e] for p in parts.values() for e in p.darts},
        alphabet,
    )
    core_verts = None
    core_darts = None
    for p in parts.values():
        core_verts = set(p.vertices) if core_verts is None else core_verts & p.vertices
        core_darts = set(p.darts) if core_darts is None else core_darts & p.darts
    core = graph.restrict(core_verts, core_darts)
    if check:
        meet = frozenset.intersection(*subsets)
        _, meet_set = sub_elements(G, meet, budget)
        if core_verts != meet_set:
            raise GraphError("cluster core differs from the meet coset graph")
    return Cluster(
        group=G,
        letters=letters,
        subsets=subsets,
        graph=graph,
        core=core,
        constituents=parts,
    )


def augmented_cluster(
    G: EGroup, letters, subsets, v, aug_letters, budget=DEFAULT_BUDGET, check=True
) -> LabelledGraph:
    """The cluster with one extra coset v.G[B] glued on, inside G[A]."""
    cl = cluster(G, letters, subsets, budget, check)
    if v not in cl.graph.vertices:
        raise ValueError("augmentation vertex is not a cluster vertex")
    aug_letters = frozenset(aug_letters)
    if not aug_letters < cl.letters:
        raise ValueError("augmentation letters must form a proper subset")
    extra = coset_subgraph(G, v, aug_letters, budget)
    vertices = cl.graph.vertices | extra.vertices
    darts = cl.graph.darts | extra.darts
    alpha = {e: cl.graph.alpha[e] for e in cl.graph.darts}
    inv = {e: cl.graph.inv[e] for e in cl.graph.darts}
    label = {e: cl.graph.label[e] for e in cl.graph.darts}
    for e in extra.darts:
        alpha[e] = extra.alpha[e]
        inv[e] = extra.inv[e]
        label[e] = extra.label[e]
    return make_graph(vertices, darts, alpha, inv, label, cl.letters)


def cluster_assembled(G: EGroup, letters, subsets, budget=DEFAULT_BUDGET) -> LabelledGraph:
    """Independent assembly of a cluster: disjoint coset copies glued by
    the coincide-in-the-meet congruence.  Oracle for :func:`cluster`."""
    subsets = sorted(
        (frozenset(B) for B in subsets), key=lambda B: sort_key(_key(B))
    )
    copies = [coset_subgraph(G, G.identity, B, budget) for B in subsets]
    vertices = set()
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    for i, p in enumerate(copies):
        for v in p.vertices:
            vertices.add((i, v))
        for e in p.darts:
            darts.add((i, e))
            alpha[(i, e)] = (i, p.alpha[e])
            inv[(i, e)] = (i, p.inv[e])
            label[(i, e)] = p.label[e]
    union = make_graph(vertices, darts, alpha, inv, label, frozenset(letters))
    blocks = {}
    for i, (B, p) in enumerate(zip(subsets, copies)):
        for j in range(i + 1, len(subsets)):
            C, q = subsets[j], copies[j]
            _, meet_set = sub_elements(G, B & C, budget)
            for x in p.vertices & q.vertices:
                if x in meet_set:
                    blocks.setdefault(("v", x), set()).update({(i, x), (j, x)})
            for e in p.darts & q.darts:
                g, sl = e
                if g in meet_set and sl[0] in (B & C):
                    blocks.setdefault(("d", e), set()).update({(i, e), (j, e)})
    theta = GraphCongruence.from_blocks(union, blocks.values())
    return quotient(union, theta)


# ---------------------------------------------------------------------------
# admissibility


def is_admissible(G: EGroup, letters, skeleton: LabelledGraph, budget=DEFAULT_BUDGET):
    """Freeness of a connected skeleton for coset extension.

    Disjoint small components inside a common component of the skeleton
    must have disjoint ambient cosets.  Returns ``(ok, witness)``; the
    witness names the offending subsets and base vertices.
    """
    letters = frozenset(letters)
    require_a_retractable(G, letters, budget)
    if not skeleton.letters_present() <= letters:
        raise ValueError("skeleton uses letters outside the given set")
    for B in proper_subsets(letters):
        if not B:
            continue
        b_comps = skeleton.components(B)
        for bc in b_comps:
            subs = proper_subsets(B)
            comps_of = {
                B1: [c.vertices for c in bc.components(B1)] for B1 in subs
            }
            for B1 in subs:
                for B2 in subs:
                    for verts1 in comps_of[B1]:
                        for verts2 in comps_of[B2]:
                            if verts1 & verts2:
                                continue
                            v1 = min(verts1, key=sort_key)
                            v2 = min(verts2, key=sort_key)
                            if coset(G, v1, B1, budget) & coset(G, v2, B2, budget):
                                return False, {
                                    "B": _key(B),
                                    "B1": _key(B1),
                                    "B2": _key(B2),
                                    "v1": v1,
                                    "v2": v2,
                                }
    return True, None


# ---------------------------------------------------------------------------
# coset extensions


@dataclass(frozen=True, eq=False)
class CosetExtension:
    """A skeleton with every B-component blown up to a full coset copy,
    glued over all B in ``subsets`` and folded to an E-graph.

    ``constituents`` maps ``(B, i)`` to a record carrying the base vertex,
    the skeleton component and the image of the coset copy in the final
    graph; ``trace`` maps every final vertex to its ambient element (the
    morphism into the Cayley graph of G[A])."""

    group: EGroup
    letters: frozenset
    skeleton: LabelledGraph
    subsets: frozenset
    graph: LabelledGraph
    constituents: dict
    trace: dict

    def skeleton_vertices(self):
        return self.skeleton.vertices

    def is_full(self):
        return self.subsets == frozenset(proper_subsets(self.letters))


@dataclass(frozen=True)
class Constituent:
    letters: frozenset
    base: object  # skeleton vertex chosen in the component
    component_vertices: frozenset  # skeleton vertices of the component
    image_vertices: frozenset  # final names of the coset copy
    image_darts: frozenset


def _component_list(skeleton, B):
    comps = skeleton.components(B)
    comps.sort(key=lambda c: sort_key(min(c.vertices, key=sort_key)))
    return comps


def coset_extension_full(
    G: EGroup,
    letters,
    skeleton: LabelledGraph,
    subsets=None,
    budget=DEFAULT_BUDGET,
    base_rule=None,
    check_admissible=True,
    verify=True,
) -> CosetExtension:
    """Glue a full coset copy onto every B-component of the skeleton, for
    every B in ``subsets`` (default: all proper subsets of ``letters``),
    and fold the union to the largest E-graph quotient."""
    letters = frozenset(letters)
    if subsets is None:
        subsets = frozenset(proper_subsets(letters))
    else:
        subsets = frozenset(frozenset(B) for B in subsets)
    for B in subsets:
        if not B < letters:
            raise ValueError("%r is not a proper subset" % (sorted_ids(B),))
    if not skeleton.is_connected():
        raise ValueError("skeleton must be connected")
    if check_admissible:
        ok, witness = is_admissible(G, letters, skeleton, budget)
        if not ok:
            raise InadmissibleError("skeleton is not admissible: %r" % (witness,))
    if base_rule is None:
        base_rule = lambda verts: min(verts, key=sort_key)

    vertices = set(skeleton.vertices)
    darts = set(skeleton.darts)
    alpha = dict(skeleton.alpha)
    inv = dict(skeleton.inv)
    label = dict(skeleton.label)
    seeds = []
    trace = {v: v for v in skeleton.vertices}
    plan = []  # (B, i, base, component, iota) to index constituents afterwards

    for B in sorted(subsets, key=lambda s: sort_key(_key(s))):
        bkey = _key(B)
        comps = _component_list(skeleton, B)
        els, _ = sub_elements(G, B, budget)
        for i, comp in enumerate(comps):
            base = base_rule(comp.vertices)
            base_inv = inv_perm(base)
            plan.append((B, i, base, comp))
            if not B:
                continue  # the empty coset copy is the base vertex itself
            for z in els:
                name = ("ce", bkey, i, z)
                vertices.add(name)
                trace[name] = mul_perm(base, z)
                for sl in signed_alphabet(B):
                    e = ("ced", bkey, i, z, sl)
                    z2 = mul_perm(z, G.gen_signed(sl))
                    darts.add(e)
                    alpha[e] = name
                    inv[e] = ("ced", bkey, i, z2, sletter_inv(sl))
                    label[e] = sl
            for x in comp.vertices:
                seeds.append((x, ("ce", bkey, i, mul_perm(base_inv, x))))
            for d in comp.darts:
                g, sl = d
                seeds.append((d, ("ced", bkey, i, mul_perm(base_inv, g), sl)))

    union = make_graph(vertices, darts, alpha, inv, label, letters)
    skeleton_elems = skeleton.vertices | skeleton.darts
    try:
        folded, mapping = fold(union, seeds, prefer=lambda x: x in skeleton_elems)
    except GraphError as exc:
        raise InadmissibleError("coset copies do not glue coherently: %s" % exc)

    final_trace = {}
    for old, new in mapping.items():
        if old not in vertices:
            continue
        t = trace[old]
        prev = final_trace.get(new)
        if prev is not None and prev != t:
            raise InadmissibleError("ambient trace became inconsistent while gluing")
        final_trace[new] = t

    constituents = {}
    for B, i, base, comp in plan:
        bkey = _key(B)
        if B:
            els, _ = sub_elements(G, B, budget)
            img_v = frozenset(mapping[("ce", bkey, i, z)] for z in els)
            img_d = frozenset(
                mapping[("ced", bkey, i, z, sl)]
                for z in els
                for sl in signed_alphabet(B)
            )
        else:
            img_v = frozenset([base])
            img_d = frozenset()
        constituents[(bkey, i)] = Constituent(
            letters=B,
            base=base,
            component_vertices=comp.vertices,
            image_vertices=img_v,
            image_darts=img_d,
        )

    ce = CosetExtension(
        group=G,
        letters=letters,
        skeleton=skeleton,
        subsets=subsets,
        graph=folded,
        constituents=constituents,
        trace=final_trace,
    )
    if verify:
        verify_intersection_law(ce, budget)
        verify_skeleton_component_meets(ce)
    return ce


def coset_extension(
    G: EGroup, letters, skeleton, B, budget=DEFAULT_BUDGET, base_rule=None, **kw
) -> CosetExtension:
    """The single-subset extension CE(G, K; B)."""
    return coset_extension_full(
        G, letters, skeleton, subsets=[frozenset(B)], budget=budget, base_rule=base_rule, **kw
    )


def _sub_ce_image(ce: CosetExtension, D, via, budget=DEFAULT_BUDGET):
    """Image of CE(G, K; D) inside ce, computed through the copies of the
    member ``via`` of ce.subsets (with D a subset of via)."""
    G = ce.group
    vkey = _key(via)
    verts = set(ce.skeleton.vertices)
    darts = set(ce.skeleton.darts)
    if not D:
        return verts, darts
    els, _ = sub_elements(G, D, budget)
    via_comps = _component_list(ce.skeleton, via)
    comp_of = {}
    for i, comp in enumerate(via_comps):
        for v in comp.vertices:
            comp_of[v] = i
    bases = {(vkey, i): ce.constituents[(vkey, i)].base for i in range(len(via_comps))}
    # locate each D-component's copy inside the containing via-copy
    mapping_probe = {}
    for dcomp in _component_list(ce.skeleton, D):
        w = min(dcomp.vertices, key=sort_key)
        i = comp_of[w]
        base = bases[(vkey, i)]
        shift = mul_perm(inv_perm(base), w)
        for z in els:
            zz = mul_perm(shift, z)
            name = ("ce", vkey, i, zz)
            verts.add(_resolve(ce, name))
            for sl in signed_alphabet(D):
                darts.add(_resolve_dart(ce, ("ced", vkey, i, zz, sl)))
    return verts, darts


def _resolve(ce, name):
    # copy names are folded; recover the final name through image lookup
    bkey, i = name[1], name[2]
    cons = ce.constituents[(bkey, i)]
    # the copy vertex's trace determines it inside the constituent image
    base = cons.base
    target = mul_perm(base, name[3])
    hits = [v for v in cons.image_vertices if ce.trace[v] == target]
    if len(hits) == 1:
        return hits[0]
    raise GraphError("ambiguous resolution inside a constituent coset")


def _resolve_dart(ce, name):
    bkey, i, z, sl = name[1], name[2], name[3], name[4]
    v = _resolve(ce, ("ce", bkey, i, z))
    e = ce.graph.step_dart(v, sl)
    if e is None:
        raise GraphError("missing dart while resolving a coset copy")
    return e


def verify_intersection_law(ce: CosetExtension, budget=DEFAULT_BUDGET):
    """CE(.;B1) meet CE(.;B2) equals CE(.;B1 cap B2), as subgraphs."""
    members = sorted(ce.subsets, key=lambda s: sort_key(_key(s)))
    images = {}
    for B in members:
        verts = set(ce.skeleton.vertices)
        darts = set(ce.skeleton.darts)
        for (bkey, i), cons in ce.constituents.items():
            if cons.letters == B:
                verts |= cons.image_vertices
                darts |= cons.image_darts
        images[B] = (verts, darts)
    for B1, B2 in itertools.combinations(members, 2):
        D = B1 & B2
        inter_v = images[B1][0] & images[B2][0]
        inter_d = images[B1][1] & images[B2][1]
        v1, d1 = _sub_ce_image(ce, D, B1, budget)
        v2, d2 = _sub_ce_image(ce, D, B2, budget)
        if not (inter_v == v1 == v2 and inter_d == d1 == d2):
            raise GraphError(
                "intersection law fails for %r, %r" % (_key(B1), _key(B2))
            )
    return True


def verify_skeleton_component_meets(ce: CosetExtension):
    """Pairwise meets of letter components of an admissible skeleton are
    connected (two-acyclicity of the skeleton)."""
    K = ce.skeleton
    subs = proper_subsets(ce.letters)
    for B in subs:
        for C in subs:
            for bc in K.components(B):
                for cc in K.components(C):
                    verts = bc.vertices & cc.vertices
                    if not verts:
                        continue
                    darts = bc.darts & cc.darts
                    meet = K.restrict(verts, darts)
                    if not meet.is_connected():
                        raise GraphError(
                            "skeleton component meet is disconnected for %r, %r"
                            % (_key(B), _key(C))
                        )
    return True


# ---------------------------------------------------------------------------
# the morphism into the ambient Cayley graph


def ce_morphism(ce: CosetExtension):
    """The unique extension of the skeleton inclusion to a morphism into
    the Cayley graph of G[A]; returns ``(vertex_map, injective)``."""
    vmap = dict(ce.trace)
    injective = len(set(vmap.values())) == len(vmap)
    return vmap, injective


# ---------------------------------------------------------------------------
# supports


@dataclass(frozen=True)
class Support:
    letters: frozenset
    base: object  # skeleton vertex of the supporting component
    component_vertices: frozenset
    attained_at: frozenset  # vertices of the queried subgraph it supports

    @property
    def size(self):
        return len(self.letters)


def vertex_supports(ce: CosetExtension, x):
    out = []
    for key, cons in ce.constituents.items():
        if x in cons.image_vertices:
            out.append(key)
    return out


def minimal_support(ce: CosetExtension, vertices):
    """The unique minimal supporting pair of a subgraph, or None.

    A pair (B, v) supports the subgraph when its constituent coset meets
    it; the minimum is with respect to letter-set inclusion together with
    inclusion of the skeleton components."""
    vertices = frozenset(vertices)
    if not vertices:
        raise ValueError("empty subgraph has no support")
    pairs = set()
    for x in vertices:
        pairs.update(vertex_supports(ce, x))
    if not pairs:
        return None
    best = None
    for key in sorted(pairs, key=sort_key):
        cons = ce.constituents[key]
        if all(
            cons.letters <= ce.constituents[other].letters
            and cons.component_vertices <= ce.constituents[other].component_vertices
            for other in pairs
        ):
            best = key
            break
    if best is None:
        return None
    cons = ce.constituents[best]
    return Support(
        letters=cons.letters,
        base=cons.base,
        component_vertices=cons.component_vertices,
        attained_at=frozenset(x for x in vertices if x in cons.image_vertices),
    )


# ---------------------------------------------------------------------------
# classification of letter components


@dataclass(frozen=True)
class Classification:
    kind: str  # "coset" | "cluster" | "augmented-cluster" | "other"
    letters: frozenset
    subsets: frozenset | None  # the cluster's subset family, when applicable
    aug_letters: frozenset | None
    iso: dict | None  # model -> component
    core_vertices: frozenset | None  # component vertices forming the core


def _normalized_families(C):
    """Nonempty antichain families of proper subsets of C, deduplicated."""
    subs = proper_subsets(C)
    seen = set()
    out = []
    for r in range(1, len(subs) + 1):
        for fam in itertools.combinations(subs, r):
            fam = [B for B in fam if not any(B < B2 for B2 in fam)]
            key = frozenset(fam)
            if key in seen:
                continue
            seen.add(key)
            out.append(key)
    out.sort(key=lambda f: (len(f), sort_key(tuple(sorted(_key(B) for B in f)))))
    return out


def classify_component(
    G: EGroup,
    comp: LabelledGraph,
    letters,
    budget=DEFAULT_BUDGET,
    with_augmented=True,
):
    """Match a letter component against reconstructed model shapes.

    Tries, in order: the full coset graph of ``letters``, clusters over
    every normalized subset family, then single augmentations of those
    clusters.  Matching is by labelled isomorphism against the explicitly
    rebuilt model, so a positive answer always carries the witnessing
    map."""
    C = frozenset(letters)
    n = len(comp.vertices)
    els, _ = sub_elements(G, C, budget)
    if len(els) == n:
        model = coset_subgraph(G, G.identity, C, budget)
        iso = labelled_isomorphic(model, comp)
        if iso is not None:
            return Classification(
                kind="coset",
                letters=C,
                subsets=None,
                aug_letters=None,
                iso=iso,
                core_vertices=frozenset(iso[v] for v in model.vertices),
            )
    families = _normalized_families(C)
    clusters = {}
    for fam in families:
        cl = cluster(G, C, fam, budget, check=False)
        clusters[fam] = cl
        if len(cl.graph.vertices) != n:
            continue
        iso = labelled_isomorphic(cl.graph, comp)
        if iso is not None:
            kind = "coset" if len(fam) == 1 else "cluster"
            return Classification(
                kind=kind,
                letters=C,
                subsets=fam,
                aug_letters=None,
                iso=iso,
                core_vertices=frozenset(iso[v] for v in cl.core.vertices),
            )
    if with_augmented:
        for fam in families:
            cl = clusters[fam]
            if len(cl.graph.vertices) > n:
                continue
            for v in sorted_ids(cl.graph.vertices):
                for D in proper_subsets(C):
                    if not D:
                        continue
                    model = augmented_cluster(G, C, fam, v, D, budget, check=False)
                    if len(model.vertices) != n:
                        continue
                    iso = labelled_isomorphic(model, comp)
                    if iso is not None:
                        return Classification(
                            kind="augmented-cluster",
                            letters=C,
                            subsets=fam,
                            aug_letters=D,
                            iso=iso,
                            core_vertices=frozenset(
                                iso[x] for x in cl.core.vertices if x in iso
                            ),
                        )
    return Classification(
        kind="other",
        letters=C,
        subsets=None,
        aug_letters=None,
        iso=None,
        core_vertices=None,
    )


# ---------------------------------------------------------------------------
# cluster property and bridge freeness


def has_cluster_property(ce: CosetExtension, budget=DEFAULT_BUDGET):
    """Check both halves of the cluster property; returns (ok, witness).

    Every letter component disjoint from the skeleton must be a cluster
    or a full coset, and must have unique minimal support attained at a
    core vertex (when it is a cluster)."""
    skel = ce.skeleton.vertices
    for B in proper_subsets(ce.letters):
        if not B:
            continue
        for comp in ce.graph.components(B):
            if comp.vertices & skel:
                continue
            cls = classify_component(
                ce.group, comp, B, budget, with_augmented=False
            )
            if cls.kind not in ("coset", "cluster"):
                return False, {
                    "B": _key(B),
                    "reason": "component is not a coset or cluster",
                    "component": _vertex_indices(ce, comp.vertices),
                }
            ms = minimal_support(ce, comp.vertices)
            if ms is None:
                return False, {
                    "B": _key(B),
                    "reason": "no unique minimal support",
                    "component": _vertex_indices(ce, comp.vertices),
                }
            if cls.kind == "cluster" and not (cls.core_vertices & ms.attained_at):
                return False, {
                    "B": _key(B),
                    "reason": "minimal support not attained at a core vertex",
                    "component": _vertex_indices(ce, comp.vertices),
                }
    return True, None


def is_bridge_free(ce: CosetExtension, budget=DEFAULT_BUDGET):
    """Embedding into the ambient Cayley graph plus inherited connectivity.

    Returns (ok, witness); an embedding failure is reported as
    non-bridge-free with the colliding vertex pair."""
    vmap, injective = ce_morphism(ce)
    if not injective:
        seen = {}
        for v in sorted_ids(vmap):
            t = vmap[v]
            if t in seen:
                return False, {
                    "reason": "morphism into the Cayley graph is not injective",
                    "pair": _vertex_indices(ce, [seen[t], v]),
                }
            seen[t] = v
    G = ce.group
    verts = sorted_ids(ce.graph.vertices)
    for B in proper_subsets(ce.letters):
        els, _ = sub_elements(G, B, budget)
        inside = ce.graph.component_partition(B)
        by_coset = {}
        for u in verts:
            coset_id = min((mul_perm(vmap[u], x) for x in els), key=sort_key)
            by_coset.setdefault(coset_id, []).append(u)
        for group_verts in by_coset.values():
            reps = {inside[u] for u in group_verts}
            if len(reps) > 1:
                bad = sorted(group_verts, key=lambda u: sort_key(inside[u]))
                return False, {
                    "B": _key(B),
                    "reason": "ambient connectivity not inherited",
                    "pair": _vertex_indices(ce, [bad[0], bad[-1]]),
                }
    return True, None


# ---------------------------------------------------------------------------
# augmented coset extensions


def augmented_ce(ce: CosetExtension, v, aug_letters, budget=DEFAULT_BUDGET):
    """Glue one coset v.G[B] onto the B-component of v in the extension.

    Requires that the component embeds into the coset graph (which the
    cluster property guarantees); returns the glued graph.  The vertices
    of the extension keep their names, the freshly attached part is named
    ``("aug", element)``."""
    B = frozenset(aug_letters)
    if not B < ce.letters:
        raise ValueError("augmentation letters must form a proper subset")
    if v not in ce.graph.vertices:
        raise ValueError("augmentation vertex is not in the extension")
    if not B:
        return ce.graph
    G = ce.group
    comp = ce.graph.component(v, B)
    model = coset_subgraph(G, G.identity, B, budget)
    iota = {v: G.identity}
    queue = [v]
    while queue:
        x = queue.pop()
        for e in comp.out_darts(x):
            y = comp.omega(e)
            z = mul_perm(iota[x], G.gen_signed(comp.label[e]))
            if y in iota:
                if iota[y] != z:
                    raise ClusterPropertyError(
                        "component does not embed into the coset graph"
                    )
            else:
                iota[y] = z
                queue.append(y)
    if len(set(iota.values())) != len(iota):
        raise ClusterPropertyError("component does not embed into the coset graph")

    union = disjoint_union([ce.graph, model], share_letters=True)
    seeds = [((0, x), (1, iota[x])) for x in iota]
    for x in iota:
        for e in comp.out_darts(x):
            seeds.append(((0, e), (1, (iota[x], comp.label[e]))))
    folded, mapping = fold(union, seeds, prefer=lambda t: t[0] == 0)
    # model vertex ids are permutation tuples, model dart ids are (perm, sl)
    rename = {}
    for x in folded.vertices:
        rename[x] = x[1] if x[0] == 0 else ("aug", x[1])
    for e in folded.darts:
        rename[e] = e[1] if e[0] == 0 else ("augd",) + e[1]
    return make_graph(
        {rename[x] for x in folded.vertices},
        {rename[e] for e in folded.darts},
        {rename[e]: rename[folded.alpha[e]] for e in folded.darts},
        {rename[e]: rename[folded.inv[e]] for e in folded.darts},
        {rename[e]: folded.label[e] for e in folded.darts},
        ce.letters,
    )


# ---------------------------------------------------------------------------
# diagnostics report


def _vertex_indices(ce: CosetExtension, vertices):
    order = {v: i for i, v in enumerate(sorted_ids(ce.graph.vertices))}
    return sorted(order[v] for v in vertices)


def ce_diagnostics(ce: CosetExtension, budget=DEFAULT_BUDGET):
    """JSON-able structural report for one coset extension."""
    vmap, injective = ce_morphism(ce)
    cluster_ok, cluster_witness = has_cluster_property(ce, budget)
    bridge_ok, bridge_witness = is_bridge_free(ce, budget)
    per_subset = []
    for B in proper_subsets(ce.letters):
        comps = ce.graph.components(B)
        records = []
        for comp in comps:
            off_skeleton = not (comp.vertices & ce.skeleton.vertices)
            cls = classify_component(ce.group, comp, B, budget)
            ms = minimal_support(ce, comp.vertices)
            records.append(
                {
                    "vertices": _vertex_indices(ce, comp.vertices),
                    "off_skeleton": off_skeleton,
                    "classification": cls.kind,
                    "support": None
                    if ms is None
                    else {"letters": [str(a) for a in sorted_ids(ms.letters)],
                          "size": ms.size},
                }
            )
        per_subset.append(
            {
                "letters": [str(a) for a in sorted_ids(B)],
                "component_count": len(comps),
                "components": records,
            }
        )
    return {
        "letters": [str(a) for a in sorted_ids(ce.letters)],
        "skeleton_vertices": len(ce.skeleton.vertices),
        "graph_vertices": len(ce.graph.vertices),
        "embedding": injective,
        "cluster_property": cluster_ok,
        "cluster_witness": cluster_witness,
        "bridge_free": bridge_ok,
        "bridge_witness": bridge_witness,
        "subsets": per_subset,
    }
