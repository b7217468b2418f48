"""Finite edge-generated permutation groups.

A group here is always the transition group of a finite complete
labelled graph: one permutation of the vertex set per letter.  Elements
are stored as image tuples over a fixed carrier, multiplied in action
order (``mul(p, q)`` applies ``p`` first).  On top of that sit the
Cayley/coset graph constructions, canonical graph morphisms, the
retractability and stability checks, and content computation.

Everything that enumerates group elements takes an element budget and
raises :class:`BudgetExceeded` instead of silently truncating.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass

from .sgraph import (
    GraphError,
    LabelledGraph,
    delete_letters,
    disjoint_union,
    make_graph,
    signed_alphabet,
    sletter_inv,
    sort_key,
    sorted_ids,
    trivial_completion,
    with_alphabet,
    word_content,
    word_inverse,
)

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration passes its element budget.

    ``count`` carries the number of elements found before giving up.
    """

    def __init__(self, what, count):
        super().__init__("%s exceeded budget at %d elements" % (what, count))
        self.what = what
        self.count = count


# ---------------------------------------------------------------------------
# permutations as image tuples


def identity_perm(n):
    return tuple(range(n))


def mul_perm(p, q):
    """Apply p first, then q (action order)."""
    return tuple(q[i] for i in p)


def inv_perm(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


# ---------------------------------------------------------------------------
# E-groups


@dataclass(frozen=True, eq=False)
class EGroup:
    """A finite group of permutations of ``carrier`` with one generator
    per letter, remembering the complete graph that defined it."""

    alphabet: frozenset
    carrier: tuple
    gen: dict  # letter -> image tuple
    graph: LabelledGraph

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.carrier)})
        object.__setattr__(self, "_elements", None)
        object.__setattr__(self, "_words", None)
        object.__setattr__(self, "_retractable", None)
        object.__setattr__(self, "_subgroup_cache", {})
        object.__setattr__(self, "_subgroup_objs", {})
        object.__setattr__(self, "_scratch", {})

    @property
    def identity(self):
        return identity_perm(len(self.carrier))

    def gen_signed(self, sl):
        a, s = sl
        if a not in self.alphabet:
            raise KeyError("letter %r not in alphabet" % (a,))
        p = self.gen[a]
        return p if s == 1 else inv_perm(p)

    def act(self, v, word):
        """The vertex ``v . word`` of the defining graph."""
        i = self._index[v]
        return self.carrier[eval_word(self, word)[i]]

    def __repr__(self):
        return "EGroup(%d letters, carrier %d)" % (len(self.alphabet), len(self.carrier))


def transition_group(g: LabelledGraph) -> EGroup:
    """The permutation group on the vertex set induced by a complete graph."""
    if not g.is_complete():
        raise GraphError("transition group requires a complete graph")
    carrier = tuple(sorted_ids(g.vertices))
    index = {v: i for i, v in enumerate(carrier)}
    gen = {}
    for a in sorted_ids(g.alphabet):
        gen[a] = tuple(index[g.step(v, (a, 1))] for v in carrier)
    return EGroup(alphabet=g.alphabet, carrier=carrier, gen=gen, graph=g)


def eval_word(G: EGroup, word) -> tuple:
    p = G.identity
    for sl in word:
        p = mul_perm(p, G.gen_signed(sl))
    return p


def subgroup_elements(G: EGroup, letters, budget=DEFAULT_BUDGET):
    """Breadth-first closure of {identity} under the given letters.

    Returns the elements in BFS order (deterministic).  Raises
    :class:`BudgetExceeded` when more than ``budget`` elements appear.
    """
    letters = frozenset(letters)
    cached = G._subgroup_cache.get(letters)
    if cached is not None and len(cached[0]) <= budget:
        return cached[0]
    elements, _ = _bfs_elements(G, letters, budget)
    G._subgroup_cache[letters] = (elements, None)
    return elements


def element_words(G: EGroup, letters=None, budget=DEFAULT_BUDGET):
    """Elements of the subgroup plus one witness word per element."""
    letters = G.alphabet if letters is None else frozenset(letters)
    cached = G._subgroup_cache.get(letters)
    if cached is not None and cached[1] is not None:
        return cached
    elements, words = _bfs_elements(G, letters, budget, want_words=True)
    G._subgroup_cache[letters] = (elements, words)
    return elements, words


def _bfs_elements(G, letters, budget, want_words=False):
    gens = [((a, s), G.gen_signed((a, s))) for a, s in signed_alphabet(letters)]
    start = G.identity
    seen = {start: ()}
    order = [start]
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for sl, q in gens:
            r = mul_perm(p, q)
            if r not in seen:
                seen[r] = (p, sl)
                order.append(r)
                if len(order) > budget:
                    raise BudgetExceeded("subgroup enumeration", len(order))
                queue.append(r)
    if not want_words:
        return order, None
    words = {}
    for p in order:
        chain = []
        cur = p
        while seen[cur] != ():
            parent, sl = seen[cur]
            chain.append(sl)
            cur = parent
        words[p] = tuple(reversed(chain))
    return order, words


def group_order(G: EGroup, budget=DEFAULT_BUDGET):
    return len(subgroup_elements(G, G.alphabet, budget))


def subgroup(G: EGroup, letters) -> EGroup:
    """G[A] as an A-group: the letter reduct acting on the same carrier."""
    letters = frozenset(letters)
    if letters in G._subgroup_objs:
        return G._subgroup_objs[letters]
    if not letters <= G.alphabet:
        raise KeyError("letters %r not in alphabet" % (letters,))
    darts = {e for e in G.graph.darts if G.graph.label[e][0] in letters}
    reduct = with_alphabet(G.graph.restrict(G.graph.vertices, darts), letters)
    out = EGroup(
        alphabet=letters,
        carrier=G.carrier,
        gen={a: G.gen[a] for a in letters},
        graph=reduct,
    )
    G._subgroup_objs[letters] = out
    return out


def cayley_graph(G: EGroup, letters=None, budget=DEFAULT_BUDGET, alphabet=None):
    """The Cayley graph of the subgroup generated by ``letters``.

    Vertices are the subgroup elements, darts are ``(g, sl)`` with
    ``alpha (g, sl) = g`` and ``omega = g.sl``.  The result is a connected
    complete graph over ``letters`` and, viewed over a larger alphabet
    (default: all of ``G.alphabet``), a weakly complete graph.
    """
    letters = G.alphabet if letters is None else frozenset(letters)
    elements = subgroup_elements(G, letters, budget)
    element_set = set(elements)
    vertices = element_set
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    for g in elements:
        for sl in signed_alphabet(letters):
            e = (g, sl)
            h = mul_perm(g, G.gen_signed(sl))
            assert h in element_set
            darts.add(e)
            alpha[e] = g
            inv[e] = (h, sletter_inv(sl))
            label[e] = sl
    if alphabet is None:
        alphabet = G.alphabet
    return make_graph(vertices, darts, alpha, inv, label, alphabet)


def make_graph_action(carrier, gens, alphabet) -> LabelledGraph:
    """The complete action graph of letter permutations over a carrier."""
    index = {v: i for i, v in enumerate(carrier)}
    vertices = set(carrier)
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    for v in carrier:
        i = index[v]
        for a in sorted_ids(alphabet):
            for s in (1, -1):
                e = (v, (a, s))
                w = carrier[gens[a][i]] if s == 1 else carrier[inv_perm(gens[a])[i]]
                darts.add(e)
                alpha[e] = v
                inv[e] = (w, (a, -s))
                label[e] = (a, s)
    return make_graph(vertices, darts, alpha, inv, label, alphabet)


# ---------------------------------------------------------------------------
# canonical morphisms and covering


@dataclass(frozen=True)
class CanonicalMorphism:
    """A label-respecting graph morphism determined by one base pair."""

    source: LabelledGraph
    target: LabelledGraph
    vertex_map: dict
    base: tuple  # (source vertex, target vertex)

    def dart_image(self, e):
        f = self.target.step_dart(self.vertex_map[self.source.alpha[e]], self.source.label[e])
        if f is None:
            raise GraphError("target lacks a step for %r" % (e,))
        return f

    def is_surjective(self):
        return set(self.vertex_map.values()) == set(self.target.vertices)


def find_canonical_morphism(source, target, base_src, base_dst, want_witness=False):
    """Extend ``base_src -> base_dst`` to a morphism, or report failure.

    The source must be a connected complete E-graph (a Cayley graph);
    the assignment propagates deterministically and the search returns
    None exactly when some propagation step clashes.  With
    ``want_witness`` the result is a pair ``(morphism, witness)`` where a
    failure witness is a word labelling a closed path at ``base_src``
    whose image path at ``base_dst`` is not closed.
    """
    if base_dst not in target.vertices:
        raise GraphError("base vertex %r not in target" % (base_dst,))
    vmap = {base_src: base_dst}
    parent = {base_src: None}
    queue = deque([base_src])
    clash = None
    while queue and clash is None:
        v = queue.popleft()
        for e in source.out_darts(v):
            sl = source.label[e]
            t = target.step(vmap[v], sl)
            if t is None:
                raise GraphError("target is not complete at %r / %r" % (vmap[v], sl))
            w = source.omega(e)
            if w not in vmap:
                vmap[w] = t
                parent[w] = (v, sl)
                queue.append(w)
            elif vmap[w] != t:
                clash = (v, sl, w)
                break
    if clash is None:
        morphism = CanonicalMorphism(source, target, vmap, (base_src, base_dst))
        return (morphism, None) if want_witness else morphism
    if not want_witness:
        return None

    def word_to(x):
        out = []
        while parent[x] is not None:
            p, sl = parent[x]
            out.append(sl)
            x = p
        return tuple(reversed(out))

    v, sl, w = clash
    witness = word_to(v) + (sl,) + word_inverse(word_to(w))
    return None, witness


def cayley_covers(source, target):
    """Whether the Cayley-type source covers ``target`` at some base."""
    base_src = min(source.vertices, key=sort_key)
    for base_dst in sorted_ids(target.vertices):
        if find_canonical_morphism(source, target, base_src, base_dst) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# retractability and content


def completed_subgroup_graph(G: EGroup, letters, budget=DEFAULT_BUDGET):
    """Trivial completion of the coset graph, as a graph over G's alphabet."""
    return trivial_completion(cayley_graph(G, letters, budget, alphabet=G.alphabet))


def retractability_report(G: EGroup, budget=DEFAULT_BUDGET):
    """Covering criterion over every letter subset.

    Returns ``(True, None)`` or ``(False, (subset, witness_word))`` where
    the witness evaluates to 1 in G but not after deleting the letters
    outside the subset.
    """
    if G._retractable is not None:
        return G._retractable
    cay = cayley_graph(G, G.alphabet, budget)
    one = G.identity
    result = (True, None)
    for size in range(len(G.alphabet) + 1):
        for A in itertools.combinations(sorted_ids(G.alphabet), size):
            target = completed_subgroup_graph(G, A, budget)
            got, witness = find_canonical_morphism(cay, target, one, one, want_witness=True)
            if got is None:
                result = (False, (frozenset(A), witness))
                break
        if not result[0]:
            break
    object.__setattr__(G, "_retractable", result)
    return result


def is_retractable(G: EGroup, budget=DEFAULT_BUDGET):
    return retractability_report(G, budget)[0]


def is_k_retractable(G: EGroup, k, budget=DEFAULT_BUDGET):
    """A-retractability of every k-element subset A (as A-groups)."""
    for A in itertools.combinations(sorted_ids(G.alphabet), k):
        if not is_retractable(subgroup(G, A), budget):
            return False
    return True


def content(G: EGroup, word, budget=DEFAULT_BUDGET, check=False):
    """The minimal letter set needed to represent the value of ``word``.

    Computed by the single-letter-deletion criterion, which agrees with
    the definition by intersection over all representations exactly when
    G is retractable.  ``check=True`` verifies retractability first
    (cached on the group).
    """
    if check and not is_retractable(G, budget):
        raise ValueError("content requires a retractable group")
    value = eval_word(G, word)
    out = set()
    for a in word_content(word):
        if eval_word(G, delete_letters(word, {a})) != value:
            out.add(a)
    return frozenset(out)


def element_content(G: EGroup, element, budget=DEFAULT_BUDGET):
    """Content of a group element, via a stored witness word."""
    _, words = element_words(G, None, budget)
    return content(G, words[element], budget)


# ---------------------------------------------------------------------------
# expansions and stability


@dataclass(frozen=True, eq=False)
class Expansion:
    """A canonical (letter-respecting) surjection ``source ->> target``."""

    source: EGroup
    target: EGroup

    def __post_init__(self):
        if self.source.alphabet != self.target.alphabet:
            raise ValueError("expansion requires a common alphabet")

    def map_element(self, element, budget=DEFAULT_BUDGET):
        _, words = element_words(self.source, None, budget)
        return eval_word(self.target, words[element])

    def is_valid(self, budget=DEFAULT_BUDGET):
        """Whether the letter map really induces a morphism, i.e. every
        relation of the source holds in the target."""
        union = disjoint_union([self.source.graph, self.target.graph], share_letters=True)
        pair_group = transition_group(union)
        return group_order(pair_group, budget) == group_order(self.source, budget)


def is_stable(exp: Expansion, letters, budget=DEFAULT_BUDGET):
    """Injectivity of the canonical morphism on the subgroup over ``letters``,
    decided by comparing subgroup orders."""
    n_src = len(subgroup_elements(exp.source, letters, budget))
    n_dst = len(subgroup_elements(exp.target, letters, budget))
    return n_src == n_dst


def is_k_stable(exp: Expansion, k, budget=DEFAULT_BUDGET):
    for A in itertools.combinations(sorted_ids(exp.source.alphabet), k):
        if not is_stable(exp, frozenset(A), budget):
            return False
    return True


# ---------------------------------------------------------------------------
# the free Abelian exponent-p baseline


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def abelian_p_group(letters, p, budget=DEFAULT_BUDGET) -> EGroup:
    """The free exponent-p Abelian group on ``letters``: coordinate
    translations of (Z_p)^letters."""
    if not _is_prime(p):
        raise ValueError("%r is not prime" % (p,))
    letters = sorted_ids(letters)
    if p ** len(letters) > budget:
        raise BudgetExceeded("abelian carrier", p ** len(letters))
    carrier = list(itertools.product(range(p), repeat=len(letters)))
    vertices = set(carrier)
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    for v in carrier:
        for i, a in enumerate(letters):
            for s in (1, -1):
                e = (v, (a, s))
                w = list(v)
                w[i] = (w[i] + s) % p
                w = tuple(w)
                darts.add(e)
                alpha[e] = v
                inv[e] = (w, (a, -s))
                label[e] = (a, s)
    g = make_graph(vertices, darts, alpha, inv, label, letters)
    return transition_group(g)


# ---------------------------------------------------------------------------
# automorphisms from letter permutations


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    """The automorphism of G sending [p] to [p with letters permuted]."""

    group: EGroup
    letter_map: dict

    def apply_word(self, word):
        return tuple((self.letter_map[a], s) for a, s in word)

    def apply(self, element, budget=DEFAULT_BUDGET):
        _, words = element_words(self.group, None, budget)
        return eval_word(self.group, self.apply_word(words[element]))


def extend_automorphism(G: EGroup, letter_map, budget=DEFAULT_BUDGET):
    """Extend a letter permutation to a group automorphism, if possible.

    The map [p] -> [letter_map(p)] is well defined iff the defining graph
    and its relabelling by the inverse permutation satisfy the same
    relations; that holds iff the two-component transition group has the
    same order as G.  Returns None when the check fails.
    """
    if set(letter_map) != set(G.alphabet) or set(letter_map.values()) != set(G.alphabet):
        raise ValueError("letter map must permute the alphabet")
    inverse = {b: a for a, b in letter_map.items()}
    g = G.graph
    relabel = {e: (inverse[a], s) for e, (a, s) in g.label.items()}
    relabelled = make_graph(g.vertices, g.darts, g.alpha, g.inv, relabel, g.alphabet)
    union = disjoint_union([g, relabelled], share_letters=True)
    pair_group = transition_group(union)
    if group_order(pair_group, budget) != group_order(G, budget):
        return None
    return GroupAutomorphism(group=G, letter_map=dict(letter_map))


# ---------------------------------------------------------------------------
# serialization (exact integers, versioned)

_SCHEMA = "edgegroups.egroup.v1"


def _id_to_json(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, tuple):
        return {"t": [_id_to_json(y) for y in x]}
    if isinstance(x, frozenset):
        return {"f": [_id_to_json(y) for y in sorted_ids(x)]}
    raise TypeError("cannot serialize id %r" % (x,))


def _id_from_json(x):
    if isinstance(x, dict):
        if "t" in x:
            return tuple(_id_from_json(y) for y in x["t"])
        if "f" in x:
            return frozenset(_id_from_json(y) for y in x["f"])
        raise ValueError("bad id encoding %r" % (x,))
    return x


def egroup_to_json(G: EGroup) -> str:
    doc = {
        "schema": _SCHEMA,
        "carrier_size": len(G.carrier),
        "carrier": [_id_to_json(v) for v in G.carrier],
        "gens": [
            {"letter": _id_to_json(a), "image": list(G.gen[a])}
            for a in sorted_ids(G.alphabet)
        ],
    }
    return json.dumps(doc, sort_keys=True)


def egroup_from_json(text: str) -> EGroup:
    doc = json.loads(text)
    if doc.get("schema") != _SCHEMA:
        raise ValueError("unsupported schema %r" % (doc.get("schema"),))
    carrier = tuple(_id_from_json(v) for v in doc["carrier"])
    if len(carrier) != doc["carrier_size"]:
        raise ValueError("carrier size mismatch")
    gen = {}
    for item in doc["gens"]:
        a = _id_from_json(item["letter"])
        img = tuple(item["image"])
        if sorted(img) != list(range(len(carrier))):
            raise ValueError("generator image is not a permutation")
        gen[a] = img
    vertices = set(carrier)
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    for i, v in enumerate(carrier):
        for a, img in gen.items():
            for s in (1, -1):
                e = (v, (a, s))
                w = carrier[img[i]] if s == 1 else carrier[inv_perm(img)[i]]
                darts.add(e)
                alpha[e] = v
                inv[e] = (w, (a, -s))
                label[e] = (a, s)
    graph = make_graph(vertices, darts, alpha, inv, label, set(gen))
    return EGroup(alphabet=frozenset(gen), carrier=carrier, gen=gen, graph=graph)
