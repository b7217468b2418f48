"""Labelled graphs in the Serre style, plus the letter/word machinery.

A graph is a two-sorted structure: a set of vertices and a set of *darts*
(directed edge halves).  Every dart ``e`` has a start ``alpha(e)``, a
fixed-point-free inverse partner ``inv(e)`` with ``alpha(inv(e)) ==
omega(e)``, and a signed label drawn from an alphabet of letters.  The
positively labelled darts together with their inverses partition the dart
set, which orients the graph.

Vertex ids, dart ids and letters are opaque hashable tokens; ``sort_key``
gives them a deterministic total order so that every construction in this
package iterates in a reproducible order.  Graph values are immutable
after construction and safe to share; all mutation happens inside the
builder functions of this module.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass


class GraphError(ValueError):
    """Raised when graph data violates the structural axioms."""


# ---------------------------------------------------------------------------
# deterministic ordering of heterogeneous ids


def sort_key(x):
    """Total order over the id values used in this package.

    Handles ints, strings, tuples, frozensets and None; anything else is
    ordered by its repr.  Nested containers are ordered recursively.
    """
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, x)
    if isinstance(x, int):
        return (2, x)
    if isinstance(x, str):
        return (3, x)
    if isinstance(x, tuple):
        return (4, tuple(sort_key(y) for y in x))
    if isinstance(x, frozenset):
        return (5, tuple(sorted(sort_key(y) for y in x)))
    return (6, repr(x))


def sorted_ids(xs):
    return sorted(xs, key=sort_key)


# ---------------------------------------------------------------------------
# signed letters and words
#
# A signed letter is a pair (letter, sign) with sign +1 or -1; a word is a
# tuple of signed letters.  The empty tuple is the empty word.


def pos(letter):
    return (letter, 1)


def neg(letter):
    return (letter, -1)


def sletter_inv(sl):
    return (sl[0], -sl[1])


def word_inverse(w):
    return tuple(sletter_inv(sl) for sl in reversed(w))


def free_reduce(w):
    """Delete factors x x^-1 until none remain."""
    out = []
    for sl in w:
        if out and out[-1] == sletter_inv(sl):
            out.pop()
        else:
            out.append(sl)
    return tuple(out)


def delete_letters(w, letters):
    """Remove every occurrence of the given letters and their inverses."""
    letters = set(letters)
    return tuple(sl for sl in w if sl[0] not in letters)


def word_content(w):
    """The set of letters occurring in ``w`` (positively or negatively)."""
    return frozenset(sl[0] for sl in w)


def signed_alphabet(letters):
    out = []
    for a in sorted_ids(letters):
        out.append((a, 1))
        out.append((a, -1))
    return out


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Path:
    """A dart sequence with consecutive endpoints; empty paths carry only
    their vertex."""

    start: object
    darts: tuple
    end: object
    word: tuple

    def __len__(self):
        return len(self.darts)


# ---------------------------------------------------------------------------
# the graph value


@dataclass(frozen=True, eq=False)
class LabelledGraph:
    """Immutable Serre graph with involution and labelling.

    The dict fields are owned by the instance and must not be mutated.
    ``alphabet`` is the letter set relative to which completeness and
    completions are judged; it may strictly contain the letters that
    actually occur.
    """

    vertices: frozenset
    darts: frozenset
    alpha: dict
    inv: dict
    label: dict
    alphabet: frozenset

    def __post_init__(self):
        object.__setattr__(self, "_adj", None)
        object.__setattr__(self, "_step", None)
        object.__setattr__(self, "_canon", None)

    # -- basic accessors ----------------------------------------------------

    def omega(self, e):
        return self.alpha[self.inv[e]]

    def positive_darts(self):
        return frozenset(e for e in self.darts if self.label[e][1] == 1)

    def letters_present(self):
        return frozenset(self.label[e][0] for e in self.darts)

    def n_vertices(self):
        return len(self.vertices)

    def adjacency(self):
        """Map vertex -> list of outgoing darts, deterministically ordered."""
        if self._adj is None:
            adj = {v: [] for v in self.vertices}
            for e in sorted_ids(self.darts):
                adj[self.alpha[e]].append(e)
            object.__setattr__(self, "_adj", adj)
        return self._adj

    def out_darts(self, v):
        return self.adjacency()[v]

    # -- determinism (E-graph) queries ---------------------------------------

    def is_e_graph(self):
        """True iff no vertex has two outgoing darts with the same label."""
        seen = set()
        for e in self.darts:
            key = (self.alpha[e], self.label[e])
            if key in seen:
                return False
            seen.add(key)
        return True

    def _step_table(self):
        if self._step is None:
            table = {}
            for e in self.darts:
                key = (self.alpha[e], self.label[e])
                if key in table:
                    raise GraphError("not an E-graph: duplicate %r" % (key,))
                table[key] = e
            object.__setattr__(self, "_step", table)
        return self._step

    def step_dart(self, v, sl):
        """The unique outgoing dart at ``v`` labelled ``sl``, or None."""
        return self._step_table().get((v, sl))

    def step(self, v, sl):
        e = self.step_dart(v, sl)
        return None if e is None else self.omega(e)

    def path_from(self, v, word):
        """Trace ``word`` from ``v``; the unique such path, or None."""
        if v not in self.vertices:
            raise GraphError("vertex %r not in graph" % (v,))
        darts = []
        cur = v
        for sl in word:
            e = self.step_dart(cur, sl)
            if e is None:
                return None
            darts.append(e)
            cur = self.omega(e)
        return Path(start=v, darts=tuple(darts), end=cur, word=tuple(word))

    # -- connectivity ---------------------------------------------------------

    def component(self, v, letters=None):
        """Subgraph spanned by all paths from ``v`` whose labels lie in the
        given letter set (default: all letters)."""
        if v not in self.vertices:
            raise GraphError("vertex %r not in graph" % (v,))
        if letters is not None:
            letters = set(letters)
        verts = {v}
        darts = set()
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for e in self.out_darts(u):
                if letters is not None and self.label[e][0] not in letters:
                    continue
                if e in darts:
                    continue
                darts.add(e)
                darts.add(self.inv[e])
                w = self.omega(e)
                if w not in verts:
                    verts.add(w)
                    queue.append(w)
        return self.restrict(verts, darts)

    def components(self, letters=None):
        """All (letter-restricted) components, ordered by least vertex."""
        seen = set()
        out = []
        for v in sorted_ids(self.vertices):
            if v in seen:
                continue
            comp = self.component(v, letters)
            seen |= comp.vertices
            out.append(comp)
        return out

    def component_partition(self, letters=None):
        """Map vertex -> least vertex of its (restricted) component."""
        rep = {}
        for comp in self.components(letters):
            r = min(comp.vertices, key=sort_key)
            for v in comp.vertices:
                rep[v] = r
        return rep

    def is_connected(self):
        return len(self.components()) <= 1

    # -- completeness ----------------------------------------------------------

    def is_complete(self):
        """Every vertex has exactly one outgoing dart per signed letter."""
        if not self.is_e_graph():
            return False
        need = len(self.alphabet) * 2
        counts = {v: 0 for v in self.vertices}
        for e in self.darts:
            if self.label[e][0] not in self.alphabet:
                return False
            counts[self.alpha[e]] += 1
        return all(c == need for c in counts.values())

    def is_weakly_complete(self):
        """Each letter's partial map is a permutation of its domain."""
        if not self.is_e_graph():
            return False
        dom = {}
        ran = {}
        for e in self.darts:
            a, s = self.label[e]
            if s != 1:
                continue
            dom.setdefault(a, set()).add(self.alpha[e])
            ran.setdefault(a, set()).add(self.omega(e))
        return all(dom[a] == ran[a] for a in dom)

    # -- subgraphs ----------------------------------------------------------

    def restrict(self, vertices, darts):
        """Subgraph on the given closed vertex/dart sets."""
        vertices = frozenset(vertices)
        darts = frozenset(darts)
        for e in darts:
            if self.inv[e] not in darts:
                raise GraphError("dart set not closed under inversion")
            if self.alpha[e] not in vertices:
                raise GraphError("dart set not closed under endpoints")
        return LabelledGraph(
            vertices=vertices,
            darts=darts,
            alpha={e: self.alpha[e] for e in darts},
            inv={e: self.inv[e] for e in darts},
            label={e: self.label[e] for e in darts},
            alphabet=self.alphabet,
        )

    def __repr__(self):
        return "LabelledGraph(%d vertices, %d darts, %d letters)" % (
            len(self.vertices),
            len(self.darts),
            len(self.alphabet),
        )


def check_graph(g: LabelledGraph):
    """Validate the Serre axioms; raise GraphError on the first violation."""
    if g.vertices & g.darts:
        raise GraphError("vertex and dart ids overlap")
    for e in g.darts:
        f = g.inv.get(e)
        if f is None or f not in g.darts:
            raise GraphError("inv not defined on %r" % (e,))
        if f == e:
            raise GraphError("involution has fixed point %r" % (e,))
        if g.inv[f] != e:
            raise GraphError("inv not involutive at %r" % (e,))
        if g.alpha[e] not in g.vertices:
            raise GraphError("alpha(%r) not a vertex" % (e,))
        if g.label[f] != sletter_inv(g.label[e]):
            raise GraphError("label(inv(%r)) is not the inverse label" % (e,))
        if g.label[e][0] not in g.alphabet:
            raise GraphError("label %r outside alphabet" % (g.label[e],))
        if g.label[e][1] not in (1, -1):
            raise GraphError("bad sign in label %r" % (g.label[e],))
    return g


def make_graph(vertices, darts, alpha, inv, label, alphabet) -> LabelledGraph:
    g = LabelledGraph(
        vertices=frozenset(vertices),
        darts=frozenset(darts),
        alpha=dict(alpha),
        inv=dict(inv),
        label=dict(label),
        alphabet=frozenset(alphabet),
    )
    return check_graph(g)


# ---------------------------------------------------------------------------
# builders


def build_graph(vertices, edges) -> LabelledGraph:
    """Build an oriented graph from vertices and positive edges.

    ``edges`` is an iterable of ``(edge_id, src, dst)``.  Every positive
    edge is labelled by its own id; the formal inverse darts are
    synthesized.  Dart ids are ``(edge_id, 1)`` and ``(edge_id, -1)``.
    """
    vs = list(vertices)
    vset = frozenset(vs)
    if len(vs) != len(vset):
        raise GraphError("duplicate vertex id")
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    letters = set()
    for eid, src, dst in edges:
        if src not in vset or dst not in vset:
            raise GraphError("edge %r has a dangling endpoint" % (eid,))
        if eid in letters:
            raise GraphError("duplicate edge id %r" % (eid,))
        if eid in vset:
            raise GraphError("edge id %r collides with a vertex" % (eid,))
        e, f = (eid, 1), (eid, -1)
        darts |= {e, f}
        alpha[e], alpha[f] = src, dst
        inv[e], inv[f] = f, e
        label[e], label[f] = (eid, 1), (eid, -1)
        letters.add(eid)
    return make_graph(vset, darts, alpha, inv, label, letters)


def with_alphabet(g: LabelledGraph, alphabet) -> LabelledGraph:
    """Same graph viewed over a different (superset) alphabet."""
    alphabet = frozenset(alphabet)
    if not g.letters_present() <= alphabet:
        raise GraphError("new alphabet does not cover the labels present")
    return LabelledGraph(g.vertices, g.darts, g.alpha, g.inv, g.label, alphabet)


def trivial_completion(g: LabelledGraph) -> LabelledGraph:
    """Add, per letter, a loop at every vertex not on a cycle of that letter.

    Requires a weakly complete input; the result is complete over
    ``g.alphabet``, and dropping the added loops recovers the input.
    """
    if not g.is_weakly_complete():
        raise GraphError("trivial completion requires a weakly complete graph")
    covered = {a: set() for a in g.alphabet}
    for e in g.darts:
        a, s = g.label[e]
        if s == 1:
            covered[a].add(g.alpha[e])
    vertices = set(g.vertices)
    darts = set(g.darts)
    alpha = dict(g.alpha)
    inv = dict(g.inv)
    label = dict(g.label)
    for a in sorted_ids(g.alphabet):
        for v in sorted_ids(g.vertices - frozenset(covered[a])):
            e, f = ("cl", v, a, 1), ("cl", v, a, -1)
            darts |= {e, f}
            alpha[e] = alpha[f] = v
            inv[e], inv[f] = f, e
            label[e], label[f] = (a, 1), (a, -1)
    return make_graph(vertices, darts, alpha, inv, label, g.alphabet)


def weak_completion(g: LabelledGraph) -> LabelledGraph:
    """Close every open letter-path into a cycle by adding one dart.

    For each letter, the positively labelled darts of an E-graph form
    disjoint paths and cycles; each maximal open path gets a single new
    dart from its last vertex back to its first.  A single edge becomes a
    2-cycle.  The result is weakly complete.
    """
    if not g.is_e_graph():
        raise GraphError("weak completion requires an E-graph")
    succ = {}
    for e in g.darts:
        a, s = g.label[e]
        if s == 1:
            succ.setdefault(a, {})[g.alpha[e]] = g.omega(e)
    darts = set(g.darts)
    alpha = dict(g.alpha)
    inv = dict(g.inv)
    label = dict(g.label)
    for a in sorted_ids(succ):
        nxt = succ[a]
        starts = set(nxt) - {w for w in nxt.values()}
        for j, v0 in enumerate(sorted_ids(starts)):
            v = v0
            while v in nxt:
                v = nxt[v]
            e, f = ("wc", a, j, 1), ("wc", a, j, -1)
            darts |= {e, f}
            alpha[e], alpha[f] = v, v0
            inv[e], inv[f] = f, e
            label[e], label[f] = (a, 1), (a, -1)
    return make_graph(g.vertices, darts, alpha, inv, label, g.alphabet)


def disjoint_union(graphs, share_letters=False) -> LabelledGraph:
    """Disjoint union; every id is tagged with its component index.

    With ``share_letters=False`` the letters are tagged as well, so equal
    letters in different components stay distinct.  The tower passes
    ``share_letters=True`` to keep one common alphabet.
    """
    vertices = set()
    darts = set()
    alpha = {}
    inv = {}
    label = {}
    alphabet = set()
    for i, g in enumerate(graphs):
        for v in g.vertices:
            vertices.add((i, v))
        for e in g.darts:
            darts.add((i, e))
            alpha[(i, e)] = (i, g.alpha[e])
            inv[(i, e)] = (i, g.inv[e])
            a, s = g.label[e]
            label[(i, e)] = (a, s) if share_letters else ((i, a), s)
        if share_letters:
            alphabet |= g.alphabet
        else:
            alphabet |= {(i, a) for a in g.alphabet}
    return make_graph(vertices, darts, alpha, inv, label, alphabet)


def spanned_subgraph(g: LabelledGraph, elements) -> LabelledGraph:
    """Least subgraph containing the given vertices and darts."""
    verts = set()
    darts = set()
    for x in elements:
        if x in g.vertices:
            verts.add(x)
        elif x in g.darts:
            darts.add(x)
            darts.add(g.inv[x])
        else:
            raise GraphError("%r is neither a vertex nor a dart" % (x,))
    for e in darts:
        verts.add(g.alpha[e])
        verts.add(g.omega(e))
    return g.restrict(verts, darts)


def subgraph_union(g: LabelledGraph, parts) -> LabelledGraph:
    """Union of subgraphs of the common ambient graph ``g``."""
    verts = set()
    darts = set()
    for p in parts:
        verts |= p.vertices
        darts |= p.darts
    return g.restrict(verts, darts)


def subgraph_intersection(g: LabelledGraph, parts) -> LabelledGraph:
    parts = list(parts)
    verts = set(parts[0].vertices)
    darts = set(parts[0].darts)
    for p in parts[1:]:
        verts &= p.vertices
        darts &= p.darts
    return g.restrict(verts, darts)


# ---------------------------------------------------------------------------
# congruences, quotients, folding


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if sort_key(ry) < sort_key(rx):
            rx, ry = ry, rx
        self.parent[ry] = rx
        return rx

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return out


@dataclass(frozen=True)
class GraphCongruence:
    """A validated partition of vertices and darts, compatible with the
    graph operations (alpha, inv, hence omega) and with the labelling."""

    graph: LabelledGraph
    blocks: tuple  # tuple of frozensets

    @staticmethod
    def from_blocks(g: LabelledGraph, blocks) -> "GraphCongruence":
        uf = _UnionFind()
        for x in itertools.chain(g.vertices, g.darts):
            uf.add(x)
        for block in blocks:
            block = list(block)
            for x in block[1:]:
                uf.union(block[0], x)
        classes = uf.classes()
        cls_of = {}
        for rep, members in classes.items():
            for m in members:
                cls_of[m] = rep
        for rep, members in classes.items():
            kinds = {("v" if m in g.vertices else "d") for m in members}
            if len(kinds) > 1:
                raise GraphError("congruence mixes vertices and darts")
        for rep, members in classes.items():
            members = list(members)
            if members[0] in g.vertices:
                continue
            e0 = members[0]
            for e in members[1:]:
                if g.label[e] != g.label[e0]:
                    raise GraphError(
                        "congruence merges darts with labels %r and %r"
                        % (g.label[e0], g.label[e])
                    )
                if cls_of[g.alpha[e]] != cls_of[g.alpha[e0]]:
                    raise GraphError("congruence incompatible with alpha")
                if cls_of[g.inv[e]] != cls_of[g.inv[e0]]:
                    raise GraphError("congruence incompatible with inv")
        ordered = sorted(
            (frozenset(m) for m in classes.values()),
            key=lambda b: sort_key(min(b, key=sort_key)),
        )
        return GraphCongruence(graph=g, blocks=tuple(ordered))

    @staticmethod
    def identity(g: LabelledGraph) -> "GraphCongruence":
        singletons = [frozenset([x]) for x in itertools.chain(g.vertices, g.darts)]
        return GraphCongruence.from_blocks(g, singletons)

    def class_map(self):
        out = {}
        for block in self.blocks:
            rep = min(block, key=sort_key)
            for m in block:
                out[m] = rep
        return out


def quotient(g: LabelledGraph, theta: GraphCongruence) -> LabelledGraph:
    """Quotient by a validated congruence; classes are named by their
    least member, so the identity congruence returns an equal copy."""
    if theta.graph is not g:
        theta = GraphCongruence.from_blocks(g, theta.blocks)
    cls = theta.class_map()
    vertices = {cls[v] for v in g.vertices}
    darts = {cls[e] for e in g.darts}
    alpha = {}
    inv = {}
    label = {}
    for e in g.darts:
        ce = cls[e]
        alpha[ce] = cls[g.alpha[e]]
        inv[ce] = cls[g.inv[e]]
        label[ce] = g.label[e]
    return make_graph(vertices, darts, alpha, inv, label, g.alphabet)


def fold(g: LabelledGraph, seeds=(), prefer=None):
    """Smallest quotient that identifies the seed pairs and is an E-graph.

    ``seeds`` is an iterable of (x, y) pairs of vertices or of darts to be
    identified.  Returns ``(graph, mapping)`` where mapping sends every
    old element to its class representative.  Representatives are chosen
    as the least member under ``sort_key``; ``prefer`` may mark elements
    that win regardless (at most one preferred element per class).
    """
    uf = _UnionFind()
    for x in itertools.chain(g.vertices, g.darts):
        uf.add(x)

    vmembers = {v: [v] for v in g.vertices}
    pending = deque()  # dart pairs awaiting identification
    dirty = deque()  # vertex class reps to re-examine for label clashes
    in_dirty = set()

    def mark_dirty(r):
        if r not in in_dirty:
            in_dirty.add(r)
            dirty.append(r)

    def unite_vertices(u, v):
        ru, rv = uf.find(u), uf.find(v)
        if ru == rv:
            return
        r = uf.union(ru, rv)
        other = rv if r == ru else ru
        vmembers[r].extend(vmembers.pop(other))
        mark_dirty(r)

    for v in g.vertices:
        mark_dirty(v)
    for x, y in seeds:
        if x in g.vertices:
            unite_vertices(x, y)
        else:
            pending.append((x, y))

    while pending or dirty:
        while pending:
            e, f = pending.popleft()
            re, rf = uf.find(e), uf.find(f)
            if re == rf:
                continue
            if g.label[re] != g.label[rf]:
                raise GraphError(
                    "fold merges darts with labels %r and %r"
                    % (g.label[re], g.label[rf])
                )
            uf.union(re, rf)
            pending.append((g.inv[re], g.inv[rf]))
            unite_vertices(g.alpha[re], g.alpha[rf])
            unite_vertices(g.alpha[g.inv[re]], g.alpha[g.inv[rf]])
        if dirty:
            r = dirty.popleft()
            in_dirty.discard(r)
            if uf.find(r) != r:
                continue  # stale: class was merged into another, which got marked
            by_label = {}
            for v in vmembers[r]:
                for e in g.out_darts(v):
                    by_label.setdefault(g.label[e], []).append(e)
            for es in by_label.values():
                first = es[0]
                for other in es[1:]:
                    if uf.find(other) != uf.find(first):
                        pending.append((first, other))

    classes = uf.classes()
    mapping = {}
    for rep, mem in classes.items():
        if prefer is not None:
            preferred = [m for m in mem if prefer(m)]
            if len(preferred) > 1:
                raise GraphError("fold merged two preferred elements")
            name = preferred[0] if preferred else min(mem, key=sort_key)
        else:
            name = min(mem, key=sort_key)
        for m in mem:
            mapping[m] = name

    vertices = {mapping[v] for v in g.vertices}
    darts = {mapping[e] for e in g.darts}
    alpha = {}
    inv = {}
    label = {}
    for e in g.darts:
        ce = mapping[e]
        alpha[ce] = mapping[g.alpha[e]]
        inv[ce] = mapping[g.inv[e]]
        label[ce] = g.label[e]
    folded = make_graph(vertices, darts, alpha, inv, label, g.alphabet)
    if not folded.is_e_graph():
        raise GraphError("fold did not terminate in an E-graph")
    return folded, mapping


# ---------------------------------------------------------------------------
# isomorphism and canonical forms


def _canon_from_base(g: LabelledGraph, base):
    """BFS encoding of a connected E-graph from a base vertex."""
    index = {base: 0}
    order = [base]
    edges = []
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for e in sorted(g.out_darts(v), key=lambda d: sort_key(g.label[d])):
            w = g.omega(e)
            if w not in index:
                index[w] = len(order)
                order.append(w)
            edges.append((index[v], g.label[e], index[w]))
    return (len(order), tuple(sorted(edges, key=sort_key))), order


def canonical_form(g: LabelledGraph):
    """Canonical encoding of a labelled graph, equal for isomorphic E-graphs.

    Connected E-graphs are encoded by the minimum BFS code over all base
    vertices; arbitrary graphs by the sorted tuple of their components'
    codes.  Non-E-graph components fall back to a brute-force canonical
    labelling and are only supported at small sizes.
    """
    if g._canon is not None:
        return g._canon
    comps = g.components()
    codes = []
    for comp in comps:
        if comp.is_e_graph():
            code = min(
                (_canon_from_base(comp, b)[0] for b in comp.vertices),
                key=sort_key,
            )
        else:
            code = _canon_bruteforce(comp)
        codes.append(code)
    result = tuple(sorted(codes, key=sort_key))
    object.__setattr__(g, "_canon", result)
    return result


def _canon_bruteforce(g: LabelledGraph):
    if len(g.vertices) > 8:
        raise GraphError("canonical form of large non-deterministic graph")
    verts = sorted_ids(g.vertices)
    best = None
    for perm in itertools.permutations(range(len(verts))):
        index = {v: perm[i] for i, v in enumerate(verts)}
        edges = sorted(
            ((index[g.alpha[e]], g.label[e], index[g.omega(e)]) for e in g.darts),
            key=sort_key,
        )
        code = (len(verts), tuple(edges))
        if best is None or sort_key(code) < sort_key(best):
            best = code
    return best


def labelled_isomorphic(g1: LabelledGraph, g2: LabelledGraph):
    """A label- and orientation-respecting isomorphism as a dict over
    vertices and darts, or None."""
    if canonical_form(g1) != canonical_form(g2):
        return None
    comps1 = g1.components()
    comps2 = g2.components()
    used = [False] * len(comps2)
    total = {}
    for c1 in comps1:
        found = False
        for j, c2 in enumerate(comps2):
            if used[j]:
                continue
            m = _component_isomorphism(c1, c2)
            if m is not None:
                used[j] = True
                total.update(m)
                found = True
                break
        if not found:
            return None
    return total


def _component_isomorphism(c1, c2):
    if len(c1.vertices) != len(c2.vertices) or len(c1.darts) != len(c2.darts):
        return None
    if c1.is_e_graph() and c2.is_e_graph():
        base1 = min(c1.vertices, key=sort_key)
        for base2 in sorted_ids(c2.vertices):
            m = _propagate_iso(c1, base1, c2, base2)
            if m is not None:
                return m
        return None
    return _bruteforce_iso(c1, c2)


def _propagate_iso(c1, base1, c2, base2):
    vmap = {base1: base2}
    dmap = {}
    queue = deque([base1])
    while queue:
        v = queue.popleft()
        outs1 = c1.out_darts(v)
        outs2 = {c2.label[e]: e for e in c2.out_darts(vmap[v])}
        if len(outs1) != len(outs2):
            return None
        for e in outs1:
            f = outs2.get(c1.label[e])
            if f is None:
                return None
            if e in dmap:
                if dmap[e] != f:
                    return None
                continue
            dmap[e] = f
            dmap[c1.inv[e]] = c2.inv[f]
            w1, w2 = c1.omega(e), c2.omega(f)
            if w1 in vmap:
                if vmap[w1] != w2:
                    return None
            else:
                vmap[w1] = w2
                queue.append(w1)
    if len(set(vmap.values())) != len(vmap) or len(vmap) != len(c1.vertices):
        return None
    out = dict(vmap)
    out.update(dmap)
    return out


def _bruteforce_iso(c1, c2):
    if len(c1.vertices) > 8:
        raise GraphError("isomorphism search on large non-deterministic graph")
    verts1 = sorted_ids(c1.vertices)
    verts2 = sorted_ids(c2.vertices)
    for imgs in itertools.permutations(verts2):
        vmap = dict(zip(verts1, imgs))
        dmap = _match_darts(c1, c2, vmap)
        if dmap is not None:
            out = dict(vmap)
            out.update(dmap)
            return out
    return None


def _match_darts(c1, c2, vmap):
    remaining = set(c2.darts)
    dmap = {}
    for e in sorted_ids(c1.darts):
        if e in dmap:
            continue
        candidates = [
            f
            for f in sorted_ids(remaining)
            if c2.alpha[f] == vmap[c1.alpha[e]]
            and c2.omega(f) == vmap[c1.omega(e)]
            and c2.label[f] == c1.label[e]
        ]
        if not candidates:
            return None
        f = candidates[0]
        dmap[e] = f
        dmap[c1.inv[e]] = c2.inv[f]
        remaining.discard(f)
        remaining.discard(c2.inv[f])
    return dmap


# ---------------------------------------------------------------------------
# automorphisms of the oriented graph (labels ignored)


def oriented_automorphisms(g: LabelledGraph, max_vertices=10):
    """All automorphisms of the underlying oriented graph.

    Each automorphism is returned as a dict mapping vertices to vertices
    and darts to darts (positive darts to positive darts).  Intended for
    desk-scale inputs only.
    """
    if len(g.vertices) > max_vertices:
        raise GraphError("automorphism enumeration capped at %d vertices" % max_vertices)
    verts = sorted_ids(g.vertices)
    pos_darts = sorted_ids(g.positive_darts())
    by_ends = {}
    for e in pos_darts:
        by_ends.setdefault((g.alpha[e], g.omega(e)), []).append(e)
    autos = []
    for imgs in itertools.permutations(verts):
        vmap = dict(zip(verts, imgs))
        ok = True
        for (u, v), es in by_ends.items():
            if len(by_ends.get((vmap[u], vmap[v]), [])) != len(es):
                ok = False
                break
        if not ok:
            continue
        groups = sorted_ids(by_ends)
        choice_lists = [
            itertools.permutations(by_ends[(vmap[u], vmap[v])])
            for (u, v) in groups
        ]
        for combo in itertools.product(*choice_lists):
            dmap = {}
            for (u, v), images in zip(groups, combo):
                for e, f in zip(by_ends[(u, v)], images):
                    dmap[e] = f
                    dmap[g.inv[e]] = g.inv[f]
            full = dict(vmap)
            full.update(dmap)
            autos.append(full)
    return autos


def letter_permutation_of_automorphism(g: LabelledGraph, auto):
    """The permutation of positive letters induced by a graph automorphism,
    for graphs whose positive edges are labelled by themselves."""
    out = {}
    for e in g.positive_darts():
        out[g.label[e][0]] = g.label[auto[e]][0]
    return out
