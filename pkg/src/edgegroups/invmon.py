"""Finite inverse monoids and finite F-inverse covers.

An inverse monoid is stored as a dense multiplication table with a unary
inverse and a designated identity; validation checks the defining laws
with explicit witnesses.  On top sit the natural order, the least group
congruence and F-inverseness, the Margolis-Meakin expansion of a finite
group (pairs of a connected Cayley subgraph and a group element), the
companion group assembled inside a semidirect product, the premorphism
into the expansion, and the subdirect product that the verification
suite confirms to be an F-inverse cover.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .sgraph import (
    GraphError,
    LabelledGraph,
    build_graph,
    sort_key,
    sorted_ids,
)
from .egroup import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    EGroup,
    element_content,
    eval_word,
    extend_automorphism,
    group_order,
    inv_perm,
    make_graph_action,
    mul_perm,
    subgroup_elements,
    transition_group,
)


class MonoidError(ValueError):
    """Raised when a table fails the inverse monoid laws; carries the
    witnessing elements."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# the table representation


@dataclass(frozen=True, eq=False)
class InverseMonoid:
    """Finite inverse monoid on dense integer-indexed tables.

    ``elements`` keeps the original element objects for reporting;
    algorithms work on indices.  ``gens`` optionally records an
    assignment of letters to element indices.
    """

    elements: tuple
    table: tuple  # tuple of row tuples
    inv: tuple
    one: int
    gens: dict = None
    assoc_checked: str = "full"  # "full" | "sampled" | "inherited"

    @property
    def size(self):
        return len(self.table)

    def mul(self, i, j):
        return self.table[i][j]

    def inverse(self, i):
        return self.inv[i]

    def word_value(self, word):
        """Value of a word over the generator letters."""
        if self.gens is None:
            raise MonoidError("monoid has no generator assignment")
        out = self.one
        for a, s in word:
            g = self.gens[a]
            out = self.mul(out, g if s == 1 else self.inv[g])
        return out

    def __repr__(self):
        return "InverseMonoid(%d elements)" % self.size


def validate(table, inv, one, elements=None, assoc="auto", seed=0) -> InverseMonoid:
    """Build an InverseMonoid after checking the laws exhaustively.

    Associativity is cubic; ``assoc`` may be "full", "sampled" (20k random
    triples) or "auto" (full up to 80 elements).  The four inverse-monoid
    laws and neutrality are always checked in full, and any violation is
    reported with the witnessing indices.
    """
    n = len(table)
    table = tuple(tuple(row) for row in table)
    inv = tuple(inv)
    if any(len(row) != n for row in table) or len(inv) != n:
        raise MonoidError("table shape is inconsistent")
    if not all(0 <= x < n for row in table for x in row):
        raise MonoidError("table entries out of range")
    if not 0 <= one < n:
        raise MonoidError("identity index out of range")
    for x in range(n):
        if table[one][x] != x or table[x][one] != x:
            raise MonoidError("identity is not neutral", witness=(one, x))
    if assoc == "auto":
        assoc = "full" if n <= 80 else "sampled"
    if assoc == "full":
        for x in range(n):
            tx = table[x]
            for y in range(n):
                txy = table[tx[y]]
                ty = table[y]
                for z in range(n):
                    if txy[z] != tx[ty[z]]:
                        raise MonoidError("not associative", witness=(x, y, z))
    elif assoc == "sampled":
        import random as _random

        rng = _random.Random(seed)
        for _ in range(20000):
            x, y, z = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if table[table[x][y]][z] != table[x][table[y][z]]:
                raise MonoidError("not associative", witness=(x, y, z))
    for x in range(n):
        if inv[inv[x]] != x:
            raise MonoidError("inverse is not involutive", witness=(x,))
        if table[table[x][inv[x]]][x] != x:
            raise MonoidError("x x^-1 x = x fails", witness=(x,))
    for x in range(n):
        for y in range(n):
            if inv[table[x][y]] != table[inv[y]][inv[x]]:
                raise MonoidError("(xy)^-1 = y^-1 x^-1 fails", witness=(x, y))
            e = table[x][inv[x]]
            f = table[y][inv[y]]
            if table[e][f] != table[f][e]:
                raise MonoidError("idempotents do not commute", witness=(x, y))
    if elements is None:
        elements = tuple(range(n))
    return InverseMonoid(
        elements=tuple(elements),
        table=table,
        inv=inv,
        one=one,
        assoc_checked=assoc if isinstance(assoc, str) else "full",
    )


def from_closure(gen_map, mul, inv, one, budget=DEFAULT_BUDGET, assoc="inherited"):
    """Inverse monoid generated by elements under explicit operations.

    The closure is breadth-first and deterministic; the table is induced
    by the (associative) ambient operations, so associativity is
    inherited and only the inverse-monoid laws are re-checked.
    """
    gens = []
    for a in sorted_ids(gen_map):
        gens.append(gen_map[a])
        gens.append(inv(gen_map[a]))
    from collections import deque

    index = {one: 0}
    order = [one]
    queue = deque([one])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in index:
                index[y] = len(order)
                order.append(y)
                if len(order) > budget:
                    raise BudgetExceeded("monoid closure", len(order))
                queue.append(y)
    # closure under inversion (inverses of products are products of
    # inverses, so this is only a safety net for bad inputs)
    for x in list(order):
        y = inv(x)
        if y not in index:
            raise MonoidError("closure is not inverse-closed")
    table = tuple(
        tuple(index[mul(x, y)] for y in order) for x in order
    )
    inv_vec = tuple(index[inv(x)] for x in order)
    m = InverseMonoid(
        elements=tuple(order),
        table=table,
        inv=inv_vec,
        one=0,
        gens={a: index[gen_map[a]] for a in gen_map},
        assoc_checked=assoc,
    )
    _check_inverse_laws(m)
    return m


def _check_inverse_laws(m: InverseMonoid):
    for x in range(m.size):
        if m.inv[m.inv[x]] != x:
            raise MonoidError("inverse is not involutive", witness=(x,))
        if m.mul(m.mul(x, m.inv[x]), x) != x:
            raise MonoidError("x x^-1 x = x fails", witness=(x,))
    for x in range(m.size):
        e = m.mul(x, m.inv[x])
        for y in range(m.size):
            f = m.mul(y, m.inv[y])
            if m.mul(e, f) != m.mul(f, e):
                raise MonoidError("idempotents do not commute", witness=(x, y))


# ---------------------------------------------------------------------------
# order, idempotents, sigma


def idempotents(m: InverseMonoid):
    return tuple(x for x in range(m.size) if m.mul(x, x) == x)


def natural_leq(m: InverseMonoid, x, y):
    """x <= y iff x = y e for some idempotent e."""
    return any(m.mul(y, e) == x for e in idempotents(m))


def least_idempotent(m: InverseMonoid):
    """The minimum of the idempotent semilattice."""
    out = m.one
    for e in idempotents(m):
        out = m.mul(out, e)
    return out


def sigma_classes(m: InverseMonoid):
    """Partition by the least group congruence: x sigma y iff xe = ye for
    some idempotent e, equivalently for the least idempotent."""
    e0 = least_idempotent(m)
    buckets = {}
    for x in range(m.size):
        buckets.setdefault(m.mul(x, e0), []).append(x)
    return [buckets[k] for k in sorted(buckets)]


def is_group(m: InverseMonoid):
    return len(idempotents(m)) == 1


def quotient_monoid(m: InverseMonoid, class_of):
    """Quotient by a congruence given as an index->class-id map."""
    reps = {}
    for x in range(m.size):
        reps.setdefault(class_of[x], x)
    ids = sorted(reps, key=lambda c: reps[c])
    pos = {c: i for i, c in enumerate(ids)}
    n = len(ids)
    table = [[None] * n for _ in range(n)]
    for c in ids:
        for d in ids:
            val = class_of[m.mul(reps[c], reps[d])]
            table[pos[c]][pos[d]] = pos[val]
    inv_vec = [pos[class_of[m.inv[reps[c]]]] for c in ids]
    proj = {x: pos[class_of[x]] for x in range(m.size)}
    out = validate(table, inv_vec, pos[class_of[m.one]], assoc="full")
    return out, proj


def congruence_closure(m: InverseMonoid, pairs):
    """Smallest congruence containing the pairs; returns index->rep map."""
    parent = list(range(m.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
            return True
        return False

    queue = [(x, y) for x, y in pairs]
    while queue:
        x, y = queue.pop()
        if not union(x, y):
            continue
        for z in range(m.size):
            for u, v in (
                (m.mul(x, z), m.mul(y, z)),
                (m.mul(z, x), m.mul(z, y)),
                (m.inv[x], m.inv[y]),
            ):
                if find(u) != find(v):
                    queue.append((u, v))
    return {x: find(x) for x in range(m.size)}


def sigma_is_least_group_congruence(m: InverseMonoid, samples=20, seed=0):
    """The sigma quotient is a group, and every sampled congruence with a
    group quotient contains sigma."""
    classes = sigma_classes(m)
    class_of = {}
    for i, cls in enumerate(classes):
        for x in cls:
            class_of[x] = i
    q, _ = quotient_monoid(m, class_of)
    if not is_group(q):
        return False
    import random as _random

    rng = _random.Random(seed)
    for _ in range(samples):
        x, y = rng.randrange(m.size), rng.randrange(m.size)
        cong = congruence_closure(m, [(x, y)])
        qc, _ = quotient_monoid(m, cong)
        if is_group(qc):
            for cls in classes:
                rep = cong[cls[0]]
                if any(cong[z] != rep for z in cls):
                    return False
    return True


def is_f_inverse(m: InverseMonoid):
    """Per sigma class, search the greatest element; returns
    ``(ok, info)`` with the per-class maxima or a failure witness."""
    maxima = {}
    for i, cls in enumerate(sigma_classes(m)):
        greatest = None
        for g in cls:
            if all(natural_leq(m, x, g) for x in cls):
                greatest = g
                break
        if greatest is None:
            maximal = [
                g
                for g in cls
                if not any(x != g and natural_leq(m, g, x) for x in cls)
            ]
            return False, {"class": cls, "maximal": maximal}
        maxima[i] = greatest
    return True, maxima


def wagner_preston(m: InverseMonoid, x):
    """Debug rendering of an element as a partial bijection on the
    monoid: q |-> x q on the domain x^-1 x M."""
    dom_root = m.mul(m.inv[x], x)
    out = {}
    for q in range(m.size):
        if m.mul(dom_root, q) == q:
            out[q] = m.mul(x, q)
    return out


# ---------------------------------------------------------------------------
# Margolis-Meakin expansion


@dataclass(frozen=True, eq=False)
class MMContext:
    """Indexing data for subgraph/element pairs over a group's Cayley
    graph: bit positions for vertices and positive edges, left-translation
    tables, and the underlying group."""

    Q: EGroup
    elements: tuple  # Q elements in enumeration order (index = vertex id)
    qmul: tuple  # index multiplication table
    qinv: tuple
    letters: tuple  # generator letters of Q, sorted
    edge_index: dict  # (vertex index, letter) -> bit position
    edge_list: tuple
    vtrans: tuple  # per q index: tuple of translated vertex indices
    etrans: tuple  # per q index: tuple of translated edge bit positions
    graph: LabelledGraph  # the Cayley graph with integer vertices

    def vertex_mask(self, vertices):
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return mask

    def edge_mask(self, edges):
        mask = 0
        for e in edges:
            mask |= 1 << self.edge_index[e]
        return mask

    def translate(self, q, vmask, emask):
        vm = 0
        i = 0
        while vmask:
            if vmask & 1:
                vm |= 1 << self.vtrans[q][i]
            vmask >>= 1
            i += 1
        em = 0
        i = 0
        while emask:
            if emask & 1:
                em |= 1 << self.etrans[q][i]
            emask >>= 1
            i += 1
        return vm, em

    def act(self, v, sl):
        """Right action of a signed letter on a vertex index."""
        a, s = sl
        p = self.Q.gen[a] if s == 1 else inv_perm(self.Q.gen[a])
        return p[v]


@dataclass(frozen=True)
class MMElement:
    """A pair (connected subgraph containing 1 and g, group element g),
    with the subgraph stored as vertex and positive-edge bitmasks."""

    vmask: int
    emask: int
    g: int


def cayley_graph_of_group(Q: EGroup, budget=DEFAULT_BUDGET) -> tuple:
    """The Cayley graph of Q with integer vertices and edges (i, a),
    suitable as a tower input graph, plus the element list."""
    els = subgroup_elements(Q, Q.alphabet, budget)
    index = {p: i for i, p in enumerate(els)}
    edges = []
    for i, p in enumerate(els):
        for a in sorted_ids(Q.alphabet):
            j = index[mul_perm(p, Q.gen[a])]
            edges.append(((i, a), i, j))
    return build_graph(range(len(els)), edges), els


def mm_context(Q: EGroup, budget=DEFAULT_BUDGET) -> MMContext:
    graph, els = cayley_graph_of_group(Q, budget)
    index = {p: i for i, p in enumerate(els)}
    n = len(els)
    qmul = tuple(
        tuple(index[mul_perm(els[i], els[j])] for j in range(n)) for i in range(n)
    )
    qinv = tuple(index[inv_perm(els[i])] for i in range(n))
    letters = tuple(sorted_ids(Q.alphabet))
    edge_list = tuple((i, a) for i in range(n) for a in letters)
    edge_index = {e: k for k, e in enumerate(edge_list)}
    vtrans = tuple(tuple(qmul[q][i] for i in range(n)) for q in range(n))
    etrans = tuple(
        tuple(edge_index[(qmul[q][i], a)] for (i, a) in edge_list) for q in range(n)
    )
    return MMContext(
        Q=Q,
        elements=tuple(els),
        qmul=qmul,
        qinv=qinv,
        letters=letters,
        edge_index=edge_index,
        edge_list=edge_list,
        vtrans=vtrans,
        etrans=etrans,
        graph=graph,
    )


def mm_mul(ctx: MMContext, x: MMElement, y: MMElement) -> MMElement:
    vm, em = ctx.translate(x.g, y.vmask, y.emask)
    return MMElement(x.vmask | vm, x.emask | em, ctx.qmul[x.g][y.g])


def mm_inv(ctx: MMContext, x: MMElement) -> MMElement:
    q = ctx.qinv[x.g]
    vm, em = ctx.translate(q, x.vmask, x.emask)
    return MMElement(vm, em, q)


def mm_leq(x: MMElement, y: MMElement):
    """Natural order: larger subgraph means smaller element."""
    return x.g == y.g and (y.vmask & ~x.vmask) == 0 and (y.emask & ~x.emask) == 0


def mm_one(ctx: MMContext) -> MMElement:
    return MMElement(1 << 0, 0, 0)


def mm_generator(ctx: MMContext, a) -> MMElement:
    end = ctx.act(0, (a, 1))
    vmask = (1 << 0) | (1 << end)
    emask = 1 << ctx.edge_index[(0, a)]
    return MMElement(vmask, emask, end)


def mm_is_connected(ctx: MMContext, x: MMElement):
    verts = [i for i in range(len(ctx.elements)) if x.vmask >> i & 1]
    if not verts:
        return False
    edges = [ctx.edge_list[k] for k in range(len(ctx.edge_list)) if x.emask >> k & 1]
    adj = {v: set() for v in verts}
    for (i, a) in edges:
        j = ctx.act(i, (a, 1))
        if i not in adj or j not in adj:
            return False
        adj[i].add(j)
        adj[j].add(i)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def mm_value(ctx: MMContext, word):
    """Value of a word over Q's letters: the pair of the subgraph spanned
    by the path from 1 and the path's endpoint."""
    v = 0
    vmask = 1 << 0
    emask = 0
    for a, s in word:
        if s == 1:
            emask |= 1 << ctx.edge_index[(v, a)]
            v = ctx.act(v, (a, 1))
        else:
            v = ctx.act(v, (a, -1))
            emask |= 1 << ctx.edge_index[(v, a)]
        vmask |= 1 << v
    return MMElement(vmask, emask, v)


def margolis_meakin(Q: EGroup, budget=DEFAULT_BUDGET):
    """The expansion of Q by connected Cayley subgraphs, as an inverse
    monoid generated by the letter images."""
    ctx = mm_context(Q, budget)
    gen_map = {a: mm_generator(ctx, a) for a in ctx.letters}
    monoid = from_closure(
        gen_map,
        mul=lambda x, y: mm_mul(ctx, x, y),
        inv=lambda x: mm_inv(ctx, x),
        one=mm_one(ctx),
        budget=budget,
    )
    for x in monoid.elements:
        if not mm_is_connected(ctx, x):
            raise MonoidError("disconnected subgraph in the expansion", witness=x)
        if not (x.vmask >> 0 & 1) or not (x.vmask >> x.g & 1):
            raise MonoidError("subgraph misses a required endpoint", witness=x)
    return monoid, ctx


# ---------------------------------------------------------------------------
# the companion group H inside the semidirect product


@dataclass(frozen=True, eq=False)
class SemidirectContext:
    """H realized as a permutation group: the generators act on pairs
    (group element, Q index) by twisted right multiplication."""

    H: EGroup
    G: EGroup
    ctx: MMContext
    g_elements: tuple
    carrier_pairs: tuple  # (g index, q index) per carrier position
    base: int  # carrier position of (1_G, 1_Q)
    actions: tuple  # per q index, tuple mapping g index -> g index
    gamma: dict  # letter -> G element index of the corresponding edge


def q_action(G: EGroup, ctx: MMContext, q, budget=DEFAULT_BUDGET):
    """The automorphism of G induced by left multiplication on the
    input Cayley graph: edge (i, a) goes to (q i, a)."""
    letter_map = {}
    for (i, a) in ctx.edge_list:
        letter_map[(i, a)] = (ctx.qmul[q][i], a)
    auto = extend_automorphism(G, letter_map, budget)
    if auto is None:
        raise MonoidError("left multiplication does not extend to the group")
    return auto


def build_h(G: EGroup, ctx: MMContext, budget=DEFAULT_BUDGET) -> SemidirectContext:
    """The subgroup of the semidirect product generated by the pairs
    (edge at 1 labelled a, image of a), acting faithfully on G x Q."""
    g_els = subgroup_elements(G, G.alphabet, budget)
    g_index = {p: i for i, p in enumerate(g_els)}
    nq = len(ctx.elements)
    actions = []
    for q in range(nq):
        auto = q_action(G, ctx, q, budget)
        actions.append(tuple(g_index[auto.apply(p, budget)] for p in g_els))
    actions = tuple(actions)
    pairs = tuple((i, p) for i in range(len(g_els)) for p in range(nq))
    pair_index = {pr: k for k, pr in enumerate(pairs)}
    base = pair_index[(0, 0)]
    assert g_els[0] == G.identity

    gamma = {}
    for a in ctx.letters:
        gamma[a] = g_index[G.gen[(0, a)]]

    def gen_perm(a):
        ga = gamma[a]
        qa = ctx.act(0, (a, 1))
        out = [None] * len(pairs)
        for k, (x, p) in enumerate(pairs):
            twisted = actions[p][ga]
            x2 = g_index[mul_perm(g_els[x], g_els[twisted])]
            out[k] = pair_index[(x2, ctx.qmul[p][qa])]
        return tuple(out)

    gens = {a: gen_perm(a) for a in ctx.letters}
    graph = make_graph_action(tuple(range(len(pairs))), gens, frozenset(ctx.letters))
    H = transition_group(graph)
    return SemidirectContext(
        H=H,
        G=G,
        ctx=ctx,
        g_elements=tuple(g_els),
        carrier_pairs=pairs,
        base=base,
        actions=actions,
        gamma=gamma,
    )


def semidirect_pair(sd: SemidirectContext, h):
    """Recover (group element index, Q index) from a permutation of H."""
    return sd.carrier_pairs[h[sd.base]]


def value_in_h(sd: SemidirectContext, word):
    """Value of a word over Q's letters in H, as a pair, together with
    the independent computation via the path from 1."""
    h = eval_word(sd.H, word)
    direct = semidirect_pair(sd, h)
    lifted = _edge_word(sd.ctx, word)
    expected = (
        _g_index(sd, eval_word(sd.G, lifted)),
        _q_index_of_word(sd.ctx, word),
    )
    return h, direct, expected


def _edge_word(ctx: MMContext, word):
    """The path from 1 labelled by the word, read as a word over edges."""
    v = 0
    out = []
    for a, s in word:
        if s == 1:
            out.append(((v, a), 1))
            v = ctx.act(v, (a, 1))
        else:
            v = ctx.act(v, (a, -1))
            out.append(((v, a), -1))
    return tuple(out)


def _q_index_of_word(ctx: MMContext, word):
    v = 0
    for sl in word:
        v = ctx.act(v, sl)
    return v


def _g_index(sd: SemidirectContext, perm):
    return sd.g_elements.index(perm)


# ---------------------------------------------------------------------------
# the premorphism and the cover


def psi_map(sd: SemidirectContext, budget=DEFAULT_BUDGET):
    """The map from H to the expansion: the identity goes to the trivial
    pair, everything else to (subgraph spanned by the content, g)."""
    G = sd.G
    ctx = sd.ctx
    out = {}
    for h in subgroup_elements(sd.H, sd.H.alphabet, budget):
        gi, q = semidirect_pair(sd, h)
        gamma = sd.g_elements[gi]
        if gamma == G.identity:
            if q != 0:
                raise MonoidError(
                    "trivial group part with a nontrivial endpoint: the group "
                    "does not reflect the input graph",
                    witness=(gi, q),
                )
            out[h] = mm_one(ctx)
            continue
        edges = element_content(G, gamma, budget)
        vmask = 0
        emask = 0
        for (i, a) in sorted_ids(edges):
            emask |= 1 << ctx.edge_index[(i, a)]
            vmask |= 1 << i
            vmask |= 1 << ctx.act(i, (a, 1))
        value = MMElement(vmask, emask, q)
        if not mm_is_connected(ctx, value):
            raise MonoidError("content subgraph is not connected", witness=(gi, q))
        if not (vmask >> 0 & 1) or not (vmask >> q & 1):
            raise MonoidError("content subgraph misses 1 or g", witness=(gi, q))
        out[h] = value
    return out


def verify_premorphism(sd: SemidirectContext, monoid: InverseMonoid, psi, budget=DEFAULT_BUDGET):
    """Exhaustive check of the premorphism laws and the coverage
    condition over the enumerated H."""
    ctx = sd.ctx
    H = sd.H
    els = subgroup_elements(H, H.alphabet, budget)
    report = {"size_h": len(els), "size_m": monoid.size, "failures": []}
    one = mm_one(ctx)
    if psi[H.identity] != one:
        report["failures"].append({"law": "psi(1) = 1"})
    for h in els:
        if psi[inv_perm(h)] != mm_inv(ctx, psi[h]):
            report["failures"].append({"law": "psi(h^-1) = psi(h)^-1"})
            break
    for h1 in els:
        for h2 in els:
            lhs = mm_mul(ctx, psi[h1], psi[h2])
            rhs = psi[mul_perm(h1, h2)]
            if not mm_leq(lhs, rhs):
                report["failures"].append({"law": "psi(h)psi(h') <= psi(hh')"})
                break
        else:
            continue
        break
    covered = 0
    for x in monoid.elements:
        if any(mm_leq(x, psi[h]) for h in els):
            covered += 1
        else:
            report["failures"].append({"law": "coverage", "element": str(x)})
    report["covered"] = covered
    report["passed"] = not report["failures"]
    return report


@dataclass(eq=False)
class CoverCandidate:
    monoid: InverseMonoid  # the subdirect product T
    pairs: tuple  # (h permutation, expansion element index) per element
    report: dict


def f_inverse_cover(sd: SemidirectContext, monoid: InverseMonoid, psi, budget=DEFAULT_BUDGET) -> CoverCandidate:
    """The submonoid T generated by the letter pairs, checked to equal
    {(h, m): m <= psi(h)} and to be an F-inverse cover of the expansion."""
    ctx = sd.ctx
    H = sd.H
    m_index = {x: i for i, x in enumerate(monoid.elements)}

    def pair_mul(x, y):
        return (mul_perm(x[0], y[0]), monoid.mul(x[1], y[1]))

    def pair_inv(x):
        return (inv_perm(x[0]), monoid.inv[x[1]])

    gen_map = {}
    for a in ctx.letters:
        gen_map[a] = (H.gen[a], monoid.gens[a])
    one = (H.identity, monoid.one)
    t_monoid = from_closure(
        {a: gen_map[a] for a in gen_map},
        mul=pair_mul,
        inv=pair_inv,
        one=one,
        budget=budget,
    )
    t_set = set(t_monoid.elements)  # pairs (h permutation, index into monoid)
    s_set = set()
    for h in subgroup_elements(H, H.alphabet, budget):
        target = psi[h]
        for x in monoid.elements:
            if mm_leq(x, target):
                s_set.add((h, m_index[x]))
    report = {
        "size_t": len(t_set),
        "size_s": len(s_set),
        "t_equals_s": t_set == s_set,
        "failures": [],
    }
    if not report["t_equals_s"]:
        report["failures"].append({"law": "T = S"})
    f_ok, f_info = is_f_inverse(t_monoid)
    report["f_inverse"] = f_ok
    if not f_ok:
        report["failures"].append({"law": "F-inverse", "witness": str(f_info)})
    # projections: subdirectness
    proj_h = {h for h, _ in t_monoid.elements}
    proj_m = {m for _, m in t_monoid.elements}
    report["projection_h_onto"] = len(proj_h) == group_order(H, budget)
    report["projection_m_onto"] = len(proj_m) == monoid.size
    if not (report["projection_h_onto"] and report["projection_m_onto"]):
        report["failures"].append({"law": "subdirect"})
    # idempotent separation of the projection onto the expansion
    sep = True
    idems = idempotents(t_monoid)
    for i in idems:
        for j in idems:
            if i != j and t_monoid.elements[i][1] == t_monoid.elements[j][1]:
                sep = False
    report["idempotent_separating"] = sep
    if not sep:
        report["failures"].append({"law": "idempotent separation"})
    report["passed"] = not report["failures"]
    return CoverCandidate(monoid=t_monoid, pairs=t_monoid.elements, report=report)
