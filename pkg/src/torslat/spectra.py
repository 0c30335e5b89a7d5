"""Finite spectrum models and their classification lattices.

A model couples a finite poset of primes, ordered by containment (the
generic prime at the bottom, closed points on top), with one labeled
lattice per prime and order-preserving restriction maps between the
lattices of comparable primes.  The classification routines enumerate the
tuples that respect those maps and package the torsion, torsion-free and
Serre sides of the picture as FinitePosets.

Two restriction modes exist.  Identity mode: every prime carries the same
lattice and each map is the identity, so compatible tuples are exactly the
monotone maps out of the prime poset.  Explicit mode: a table per
comparable pair; composing tables along a chain is only required to bound
the direct table from above, which is why compatibility is checked on all
comparable pairs rather than on covers alone.
"""

import os
import re
from collections import namedtuple

from .config import DEFAULTS
from .errors import ModelInvalid, ParseError, SizeCapExceeded
from .posets import (
    FinitePoset,
    all_subsets,
    build_poset,
    chain,
    down_sets,
    hom_poset,
    opposite,
    poset_isomorphism,
    product,
    specialization_closed,
)
from .silting import tors_lattice


class SpecModel:
    """A spectrum poset with one labeled fiber lattice per prime.

    spec: FinitePoset of primes where q <= p means q is contained in p.
    fibers: mapping prime id -> FinitePoset; every fiber needs a unique
    top and bottom.  mode: "identity" or "explicit".  restrictions: in
    explicit mode a mapping (p, q) -> {fiber(p) id: fiber(q) id} for each
    strictly comparable pair p > q; in identity mode the maps are implied
    by matching labels and no tables are accepted.
    """

    def __init__(self, spec, fibers, mode="identity", restrictions=None):
        self.spec = spec
        self.fibers = {str(p): f for p, f in fibers.items()}
        self.mode = mode
        self.restrictions = {
            (str(p), str(q)): dict(table)
            for (p, q), table in (restrictions or {}).items()
        }

    def comparable_pairs(self):
        """All strictly comparable (bigger, smaller) prime pairs."""
        spec = self.spec
        out = []
        for qi in range(len(spec)):
            for pi in range(len(spec)):
                if pi != qi and spec.leq_idx(qi, pi):
                    out.append((spec.ids[pi], spec.ids[qi]))
        return out


SpectrumData = namedtuple("SpectrumData", ["model", "sim"])


class SimPoset:
    """Simple objects ordered by subfactor reachability, tagged by prime.

    The tag records which fiber a simple lives in; s <= t is only allowed
    when prime(s) contains prime(t), because passing to a smaller prime can
    only ever produce subfactors over that smaller prime's fiber.
    """

    def __init__(self, spec, poset, prime_of):
        self.spec = spec
        self.poset = poset
        self.prime_of = {str(k): str(v) for k, v in prime_of.items()}


# ---------------------------------------------------------------------------
# validation


def _label_map(poset):
    out = {}
    for ident, label in zip(poset.ids, poset.labels):
        out.setdefault(label, []).append(ident)
    return out


def validate(model):
    """Every model invariant, reported as a tuple of violation strings.

    An empty tuple means the model is valid.  Nothing raises here; the
    diagnostics are the result.
    """
    out = []
    spec = model.spec
    if model.mode not in ("identity", "explicit"):
        return (f"unknown mode {model.mode!r}",)

    known = []
    for p in spec.ids:
        if p not in model.fibers:
            out.append(f"prime {p!r} has no fiber")
        else:
            known.append(p)
    for p in model.fibers:
        if p not in spec.index:
            out.append(f"fiber given for unknown prime {p!r}")
    for p in known:
        fiber = model.fibers[p]
        if fiber.top() is None:
            out.append(f"fiber at {p!r} has no unique top element")
        if fiber.bottom() is None:
            out.append(f"fiber at {p!r} has no unique bottom element")

    if model.mode == "identity":
        if model.restrictions:
            out.append("identity mode takes no restriction tables")
        out.extend(_validate_identity(model, known))
    else:
        out.extend(_validate_explicit(model, known))
    return tuple(out)


def _validate_identity(model, known):
    out = []
    by_label = {}
    for p in known:
        fiber = model.fibers[p]
        lm = _label_map(fiber)
        dup = sorted(l for l, ids in lm.items() if len(ids) > 1)
        if dup:
            out.append(f"fiber at {p!r} repeats labels {dup}")
            continue
        by_label[p] = {l: ids[0] for l, ids in lm.items()}
    if len(by_label) < 2:
        return out
    first = known[0]
    base = model.fibers[first]
    for p in known[1:]:
        if p not in by_label or first not in by_label:
            continue
        fiber = model.fibers[p]
        if len(fiber) != len(base):
            out.append(
                f"identity mode needs fibers of one size; {p!r} has "
                f"{len(fiber)} elements, {first!r} has {len(base)}"
            )
            continue
        if sorted(by_label[p]) != sorted(by_label[first]):
            out.append(f"fiber at {p!r} labels differ from fiber at {first!r}")
            continue
        for la in base.labels:
            for lb in base.labels:
                same = base.leq(by_label[first][la], by_label[first][lb])
                if fiber.leq(by_label[p][la], by_label[p][lb]) != same:
                    out.append(
                        f"fiber at {p!r} orders {la!r}, {lb!r} differently "
                        f"from fiber at {first!r}"
                    )
                    break
            else:
                continue
            break
    return out


def _validate_explicit(model, known):
    out = []
    spec = model.spec
    pairs = {
        (p, q)
        for p, q in model.comparable_pairs()
        if p in known and q in known
    }
    for (p, q), table in sorted(model.restrictions.items()):
        if p not in spec.index or q not in spec.index:
            out.append(f"restriction {p!r}->{q!r} references unknown primes")
        elif p == q:
            ident = {x: x for x in model.fibers[p].ids} if p in known else {}
            if p in known and dict(table) != ident:
                out.append(f"restriction {p!r}->{p!r} is not the identity")
        elif not spec.leq(q, p):
            out.append(
                f"restriction {p!r}->{q!r} given although {p!r} does not "
                f"contain {q!r}"
            )

    for p, q in sorted(pairs):
        table = model.restrictions.get((p, q))
        if table is None:
            out.append(f"no restriction table for {p!r} over {q!r}")
            continue
        fp, fq = model.fibers[p], model.fibers[q]
        bad = False
        if sorted(table) != sorted(fp.ids):
            out.append(f"restriction {p!r}->{q!r} does not cover the fiber")
            bad = True
        if not all(v in fq.index for v in table.values()):
            out.append(f"restriction {p!r}->{q!r} maps outside the fiber")
            bad = True
        if bad:
            continue
        for a in fp.ids:
            for b in fp.ids:
                if fp.leq(a, b) and not fq.leq(table[a], table[b]):
                    out.append(
                        f"restriction {p!r}->{q!r} is not order-preserving "
                        f"at {a!r} <= {b!r}"
                    )
                    bad = True
                    break
            if bad:
                break
        if table[fp.top()] != fq.top():
            out.append(f"restriction {p!r}->{q!r} does not send top to top")
        if table[fp.bottom()] != fq.bottom():
            out.append(
                f"restriction {p!r}->{q!r} does not send bottom to bottom"
            )

    # composing two steps of a chain may only enlarge the direct image
    ok_pairs = {
        (p, q)
        for p, q in pairs
        if (p, q) in model.restrictions
        and sorted(model.restrictions[p, q]) == sorted(model.fibers[p].ids)
        and all(
            v in model.fibers[q].index
            for v in model.restrictions[p, q].values()
        )
    }
    for p, q in sorted(ok_pairs):
        for q2, r in sorted(ok_pairs):
            if q2 != q or (p, r) not in ok_pairs:
                continue
            t_pq = model.restrictions[p, q]
            t_qr = model.restrictions[q, r]
            t_pr = model.restrictions[p, r]
            fr = model.fibers[r]
            for x in model.fibers[p].ids:
                if not fr.leq(t_pr[x], t_qr[t_pq[x]]):
                    out.append(
                        f"restrictions along {p!r} > {q!r} > {r!r} compose "
                        f"below the direct map at {x!r}"
                    )
                    break
    return out


def validate_sim(sim):
    """Diagnostics for a simple poset's prime tagging; empty means valid."""
    out = []
    spec = sim.spec
    for ident in sim.poset.ids:
        p = sim.prime_of.get(ident)
        if p is None:
            out.append(f"simple {ident!r} has no prime tag")
        elif p not in spec.index:
            out.append(f"simple {ident!r} is tagged with unknown prime {p!r}")
    for ident in sim.prime_of:
        if ident not in sim.poset.index:
            out.append(f"prime tag for unknown simple {ident!r}")
    for a in sim.poset.ids:
        for b in sim.poset.ids:
            if a == b or not sim.poset.leq(a, b):
                continue
            pa, pb = sim.prime_of.get(a), sim.prime_of.get(b)
            if pa is None or pb is None:
                continue
            if pa not in spec.index or pb not in spec.index:
                continue
            if not spec.leq(pb, pa):
                out.append(
                    f"{a!r} <= {b!r} but the prime of {a!r} does not "
                    f"contain the prime of {b!r}"
                )
    return tuple(out)


def _require_valid(model):
    problems = validate(model)
    if problems:
        raise ModelInvalid("; ".join(problems))


# ---------------------------------------------------------------------------
# restriction tables and compatible tuples


def _tables(model):
    """Restriction maps for every strictly comparable pair, as id dicts.

    Assumes the model validates; identity mode resolves the maps by label.
    """
    if model.mode == "explicit":
        return {pair: model.restrictions[pair] for pair in model.comparable_pairs()}
    out = {}
    for p, q in model.comparable_pairs():
        fp, fq = model.fibers[p], model.fibers[q]
        to_q = {l: i for i, l in zip(fq.ids, fq.labels)}
        out[p, q] = {i: to_q[l] for i, l in zip(fp.ids, fp.labels)}
    return out


def enumerate_compatible(model, config=DEFAULTS):
    """The poset of all compatible tuples, ordered componentwise.

    A tuple picks one fiber element per prime so that every restriction of
    a bigger prime's choice sits above the smaller prime's choice; the
    condition is enforced for every comparable pair, not just covers.
    Assignment walks the primes from the top of the spectrum down, so each
    prime's candidates are pruned by all of its already-assigned uppers.
    """
    _require_valid(model)
    spec = model.spec
    n = len(spec)
    if n == 0:
        return build_poset([("()", "()")], [])
    tables = _tables(model)
    fib = [model.fibers[p] for p in spec.ids]

    ext = sorted(range(n), key=lambda i: (bin(spec.up[i]).count("1"), i))
    preds = []  # per position: (earlier position, that prime's table into us)
    for pos, i in enumerate(ext):
        entry = []
        for qpos in range(pos):
            j = ext[qpos]
            if spec.leq_idx(i, j):
                entry.append((qpos, tables[spec.ids[j], spec.ids[i]]))
        preds.append(entry)

    found = []
    assign = [0] * n

    def rec(pos):
        if pos == n:
            found.append(tuple(assign))
            if len(found) > config.map_cap:
                raise SizeCapExceeded(
                    "compatible tuple count exceeds the map cap"
                )
            return
        i = ext[pos]
        f = fib[i]
        cand = (1 << len(f)) - 1
        for qpos, table in preds[pos]:
            j = ext[qpos]
            image = table[fib[j].ids[assign[qpos]]]
            cand &= f.down[f.index[image]]
        for x in range(len(f)):
            if cand >> x & 1:
                assign[pos] = x
                rec(pos + 1)

    rec(0)

    tuples = []
    for res in found:
        t = [0] * n
        for pos, i in enumerate(ext):
            t[i] = res[pos]
        tuples.append(tuple(t))
    tuples.sort()

    elements = []
    for t in tuples:
        ident = "(" + ",".join(fib[k].ids[x] for k, x in enumerate(t)) + ")"
        label = "(" + ",".join(fib[k].labels[x] for k, x in enumerate(t)) + ")"
        elements.append((ident, label))
    up = []
    for ta in tuples:
        mask = 0
        for b, tb in enumerate(tuples):
            if all(fib[k].leq_idx(ta[k], tb[k]) for k in range(n)):
                mask |= 1 << b
        up.append(mask)
    return FinitePoset(elements, up, _validate=False)


def identity_witness(model, config=DEFAULTS):
    """Isomorphism from the compatible-tuple poset of an identity-mode
    model onto the monotone-map poset of its shared fiber, as an id dict."""
    if model.mode != "identity":
        raise ValueError("witness construction needs an identity-mode model")
    compat = enumerate_compatible(model, config)
    fiber = model.fibers[model.spec.ids[0]]
    target = hom_poset(model.spec, fiber, config)
    witness = poset_isomorphism(compat, target)
    assert witness is not None, (
        "compatible tuples do not match the monotone-map poset"
    )
    return witness


# ---------------------------------------------------------------------------
# classification


def classify_tors(model, config=DEFAULTS):
    """The compatible-tuple poset read as the lattice of torsion classes.

    Identity mode additionally certifies the monotone-map description by
    constructing an explicit isomorphism witness.
    """
    poset = enumerate_compatible(model, config)
    if model.mode == "identity":
        identity_witness(model, config)
    labels = ["tors" + l for l in poset.labels]
    return FinitePoset(
        list(zip(poset.ids, labels)),
        poset.up,
        covers=poset.covers,
        _validate=False,
    )


def classify_tors_hom_form(spec, lattice, config=DEFAULTS):
    """Torsion classes in monotone-map form: Hom_poset(spec, lattice).

    Cross-checked on the spot against the tuple enumeration of the
    identity-mode model carrying the lattice at every prime.
    """
    result = hom_poset(spec, lattice, config)
    model = SpecModel(spec, {p: lattice for p in spec.ids}, mode="identity")
    check = enumerate_compatible(model, config)
    assert poset_isomorphism(result, check) is not None, (
        "monotone-map poset disagrees with the tuple enumeration"
    )
    return result


def classify_torf(model, config=DEFAULTS):
    """The torsion-free lattice model: product of opposite fibers.

    Componentwise perpendicular turns each fiber upside down and forgets
    the restriction maps; no compatibility constraint survives, so the
    result is the full product.
    """
    _require_valid(model)
    return product([opposite(model.fibers[p]) for p in model.spec.ids], config)


def perp_tuple(model, tup):
    """Image of a fiber-element tuple in the torsion-free product.

    Accepts a mapping prime -> fiber element id or a sequence in spec
    order; the tuple need not be compatible.  Componentwise the element is
    unchanged, only read in the opposite lattice, so the map reverses
    order and is inverted by perp_tuple_inverse.
    """
    spec = model.spec
    if hasattr(tup, "keys"):
        missing = [p for p in spec.ids if p not in tup]
        if missing:
            raise ValueError(f"tuple misses primes {missing}")
        comps = [str(tup[p]) for p in spec.ids]
    else:
        comps = [str(x) for x in tup]
        if len(comps) != len(spec):
            raise ValueError(
                f"expected {len(spec)} components, got {len(comps)}"
            )
    for p, x in zip(spec.ids, comps):
        if x not in model.fibers[p].index:
            raise ValueError(f"{x!r} is not an element of the fiber at {p!r}")
    return "(" + ",".join(comps) + ")"


def perp_tuple_inverse(model, ident):
    """The fiber-element tuple (in spec order) behind a torsion-free id."""
    spec = model.spec
    if not (ident.startswith("(") and ident.endswith(")")):
        raise ValueError(f"{ident!r} is not a tuple id")
    body = ident[1:-1]
    idsets = [sorted(model.fibers[p].ids) for p in spec.ids]

    def rec(pos, start):
        if pos == len(idsets):
            return () if start == len(body) else None
        last = pos == len(idsets) - 1
        for cand in idsets[pos]:
            end = start + len(cand)
            if body[start:end] != cand:
                continue
            if last:
                if end == len(body):
                    return (cand,)
            elif body[end : end + 1] == ",":
                rest = rec(pos + 1, end + 1)
                if rest is not None:
                    return (cand,) + rest
        return None

    out = rec(0, 0)
    if out is None:
        raise ValueError(f"{ident!r} does not name a torsion-free tuple")
    return out


def classify_serre(sim, config=DEFAULTS):
    """The Serre lattice: down-closed subsets of the simple poset."""
    problems = validate_sim(sim)
    if problems:
        raise ModelInvalid("; ".join(problems))
    return down_sets(sim.poset, config)


def classify_local_fibers(spec, config=DEFAULTS):
    """Torsion and torsion-free lattices when every fiber has two elements.

    Returns (specialization-closed subsets, all subsets) of the prime
    poset.  The first is certified against the generic machinery: an
    identity-mode model with a two-element chain at every prime must
    enumerate an isomorphic compatible-tuple poset.
    """
    spcl = specialization_closed(spec, config)
    full = all_subsets(spec, config)
    two = chain(2, prefix="t")
    model = SpecModel(spec, {p: two for p in spec.ids}, mode="identity")
    compat = enumerate_compatible(model, config)
    assert poset_isomorphism(spcl.poset(), compat) is not None, (
        "two-element fibers disagree with the specialization-closed lattice"
    )
    return spcl, full


def _is_dynkin(algebra):
    """Simply laced Dynkin check: connected tree with ADE branch shape and
    no relations."""
    q = algebra.quiver
    n = len(q.vertices)
    if algebra.relation_terms:
        return False
    if len(q.arrows) != n - 1:
        return False
    adj = [[] for _ in range(n)]
    seen = set()
    for _, s, t in q.arrows:
        if s == t or (min(s, t), max(s, t)) in seen:
            return False
        seen.add((min(s, t), max(s, t)))
        adj[s].append(t)
        adj[t].append(s)
    stack, visited = [0], {0}
    while stack:
        for w in adj[stack.pop()]:
            if w not in visited:
                visited.add(w)
                stack.append(w)
    if len(visited) != n:
        return False
    deg = [len(a) for a in adj]
    if any(d > 3 for d in deg):
        return False
    branches = [v for v in range(n) if deg[v] == 3]
    if not branches:
        return True
    if len(branches) > 1:
        return False
    b = branches[0]
    arms = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            (cur, prev) = (nxt[0], cur)
            length += 1
        arms.append(length)
    a1, a2, a3 = sorted(arms)
    return a1 == 1 and (a2 == 1 or (a2 == 2 and a3 <= 4))


def cambrian_classification(algebra, spec, config=DEFAULTS):
    """Torsion classes of a Dynkin path algebra with coefficients spread
    over a spectrum: monotone maps from the primes into the finite
    silting-order lattice of the algebra."""
    if not _is_dynkin(algebra):
        raise ValueError(
            "expected the path algebra of a simply laced Dynkin tree "
            "without relations"
        )
    lattice = tors_lattice(algebra, config=config)
    return classify_tors_hom_form(spec, lattice, config)


# ---------------------------------------------------------------------------
# spectrum file format


_PRIMES_RE = re.compile(r"primes\s*=\s*(.+)$")
_FIBER_RE = re.compile(r"fiber\s+(\S+)\s*=\s*(.+)$")
_MODE_RE = re.compile(r"mode\s*=\s*(\S+)$")
_RESTRICT_RE = re.compile(r"restrict\s+(\S+)\s+(\S+)\s*:\s*(.+)$")
_ENTRY_RE = re.compile(r"(.+?)\s*->\s*(.+)$")
_SIMPLE_RE = re.compile(r"simple\s+(\S+)\s*:\s*(.+)$")
_SIMREL_RE = re.compile(r"simrel\s+(\S+)\s*>\s*(\S+)$")


def _resolve(fiber, token, lineno):
    if token in fiber.index:
        return token
    hits = [i for i, l in zip(fiber.ids, fiber.labels) if l == token]
    if len(hits) == 1:
        return hits[0]
    kind = "ambiguous label" if hits else "unknown element"
    raise ParseError(f"line {lineno}: {kind} {token!r}")


def parse_spectrum(text, base_dir="."):
    """Parse the spectrum model format.

    Directives: `primes = ...` (first), `contains big small` (big contains
    small), `fiber p = poset.json`, `mode = identity|explicit`,
    `restrict p q : elem->elem, ...` (repeatable per pair), and optional
    simple-poset lines `simple p : names...` / `simrel a > b`.
    Returns SpectrumData(model, sim); sim is None without simple lines.
    """
    primes = None
    contains = []
    fibers = {}
    mode = None
    restrict = {}
    simples = []
    prime_of = {}
    simrels = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "primes":
            m = _PRIMES_RE.match(line)
            if not m:
                raise ParseError(f"line {lineno}: bad primes declaration")
            if primes is not None:
                raise ParseError(f"line {lineno}: primes declared twice")
            primes = m.group(1).split()
            if len(set(primes)) != len(primes):
                raise ParseError(f"line {lineno}: repeated prime name")
            continue
        if primes is None:
            raise ParseError(
                f"line {lineno}: primes must be declared before {head!r}"
            )
        if head == "contains":
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: contains takes two primes")
            big, small = parts[1], parts[2]
            for p in (big, small):
                if p not in primes:
                    raise ParseError(f"line {lineno}: unknown prime {p!r}")
            contains.append((big, small))
        elif head == "fiber":
            m = _FIBER_RE.match(line)
            if not m:
                raise ParseError(f"line {lineno}: bad fiber declaration")
            p, path = m.group(1), m.group(2).strip()
            if p not in primes:
                raise ParseError(f"line {lineno}: unknown prime {p!r}")
            if p in fibers:
                raise ParseError(f"line {lineno}: fiber for {p!r} given twice")
            full = os.path.join(base_dir, path)
            try:
                with open(full, encoding="utf-8") as fh:
                    fibers[p] = FinitePoset.from_json(fh.read())
            except OSError as exc:
                raise ParseError(f"line {lineno}: cannot read {path!r}: {exc}")
        elif head == "mode":
            m = _MODE_RE.match(line)
            if not m or m.group(1) not in ("identity", "explicit"):
                raise ParseError(f"line {lineno}: mode is identity or explicit")
            if mode is not None:
                raise ParseError(f"line {lineno}: mode declared twice")
            mode = m.group(1)
        elif head == "restrict":
            m = _RESTRICT_RE.match(line)
            if not m:
                raise ParseError(f"line {lineno}: bad restrict line")
            p, q = m.group(1), m.group(2)
            for name in (p, q):
                if name not in primes:
                    raise ParseError(f"line {lineno}: unknown prime {name!r}")
                if name not in fibers:
                    raise ParseError(
                        f"line {lineno}: fiber for {name!r} must come before "
                        "its restrict lines"
                    )
            table = restrict.setdefault((p, q), {})
            for part in m.group(3).split(","):
                em = _ENTRY_RE.match(part.strip())
                if not em:
                    raise ParseError(
                        f"line {lineno}: bad table entry {part.strip()!r}"
                    )
                src = _resolve(fibers[p], em.group(1), lineno)
                dst = _resolve(fibers[q], em.group(2), lineno)
                if src in table:
                    raise ParseError(
                        f"line {lineno}: {em.group(1)!r} mapped twice"
                    )
                table[src] = dst
        elif head == "simple":
            m = _SIMPLE_RE.match(line)
            if not m:
                raise ParseError(f"line {lineno}: bad simple declaration")
            p = m.group(1)
            if p not in primes:
                raise ParseError(f"line {lineno}: unknown prime {p!r}")
            for name in m.group(2).split():
                if name in prime_of:
                    raise ParseError(
                        f"line {lineno}: simple {name!r} declared twice"
                    )
                simples.append(name)
                prime_of[name] = p
        elif head == "simrel":
            m = _SIMREL_RE.match(line)
            if not m:
                raise ParseError(f"line {lineno}: bad simrel line")
            a, b = m.group(1), m.group(2)
            for name in (a, b):
                if name not in prime_of:
                    raise ParseError(
                        f"line {lineno}: unknown simple {name!r}"
                    )
            simrels.append((a, b))
        else:
            raise ParseError(f"line {lineno}: unrecognized directive {head!r}")

    if primes is None:
        raise ParseError("missing primes declaration")
    spec = build_poset(primes, [(small, big) for big, small in contains])
    model = SpecModel(spec, fibers, mode or "identity", restrict or None)
    sim = None
    if simples:
        poset = build_poset(simples, [(b, a) for a, b in simrels])
        sim = SimPoset(spec, poset, prime_of)
    return SpectrumData(model, sim)


def load_spectrum(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_spectrum(text, base_dir=os.path.dirname(path) or ".")
