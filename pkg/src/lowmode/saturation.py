"""Bracket-generated subspace chains, Hörmander checks, determining modes.

The chain X_0 subset X_1 subset ... grows by adjoining leading-term images
N_M(g) of elements already in the chain; by the polarization argument the
same spaces are generated by full multilinear images of a generating set,
which is what the implementation enumerates.  Everything is certified only
on the truncated lattice (|k_i| <= cutoff); image vectors touching modes
beyond the cutoff are put on a discard ledger instead of being inserted,
so coverage claims stay conservative.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .mode_algebra import (advect_scalar, euler_image, multilinear_image)
from .modes import (COS, SIN, RD_SCALAR, TEMPERATURE, VELOCITY, VORTICITY,
                    ModeVector, SpanSet, TrigMode, canonical, mode_sort_key)


def within_cutoff(mode: TrigMode, cutoff: int) -> bool:
    return all(abs(c) <= cutoff for c in mode.k)


def lattice_modes(kind: str, cutoff: int) -> list[TrigMode]:
    """All basis modes of a model on the truncated lattice, in canonical order."""
    out = []
    if kind == "rd":
        return [TrigMode((k,), SIN, RD_SCALAR) for k in range(1, cutoff + 1)]
    if kind in ("nse2d", "boussinesq"):
        for k1 in range(-cutoff, cutoff + 1):
            for k2 in range(-cutoff, cutoff + 1):
                k = (k1, k2)
                kc, _ = canonical(k)
                if kc != k or all(c == 0 for c in k):
                    continue
                if kind == "nse2d":
                    out.append(TrigMode(k, COS, VORTICITY))
                    out.append(TrigMode(k, SIN, VORTICITY))
                else:
                    for f in (VORTICITY, TEMPERATURE):
                        out.append(TrigMode(k, COS, f))
                        out.append(TrigMode(k, SIN, f))
        return sorted(out, key=mode_sort_key)
    if kind == "euler3d":
        rng = range(-cutoff, cutoff + 1)
        for k in itertools.product(rng, rng, rng):
            kc, _ = canonical(k)
            if kc != k or all(c == 0 for c in k):
                continue
            for l in (0, 1):
                for m in (COS, SIN):
                    out.append(TrigMode(k, m, VELOCITY, l))
        return sorted(out, key=mode_sort_key)
    raise ValueError(f"unknown model kind {kind!r}")


@dataclass
class SubspaceChain:
    """Levels X_0 subset X_1 subset ... of the bracket-generated chain.

    ``generators`` is the stable list of raw vectors that enlarged the
    span, each paired with a recipe: ("seed", None) for level-0 directions,
    ("image", [factor vectors]) for multilinear images.  Control synthesis
    consumes these recipes.
    """

    kind: str
    cutoff: int
    levels: list[SpanSet] = field(default_factory=list)
    stabilized: bool = False
    discarded: list[TrigMode] = field(default_factory=list)
    generators: list[ModeVector] = field(default_factory=list)
    recipes: list[tuple] = field(default_factory=list)
    generator_level: list[int] = field(default_factory=list)
    rd_degree: int = 3

    @property
    def dims(self) -> list[int]:
        return [lv.dim for lv in self.levels]

    def top(self) -> SpanSet:
        return self.levels[-1]


def _image(kind, factors, rd_degree):
    del rd_degree
    return multilinear_image(kind, list(factors))


def _check_seed_cancellation(kind, seed_vectors):
    """Same-frequency bilinear self-images must vanish (even-degree escape)."""
    modes = set()
    for vec in seed_vectors:
        modes.update(vec.keys())
    by_freq: dict[tuple, list] = {}
    for m in modes:
        by_freq.setdefault(m.k, []).append(m)
    for group in by_freq.values():
        for a, b in itertools.combinations_with_replacement(group, 2):
            img = multilinear_image(kind, [ModeVector({a: 1.0}),
                                           ModeVector({b: 1.0})])
            if img.norm() > 1e-12:
                raise ValueError(
                    "seed violates the same-frequency cancellation structure")


def _parity_pol_keys(kind):
    if kind == "euler3d":
        return [(p, l) for p in (COS, SIN) for l in (0, 1)]
    return [(p, None) for p in (COS, SIN)]


def _freq_modes(kind, freq):
    field = {"nse2d": VORTICITY, "euler3d": VELOCITY}.get(kind, TEMPERATURE)
    if kind == "euler3d":
        return [TrigMode(freq, p, field, l) for p, l in _parity_pol_keys(kind)]
    return [TrigMode(freq, p, field) for p, _ in _parity_pol_keys(kind)]


def iterate_span(seed: list[ModeVector], kind: str, max_depth: int,
                 cutoff: int, rd_degree: int = 3,
                 diagonal_only: bool = False,
                 stop_modes: list[TrigMode] = None) -> SubspaceChain:
    """Grow the chain from seed vectors until stabilization or max_depth.

    For bilinear fluid models the seed must satisfy the same-frequency
    cancellation structure (all bilinear self-images within one frequency
    family vanish).  Arguments for the image step are the stable generator
    list (seeds, inserted raw images, and coordinate directions once they
    become members of a level, which mirrors how the paper's proofs recover
    individual basis directions by trig identities).  With
    ``diagonal_only`` the level update uses diagonal images N_M(g) over
    subset sums of the same argument tuples (the scaling route); both
    routes generate identical spans, which is the polarization equivalence.
    ``stop_modes`` ends the iteration early once every listed coordinate
    direction is covered.
    """
    degree = rd_degree if kind == "rd" else 2
    chain = SubspaceChain(kind=kind, cutoff=cutoff, rd_degree=rd_degree)
    base = SpanSet()
    coord_set: set[TrigMode] = set()
    lattice = lattice_modes(kind, cutoff)
    pending = []

    def note_generator(vec, recipe, depth):
        chain.generators.append(vec)
        chain.recipes.append(recipe)
        chain.generator_level.append(depth)

    for vec in seed:
        for m in vec:
            if not within_cutoff(m, cutoff):
                raise ValueError(f"seed mode {m} outside cutoff {cutoff}")
        if base.insert(vec):
            note_generator(ModeVector(vec), ("seed", None), 0)
    if kind in ("nse2d", "euler3d"):
        _check_seed_cancellation(kind, chain.generators)

    def enrich_coordinates(span, depth):
        nonlocal pending
        found = []
        for m in lattice:
            if m in coord_set:
                continue
            cv = ModeVector({m: 1.0})
            if span.contains(cv):
                coord_set.add(m)
                found.append(m)
                note_generator(cv, ("coordinate", None), depth)
        return found

    enrich_coordinates(base, 0)
    chain.levels.append(base)
    if base.dim == 0:
        chain.stabilized = True
        return chain

    def all_stop_covered(span):
        return stop_modes is not None and all(
            span.contains(ModeVector({m: 1.0})) for m in stop_modes)

    if all_stop_covered(base):
        chain.stabilized = True
        return chain

    old_count = 0
    for depth in range(1, max_depth + 1):
        prev = chain.levels[-1]
        cur = prev.copy()
        gens = chain.generators
        n = len(gens)
        new_found = False
        if diagonal_only:
            combos = _diagonal_arguments(gens, degree, old_count)
        else:
            combos = _multilinear_arguments(gens, degree, old_count)
        fresh = []
        for factors in combos:
            if degree == 2 and not diagonal_only:
                skip = _coordinate_pair_prune(kind, factors, coord_set,
                                              cutoff, chain)
                if skip:
                    continue
            img = _image(kind, factors, rd_degree)
            if not img:
                continue
            outside = [m for m in img if not within_cutoff(m, cutoff)]
            if outside:
                for m in outside:
                    if m not in chain.discarded:
                        chain.discarded.append(m)
                continue
            if cur.insert(img):
                fresh.append((img, ("image", [ModeVector(f) for f in factors])))
                new_found = True
        old_count = n
        for img, recipe in fresh:
            note_generator(img, recipe, depth)
        if enrich_coordinates(cur, depth):
            new_found = True
        chain.levels.append(cur)
        if all_stop_covered(cur):
            # the span cannot grow further once it fills the whole
            # truncated lattice; partial stop lists just stop the loop
            chain.stabilized = cur.dim == len(lattice)
            break
        if not new_found:
            chain.stabilized = True
            break
    return chain


def _coordinate_pair_prune(kind, factors, coord_set, cutoff, chain):
    """Skip a coordinate-pair image when it cannot enlarge the span.

    Applies only to bilinear models with both factors single coordinate
    modes: the image lives on the two output frequencies j +- k, so if
    every basis direction there is already covered the image is redundant,
    and if an output frequency leaves the cutoff box the whole image vector
    would be discarded anyway (it is ledgered here).
    """
    if kind == "rd":
        return False
    a, b = factors
    if len(a) != 1 or len(b) != 1:
        return False
    (ma, ca), = a.items()
    (mb, cb), = b.items()
    if abs(ca) != 1.0 or abs(cb) != 1.0:
        return False
    freqs = set()
    for q in (tuple(x + y for x, y in zip(ma.k, mb.k)),
              tuple(x - y for x, y in zip(ma.k, mb.k))):
        qc, _ = canonical(q)
        if all(c == 0 for c in qc):
            continue
        freqs.add(qc)
    if not freqs:
        return True
    outside = [q for q in freqs if max(abs(c) for c in q) > cutoff]
    if outside:
        for q in outside:
            for m in _freq_modes(kind, q):
                if m not in chain.discarded:
                    chain.discarded.append(m)
        return True
    return all(all(m in coord_set for m in _freq_modes(kind, q))
               for q in freqs)


def _multilinear_arguments(gens, degree, old_count):
    """Generator tuples with at least one new factor (index >= old_count)."""
    n = len(gens)
    for combo in itertools.combinations_with_replacement(range(n), degree):
        if combo[-1] < old_count:
            continue  # all factors old: image already in the previous level
        yield tuple(gens[i] for i in combo)


def _diagonal_arguments(gens, degree, old_count):
    """Subset sums g = sum_{i in S} b_i, |S| <= degree, used diagonally.

    By the polarization identity the diagonal images over these sums span
    the full multilinear images, giving an independent route to the chain.
    """
    n = len(gens)
    for size in range(1, degree + 1):
        for combo in itertools.combinations(range(n), size):
            if combo[-1] < old_count:
                continue
            g = ModeVector()
            for i in combo:
                g = g.plus(gens[i])
            yield tuple([g] * degree)


# ---------------------------------------------------------------------------
# Boussinesq two-track iteration
# ---------------------------------------------------------------------------

def theta_bracket_combo(a: ModeVector, b: ModeVector,
                        gravity: float = 1.0) -> ModeVector:
    """Bilinear extension of the temperature double bracket to combinations.

    g * iota_theta ( b(d_x B, A) - b(d_x A, B) ) for temperature
    combinations A, B, where the differentiated argument acts as vorticity.
    """
    dxa = _d_x_combo(a)
    dxb = _d_x_combo(b)
    out = advect_scalar(dxb, _as_field(a, TEMPERATURE), TEMPERATURE)
    out = out.plus(advect_scalar(dxa, _as_field(b, TEMPERATURE), TEMPERATURE),
                   -1.0)
    return out.scaled(gravity).cleaned()


def vorticity_bracket_combo(a: ModeVector, b: ModeVector) -> ModeVector:
    """Symmetrized advection bracket of two vorticity combinations."""
    av = _as_field(a, VORTICITY)
    bv = _as_field(b, VORTICITY)
    return advect_scalar(av, bv, VORTICITY).plus(
        advect_scalar(bv, av, VORTICITY)).cleaned()


def _as_field(vec: ModeVector, field_tag: str) -> ModeVector:
    return ModeVector({TrigMode(m.k, m.parity, field_tag): c
                       for m, c in vec.items()})


def _d_x_combo(vec: ModeVector) -> ModeVector:
    out = ModeVector()
    for m, c in vec.items():
        k1 = m.k[0]
        if k1 == 0:
            continue
        if m.parity == COS:
            out.add(TrigMode(m.k, SIN, VORTICITY), -c * k1)
        else:
            out.add(TrigMode(m.k, COS, VORTICITY), c * k1)
    return out


def iterate_span_boussinesq(seed_freqs: list, max_depth: int, cutoff: int,
                            gravity: float = 1.0) -> SubspaceChain:
    """Boussinesq chain following the proof structure of the control theorem.

    Temperature directions grow by the exact double bracket; each
    temperature direction also contributes the vorticity ray d_x e_k (the
    Gamma route, empty for k1 = 0); vorticity pairs then grow vorticity
    directions by the symmetrized advection bracket, the only source of
    y-axis vorticity modes.  Temperature and vorticity generators are
    tracked separately.
    """
    chain = SubspaceChain(kind="boussinesq", cutoff=cutoff)
    span = SpanSet()
    theta_gens: list[ModeVector] = []
    vort_gens: list[ModeVector] = []
    coord_set: set[TrigMode] = set()
    lattice = lattice_modes("boussinesq", cutoff)

    def note(vec, recipe, depth, track):
        track.append(vec)
        chain.generators.append(vec)
        chain.recipes.append(recipe)
        chain.generator_level.append(depth)

    for k in seed_freqs:
        kc, _ = canonical(tuple(int(c) for c in k))
        for parity in (COS, SIN):
            m = TrigMode(kc, parity, TEMPERATURE)
            if not within_cutoff(m, cutoff):
                raise ValueError("seed frequency outside cutoff")
            vec = ModeVector({m: 1.0})
            if span.insert(vec):
                note(vec, ("seed", None), 0, theta_gens)
                coord_set.add(m)
    chain.levels.append(span)

    def enrich(cur, depth):
        found = False
        for m in lattice:
            if m in coord_set:
                continue
            cv = ModeVector({m: 1.0})
            if cur.contains(cv):
                coord_set.add(m)
                track = theta_gens if m.field == TEMPERATURE else vort_gens
                note(cv, ("coordinate", None), depth, track)
                found = True
        return found

    old_theta = 0
    old_vort = 0
    for depth in range(1, max_depth + 1):
        cur = chain.levels[-1].copy()
        new = False
        fresh_theta: list[ModeVector] = []
        fresh_vort: list[ModeVector] = []
        nt = len(theta_gens)
        for i, j in itertools.combinations_with_replacement(range(nt), 2):
            if j < old_theta:
                continue
            vec = theta_bracket_combo(theta_gens[i], theta_gens[j], gravity)
            vec = _cutoff_or_discard(vec, cutoff, chain)
            if vec and cur.insert(vec):
                fresh_theta.append(vec)
                new = True
        for tv in theta_gens:
            ray = _d_x_combo(tv)
            if ray and all(within_cutoff(m, cutoff) for m in ray):
                if cur.insert(ray):
                    fresh_vort.append(ray)
                    new = True
        nv = len(vort_gens)
        for i, j in itertools.combinations(range(nv), 2):
            if j < old_vort:
                continue
            vec = vorticity_bracket_combo(vort_gens[i], vort_gens[j])
            vec = _cutoff_or_discard(vec, cutoff, chain)
            if vec and cur.insert(vec):
                fresh_vort.append(vec)
                new = True
        old_theta = nt
        old_vort = nv
        for vec in fresh_theta:
            note(vec, ("theta_bracket", None), depth, theta_gens)
        for vec in fresh_vort:
            note(vec, ("vorticity_bracket", None), depth, vort_gens)
        if enrich(cur, depth):
            new = True
        chain.levels.append(cur)
        if cur.dim == len(lattice):
            chain.stabilized = True
            break
        if not new:
            chain.stabilized = True
            break
    return chain


def _cutoff_or_discard(vec: ModeVector, cutoff: int, chain: SubspaceChain):
    if not vec:
        return None
    outside = [m for m in vec if not within_cutoff(m, cutoff)]
    if outside:
        for m in outside:
            if m not in chain.discarded:
                chain.discarded.append(m)
        return None
    return vec


# ---------------------------------------------------------------------------
# Hörmander reports
# ---------------------------------------------------------------------------

@dataclass
class HoermanderReport:
    kind: str
    cutoff: int
    depth: int
    covered: SpanSet
    missing: list[TrigMode]
    satisfied_up_to_cutoff: bool
    dims: list[int]
    discarded: list[TrigMode]

    def to_json(self) -> dict:
        return {
            "model": self.kind,
            "cutoff": self.cutoff,
            "depth": self.depth,
            "satisfied_up_to_cutoff": self.satisfied_up_to_cutoff,
            "level_dims": self.dims,
            "covered_dim": self.covered.dim,
            "missing_modes": [repr(m) for m in self.missing],
            "discarded_modes": [repr(m) for m in self.discarded],
        }


def seed_from_frequencies(kind: str, freqs: list) -> list[ModeVector]:
    """Control-direction seed vectors for a set of controlled frequencies."""
    out = []
    if kind == "rd":
        for k in freqs:
            kk = int(k[0]) if isinstance(k, (tuple, list)) else int(k)
            out.append(ModeVector({TrigMode((kk,), SIN, RD_SCALAR): 1.0}))
        return out
    for k in freqs:
        kc, _ = canonical(tuple(int(c) for c in k))
        if kind == "nse2d":
            for parity in (COS, SIN):
                out.append(ModeVector({TrigMode(kc, parity, VORTICITY): 1.0}))
        elif kind == "boussinesq":
            for parity in (COS, SIN):
                out.append(ModeVector({TrigMode(kc, parity, TEMPERATURE): 1.0}))
        elif kind == "euler3d":
            for l in (0, 1):
                for parity in (COS, SIN):
                    out.append(ModeVector({TrigMode(kc, parity, VELOCITY, l): 1.0}))
        else:
            raise ValueError(f"unknown model kind {kind!r}")
    return out


def check_hoermander(controlled: list, kind: str, cutoff: int,
                     max_depth: int = 40, rd_degree: int = 3,
                     gravity: float = 1.0) -> HoermanderReport:
    """Coverage of the truncated lattice by the bracket-generated chain."""
    if not controlled:
        raise ValueError("the controlled set must be nonempty")
    if kind == "boussinesq":
        chain = iterate_span_boussinesq(controlled, max_depth, cutoff, gravity)
    else:
        seed = seed_from_frequencies(kind, controlled)
        chain = iterate_span(seed, kind, max_depth, cutoff, rd_degree)
    want = lattice_modes(kind, cutoff)
    top = chain.top()
    missing = [m for m in want if not top.contains(ModeVector({m: 1.0}))]
    if not missing:
        depth = next(i for i, lv in enumerate(chain.levels)
                     if lv.dim == top.dim)
    else:
        depth = len(chain.levels) - 1
    return HoermanderReport(kind=kind, cutoff=cutoff, depth=depth,
                            covered=top, missing=missing,
                            satisfied_up_to_cutoff=not missing,
                            dims=chain.dims, discarded=chain.discarded)


def polarization_equivalence(seed: list[ModeVector], kind: str, depth: int,
                             cutoff: int, rd_degree: int = 3) -> bool:
    """True iff diagonal-image and multilinear-image chains agree levelwise."""
    full = iterate_span(seed, kind, depth, cutoff, rd_degree,
                        diagonal_only=False)
    diag = iterate_span(seed, kind, depth, cutoff, rd_degree,
                        diagonal_only=True)
    n = max(len(full.levels), len(diag.levels))

    def level(chain, i):
        return chain.levels[min(i, len(chain.levels) - 1)]

    return all(level(full, i).equals(level(diag, i)) for i in range(n))


# ---------------------------------------------------------------------------
# determining sets of modes (3D lattice moves)
# ---------------------------------------------------------------------------

@dataclass
class MoveGraph:
    nodes: set
    generation: dict
    frontier: set

    def to_json(self) -> dict:
        return {
            "node_count": len(self.nodes),
            "max_generation": max(self.generation.values(), default=0),
            "generations": {str(k): g for k, g in
                            sorted(self.generation.items())},
        }


def admissible_move(j: tuple, k: tuple) -> bool:
    """j + k is admissible iff j, k are linearly independent and |j| != |k|."""
    jv = np.array(j, dtype=float)
    kv = np.array(k, dtype=float)
    if not np.any(np.cross(jv, kv)):
        return False
    return float(jv @ jv) != float(kv @ kv)


def determining_modes(zset: list, cutoff: int) -> MoveGraph:
    """Closure of a 3D frequency set under admissible moves and negation.

    Restricted to the box max|l_i| <= cutoff; generation numbers record the
    first level at which a node appears.  The closure is a set-valued
    fixpoint, independent of visit order.
    """
    nodes = set()
    generation = {}
    for k in zset:
        kt = tuple(int(c) for c in k)
        if all(c == 0 for c in kt):
            raise ValueError("zero frequency is not a valid mode")
        for v in (kt, tuple(-c for c in kt)):
            if v not in nodes and max(abs(c) for c in v) <= cutoff:
                nodes.add(v)
                generation[v] = 0
    frontier = set(nodes)
    gen = 0
    while frontier:
        gen += 1
        arr = np.array(sorted(nodes), dtype=int)
        norms = np.einsum("ij,ij->i", arr, arr)
        new = set()
        for j in sorted(frontier):
            jv = np.array(j, dtype=int)
            sums = arr + jv
            indep = np.any(np.cross(arr, jv[None, :]) != 0, axis=1)
            ok = indep & (norms != int(jv @ jv))
            inside = np.all(np.abs(sums) <= cutoff, axis=1)
            for l in sums[ok & inside]:
                lt = tuple(int(c) for c in l)
                if all(c == 0 for c in lt):
                    continue
                for v in (lt, tuple(-c for c in lt)):
                    if v not in nodes:
                        new.add(v)
        if not new:
            frontier = set()
            break
        for v in new:
            nodes.add(v)
            generation[v] = gen
        frontier = new
    return MoveGraph(nodes=nodes, generation=generation, frontier=frontier)


def full_lattice_covered(graph: MoveGraph, cutoff: int) -> bool:
    want = ((2 * cutoff + 1) ** 3) - 1
    inside = [v for v in graph.nodes if max(abs(c) for c in v) <= cutoff]
    return len(inside) == want


AXES3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def euler_axis_escape_check(zset: list) -> bool:
    """True iff double bilinear images over the axis families span F_(1,1,1).

    Requires the three coordinate axes in the controlled set; the escape
    directions B(B(e, e~), e~~) are computed symbolically and membership is
    tested in the span of the full image vectors.
    """
    zc = {canonical(tuple(int(c) for c in k))[0] for k in zset}
    if not set(AXES3) <= zc:
        raise ValueError("axis escape check needs all three coordinate axes")
    singles = []
    for k in AXES3:
        for l in (0, 1):
            for m in (COS, SIN):
                singles.append(ModeVector({TrigMode(k, m, VELOCITY, l): 1.0}))
    first = []
    for a, b in itertools.combinations_with_replacement(singles, 2):
        img = euler_image(a, b)
        if img:
            first.append(img)
    span = SpanSet()
    for f in first:
        for c in singles:
            img = euler_image(f, c)
            if img:
                span.insert(img)
    targets = [TrigMode((1, 1, 1), m, VELOCITY, l)
               for l in (0, 1) for m in (COS, SIN)]
    return all(span.contains(ModeVector({m: 1.0})) for m in targets)


def report_to_json_file(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2)
        fh.write("\n")
