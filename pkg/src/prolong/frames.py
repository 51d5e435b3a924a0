"""Frames, compatible frame systems and their signed polynomials P(F; C).

A frame labels a trivalent subtree T(F) of the tree: a connected set of
internal nodes together with all of their edges.  Pendant edges of T(F)
that end at an internal node of T are *active*; beyond each active edge hangs
a subtree that a completion labels.  A compatible system of d frames with
completion sets yields a degree-d form in the prolongation A_T^(d-2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Iterator

from .phylo import Edge, Tree, bits_from_labeling, bits_name, edge_key, fourier_varset
from .poly import Polynomial, permutation_sign

Labeling = tuple[tuple[Edge, int], ...]


class IncompatibleFrames(ValueError):
    """A frame system violates a compatibility condition.

    ``condition`` is 1, 2 or 3 for the three pairing conditions, or
    ``"completion"`` when a completion set is wrong.
    """

    def __init__(self, condition, message: str):
        super().__init__(f"condition {condition}: {message}")
        self.condition = condition


@dataclass(frozen=True)
class Frame:
    labels: Labeling
    core: frozenset
    active: tuple[Edge, ...]
    pendant: tuple[tuple[Edge, int], ...]  # active edge -> its endpoint outside the core

    @property
    def edges(self) -> frozenset:
        return frozenset(e for e, _ in self.labels)

    @cached_property
    def _label_map(self) -> dict:
        return dict(self.labels)

    @cached_property
    def _pendant_map(self) -> dict:
        return dict(self.pendant)

    def label(self, e: Edge) -> int:
        return self._label_map[e]

    def pendant_node(self, e: Edge) -> int:
        return self._pendant_map[e]

    def sort_key(self):
        return (len(self.core), sorted(self.core), self.labels)


def make_frame(tree: Tree, labels: dict[Edge, int]) -> Frame:
    """Validate a partial labelling as a frame."""
    lab = {edge_key(*e): int(v) for e, v in labels.items()}
    tree_edges = set(tree.edges)
    for e, v in lab.items():
        if e not in tree_edges:
            raise ValueError(f"{e} is not an edge of the tree")
        if v not in (0, 1):
            raise ValueError(f"label of {e} must be 0 or 1")
    deg: dict[int, int] = {}
    for u, v in lab:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    core = frozenset(v for v, k in deg.items() if k == 3)
    if not core:
        raise ValueError("a frame must contain an internal node of the tree")
    if any(k == 2 for k in deg.values()):
        raise ValueError("frame subtree is not trivalent")
    for v in core:
        if sum(lab[edge_key(v, w)] for w in tree.adjacency[v]) % 2:
            raise ValueError(f"labels at node {v} have odd parity")
    # connected: the core must be connected through internal edges
    start = min(core)
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for w in tree.adjacency[v]:
            if w in core and w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != core or len(lab) != 2 * len(core) + 1:
        raise ValueError("frame subtree is not connected")
    active, pendant = [], []
    for e in sorted(lab):
        for end in e:
            if end not in core and not tree.is_leaf(end):
                active.append(e)
                pendant.append((e, end))
    return Frame(tuple(sorted(lab.items())), core, tuple(active), tuple(pendant))


def all_frames(tree: Tree) -> list[Frame]:
    """Every frame of the tree, in a canonical order."""
    internal = [v for v in tree.nodes if not tree.is_leaf(v)]
    cores = []
    for size in range(1, len(internal) + 1):
        for core in combinations(internal, size):
            cs = set(core)
            start = core[0]
            seen, stack = {start}, [start]
            while stack:
                v = stack.pop()
                for w in tree.adjacency[v]:
                    if w in cs and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen == cs:
                cores.append(core)
    frames = []
    for core in cores:
        edges = sorted({edge_key(v, w) for v in core for w in tree.adjacency[v]})
        for labels in product((0, 1), repeat=len(edges)):
            lab = dict(zip(edges, labels))
            if all(sum(lab[edge_key(v, w)] for w in tree.adjacency[v]) % 2 == 0 for v in core):
                frames.append(make_frame(tree, lab))
    frames.sort(key=Frame.sort_key)
    return frames


def hanging_edges(tree: Tree, frame: Frame, e: Edge) -> tuple[Edge, ...]:
    return tuple(sorted(tree.edges_beyond(e, frame.pendant_node(e))))


def hanging_labelings(tree: Tree, frame: Frame, e: Edge) -> list[Labeling]:
    """Labellings of the subtree beyond active edge e that complete the frame.

    Ordered lexicographically as bit strings over the sorted hanging edges.
    """
    w = frame.pendant_node(e)
    edges = hanging_edges(tree, frame, e)
    nodes = {x for f in edges for x in f} | {w}
    internal = [v for v in nodes if not tree.is_leaf(v)]
    fixed = {e: frame.label(e)}
    out = []
    for labels in product((0, 1), repeat=len(edges)):
        lab = dict(zip(edges, labels))
        lab.update(fixed)
        if all(sum(lab[edge_key(v, x)] for x in tree.adjacency[v]) % 2 == 0 for v in internal):
            out.append(tuple(zip(edges, labels)))
    return out


@dataclass(frozen=True)
class FrameSystem:
    """Frames with a pairing function and ordered completion sets.

    ``efun`` maps 0-based frame index pairs (i < j) to edges.  ``completions``
    maps each equivalence class, keyed by (edge, frame indices), to an ordered
    tuple of hanging-subtree labellings.
    """

    frames: tuple[Frame, ...]
    efun: tuple[tuple[tuple[int, int], Edge], ...]
    completions: tuple[tuple[tuple[Edge, tuple[int, ...]], tuple[Labeling, ...]], ...]

    @property
    def d(self) -> int:
        return len(self.frames)

    def e(self, i: int, j: int) -> Edge | None:
        if i > j:
            i, j = j, i
        return dict(self.efun).get((i, j))

    def to_json(self) -> dict:
        def edge_str(e):
            return f"{e[0]}-{e[1]}"

        return {
            "frames": [{edge_str(e): v for e, v in f.labels} for f in self.frames],
            "efun": {f"{i + 1},{j + 1}": edge_str(e) for (i, j), e in self.efun},
            "completions": [
                {"edge": edge_str(edge), "frames": [i + 1 for i in members],
                 "labelings": [{edge_str(e): v for e, v in lab} for lab in labs]}
                for (edge, members), labs in self.completions
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def _parse_edge(text: str) -> Edge:
    u, v = text.split("-")
    return edge_key(int(u), int(v))


def frame_system_from_json(tree: Tree, obj: dict) -> FrameSystem:
    frames = tuple(make_frame(tree, {_parse_edge(k): v for k, v in f.items()}) for f in obj["frames"])
    efun = []
    for key, e in obj["efun"].items():
        i, j = sorted(int(x) - 1 for x in key.split(","))
        efun.append(((i, j), _parse_edge(e)))
    completions = []
    for c in obj["completions"]:
        labs = tuple(tuple(sorted((_parse_edge(k), v) for k, v in lab.items())) for lab in c["labelings"])
        completions.append(((_parse_edge(c["edge"]), tuple(sorted(i - 1 for i in c["frames"]))), labs))
    return FrameSystem(frames, tuple(sorted(efun)), tuple(sorted(completions)))


def equivalence_classes(frames, efun: dict) -> list[tuple[Edge, tuple[int, ...]]]:
    """Classes of (frame, active edge) pairs glued by the pairing function."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, f in enumerate(frames):
        for e in f.active:
            parent[(i, e)] = (i, e)
    for (i, j), e in efun.items():
        if (i, e) in parent and (j, e) in parent:
            a, b = find((i, e)), find((j, e))
            if a != b:
                parent[b] = a
    groups: dict = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    out = []
    for members in groups.values():
        edge = members[0][1]
        out.append((edge, tuple(sorted(i for i, _ in members))))
    return sorted(out)


def _pair_ok(a: Frame, b: Frame, e: Edge) -> bool:
    return (e in a.active and e in b.active and a.label(e) == b.label(e)
            and a.pendant_node(e) == b.pendant_node(e))


def check_pairing(frames, efun: dict):
    """Raise IncompatibleFrames on the first violated pairing condition."""
    d = len(frames)
    for i, j in combinations(range(d), 2):
        e = efun.get((i, j))
        if e is None:
            raise IncompatibleFrames(1, f"no edge assigned to frames {i + 1},{j + 1}")
        a, b = frames[i], frames[j]
        if e not in a.active or e not in b.active:
            raise IncompatibleFrames(1, f"edge {e} is not active in frames {i + 1} and {j + 1}")
        if a.label(e) != b.label(e):
            raise IncompatibleFrames(1, f"frames {i + 1},{j + 1} disagree on the label of {e}")
        if a.pendant_node(e) != b.pendant_node(e):
            raise IncompatibleFrames(1, f"frames {i + 1},{j + 1} lie on opposite sides of {e}")

    def ef(i, j):
        return efun[(min(i, j), max(i, j))]

    for i, j, k in permutations(range(d), 3):
        if ef(i, j) == ef(j, k) and ef(i, j) != ef(i, k):
            raise IncompatibleFrames(2, f"e({i + 1},{j + 1}) = e({j + 1},{k + 1}) but not e({i + 1},{k + 1})")
    for j in range(d):
        used = {ef(i, j) for i in range(d) if i != j}
        if used != set(frames[j].active):
            raise IncompatibleFrames(3, f"active edges of frame {j + 1} are not covered exactly")


def _pairing_valid(frames, efun: dict, d: int) -> bool:
    """Conditions (2) and (3) for an efun already satisfying (1); enumeration fast path."""
    used = [set() for _ in range(d)]
    sym = {}
    for (i, j), e in efun.items():
        used[i].add(e)
        used[j].add(e)
        sym[i, j] = sym[j, i] = e
    if any(used[j] != set(frames[j].active) for j in range(d)):
        return False
    for i, j, k in permutations(range(d), 3):
        if sym[i, j] == sym[j, k] and sym[i, j] != sym[i, k]:
            return False
    return True


def check_frame_system(tree: Tree, system: FrameSystem):
    frames = system.frames
    efun = dict(system.efun)
    check_pairing(frames, efun)
    classes = equivalence_classes(frames, efun)
    given = dict(system.completions)
    if set(given) != set(classes):
        raise IncompatibleFrames("completion", "completion sets do not match the equivalence classes")
    for (edge, members), labs in given.items():
        if len(labs) != len(members):
            raise IncompatibleFrames("completion", f"class at {edge} needs {len(members)} labelings")
        if len(set(labs)) != len(labs):
            raise IncompatibleFrames("completion", f"class at {edge} repeats a labeling")
        for i in members:
            allowed = set(hanging_labelings(tree, frames[i], edge))
            for lab in labs:
                if lab not in allowed:
                    raise IncompatibleFrames("completion", f"labeling {lab} does not complete frame {i + 1}")


def frame_polynomial(tree: Tree, system: FrameSystem, check: bool = True) -> Polynomial:
    """Signed sum over all permutations of the completion sets.

    Under the permutations chosen for each class, the k-th frame of the class
    (in index order) receives the permuted k-th labelling; the monomial is the
    product of the completed frames' variables, signed by the product of the
    permutation signs.
    """
    if check:
        check_frame_system(tree, system)
    vs = fourier_varset(tree.n)
    classes = list(system.completions)
    perm_lists = [list(permutations(range(len(labs)))) for _, labs in classes]
    terms: dict = {}
    for choice in product(*perm_lists):
        sign = 1
        completed = [dict(f.labels) for f in system.frames]
        for ((edge, members), labs), perm in zip(classes, choice):
            sign *= permutation_sign(perm)
            for slot, i in enumerate(members):
                completed[i].update(labs[perm[slot]])
        expo = [0] * vs.n
        for lab in completed:
            expo[vs.index(bits_name(bits_from_labeling(tree, lab)))] += 1
        key = tuple(expo)
        terms[key] = terms.get(key, 0) + sign
    return Polynomial(vs, terms)


def enumerate_frame_systems(tree: Tree, d: int, limit: int | None = None) -> list[FrameSystem]:
    """Compatible frame systems of size d, up to reordering frames and completions.

    Frames are taken in canonical order (distinct, increasing), and each
    completion set is an increasing subset of the lexicographically ordered
    labellings, so reorderings that only flip signs are listed once.
    """
    return list(iter_frame_systems(tree, d, limit))


def iter_frame_systems(tree: Tree, d: int, limit: int | None = None) -> Iterator[FrameSystem]:
    if d < 2:
        raise ValueError("frame systems need d >= 2")
    frames = [f for f in all_frames(tree) if f.active]
    count = 0
    shared = {}
    for i, j in combinations(range(len(frames)), 2):
        edges = [e for e in frames[i].active if _pair_ok(frames[i], frames[j], e)]
        if edges:
            shared[i, j] = edges
    partners = {i: {j for j in range(len(frames)) if (i, j) in shared} for i in range(len(frames))}

    def choose(chosen: list[int], cands: list[int]):
        # cands: later frames sharing an edge with everything chosen so far
        if len(chosen) == d:
            yield tuple(chosen)
            return
        for pos, k in enumerate(cands):
            if len(chosen) + len(cands) - pos < d:
                break
            chosen.append(k)
            yield from choose(chosen, [c for c in cands[pos + 1:] if c in partners[k]])
            chosen.pop()

    pairs = list(combinations(range(d), 2))
    for picked in choose([], list(range(len(frames)))):
        fs = tuple(frames[k] for k in picked)
        options = [shared[picked[i], picked[j]] for i, j in pairs]
        # every active edge of every frame must be available to some pair
        reach = [set() for _ in range(d)]
        for (i, j), opts in zip(pairs, options):
            reach[i].update(opts)
            reach[j].update(opts)
        if any(reach[j] != set(fs[j].active) for j in range(d)):
            continue
        for edges in product(*options):
            efun = dict(zip(pairs, edges))
            if not _pairing_valid(fs, efun, d):
                continue
            classes = equivalence_classes(fs, efun)
            per_class = []
            for edge, members in classes:
                labs = hanging_labelings(tree, fs[members[0]], edge)
                per_class.append(list(combinations(labs, len(members))))
            for sets in product(*per_class):
                yield FrameSystem(fs, tuple(sorted(efun.items())), tuple(zip(classes, sets)))
                count += 1
                if limit is not None and count >= limit:
                    return


def frame_polynomials(tree: Tree, d: int, limit: int | None = None) -> list[Polynomial]:
    """Distinct non-zero frame polynomials, each scaled to leading coefficient 1."""
    seen = {}
    for system in iter_frame_systems(tree, d, limit):
        p = frame_polynomial(tree, system, check=False)
        if p.is_zero():
            continue
        p = p.normalized()
        seen.setdefault(p, None)
    return list(seen)
