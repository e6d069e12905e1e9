import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

from .config import MAX_ENUMERATION_VERTICES, MAX_ISOMORPHISM_VERTICES
from .digraph import (
    CanonicalForm,
    Digraph,
    canonical_form,
    contains_induced,
    delete_vertex,
    emit_digraph6,
    enumerate_connected,
    from_arcs,
    induced,
    is_connected,
    parse_digraph6,
)
from .exceptions import CapabilityError, DigraphError, ResourceLimitError
from .ideals import TrivialityVerdict, Witness, decide_triviality
from .utility import append_checkpoint, map_chunks, read_checkpoint, split_list
from .zpoly import MinorExpander, Polynomial, SymMatrix, is_unit_constant, polynomial_ring

logger = logging.getLogger(__name__)


def generalized_laplacian(digraph: Digraph) -> SymMatrix:
    """L(D, X): x_u on the diagonal, -1 at (u, v) for every arc u -> v"""
    ring = polynomial_ring(digraph.n)
    rows = []
    for u in range(digraph.n):
        row = []
        for v in range(digraph.n):
            if u == v:
                row.append(ring.gens[u])
            elif digraph.has_arc(u, v):
                row.append(-ring.one)
            else:
                row.append(ring.zero)
        rows.append(tuple(row))
    return SymMatrix(ring, tuple(rows))


class CriticalIdealLadder(object):
    """Critical ideals I_1, ..., I_n of one digraph

    All minors come from one memoized cofactor expansion, so the i-minors
    reuse the (i-1)-minors computed for the previous index.
    """

    def __init__(self, digraph: Digraph, witness: bool = False):
        self.digraph = digraph
        self.laplacian = generalized_laplacian(digraph)
        self.witness = witness
        self._expander = MinorExpander.for_matrix(self.laplacian)
        self._verdicts: Dict[int, TrivialityVerdict] = {}

    def gens(self, i: int) -> List[Polynomial]:
        return list(self._expander.minors(i))

    def verdict(self, i: int) -> TrivialityVerdict:
        """Verdict on I_i with its evidence; indices above n give the zero ideal"""
        if i in self._verdicts:
            return self._verdicts[i]
        gens: List[Polynomial] = []
        for minor in self._expander.minors(i):
            if is_unit_constant(minor):
                verdict = TrivialityVerdict(True, 1)
                break
            gens.append(minor)
        else:
            try:
                verdict = decide_triviality(gens, self.laplacian.ring, witness=self.witness)
            except ResourceLimitError as e:
                raise e.for_digraph(emit_digraph6(self.digraph)) from e
        self._verdicts[i] = verdict
        return verdict

    def is_trivial(self, i: int) -> bool:
        return self.verdict(i).trivial

    def corank(self) -> int:
        for i in range(1, self.digraph.n + 1):
            if not self.is_trivial(i):
                return i - 1
        return self.digraph.n


def critical_ideal_gens(digraph: Digraph, i: int) -> List[Polynomial]:
    """Generators of the i-th critical ideal

    Args:
        digraph (Digraph): digraph
        i (int): minor size, 1..n

    Raises:
        DigraphError: i outside 1..n

    Returns:
        List[Polynomial]: nonzero i-minors of L(D, X), lexicographic by row set then column set
    """
    if not 1 <= i <= digraph.n:
        raise DigraphError(f"critical ideal index must lie in 1..{digraph.n}, got {i}")
    return CriticalIdealLadder(digraph).gens(i)


def algebraic_corank(digraph: Digraph) -> int:
    """Number of trivial critical ideals of D

    The ideals are nested, so the scan stops at the first nontrivial one.
    Disconnected digraphs are accepted and use the same definition.
    """
    return CriticalIdealLadder(digraph).corank()


def has_trivial_ideal(digraph: Digraph, i: int) -> bool:
    return CriticalIdealLadder(digraph).is_trivial(i)


@dataclass(frozen=True)
class CriticalIdealReport(object):
    digraph: Digraph
    verdicts: Tuple[bool, ...]
    gamma: int
    witnesses: Tuple[Optional[Witness], ...] = ()

    def lines(self) -> List[str]:
        rendered = [f"gamma={self.gamma}"]
        for i, verdict in enumerate(self.verdicts, start=1):
            rendered.append(f"I{i}: {'trivial' if verdict else 'nontrivial'}")
        return rendered

    def witness(self, i: int) -> Optional[Witness]:
        """Mod-p point where every generator of I_i vanishes, if one was found"""
        if i - 1 < len(self.witnesses):
            return self.witnesses[i - 1]
        return None

    def to_dict(self) -> dict:
        witnesses = []
        for i in range(1, len(self.verdicts) + 1):
            found = self.witness(i)
            witnesses.append(
                None if found is None else {"prime": found.prime, "point": list(found.point)}
            )
        return {
            "digraph6": emit_digraph6(self.digraph),
            "gamma": self.gamma,
            "trivial": list(self.verdicts),
            "witness": witnesses,
        }


def critical_ideal_report(digraph: Digraph, early_stop: bool = False) -> CriticalIdealReport:
    """Triviality verdict of every critical ideal

    Proper ideals carry a mod-p witness point when the search finds one.

    Args:
        digraph (Digraph): digraph
        early_stop (bool, optional): mark the indices after the first
            nontrivial ideal as nontrivial without computing them

    Returns:
        CriticalIdealReport: verdicts I_1..I_n, gamma and witnesses
    """
    ladder = CriticalIdealLadder(digraph, witness=True)
    verdicts: List[bool] = []
    witnesses: List[Optional[Witness]] = []
    for i in range(1, digraph.n + 1):
        if early_stop and verdicts and not verdicts[-1]:
            verdicts.append(False)
            witnesses.append(None)
            continue
        verdict = ladder.verdict(i)
        verdicts.append(verdict.trivial)
        witnesses.append(verdict.witness)
    gamma = 0
    while gamma < len(verdicts) and verdicts[gamma]:
        gamma += 1
    if any(verdicts[gamma:]):
        logger.warning(
            f"{emit_digraph6(digraph)}: trivial ideal after a nontrivial one {verdicts}"
        )
    return CriticalIdealReport(digraph, tuple(verdicts), gamma, tuple(witnesses))


class GammaCache(object):
    """Algebraic co-rank memoized by canonical form"""

    def __init__(self):
        self._table: Dict[CanonicalForm, int] = {}
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._table)

    def gamma(self, digraph: Digraph) -> int:
        if digraph.n > MAX_ISOMORPHISM_VERTICES:
            return algebraic_corank(digraph)
        key = canonical_form(digraph)
        cached = self._table.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        self.misses += 1
        value = algebraic_corank(digraph)
        self._table.setdefault(key, value)
        return value


def is_gamma_critical(digraph: Digraph, cache: Optional[GammaCache] = None) -> bool:
    """True iff deleting any vertex strictly lowers gamma

    Args:
        digraph (Digraph): digraph with at least two vertices
        cache (GammaCache, optional): shared memo for gamma of the deleted subdigraphs

    Returns:
        bool: criticality
    """
    if digraph.n < 2:
        raise DigraphError("gamma-criticality needs at least two vertices")
    if cache is None:
        cache = GammaCache()
    gamma = cache.gamma(digraph)
    return all(cache.gamma(delete_vertex(digraph, v)) < gamma for v in range(digraph.n))


def is_forbidden(digraph: Digraph, k: int) -> bool:
    """D is forbidden for the class of digraphs with gamma at most k"""
    return CriticalIdealLadder(digraph).is_trivial(k + 1)


def is_minimal_forbidden(digraph: Digraph, k: int) -> bool:
    """gamma(D) >= k + 1 and gamma(D - v) <= k for every vertex v"""
    if not is_forbidden(digraph, k):
        return False
    return not any(
        CriticalIdealLadder(delete_vertex(digraph, v)).is_trivial(k + 1)
        for v in range(digraph.n)
    )


# forbidden family

_FORBIDDEN_ARCS: Tuple[Tuple[str, int, Dict[int, List[int]]], ...] = (
    ("F31", 3, {0: [2], 2: [1]}),
    ("F32", 3, {0: [2], 1: [2], 2: [0]}),
    ("F33", 3, {0: [2], 2: [0, 1]}),
    ("F34", 3, {0: [2], 1: [2], 2: [0, 1]}),
    ("F35", 3, {0: [1], 1: [2], 2: [0]}),
    ("F36", 3, {0: [1, 2], 1: [0], 2: [1]}),
    ("F37", 3, {0: [1, 2], 1: [0, 2], 2: [0]}),
    ("F41", 4, {0: [2, 3], 1: [3]}),
    ("F42", 4, {0: [2, 3], 1: [3], 2: [3]}),
    ("F43", 4, {0: [2], 3: [0, 1, 2]}),
    ("F44", 4, {0: [2, 3], 1: [3], 2: [0, 3]}),
    ("F45", 4, {0: [2], 1: [2], 3: [0, 1, 2]}),
    ("F46", 4, {0: [2], 2: [0], 3: [0, 1, 2]}),
    ("F47", 4, {0: [1, 2, 3], 1: [2, 3], 2: [3]}),
    ("F48", 4, {0: [1, 2, 3], 1: [0, 2, 3], 2: [3]}),
    ("F49", 4, {0: [1, 2, 3], 1: [0, 2, 3], 2: [3], 3: [2]}),
    ("F410", 4, {0: [1], 1: [0], 2: [0, 1, 3], 3: [0, 1]}),
)


@dataclass(frozen=True)
class ForbiddenMatch(object):
    name: str
    vertices: Tuple[int, ...]


@dataclass(frozen=True)
class ForbiddenFamily(object):
    """The 17 minimal forbidden digraphs for gamma at most one"""

    members: Tuple[Tuple[str, Digraph], ...]
    _by_form: Dict[CanonicalForm, str] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for name, member in self.members:
            self._by_form[canonical_form(member)] = name

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Tuple[str, Digraph]]:
        return iter(self.members)

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.members]

    def get(self, name: str) -> Digraph:
        for member_name, member in self.members:
            if member_name == name:
                return member
        raise KeyError(name)

    def find_in(self, digraph: Digraph) -> Optional[ForbiddenMatch]:
        """First induced copy of a member, scanning 3-subsets then 4-subsets"""
        sizes = sorted({member.n for _, member in self.members})
        for size in sizes:
            if size > digraph.n:
                break
            for subset in combinations(range(digraph.n), size):
                name = self._by_form.get(canonical_form(induced(digraph, subset)))
                if name is not None:
                    return ForbiddenMatch(name, subset)
        return None


_FAMILY: Optional[ForbiddenFamily] = None


def forbidden_family() -> ForbiddenFamily:
    global _FAMILY
    if _FAMILY is None:
        members = []
        for name, n, adjacency in _FORBIDDEN_ARCS:
            arcs = [(u, v) for u, targets in adjacency.items() for v in targets]
            members.append((name, from_arcs(n, arcs)))
        _FAMILY = ForbiddenFamily(tuple(members))
    return _FAMILY


def is_f_free(digraph: Digraph) -> bool:
    """True iff no member of the forbidden family is an induced subdigraph of D"""
    return forbidden_family().find_in(digraph) is None


@dataclass(frozen=True)
class Lemma2Line(object):
    name: str
    gamma: int
    forbidden: bool

    def render(self) -> str:
        return f"{self.name}: gamma={self.gamma} {'forbidden' if self.forbidden else 'not forbidden'}"


def lemma2_report() -> List[Lemma2Line]:
    """gamma of each family member and whether every vertex deletion has a nontrivial I_2"""
    lines = []
    for name, member in forbidden_family():
        gamma = algebraic_corank(member)
        forbidden = not any(
            CriticalIdealLadder(delete_vertex(member, v)).is_trivial(2)
            for v in range(member.n)
        )
        lines.append(Lemma2Line(name, gamma, forbidden))
        logger.debug(f"{name}: gamma={gamma} forbidden={forbidden}")
    return lines


def forb_gamma0() -> List[Digraph]:
    """Minimal forbidden digraphs for gamma = 0: the connected 2-vertex classes"""
    return [d for d in enumerate_connected(2) if is_minimal_forbidden(d, 0)]


def gamma0_free_connected(max_n: int = 4) -> List[Digraph]:
    """Connected classes up to max_n vertices avoiding every gamma-0 obstruction"""
    obstructions = forb_gamma0()
    return [
        candidate
        for n in range(1, max_n + 1)
        for candidate in enumerate_connected(n)
        if not any(contains_induced(candidate, obstruction) for obstruction in obstructions)
    ]


# census


@dataclass(frozen=True)
class ClassificationRow(object):
    digraph6: str
    gamma: int
    critical: bool

    def columns(self) -> List[str]:
        return [self.digraph6, str(self.gamma), "true" if self.critical else "false"]

    def line(self) -> str:
        return "\t".join(self.columns())

    @classmethod
    def from_columns(cls, digraph6: str, columns: Sequence[str]) -> "ClassificationRow":
        return cls(digraph6, int(columns[0]), columns[1] == "true")


@dataclass(frozen=True)
class CensusReport(object):
    n: int
    counts: Dict[int, int]
    rows: Tuple[ClassificationRow, ...]

    def members(self) -> List[ClassificationRow]:
        return [row for row in self.rows if row.critical]

    def tsv_lines(self) -> List[str]:
        return [f"{self.n}\t{k}\t{count}" for k, count in sorted(self.counts.items())]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "counts": {str(k): count for k, count in sorted(self.counts.items())},
        }


def classify_digraph(digraph: Digraph, cache: GammaCache) -> ClassificationRow:
    """gamma and gamma-criticality of one census class

    Raises:
        ResourceLimitError: step cap hit; digraph6 names the class, the message
            also names the subdigraph that was being processed
    """
    digraph6 = emit_digraph6(digraph)
    try:
        gamma = cache.gamma(digraph)
        critical = digraph.n >= 2 and all(
            cache.gamma(delete_vertex(digraph, v)) < gamma for v in range(digraph.n)
        )
    except ResourceLimitError as e:
        if e.digraph6 == digraph6:
            raise
        raise ResourceLimitError(
            f"{e.message} (census class {digraph6})",
            steps=e.steps,
            basis_size=e.basis_size,
            digraph6=digraph6,
        ) from e
    return ClassificationRow(digraph6, gamma, critical)


# One memo per process; worker processes each fill their own.
_PROCESS_CACHE = GammaCache()


def _classify_chunk(chunk: List[str]) -> List[ClassificationRow]:
    return [classify_digraph(parse_digraph6(text), _PROCESS_CACHE) for text in chunk]


def census(
    n: int,
    jobs: int = 1,
    checkpoint: Optional[str] = None,
    progress: bool = False,
    chunk_size: int = 64,
) -> CensusReport:
    """Count gamma-critical connected digraphs on n vertices by gamma

    Args:
        n (int): vertex count, 2..5
        jobs (int, optional): worker processes; 1 runs in-process
        checkpoint (str, optional): resume file of completed classes, appended as work finishes
        progress (bool, optional): show a progress bar on stderr
        chunk_size (int, optional): classes per work unit

    Raises:
        CapabilityError: n outside 2..5
        ResourceLimitError: a Groebner computation hit the step cap, naming the digraph

    Returns:
        CensusReport: counts per gamma and one classification row per class
    """
    if not 2 <= n <= MAX_ENUMERATION_VERTICES:
        raise CapabilityError(f"census supports 2..{MAX_ENUMERATION_VERTICES} vertices, got {n}")
    order = [emit_digraph6(d) for d in enumerate_connected(n)]
    done = {
        text: ClassificationRow.from_columns(text, columns)
        for text, columns in read_checkpoint(checkpoint).items()
        if len(columns) >= 2
    }
    pending = [text for text in order if text not in done]
    logger.info(f"census n={n}: {len(order)} classes, {len(pending)} pending")

    chunks = list(split_list(pending, chunk_size))
    with tqdm(total=len(pending), desc=f"census n={n}", disable=not progress) as bar:
        for rows in map_chunks(_classify_chunk, chunks, jobs):
            for row in rows:
                done[row.digraph6] = row
            append_checkpoint(checkpoint, [row.columns() for row in rows])
            bar.update(len(rows))

    rows = tuple(done[text] for text in order)
    counts: Dict[int, int] = {}
    for row in rows:
        if row.critical:
            counts[row.gamma] = counts.get(row.gamma, 0) + 1
    return CensusReport(n, dict(sorted(counts.items())), rows)


def connected_or_raise(digraph: Digraph) -> Digraph:
    if not is_connected(digraph):
        raise DigraphError(f"{emit_digraph6(digraph)} is not connected")
    return digraph
