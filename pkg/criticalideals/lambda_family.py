import json
import logging
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from tqdm import tqdm

from .abelian import critical_group, smith_group
from .critical import CriticalIdealLadder, critical_ideal_gens, forbidden_family, has_trivial_ideal
from .digraph import Digraph, emit_digraph6, enumerate_connected, from_arcs, parse_digraph6, permute
from .exceptions import LambdaError
from .ideals import ideals_equal
from .utility import append_checkpoint, map_chunks, read_checkpoint, split_list
from .zpoly import Polynomial, polynomial_ring

logger = logging.getLogger(__name__)

_TEXT_FORM = re.compile(r"^\s*(?:Lambda)?\s*\(?\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)?\s*$")


@dataclass(frozen=True, order=True)
class LambdaParams(object):
    """Sizes of the parts T, K and T' of a Lambda digraph"""

    n1: int
    n2: int
    n3: int

    def __post_init__(self) -> None:
        for name in ("n1", "n2", "n3"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise LambdaError(f"{name} must be a nonnegative integer, got {value!r}")
        if self.total < 1:
            raise LambdaError("Lambda needs at least one vertex")

    def __str__(self) -> str:
        return f"Lambda({self.n1},{self.n2},{self.n3})"

    @property
    def total(self) -> int:
        return self.n1 + self.n2 + self.n3

    @property
    def nonempty_parts(self) -> int:
        return sum(1 for size in (self.n1, self.n2, self.n3) if size)

    @property
    def is_connected(self) -> bool:
        if self.nonempty_parts >= 2 or self.total == 1:
            return True
        return self.n2 > 0

    def disconnection_reason(self) -> Optional[str]:
        if self.is_connected:
            return None
        part = "T" if self.n1 else "T'"
        return f"only {part} is nonempty and it has {self.total} vertices without arcs"

    @property
    def parts(self) -> Tuple[range, range, range]:
        """Vertex ranges of T, K and T' in construction order"""
        k_start = self.n1
        t_start = self.n1 + self.n2
        return range(0, k_start), range(k_start, t_start), range(t_start, self.total)

    def to_dict(self) -> dict:
        return {"n1": self.n1, "n2": self.n2, "n3": self.n3}

    @classmethod
    def from_dict(cls, data: dict) -> "LambdaParams":
        try:
            return cls(data["n1"], data["n2"], data["n3"])
        except (KeyError, TypeError) as e:
            raise LambdaError(f"invalid Lambda parameters: {e}") from e

    @classmethod
    def parse(cls, text: str) -> "LambdaParams":
        """Read "Lambda(1,2,3)", "1,2,3" or the JSON object form"""
        text = text.strip()
        if text.startswith("{"):
            try:
                return cls.from_dict(json.loads(text))
            except ValueError as e:
                raise LambdaError(f"invalid JSON: {e}") from e
        match = _TEXT_FORM.match(text)
        if match is None:
            raise LambdaError(f"cannot read Lambda parameters from {text!r}")
        return cls(*(int(group) for group in match.groups()))


def connected_params(max_total: int, min_total: int = 1) -> Iterator[LambdaParams]:
    """Connected parameter triples by total size, then lexicographically"""
    for total in range(min_total, max_total + 1):
        for n1 in range(total + 1):
            for n2 in range(total - n1 + 1):
                params = LambdaParams(n1, n2, total - n1 - n2)
                if params.is_connected:
                    yield params


def build_lambda(params: LambdaParams) -> Digraph:
    """Lambda digraph with vertices ordered T, then K, then T'

    Args:
        params (LambdaParams): part sizes

    Raises:
        LambdaError: the parameters describe a disconnected digraph

    Returns:
        Digraph: K complete bidirectional, arcs T->K, T->T' and K->T' complete
    """
    reason = params.disconnection_reason()
    if reason is not None:
        raise LambdaError(f"{params} is disconnected: {reason}")
    t, k, t_prime = params.parts
    arcs = [(u, v) for u in k for v in k if u != v]
    arcs += [(u, v) for u in t for v in k]
    arcs += [(u, v) for u in t for v in t_prime]
    arcs += [(u, v) for u in k for v in t_prime]
    return from_arcs(params.total, arcs)


@dataclass(frozen=True)
class LambdaRecognition(object):
    """Outcome of recognition: parameters, or a vertex set violating the structure"""

    params: Optional[LambdaParams] = None
    certificate: Tuple[int, ...] = ()
    reason: str = ""

    @property
    def recognized(self) -> bool:
        return self.params is not None

    def render(self) -> str:
        if self.params is not None:
            return str(self.params)
        vertices = ",".join(str(v) for v in self.certificate)
        return f"rejected: {self.reason} [{vertices}]"


def _reject(reason: str, *vertices: int) -> LambdaRecognition:
    return LambdaRecognition(None, tuple(vertices), reason)


def recognize_lambda(digraph: Digraph) -> LambdaRecognition:
    """Decide whether D is isomorphic to some Lambda digraph

    Vertices on a bidirectional pair form K. Of the rest, out-degree 0
    vertices go to T' and then in-degree 0 vertices to T; a single leftover
    vertex is a lone K. The arc set is then checked exactly and the
    relabelled digraph compared with the rebuilt one.

    Args:
        digraph (Digraph): connected digraph

    Returns:
        LambdaRecognition: parameters, or a certificate of the violated condition
    """
    n = digraph.n
    bidirectional = [
        u for u in range(n) if any(digraph.is_bidirectional(u, v) for v in range(n) if v != u)
    ]
    for u, v in combinations(bidirectional, 2):
        if not digraph.is_bidirectional(u, v):
            return _reject("bidirectional vertices do not form a complete digraph", u, v)

    t_prime: List[int] = []
    t: List[int] = []
    leftover: List[int] = []
    for u in range(n):
        if u in bidirectional:
            continue
        if digraph.out_degree(u) == 0:
            t_prime.append(u)
        elif digraph.in_degree(u) == 0:
            t.append(u)
        else:
            leftover.append(u)
    if len(leftover) > 1:
        return _reject("more than one vertex has both in- and out-arcs outside K", *leftover)
    k = bidirectional + leftover

    part = {}
    for label, members in (("T", t), ("K", k), ("T'", t_prime)):
        for u in members:
            part[u] = label
    expected = {("K", "K"), ("T", "K"), ("T", "T'"), ("K", "T'")}
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            wanted = (part[u], part[v]) in expected
            if wanted and not digraph.has_arc(u, v):
                return _reject(f"missing arc {part[u]} -> {part[v]}", u, v)
            if not wanted and digraph.has_arc(u, v):
                return _reject(f"unexpected arc {part[u]} -> {part[v]}", u, v)

    params = LambdaParams(len(t), len(k), len(t_prime))
    if not params.is_connected:
        return _reject("digraph is disconnected", *range(n))
    order = t + sorted(k) + t_prime
    perm = [0] * n
    for new, old in enumerate(order):
        perm[old] = new
    if permute(digraph, perm) != build_lambda(params):
        raise LambdaError(f"{emit_digraph6(digraph)}: relabelling does not rebuild {params}")
    return LambdaRecognition(params)


def lambda_outdegrees(params: LambdaParams) -> Tuple[int, ...]:
    """n2 + n3 on T, n2 + n3 - 1 on K and 0 on T'"""
    t, k, t_prime = params.parts
    return (
        (params.n2 + params.n3,) * len(t)
        + (params.n2 + params.n3 - 1,) * len(k)
        + (0,) * len(t_prime)
    )


# closed form of the second critical ideal

_IdealBuilder = Callable[[List[Polynomial], List[Polynomial], List[Polynomial]], List[Polynomial]]


def _pairs_of(y: List[Polynomial]) -> List[Polynomial]:
    return [(y[i] + 1) * (y[j] + 1) for i, j in combinations(range(len(y)), 2)]


# (label, applies, generators in x (T), y (K), z (T'))
LEMMA3_CASES: Tuple[Tuple[str, Callable[[int, int, int], bool], _IdealBuilder], ...] = (
    (
        "n1,n2,n3>=1",
        lambda a, b, c: a >= 1 and b >= 1 and c >= 1,
        lambda x, y, z: x + [v + 1 for v in y] + z,
    ),
    ("n1=n2=1,n3=0", lambda a, b, c: a == 1 and b == 1 and c == 0, lambda x, y, z: [x[0] * y[0]]),
    ("n1=n3=1,n2=0", lambda a, b, c: a == 1 and c == 1 and b == 0, lambda x, y, z: [x[0] * z[0]]),
    ("n2=n3=1,n1=0", lambda a, b, c: b == 1 and c == 1 and a == 0, lambda x, y, z: [y[0] * z[0]]),
    ("n1>=2,n2=1,n3=0", lambda a, b, c: a >= 2 and b == 1 and c == 0, lambda x, y, z: list(x)),
    (
        "n1>=1,n2>=2,n3=0",
        lambda a, b, c: a >= 1 and b >= 2 and c == 0,
        lambda x, y, z: x + [v + 1 for v in y],
    ),
    ("n1=0,n2=2,n3=0", lambda a, b, c: a == 0 and b == 2 and c == 0, lambda x, y, z: [y[0] * y[1] - 1]),
    ("n1=0,n2>=3,n3=0", lambda a, b, c: a == 0 and b >= 3 and c == 0, lambda x, y, z: _pairs_of(y)),
    ("n1=0,n2=1,n3>=2", lambda a, b, c: a == 0 and b == 1 and c >= 2, lambda x, y, z: list(z)),
    (
        "n1=0,n2>=2,n3>=1",
        lambda a, b, c: a == 0 and b >= 2 and c >= 1,
        lambda x, y, z: [v + 1 for v in y] + z,
    ),
    ("n1=1,n2=0,n3>=2", lambda a, b, c: a == 1 and b == 0 and c >= 2, lambda x, y, z: list(z)),
    ("n1>=2,n2=0,n3=1", lambda a, b, c: a >= 2 and b == 0 and c == 1, lambda x, y, z: list(x)),
    ("n1>=2,n2=0,n3>=2", lambda a, b, c: a >= 2 and b == 0 and c >= 2, lambda x, y, z: x + z),
)

# The complete part alone has the 2-minor -(y_1 + 1), so I_2 is generated by the y_i + 1.
_AMENDED_CASES: Dict[str, _IdealBuilder] = {
    "n1=0,n2>=3,n3=0": lambda x, y, z: [v + 1 for v in y],
}


def lemma3_case(params: LambdaParams) -> str:
    """Label of the closed-form case that covers the parameters"""
    if params.total < 2 or not params.is_connected:
        raise LambdaError(f"{params}: the closed form needs a connected digraph on 2+ vertices")
    for label, applies, _ in LEMMA3_CASES:
        if applies(params.n1, params.n2, params.n3):
            return label
    raise LambdaError(f"{params} matches no closed-form case")


def lemma3_ideal(params: LambdaParams, amended: bool = False) -> List[Polynomial]:
    """Closed-form generators of I_2 of a Lambda digraph

    Variables follow the construction order: x for T, y for K, z for T'.

    Args:
        params (LambdaParams): connected parameters with at least two vertices
        amended (bool, optional): use the corrected form for a lone complete part
            of three or more vertices

    Raises:
        LambdaError: no case applies

    Returns:
        List[Polynomial]: generators in the ring of build_lambda(params)
    """
    label = lemma3_case(params)
    builder = next(build for case, _, build in LEMMA3_CASES if case == label)
    if amended:
        builder = _AMENDED_CASES.get(label, builder)
    gens = list(polynomial_ring(params.total).gens)
    t, k, t_prime = params.parts
    return builder(
        [gens[i] for i in t], [gens[i] for i in k], [gens[i] for i in t_prime]
    )


# corollary predicates, bullet by bullet


def corollary7_predicate(params: LambdaParams) -> bool:
    """Critical group with exactly one unit invariant factor"""
    n1, n2, n3 = params.n1, params.n2, params.n3
    return any(
        (
            n1 >= 1 and n2 >= 1 and n3 >= 1,
            n1 == n2 == 1 and n3 == 0,
            n1 == n3 == 1 and n2 == 0,
            n2 == n3 == 1 and n1 == 0,
            n1 >= 0 and n2 >= 2 and n3 >= 0,
            n1 == 0 and n2 == 1 and n3 >= 2,
            n1 == 1 and n2 == 0 and n3 >= 2,
            n1 >= 2 and n2 == 0 and n3 >= 2,
        )
    )


def corollary9_predicate(params: LambdaParams) -> bool:
    """Smith group with exactly one unit invariant factor"""
    n1, n2, n3 = params.n1, params.n2, params.n3
    return any(
        (
            n1 == n2 == 1 and n3 == 0,
            n1 == n3 == 1 and n2 == 0,
            n2 == n3 == 1 and n1 == 0,
            n1 >= 2 and n2 == 1 and n3 == 0,
            n1 == 0 and n2 == 1 and n3 >= 2,
            n1 == 1 and n2 == 0 and n3 >= 2,
            n1 >= 2 and n2 == 0 and n3 == 1,
            n1 >= 2 and n2 == 0 and n3 >= 2,
        )
    )


# 3-vertex digraphs with gamma = 1
ALLOWED_3: Dict[str, Digraph] = {
    "A1": from_arcs(3, [(0, 2), (1, 2)]),
    "A2": from_arcs(3, [(2, 0), (2, 1)]),
    "A3": from_arcs(3, [(2, 0), (2, 1), (1, 0)]),
    "A4": from_arcs(3, [(0, 2), (2, 0), (0, 1), (2, 1)]),
    "A5": from_arcs(3, [(0, 2), (2, 0), (1, 0), (1, 2)]),
    "A6": from_arcs(3, [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]),
}


# verification suites


@dataclass(frozen=True)
class Lemma3Check(object):
    params: LambdaParams
    case: str
    first_trivial: bool
    printed_matches: bool
    amended_matches: bool

    @property
    def passed(self) -> bool:
        return self.first_trivial and (self.printed_matches or self.amended_matches)

    @property
    def finding(self) -> bool:
        """Passes only through the amended form"""
        return self.passed and not self.printed_matches

    def render(self) -> str:
        if not self.passed:
            status = "FAIL"
        elif self.finding:
            status = "ok (amended form; printed form differs)"
        else:
            status = "ok"
        return f"{self.params}\t{self.case}\tI1={'trivial' if self.first_trivial else 'nontrivial'}\t{status}"

    def columns(self) -> List[str]:
        return [
            str(self.params),
            self.case,
            "true" if self.first_trivial else "false",
            "true" if self.printed_matches else "false",
            "true" if self.amended_matches else "false",
        ]

    @classmethod
    def from_columns(cls, params: LambdaParams, columns: List[str]) -> "Lemma3Check":
        flags = [column == "true" for column in columns[1:4]]
        return cls(params, columns[0], *flags)


def lemma3_check(params: LambdaParams) -> Lemma3Check:
    """Compare computed I_2 of one triple with the printed and amended closed forms"""
    digraph = build_lambda(params)
    computed = critical_ideal_gens(digraph, 2)
    ring = polynomial_ring(params.total)
    printed = ideals_equal(computed, lemma3_ideal(params), ring)
    amended = printed
    if not printed:
        amended = ideals_equal(computed, lemma3_ideal(params, amended=True), ring)
    return Lemma3Check(
        params, lemma3_case(params), has_trivial_ideal(digraph, 1), printed, amended
    )


def _lemma3_chunk(chunk: List[str]) -> List[Lemma3Check]:
    return [lemma3_check(LambdaParams.parse(text)) for text in chunk]


def verify_lemma3(
    max_total: int = 6,
    jobs: int = 1,
    checkpoint: Optional[str] = None,
    progress: bool = False,
    chunk_size: int = 8,
) -> List[Lemma3Check]:
    """Compare computed I_2 with the closed form for every connected triple

    Args:
        max_total (int, optional): largest n1 + n2 + n3
        jobs (int, optional): worker processes
        checkpoint (str, optional): resume file keyed by the Lambda triple
        progress (bool, optional): show a progress bar on stderr
        chunk_size (int, optional): triples per work unit

    Returns:
        List[Lemma3Check]: one check per triple in enumeration order
    """
    order = [str(params) for params in connected_params(max_total, min_total=2)]
    done = {
        text: Lemma3Check.from_columns(LambdaParams.parse(text), columns)
        for text, columns in read_checkpoint(checkpoint).items()
        if len(columns) >= 4
    }
    pending = [text for text in order if text not in done]
    logger.info(
        f"closed form check up to {max_total}: {len(order)} triples, {len(pending)} pending"
    )
    chunks = list(split_list(pending, chunk_size))
    with tqdm(total=len(pending), desc="closed forms", disable=not progress) as bar:
        for checks in map_chunks(_lemma3_chunk, chunks, jobs):
            for check in checks:
                logger.debug(check.render())
                done[str(check.params)] = check
            append_checkpoint(checkpoint, [check.columns() for check in checks])
            bar.update(len(checks))
    return [done[text] for text in order]


def missing_lemma3_cases(checks: List[Lemma3Check]) -> List[str]:
    covered = {check.case for check in checks}
    return [label for label, _, _ in LEMMA3_CASES if label not in covered]


@dataclass(frozen=True)
class Theorem5Row(object):
    digraph6: str
    gamma_at_most_one: bool
    f_free: bool
    lambda_params: Optional[LambdaParams]
    witness: str = ""

    @property
    def agrees(self) -> bool:
        recognized = self.lambda_params is not None
        return self.gamma_at_most_one == self.f_free == recognized

    def columns(self) -> List[str]:
        return [
            self.digraph6,
            "true" if self.gamma_at_most_one else "false",
            "true" if self.f_free else "false",
            str(self.lambda_params) if self.lambda_params is not None else "-",
            self.witness,
        ]

    def line(self) -> str:
        return "\t".join(self.columns())

    @classmethod
    def from_columns(cls, digraph6: str, columns: List[str]) -> "Theorem5Row":
        params = None if columns[2] == "-" else LambdaParams.parse(columns[2])
        witness = columns[3] if len(columns) > 3 else ""
        return cls(digraph6, columns[0] == "true", columns[1] == "true", params, witness)


def theorem5_row(digraph: Digraph) -> Theorem5Row:
    """The three verdicts gamma <= 1, forbidden-family-free and Lambda membership"""
    gamma_at_most_one = not CriticalIdealLadder(digraph).is_trivial(2)
    match = forbidden_family().find_in(digraph)
    recognition = recognize_lambda(digraph)
    witness = ""
    if match is not None:
        witness = f"{match.name}@{','.join(str(v) for v in match.vertices)}"
    elif not recognition.recognized:
        witness = recognition.render()
    return Theorem5Row(
        emit_digraph6(digraph), gamma_at_most_one, match is None, recognition.params, witness
    )


def _theorem5_chunk(chunk: List[str]) -> List[Theorem5Row]:
    return [theorem5_row(parse_digraph6(text)) for text in chunk]


def verify_theorem5(
    n: int,
    jobs: int = 1,
    checkpoint: Optional[str] = None,
    progress: bool = False,
    chunk_size: int = 64,
) -> List[Theorem5Row]:
    """Three-way equivalence on every connected class with n vertices

    Args:
        n (int): vertex count, 1..5
        jobs (int, optional): worker processes
        checkpoint (str, optional): resume file
        progress (bool, optional): show a progress bar on stderr
        chunk_size (int, optional): classes per work unit

    Returns:
        List[Theorem5Row]: one row per class in enumeration order
    """
    order = [emit_digraph6(d) for d in enumerate_connected(n)]
    done = {
        text: Theorem5Row.from_columns(text, columns)
        for text, columns in read_checkpoint(checkpoint).items()
        if len(columns) >= 3
    }
    pending = [text for text in order if text not in done]
    logger.info(f"theorem check n={n}: {len(order)} classes, {len(pending)} pending")
    chunks = list(split_list(pending, chunk_size))
    with tqdm(total=len(pending), desc=f"equivalence n={n}", disable=not progress) as bar:
        for rows in map_chunks(_theorem5_chunk, chunks, jobs):
            for row in rows:
                done[row.digraph6] = row
            append_checkpoint(checkpoint, [row.columns() for row in rows])
            bar.update(len(rows))
    return [done[text] for text in order]


@dataclass(frozen=True)
class CorollaryCheck(object):
    params: LambdaParams
    group: str
    predicate: bool
    unit_count: int

    @property
    def agrees(self) -> bool:
        return self.predicate == (self.unit_count == 1)

    def render(self) -> str:
        status = "ok" if self.agrees else "MISMATCH"
        return (
            f"{self.params}\t{self.group}\tpredicate={str(self.predicate).lower()}"
            f"\tunit_count={self.unit_count}\t{status}"
        )


def corollary_checks(params: LambdaParams) -> List[CorollaryCheck]:
    """Critical-group and Smith-group checks of one triple"""
    digraph = build_lambda(params)
    return [
        CorollaryCheck(
            params, "critical", corollary7_predicate(params), critical_group(digraph).unit_count
        ),
        CorollaryCheck(
            params, "smith", corollary9_predicate(params), smith_group(digraph).unit_count
        ),
    ]


def _corollary_chunk(chunk: List[str]) -> List[List[CorollaryCheck]]:
    return [corollary_checks(LambdaParams.parse(text)) for text in chunk]


def _restore_corollary_checks(params: LambdaParams, columns: List[str]) -> List[CorollaryCheck]:
    return [
        CorollaryCheck(params, "critical", corollary7_predicate(params), int(columns[0])),
        CorollaryCheck(params, "smith", corollary9_predicate(params), int(columns[1])),
    ]


def verify_corollaries(
    max_total: int = 6,
    jobs: int = 1,
    checkpoint: Optional[str] = None,
    progress: bool = False,
    chunk_size: int = 8,
) -> List[CorollaryCheck]:
    """Corollary predicates against the unit counts of the critical and Smith groups

    Checkpoint rows hold the triple and both unit counts; the predicates are
    recomputed on resume.
    """
    order = [str(params) for params in connected_params(max_total)]
    done = {
        text: _restore_corollary_checks(LambdaParams.parse(text), columns)
        for text, columns in read_checkpoint(checkpoint).items()
        if len(columns) == 2
    }
    pending = [text for text in order if text not in done]
    logger.info(f"group check up to {max_total}: {len(order)} triples, {len(pending)} pending")
    chunks = list(split_list(pending, chunk_size))
    with tqdm(total=len(pending), desc="group checks", disable=not progress) as bar:
        for pairs in map_chunks(_corollary_chunk, chunks, jobs):
            for pair in pairs:
                done[str(pair[0].params)] = pair
            rows = [[str(pair[0].params)] + [str(c.unit_count) for c in pair] for pair in pairs]
            append_checkpoint(checkpoint, rows)
            bar.update(len(pairs))
    return [check for text in order for check in done[text]]
