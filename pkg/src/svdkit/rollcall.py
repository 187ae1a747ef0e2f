"""Roll-call voting matrices and their two-mode SVD truncation.

Votes are coded +1 (yea), -1 (nay) and 0 (absent, abstained or not on
record).  The leading two singular directions give each legislator a
"partisan" and a "bipartisan" coordinate; the rank-2 truncation ``A_2`` is
then used to reconstruct individual votes and bill outcomes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .core import SvdFactors, svd, truncate
from .errors import DegenerateMatrix, DuplicateVote, EmptyInput, RankOutOfRange, ShapeError, UnknownParty


class Vote(enum.Enum):
    YEA = 1
    NAY = -1
    ABSENT = 0

    @classmethod
    def parse(cls, text: str) -> "Vote":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown vote {text!r}; expected yea, nay or absent") from None


class Scheme(enum.Enum):
    """Ways of turning the rank-2 truncation into bill outcomes."""

    SCORE_SUM = "score-sum"
    SCORE_SUM_KNOWN = "score-sum-known"
    SIGN_MAJORITY = "sign-majority"


@dataclass(frozen=True)
class VoteRecord:
    legislator_id: str
    party: str
    bill_id: str
    vote: Vote


@dataclass(frozen=True, eq=False)
class VotingMatrix:
    """Legislators x bills matrix over {+1, -1, 0}.

    Rows are keyed by ``(legislator_id, party)`` so a legislator who changed
    affiliation during a session gets one row per affiliation.
    """

    legislators: tuple[tuple[str, str], ...]
    bills: tuple[str, ...]
    A: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        if A.shape != (len(self.legislators), len(self.bills)):
            raise ShapeError(
                f"matrix shape {A.shape} does not match "
                f"{len(self.legislators)} legislators x {len(self.bills)} bills"
            )
        if not np.all(np.isin(A, (-1.0, 0.0, 1.0))):
            raise ValueError("voting matrix entries must be +1, -1 or 0")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def parties(self) -> np.ndarray:
        return np.array([party for _, party in self.legislators])

    @cached_property
    def factors(self) -> SvdFactors:
        return svd(self.A)

    def truncation(self, k: int = 2) -> np.ndarray:
        p = min(self.A.shape)
        if not 0 <= k <= p:
            raise RankOutOfRange(f"k = {k} outside [0, {p}]")
        return truncate(self.factors, k).approx


@dataclass(frozen=True, eq=False)
class Projection:
    """Legislator and bill coordinates along the leading singular directions.

    ``partisan_sign`` and ``bipartisan_sign`` record the flips applied by
    :func:`orient` relative to the raw decomposition.
    """

    partisan: np.ndarray
    bipartisan: np.ndarray
    bill_coords: np.ndarray
    sigma: np.ndarray
    third: np.ndarray | None = None
    partisan_sign: int = 1
    bipartisan_sign: int = 1


@dataclass(frozen=True, eq=False)
class OutcomeReport:
    scheme: Scheme
    scores: np.ndarray
    predicted: np.ndarray
    actual: np.ndarray
    correct_count: int
    total: int

    @property
    def accuracy(self) -> float:
        return self.correct_count / self.total


def build_matrix(records: Iterable[VoteRecord]) -> VotingMatrix:
    """Assemble a voting matrix; rows and columns follow first appearance."""
    records = list(records)
    if not records:
        raise EmptyInput("no vote records")
    rows: dict[tuple[str, str], int] = {}
    cols: dict[str, int] = {}
    seen: set[tuple[str, str]] = set()
    for rec in records:
        key = (rec.legislator_id, rec.bill_id)
        if key in seen:
            raise DuplicateVote(f"duplicate vote for legislator {rec.legislator_id!r} on bill {rec.bill_id!r}")
        seen.add(key)
        rows.setdefault((rec.legislator_id, rec.party), len(rows))
        cols.setdefault(rec.bill_id, len(cols))
    A = np.zeros((len(rows), len(cols)))
    for rec in records:
        A[rows[(rec.legislator_id, rec.party)], cols[rec.bill_id]] = rec.vote.value
    return VotingMatrix(tuple(rows), tuple(cols), A)


def project(vm: VotingMatrix, k: int = 2) -> Projection:
    """Coordinates ``sigma_i u_i`` for legislators and ``sigma_i v_i`` for bills.

    ``k = 3`` additionally fills ``third`` with the next legislator coordinate.
    """
    m, n = vm.A.shape
    if m < 2 or n < 2:
        raise ShapeError(f"need at least 2 legislators and 2 bills, got {m} x {n}")
    if k not in (2, 3) or k > min(m, n):
        raise RankOutOfRange(f"projection supports k = 2 or 3 (<= {min(m, n)}), got {k}")
    U, sigma, V = vm.factors
    if sigma[0] == 0:
        raise DegenerateMatrix("voting matrix is identically zero")
    third = sigma[2] * U[:, 2] if k == 3 else None
    return Projection(
        partisan=sigma[0] * U[:, 0],
        bipartisan=sigma[1] * U[:, 1],
        bill_coords=V[:, :2] * sigma[:2],
        sigma=sigma[:k].copy(),
        third=third,
    )


def orient(p: Projection, vm: VotingMatrix, right_party: str) -> Projection:
    """Fix the sign ambiguity of the two axes.

    The partisan axis is flipped so that ``right_party`` sits on the positive
    side on average; the bipartisan axis so that the mean over everybody is
    positive.  Already oriented projections come back unchanged.
    """
    parties = vm.parties
    mask = parties == right_party
    if not mask.any():
        known = ", ".join(sorted(set(parties.tolist())))
        raise UnknownParty(f"party {right_party!r} not present; known: {known}")
    flip_p = -1 if p.partisan[mask].mean() < 0 else 1
    flip_b = -1 if p.bipartisan.mean() < 0 else 1
    if flip_p == 1 and flip_b == 1:
        return p
    return replace(
        p,
        partisan=flip_p * p.partisan,
        bipartisan=flip_b * p.bipartisan,
        bill_coords=p.bill_coords * np.array([flip_p, flip_b]),
        partisan_sign=p.partisan_sign * flip_p,
        bipartisan_sign=p.bipartisan_sign * flip_b,
    )


def predictability(vm: VotingMatrix, k: int = 2) -> np.ndarray:
    """Fraction of each legislator's recorded votes whose sign ``A_k`` reproduces.

    Abstentions are left out of the denominator and a zero in ``A_k`` counts
    as a miss.  Legislators with no recorded votes get NaN.
    """
    A = vm.A
    Ak = vm.truncation(k)
    recorded = A != 0
    hits = (np.sign(Ak) == A) & recorded
    n_rec = recorded.sum(axis=1)
    out = np.full(A.shape[0], np.nan)
    has = n_rec > 0
    out[has] = hits.sum(axis=1)[has] / n_rec[has]
    return out


def vote_scores(vm: VotingMatrix, k: int = 2) -> np.ndarray:
    """Column sums of the rank-``k`` truncation."""
    return vm.truncation(k).sum(axis=0)


def actual_outcomes(vm: VotingMatrix) -> np.ndarray:
    """A bill passes when it has strictly more yeas than nays on record."""
    A = vm.A
    return (A > 0).sum(axis=0) > (A < 0).sum(axis=0)


def reconstruct_outcomes(vm: VotingMatrix, scheme: Scheme | str = Scheme.SCORE_SUM, k: int = 2) -> OutcomeReport:
    scheme = Scheme(scheme)
    A = vm.A
    Ak = vm.truncation(k)
    recorded = A != 0
    if scheme is Scheme.SCORE_SUM:
        scores = Ak.sum(axis=0)
    elif scheme is Scheme.SCORE_SUM_KNOWN:
        scores = np.where(recorded, Ak, 0.0).sum(axis=0)
    else:
        yeas = (recorded & (Ak > 0)).sum(axis=0)
        nays = (recorded & (Ak < 0)).sum(axis=0)
        scores = (yeas - nays).astype(np.float64)
    predicted = scores > 0
    actual = actual_outcomes(vm)
    correct = int(np.count_nonzero(predicted == actual))
    return OutcomeReport(scheme, scores, predicted, actual, correct, A.shape[1])


@dataclass(frozen=True, eq=False)
class PlantedModel:
    matrix: VotingMatrix
    bloc: np.ndarray
    bill_positions: np.ndarray = field(repr=False)
    planted_pass: np.ndarray = field(repr=False)


def planted_two_bloc(
    n_legislators: int = 100,
    n_bills: int = 200,
    loyalty: float = 0.9,
    absence: float = 0.05,
    bloc_fraction: float = 0.55,
    partisan_fraction: float = 0.7,
    seed: int = 0,
    parties: Sequence[str] = ("R", "D"),
) -> PlantedModel:
    """Synthetic chamber with two voting blocs.

    Bloc 0 (labelled ``parties[0]``) holds ``bloc_fraction`` of the seats.  On
    a partisan bill the blocs take opposite positions, otherwise the same
    one.  Each present legislator follows the bloc position with probability
    ``loyalty``.  ``bloc`` holds +1 for bloc 0 and -1 for bloc 1, and
    ``planted_pass`` is the outcome of a fully loyal, fully present vote.
    """
    rng = np.random.default_rng(seed)
    n0 = int(round(bloc_fraction * n_legislators))
    bloc = np.where(np.arange(n_legislators) < n0, 1, -1)
    pos0 = rng.choice([-1, 1], size=n_bills)
    partisan = rng.random(n_bills) < partisan_fraction
    pos1 = np.where(partisan, -pos0, pos0)
    positions = np.where(bloc[:, None] == 1, pos0[None, :], pos1[None, :])
    loyal = rng.random((n_legislators, n_bills)) < loyalty
    votes = np.where(loyal, positions, -positions)
    absent = rng.random((n_legislators, n_bills)) < absence
    A = np.where(absent, 0, votes).astype(np.float64)
    planted_pass = positions.sum(axis=0) > 0
    legislators = tuple((f"L{i:03d}", parties[0] if bloc[i] == 1 else parties[1]) for i in range(n_legislators))
    bills = tuple(f"B{j:03d}" for j in range(n_bills))
    return PlantedModel(VotingMatrix(legislators, bills, A), bloc, np.stack([pos0, pos1]), planted_pass)
