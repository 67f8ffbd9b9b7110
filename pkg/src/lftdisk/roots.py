"""Iteration roots of LFT self-maps and embedding into dyadic semigroups."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .classify import MapTag, cayley_conjugate, classify, from_halfplane, HalfPlaneAffine
from .config import DEFAULT, Tolerances
from .errors import InconclusiveAtDepth, InvalidUnitRoot, LFTError, NotEmbeddable, WrongClass
from .moebius import Moebius, compose_all, involution, iterate_n, normalize, rotation


@dataclass(frozen=True)
class EllipticNormalForm:
    """``phi_p o phi o phi_p = A z / (C z + 1)`` with phi_p the involution at the fixed point p."""

    A: complex
    C: complex
    p: complex
    conjugator: Moebius

    @property
    def kappa(self) -> float:
        return abs(self.C) / abs(1 - self.A)

    def root_map(self, a: complex) -> Moebius:
        """The map with multiplier a in the same conjugacy picture, pulled back."""
        a = complex(a)
        g = Moebius(a, 0.0, self.C * (1 - a) / (1 - self.A), 1.0)
        return normalize(compose_all([self.conjugator, g, self.conjugator]))


def elliptic_normal_form(phi: Moebius, tol: Tolerances = DEFAULT) -> EllipticNormalForm:
    cls = classify(phi, tol)
    if cls.tag.family != "elliptic":
        raise WrongClass(f"expected an elliptic map, got {cls.tag.value}")
    p = cls.p
    s = involution(p)
    h = compose_all([s, phi, s])
    return EllipticNormalForm(A=h.a / h.d, C=h.c / h.d, p=p, conjugator=s)


def root_nonelliptic(phi: Moebius, n: int, tol: Tolerances = DEFAULT) -> Moebius:
    """The unique n-th iteration root of a hyperbolic or parabolic self-map."""
    if n < 1:
        raise ValueError("n must be positive")
    cls = classify(phi, tol)
    if not cls.tag.boundary_dw:
        raise WrongClass(f"expected a hyperbolic or parabolic map, got {cls.tag.value}")
    h = cayley_conjugate(phi, tol)
    alpha = h.A ** (1.0 / n)
    total = math.fsum(alpha**k for k in range(n))
    return from_halfplane(HalfPlaneAffine(alpha, h.B / total, h.tau), tol)


def _candidate_roots(A: complex, n: int) -> list[complex]:
    r = abs(A) ** (1.0 / n)
    theta = cmath.phase(A)
    return [cmath.rect(r, (theta + 2 * math.pi * k) / n) for k in range(n)]


def root_admissible(nf: EllipticNormalForm, a: complex, tol: Tolerances = DEFAULT) -> bool:
    """The disk-invariance inequality |C (1 - a)| <= (1 - |a|) |1 - A| for a candidate multiplier."""
    return abs(nf.C * (1 - a)) <= (1 - abs(a)) * abs(1 - nf.A) + tol.root_slack


def roots_elliptic(phi: Moebius, n: int, tol: Tolerances = DEFAULT) -> list[Moebius]:
    """All n-th iteration roots of an elliptic self-map that map the disk into itself."""
    if n < 1:
        raise ValueError("n must be positive")
    nf = elliptic_normal_form(phi, tol)
    return [nf.root_map(a) for a in _candidate_roots(nf.A, n) if root_admissible(nf, a, tol)]


def identity_roots(p, lam, n: int, tol: Tolerances = DEFAULT) -> Moebius:
    """``phi_p o (lam z) o phi_p``: an elliptic automorphism fixing p whose n-th iterate is the identity."""
    p = complex(p)
    lam = complex(lam)
    if abs(p) >= 1:
        raise ValueError("p must lie in the open disk")
    if abs(lam**n - 1) > tol.rotation or abs(lam - 1) <= tol.rotation:
        raise InvalidUnitRoot(f"{lam!r} is not an n-th root of unity other than 1 (n = {n})")
    s = involution(p)
    return normalize(compose_all([s, rotation(lam), s]))


# --- embedding search ----------------------------------------------------------------------


class EmbedStatus(str, Enum):
    EMBEDDABLE = "Embeddable"
    NOT_EMBEDDABLE = "NotEmbeddable"
    INCONCLUSIVE = "InconclusiveAtDepth"


def _expm1c(w: complex) -> complex:
    """exp(w) - 1 without cancellation for small |w|."""
    x, y = w.real, w.imag
    em = math.expm1(x)
    return complex(em * math.cos(y) - 2 * math.sin(y / 2) ** 2, math.exp(x) * math.sin(y))


def stolz_ratio(w: complex) -> float:
    """(1 - |a|) / |1 - a| for a = exp(w), evaluated from the logarithm."""
    return -math.expm1(w.real) / abs(_expm1c(w))


@dataclass
class RootSequence:
    """A chain a_0 = A, a_{n+1}^2 = a_n, stored through logarithms w_n = log a_n."""

    kappa: float
    logs: list[complex] = field(default_factory=list)

    @property
    def entries(self) -> list[complex]:
        return [cmath.exp(w) for w in self.logs]

    @property
    def ratios(self) -> list[float]:
        return [stolz_ratio(w) for w in self.logs]

    @property
    def margins(self) -> list[float]:
        """(1 - |a_n|) - kappa |1 - a_n|."""
        return [-math.expm1(w.real) - self.kappa * abs(_expm1c(w)) for w in self.logs]

    @property
    def normalized_margins(self) -> list[float]:
        return [r - self.kappa for r in self.ratios]

    @property
    def log_multiplier(self) -> complex:
        """The logarithm of A selected by this branch: w_n * 2^n."""
        n = len(self.logs) - 1
        return self.logs[-1] * 2**n

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "entries": [[a.real, a.imag] for a in self.entries],
            "margins": self.margins,
            "normalized_margins": self.normalized_margins,
        }


@dataclass
class EmbedVerdict:
    status: EmbedStatus
    witness: RootSequence | None
    depth: int
    note: str = ""
    # the witness only touches the boundary of the admissible region
    boundary: bool = False
    nodes: int = 0

    def __bool__(self):
        return self.status is EmbedStatus.EMBEDDABLE

    def to_json(self) -> dict:
        out = {"status": self.status.value, "depth": self.depth, "note": self.note, "boundary": self.boundary}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _principal_log(A: complex) -> complex:
    return complex(math.log(abs(A)), cmath.phase(A))


def _wrap(w: complex) -> complex:
    """Representative of w modulo 2 pi i with imaginary part in (-pi, pi]."""
    y = math.remainder(w.imag, 2 * math.pi)
    if y <= -math.pi:
        y += 2 * math.pi
    return complex(w.real, y)


def embeddable(
    phi: Moebius,
    max_depth: int = 64,
    tol: Tolerances = DEFAULT,
    stable_from: int = 32,
    stable_tol: float = 1e-12,
    min_margin: float = 1e-10,
    node_budget: int = 200_000,
) -> EmbedVerdict:
    """Decide whether phi is the time-one map of a semigroup of LFT self-maps.

    For elliptic non-automorphisms the square-root tree is searched depth
    first, principal root first.  The ratio (1 - |a_n|) / |1 - a_n| can only
    decrease along a branch, so a branch is pruned as soon as it drops below
    kappa.  A branch surviving to max_depth counts as a witness when its
    normalised margin (ratio - kappa) has settled above min_margin.
    """
    cls = classify(phi, tol)
    if cls.tag is MapTag.IDENTITY:
        return EmbedVerdict(EmbedStatus.EMBEDDABLE, None, 0, note="identity: g_t = id")
    if cls.tag.boundary_dw:
        return EmbedVerdict(EmbedStatus.EMBEDDABLE, None, 0, note="unique semigroup")
    if cls.tag is MapTag.ELLIPTIC_AUT:
        return EmbedVerdict(EmbedStatus.EMBEDDABLE, None, 0, note="rotation semigroup (not unique)")

    nf = elliptic_normal_form(phi, tol)
    kappa = nf.kappa
    eps = tol.root_slack
    root_log = _principal_log(nf.A)
    nodes = 0
    inconclusive = False
    boundary_seq = None
    deepest = 0

    # stack of (path of logs); children are w/2 and w/2 + i pi, principal first
    stack = [[root_log]]
    while stack:
        path = stack.pop()
        nodes += 1
        if nodes > node_budget:
            inconclusive = True
            break
        depth = len(path) - 1
        deepest = max(deepest, depth)
        ratio = stolz_ratio(path[-1])
        if depth > 0:
            parent = stolz_ratio(path[-2])
            if ratio > parent + 1e-12:
                raise LFTError(f"Stolz ratio increased along a branch: {parent} -> {ratio}")
            if ratio - kappa < -eps:
                continue
        if depth == max_depth:
            seq = RootSequence(kappa, list(path))
            norm = seq.normalized_margins
            final = norm[-1]
            settled = all(abs(x - final) <= stable_tol for x in norm[stable_from:])
            if settled and final >= min_margin:
                return EmbedVerdict(EmbedStatus.EMBEDDABLE, seq, max_depth, note="stabilised margin", nodes=nodes)
            inconclusive = True
            if final >= -eps and settled and abs(final) < min_margin:
                boundary_seq = seq
            continue
        half = path[-1] / 2
        # push the non-principal child first so the principal one is explored next
        stack.append(path + [_wrap(half + 1j * math.pi)])
        stack.append(path + [_wrap(half)])

    if boundary_seq is not None:
        # every a_n lies on the edge of the closed region; the maps still form a semigroup
        return EmbedVerdict(
            EmbedStatus.EMBEDDABLE, boundary_seq, max_depth,
            note="surviving branch settles on the boundary of the Stolz region", boundary=True, nodes=nodes,
        )
    if inconclusive:
        return EmbedVerdict(EmbedStatus.INCONCLUSIVE, None, max_depth, note="no stabilised branch", nodes=nodes)
    return EmbedVerdict(EmbedStatus.NOT_EMBEDDABLE, None, deepest, note="every branch pruned", nodes=nodes)


def stolz_embeddable_closed_form(phi: Moebius, tol: Tolerances = DEFAULT) -> bool:
    """Closed-form oracle for elliptic non-automorphisms: the principal branch is the best one.

    Along the branch selected by log A + 2 pi i k the ratio tends to
    -Re(w)/|w| with w = log A + 2 pi i k, which is largest for the principal
    logarithm; the map embeds iff that limit reaches kappa.  The comparison
    carries the same slack as the pruning test in the search.
    """
    nf = elliptic_normal_form(phi, tol)
    w = _principal_log(nf.A)
    return -w.real / abs(w) - nf.kappa >= -tol.root_slack


def parse_dyadic(t) -> Fraction:
    """Accept Fraction, int, "m/2^k", "m/N" or a float that is an exact dyadic rational."""
    if isinstance(t, str):
        s = t.replace(" ", "")
        if "/" in s:
            num, den = s.split("/", 1)
            den = 2 ** int(den[2:]) if den.startswith("2^") else int(den)
            t = Fraction(int(num), den)
        else:
            t = Fraction(s)
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    den = t.denominator
    if den & (den - 1):
        raise ValueError(f"{t} is not a dyadic rational")
    return t


def dyadic_element(
    phi: Moebius,
    t,
    tol: Tolerances = DEFAULT,
    verdict: EmbedVerdict | None = None,
    branch: int = 0,
) -> Moebius:
    """g_t for dyadic t in the semigroup through phi.

    For elliptic non-automorphisms the branch comes from the embedding
    witness; for elliptic automorphisms ``branch`` selects log A + 2 pi i branch.
    """
    t = parse_dyadic(t)
    if t == 0:
        return Moebius.identity()
    m, den = t.numerator, t.denominator
    k = den.bit_length() - 1
    cls = classify(phi, tol)
    if cls.tag is MapTag.IDENTITY:
        return Moebius.identity()
    if cls.tag.boundary_dw:
        return iterate_n(root_nonelliptic(phi, den, tol), m)
    nf = elliptic_normal_form(phi, tol)
    if cls.tag is MapTag.ELLIPTIC_AUT:
        w = _principal_log(nf.A) + 2j * math.pi * branch
    else:
        verdict = verdict if verdict is not None else embeddable(phi, tol=tol)
        if verdict.status is EmbedStatus.NOT_EMBEDDABLE:
            raise NotEmbeddable("the map admits no dyadic semigroup")
        if verdict.status is EmbedStatus.INCONCLUSIVE:
            raise InconclusiveAtDepth(f"no verdict at depth {verdict.depth}")
        w = verdict.witness.log_multiplier
    a = cmath.exp(w / den)
    return iterate_n(nf.root_map(a), m)
