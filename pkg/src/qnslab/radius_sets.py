"""Radius sets A ⊆ (0, ∞): gap constants, log ε-nets, porosity, verdicts.

A set is described by one of three forms: a finite element list, a finite
union of intervals (endpoints 0 and ∞ allowed), or a parametric family with a
closed-form gap law.  All scan quantities are computed on a finite window;
asymptotic verdicts come from the form's complete description (lists and
interval unions describe the whole set; families carry analytic gap laws).
Forms without asymptotic knowledge yield "window-limited" verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

INF = math.inf


# -- asymptotic summaries ------------------------------------------------------


@dataclass(frozen=True)
class Asymptotics:
    """Closed-form limit data for a completely described set.

    ``gap_ratio_sup`` is the supremum of b/a over bounded complementary gaps
    (a, b); accumulation flags say whether the set has points arbitrarily
    close to 0 and arbitrarily large.
    """

    p0: float
    i0: float
    i_inf: float
    gap_ratio_sup: float
    accumulates_at_zero: bool
    accumulates_at_inf: bool


def _asym_from_gap_ratio(ratio_sup_at_zero: float, ratio_sup_global: float,
                         acc0: bool, acc_inf: bool, ratio_sup_at_inf: float | None = None) -> Asymptotics:
    if not acc0:
        p0, i0 = 1.0, INF
    elif math.isinf(ratio_sup_at_zero):
        p0, i0 = 1.0, INF
    else:
        i0 = ratio_sup_at_zero - 1.0
        p0 = i0 / (1.0 + i0)
    if not acc_inf:
        i_inf = INF
    else:
        r = ratio_sup_at_inf if ratio_sup_at_inf is not None else ratio_sup_at_zero
        i_inf = INF if math.isinf(r) else r - 1.0
    return Asymptotics(p0, i0, i_inf, ratio_sup_global, acc0, acc_inf)


# -- parametric families -------------------------------------------------------


class Family:
    """Base for parametric families; subclasses fill in geometry and limits."""

    name: str = "family"

    def params(self) -> dict:
        raise NotImplementedError

    def intervals_between(self, lo: float, hi: float) -> list[tuple[float, float]]:
        """Closed intervals (points degenerate) of A ∩ [lo, hi], sorted."""
        raise NotImplementedError

    def largest_point_below(self, x: float) -> Optional[float]:
        """sup of A ∩ (0, x], or None when empty."""
        raise NotImplementedError

    def asymptotics(self) -> Optional[Asymptotics]:
        """Closed-form limit data; None when the family has no gap law."""
        return None


class GeometricFamily(Family):
    """Elements base * ratio**k for all integers k."""

    name = "geometric"

    def __init__(self, base: float = 1.0, ratio: float = 2.0):
        if base <= 0 or ratio <= 1:
            raise ValueError("geometric family needs base > 0 and ratio > 1")
        self.base = float(base)
        self.ratio = float(ratio)

    def params(self) -> dict:
        return {"base": self.base, "ratio": self.ratio}

    def _k(self, x: float) -> float:
        return math.log(x / self.base) / math.log(self.ratio)

    def intervals_between(self, lo, hi):
        k_lo = math.ceil(self._k(lo) - 1e-12)
        k_hi = math.floor(self._k(hi) + 1e-12)
        pts = [self.base * self.ratio**k for k in range(k_lo, k_hi + 1)]
        return [(p, p) for p in pts if lo <= p <= hi]

    def largest_point_below(self, x):
        k = math.floor(self._k(x) + 1e-12)
        return self.base * self.ratio**k

    def asymptotics(self):
        return _asym_from_gap_ratio(self.ratio, self.ratio, True, True)


class BlocksFamily(Family):
    """Interval blocks [beta**k, alpha * beta**k] for all integers k."""

    name = "blocks"

    def __init__(self, alpha: float = 2.0, beta: float = 0.25):
        if not (0 < beta < 1) or alpha <= 1 or alpha * beta >= 1:
            raise ValueError("blocks need 0 < beta < 1 < alpha with alpha*beta < 1")
        self.alpha = float(alpha)
        self.beta = float(beta)

    def params(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta}

    def intervals_between(self, lo, hi):
        # block k = [beta**k, alpha*beta**k] meets [lo, hi] iff
        # beta**k <= hi and alpha*beta**k >= lo (log(beta) < 0 flips divisions)
        lb = math.log(self.beta)
        k_min = math.ceil(math.log(hi) / lb - 1e-12)
        k_max = math.floor(math.log(lo / self.alpha) / lb + 1e-12)
        out = []
        for k in range(k_min, k_max + 1):
            a = self.beta**k
            b = self.alpha * a
            a2, b2 = max(a, lo), min(b, hi)
            if a2 <= b2:
                out.append((a2, b2))
        out.sort()
        return out

    def largest_point_below(self, x):
        # either x lies inside a block, or take the nearest block top below x
        lb = math.log(self.beta)
        k_guess = round(math.log(x / self.alpha) / lb)
        best = None
        for kk in range(k_guess - 3, k_guess + 4):
            a = self.beta**kk
            b = self.alpha * a
            if a <= x <= b:
                return x
            if b <= x and (best is None or b > best):
                best = b
        return best

    def asymptotics(self):
        ratio = 1.0 / (self.alpha * self.beta)
        return _asym_from_gap_ratio(ratio, ratio, True, True)


class SuperGeometricFamily(Family):
    """Elements exp(-m**power) for m = 1, 2, ...; gap ratios diverge near 0."""

    name = "super_geometric"

    def __init__(self, power: float = 2.0):
        if power <= 1:
            raise ValueError("super-geometric family needs power > 1")
        self.power = float(power)

    def params(self) -> dict:
        return {"power": self.power}

    def _element(self, m: int) -> float:
        return math.exp(-float(m) ** self.power)

    def intervals_between(self, lo, hi):
        out = []
        m = 1
        while True:
            e = self._element(m)
            if e < lo:
                break
            if e <= hi:
                out.append((e, e))
            m += 1
            if m > 100_000:
                break
        out.sort()
        return out

    def largest_point_below(self, x):
        m = 1
        while self._element(m) > x:
            m += 1
            if m > 100_000:
                return None
        e = self._element(m)
        return e if e > 0 else None

    def asymptotics(self):
        return _asym_from_gap_ratio(INF, INF, True, False)


class FullRayFamily(Family):
    """The whole half-line (0, ∞)."""

    name = "full_ray"

    def params(self) -> dict:
        return {}

    def intervals_between(self, lo, hi):
        return [(lo, hi)] if lo <= hi else []

    def largest_point_below(self, x):
        return x

    def asymptotics(self):
        return _asym_from_gap_ratio(1.0, 1.0, True, True)


class GapComplementFamily(Family):
    """Complement of finitely many listed gaps (a_m, b_m), continuing with a
    diverging gap-ratio law below the listed prefix.

    Concretely A = (0, a_last] ∪ ⋃ [b_{m+1}, a_m] ∪ [b_first, ∞): everything
    except the open gaps.  ``ratio_diverges`` states the analytic law
    b_m/a_m → ∞, which fixes the asymptotic verdicts.
    """

    name = "gap_complement"

    def __init__(self, gaps: Sequence[tuple[float, float]], ratio_diverges: bool = True):
        gaps = sorted((float(a), float(b)) for a, b in gaps)
        if not gaps:
            raise ValueError("need at least one gap")
        for a, b in gaps:
            if not (0 < a < b):
                raise ValueError("gaps must satisfy 0 < a < b")
        for (a1, b1), (a2, b2) in zip(gaps, gaps[1:]):
            if b1 > a2:
                raise ValueError("gaps must be disjoint")
        self.gaps = tuple(gaps)
        self.ratio_diverges = bool(ratio_diverges)

    def params(self) -> dict:
        return {"gaps": [list(g) for g in self.gaps], "ratio_diverges": self.ratio_diverges}

    def _complement_intervals(self) -> list[tuple[float, float]]:
        out = [(0.0, self.gaps[0][0])]
        for (a1, b1), (a2, b2) in zip(self.gaps, self.gaps[1:]):
            out.append((b1, a2))
        out.append((self.gaps[-1][1], INF))
        return out

    def intervals_between(self, lo, hi):
        out = []
        for a, b in self._complement_intervals():
            a2, b2 = max(a, lo), min(b, hi)
            if a2 <= b2:
                out.append((a2, b2))
        return out

    def largest_point_below(self, x):
        best = None
        for a, b in self._complement_intervals():
            if a >= x:
                break
            best = min(b, x)
        return best

    def asymptotics(self):
        if not self.ratio_diverges:
            return None
        # finitely many gaps above any point and a solid ray at the top, so
        # the index at infinity vanishes; the diverging law drives the zero end
        return _asym_from_gap_ratio(INF, INF, True, True, ratio_sup_at_inf=1.0)


class RescaledFamily(Family):
    """Image of a family under x -> alpha * x**beta (alpha, beta > 0)."""

    name = "rescaled"

    def __init__(self, inner: Family, alpha: float, beta: float):
        if alpha <= 0 or beta <= 0:
            raise ValueError("rescaling needs alpha > 0 and beta > 0")
        self.inner = inner
        self.alpha = float(alpha)
        self.beta = float(beta)

    def params(self) -> dict:
        return {"inner": {"name": self.inner.name, "params": self.inner.params()},
                "alpha": self.alpha, "beta": self.beta}

    def _fwd(self, x: float) -> float:
        return self.alpha * x**self.beta if not math.isinf(x) else INF

    def _inv(self, y: float) -> float:
        return (y / self.alpha) ** (1.0 / self.beta) if not math.isinf(y) else INF

    def intervals_between(self, lo, hi):
        inner = self.inner.intervals_between(self._inv(lo), self._inv(hi))
        return [(self._fwd(a), self._fwd(b)) for a, b in inner]

    def largest_point_below(self, x):
        p = self.inner.largest_point_below(self._inv(x))
        return None if p is None else self._fwd(p)

    def asymptotics(self):
        a = self.inner.asymptotics()
        if a is None:
            return None

        def tr_ratio(r: float) -> float:
            return INF if math.isinf(r) else r**self.beta

        def tr_index(i: float) -> float:
            return INF if math.isinf(i) else (1.0 + i) ** self.beta - 1.0

        i0 = tr_index(a.i0) if a.accumulates_at_zero else INF
        i_inf = tr_index(a.i_inf) if a.accumulates_at_inf else INF
        p0 = 1.0 if math.isinf(i0) else i0 / (1.0 + i0)
        return Asymptotics(p0, i0, i_inf, tr_ratio(a.gap_ratio_sup),
                           a.accumulates_at_zero, a.accumulates_at_inf)


_FAMILY_REGISTRY = {
    "geometric": GeometricFamily,
    "blocks": BlocksFamily,
    "super_geometric": SuperGeometricFamily,
    "full_ray": FullRayFamily,
}


def family_from_json(doc: dict) -> Family:
    name = doc.get("name")
    params = {k: v for k, v in doc.get("params", {}).items()}
    if name == "gap_complement":
        return GapComplementFamily([(float(a), float(b)) for a, b in params["gaps"]],
                                   bool(params.get("ratio_diverges", True)))
    if name == "rescaled":
        inner = family_from_json(params["inner"])
        return RescaledFamily(inner, float(params["alpha"]), float(params["beta"]))
    if name in _FAMILY_REGISTRY:
        return _FAMILY_REGISTRY[name](**{k: float(v) for k, v in params.items()})
    raise ValueError(f"unknown family {name!r}")


# -- the radius set ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RadiusSet:
    """A subset of (0, ∞) with a finite scan window [lo, hi]."""

    form: str  # "elements" | "intervals" | "family"
    window: tuple[float, float]
    elements: tuple[float, ...] = ()
    intervals: tuple[tuple[float, float], ...] = ()
    family: Optional[Family] = None

    def __post_init__(self):
        lo, hi = (float(v) for v in self.window)
        object.__setattr__(self, "window", (lo, hi))
        if not (0 < lo < hi):
            raise ValueError("window must satisfy 0 < lo < hi")
        if self.form == "elements":
            elems = tuple(sorted(float(e) for e in self.elements))
            if not elems:
                raise ValueError("element form needs a nonempty list")
            if elems[0] <= 0:
                raise ValueError("all elements must be positive")
            object.__setattr__(self, "elements", elems)
        elif self.form == "intervals":
            ivs = sorted((float(a), float(b)) for a, b in self.intervals)
            if not ivs:
                raise ValueError("interval form needs a nonempty list")
            for a, b in ivs:
                if not (a >= 0 and b > a):
                    raise ValueError("intervals must satisfy 0 <= a < b")
            for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
                if b1 >= a2:
                    raise ValueError("intervals must be disjoint and separated")
            object.__setattr__(self, "intervals", tuple(ivs))
        elif self.form == "family":
            if self.family is None:
                raise ValueError("family form needs a family descriptor")
        else:
            raise ValueError(f"unknown form {self.form!r}")

    # profile of A on (0, hi], anchored at the largest point <= window lo
    def _profile(self) -> tuple[list[tuple[float, float]], Optional[float]]:
        lo, hi = self.window
        if self.form == "elements":
            pts = [e for e in self.elements if e <= hi]
            return [(p, p) for p in pts], (pts[0] if pts else None)
        if self.form == "intervals":
            out = []
            for a, b in self.intervals:
                if a > hi:
                    break
                out.append((a, min(b, hi)))
            return out, (out[0][0] if out else None)
        anchor = self.family.largest_point_below(lo)
        # widen the query a hair: rescaled families round-trip their bounds
        # through x -> alpha*x**beta, which can land one ulp past the anchor
        base = anchor * (1.0 - 1e-9) if anchor is not None else lo
        ivs = self.family.intervals_between(base, hi)
        return ivs, (ivs[0][0] if ivs else None)

    def window_gaps(self) -> list[dict]:
        """Maximal complementary gaps relevant to the window.

        Each gap is a dict with lo, hi (hi capped at the window top),
        ``right_is_element`` and ``headless`` (no set point below the gap).
        """
        lo, hi = self.window
        ivs, first = self._profile()
        gaps: list[dict] = []
        if first is None:
            gaps.append({"lo": 0.0, "hi": hi, "right_is_element": False, "headless": True})
            return gaps
        if first > lo:
            gaps.append({"lo": 0.0, "hi": min(first, hi), "right_is_element": True, "headless": True})
        prev_hi = None
        for a, b in ivs:
            if prev_hi is not None and a > prev_hi:
                if a > lo:  # gaps entirely below the window never constrain it
                    gaps.append({"lo": prev_hi, "hi": min(a, hi), "right_is_element": True,
                                 "headless": False})
            prev_hi = b if prev_hi is None else max(prev_hi, b)
        if prev_hi is not None and prev_hi < hi:
            gaps.append({"lo": prev_hi, "hi": hi, "right_is_element": False, "headless": False})
        return gaps

    def asymptotics(self) -> Optional[Asymptotics]:
        if self.form == "elements":
            ratios = [b / a for a, b in zip(self.elements, self.elements[1:])]
            sup = max(ratios) if ratios else 1.0
            return Asymptotics(1.0, INF, INF, sup, False, False)
        if self.form == "intervals":
            acc0 = self.intervals[0][0] == 0.0
            acc_inf = math.isinf(self.intervals[-1][1])
            ratios = [n_lo / p_hi for (_, p_hi), (n_lo, _) in zip(self.intervals, self.intervals[1:])]
            sup = max(ratios) if ratios else 1.0
            i0 = 0.0 if acc0 else INF
            i_inf = 0.0 if acc_inf else INF
            p0 = 0.0 if acc0 else 1.0
            return Asymptotics(p0, i0, i_inf, sup, acc0, acc_inf)
        return self.family.asymptotics()

    def intersects_open_interval(self, a: float, b: float) -> bool:
        """Whether A meets the open interval (a, b); exact for all forms."""
        if self.form == "elements":
            return any(a < e < b for e in self.elements)
        if self.form == "intervals":
            return any(x < b and y > a for x, y in self.intervals)
        ivs = self.family.intervals_between(a, b)
        return any(y > a and x < b and (x < y or a < x < b) for x, y in ivs)


# -- operations ----------------------------------------------------------------


@dataclass(frozen=True)
class GapConstantResult:
    value: float
    witness_gap: Optional[tuple[float, float]]
    caveats: tuple[str, ...]


def gap_constant(a: RadiusSet) -> GapConstantResult:
    """Minimal C with [x/C, x] ∩ A nonempty for every window x.

    The supremum runs over window points just below each complementary gap's
    top; +∞ when some window point has no set point at or below it.
    """
    lo, hi = a.window
    caveats: list[str] = []
    best = 1.0
    witness = None
    for g in a.window_gaps():
        g_hi = min(g["hi"], hi)
        if g_hi <= lo and g["right_is_element"]:
            continue
        if g["headless"]:
            asym = a.asymptotics()
            if asym is None:
                caveats.append("window-limited: no set points found below the window")
            return GapConstantResult(INF, (g["lo"], g_hi), tuple(caveats))
        ratio = g_hi / g["lo"]
        if not g["right_is_element"]:
            caveats.append("window-limited: top gap capped at the window edge")
        if ratio > best:
            best = ratio
            witness = (g["lo"], g_hi)
    return GapConstantResult(best, witness, tuple(caveats))


@dataclass(frozen=True)
class LogEpsNetResult:
    eps_star: float
    witness_gap: Optional[tuple[float, float]]
    caveats: tuple[str, ...]


def log_eps_net(a: RadiusSet) -> LogEpsNetResult:
    """Half of the largest gap of ln(A) inside the log-window.

    ln(A) is an ε-net of the log-window for every ε above this infimum; +∞
    when the gap constant is +∞.
    """
    g = gap_constant(a)
    if math.isinf(g.value):
        return LogEpsNetResult(INF, g.witness_gap, g.caveats)
    return LogEpsNetResult(0.5 * math.log(g.value), g.witness_gap, g.caveats)


@dataclass(frozen=True)
class PorosityEstimate:
    p0_window: float
    i0_window: float
    i_inf_window: float
    p0: Optional[float]
    i0: Optional[float]
    i_inf: Optional[float]
    caveats: tuple[str, ...]


def porosity(a: RadiusSet) -> PorosityEstimate:
    """Window porosity from the gap list plus asymptotic values when known.

    The window estimates maximize gap-length ratios over the same gap list,
    which makes the identity i0 = p0/(1-p0) exact by construction.
    """
    lo, hi = a.window
    caveats: list[str] = []
    p0_w = 0.0
    i0_w = 0.0
    for g in a.window_gaps():
        g_hi = min(g["hi"], hi)
        if g["headless"]:
            p0_w = max(p0_w, 1.0)
            i0_w = INF
            caveats.append("window gap with no set point below; window indices saturate")
            continue
        length = g_hi - g["lo"]
        p0_w = max(p0_w, length / g_hi)
        i0_w = max(i0_w, length / g["lo"])
    asym = a.asymptotics()
    if asym is None:
        caveats.append("window-limited: no analytic gap law; asymptotic values unknown")
        return PorosityEstimate(p0_w, i0_w, i0_w, None, None, None, tuple(caveats))
    return PorosityEstimate(p0_w, i0_w, i0_w, asym.p0, asym.i0, asym.i_inf, tuple(caveats))


def longest_gap_length(a: RadiusSet, h: float) -> float:
    """Length of the longest complementary gap inside [window-base, h]."""
    lo, hi = a.window
    if not (lo <= h <= hi):
        raise ValueError("h must lie inside the window")
    best = 0.0
    for g in a.window_gaps():
        if g["headless"]:
            g_lo = 0.0
        else:
            g_lo = g["lo"]
        if g_lo >= h:
            continue
        best = max(best, min(g["hi"], h) - g_lo)
    return best


@dataclass(frozen=True)
class Classification:
    favorable_all_open: str  # "yes" | "no" | "window-limited"
    favorable_bounded: str
    gap_constant: float
    eps_star: float
    p0: float
    i0: float
    i_inf: float
    caveats: tuple[str, ...]

    def to_json(self) -> dict:
        def enc(x: float):
            return "inf" if math.isinf(x) else x

        return {
            "favorable_all_open": self.favorable_all_open,
            "favorable_bounded": self.favorable_bounded,
            "gap_constant": enc(self.gap_constant),
            "eps_star": enc(self.eps_star),
            "p0": enc(self.p0),
            "i0": enc(self.i0),
            "i_inf": enc(self.i_inf),
            "caveats": list(self.caveats),
        }


def classify(a: RadiusSet) -> Classification:
    """Favorability verdicts via three provably equivalent criteria.

    For all open sets: finite gap constant ≡ ln(A) an ε-net ≡ both porosity
    indices finite.  The three are evaluated independently; disagreement is a
    bug and raises.  For bounded domains the verdict is p0 < 1.
    """
    gc = gap_constant(a)
    en = log_eps_net(a)
    por = porosity(a)
    asym = a.asymptotics()
    caveats = list(dict.fromkeys(gc.caveats + en.caveats + por.caveats))

    if asym is None:
        return Classification(
            "window-limited", "window-limited", gc.value, en.eps_star,
            por.p0_window, por.i0_window, por.i_inf_window, tuple(caveats),
        )

    # criterion 1: gap constant over all of (0, ∞)
    c1 = asym.accumulates_at_zero and asym.accumulates_at_inf and not math.isinf(asym.gap_ratio_sup)
    # criterion 2: ln(A) an ε-net of the whole line for some finite ε
    if asym.accumulates_at_zero and asym.accumulates_at_inf:
        eps_asym = INF if math.isinf(asym.gap_ratio_sup) else 0.5 * math.log(asym.gap_ratio_sup)
    else:
        eps_asym = INF
    c2 = not math.isinf(eps_asym)
    # criterion 3: porosity indices at both ends
    c3 = max(asym.i0, asym.i_inf) < INF
    if not (c1 == c2 == c3):
        raise RuntimeError(
            f"equivalent favorability criteria disagree (gap={c1}, net={c2}, index={c3}); "
            "this indicates an internal bug"
        )
    return Classification(
        "yes" if c1 else "no",
        "yes" if asym.p0 < 1.0 else "no",
        gc.value,
        en.eps_star,
        asym.p0,
        asym.i0,
        asym.i_inf,
        tuple(caveats),
    )


def rescale(a: RadiusSet, alpha: float, beta: float) -> RadiusSet:
    """The set {alpha * x**beta : x ∈ A} with its window transformed."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("rescaling needs alpha > 0 and beta > 0")

    def f(x: float) -> float:
        return INF if math.isinf(x) else alpha * x**beta

    lo, hi = a.window
    window = (f(lo), f(hi))
    if a.form == "elements":
        return RadiusSet("elements", window, elements=tuple(f(e) for e in a.elements))
    if a.form == "intervals":
        return RadiusSet("intervals", window, intervals=tuple((f(x), f(y)) for x, y in a.intervals))
    if alpha == 1.0 and beta == 1.0:
        return RadiusSet("family", window, family=a.family)
    return RadiusSet("family", window, family=RescaledFamily(a.family, alpha, beta))


# -- JSON ------------------------------------------------------------------------


def radius_set_to_json(a: RadiusSet) -> dict:
    doc: dict = {"form": a.form, "window": [repr(a.window[0]), repr(a.window[1])]}
    if a.form == "elements":
        doc["elements"] = [repr(e) for e in a.elements]
    elif a.form == "intervals":
        doc["intervals"] = [[repr(x), "inf" if math.isinf(y) else repr(y)] for x, y in a.intervals]
    else:
        doc["family"] = {"name": a.family.name, "params": a.family.params()}
    return doc


def radius_set_from_json(doc: dict) -> RadiusSet:
    form = doc.get("form")
    window = tuple(float(v) for v in doc["window"])
    if form == "elements":
        return RadiusSet("elements", window, elements=tuple(float(e) for e in doc.get("elements", [])))
    if form == "intervals":
        ivs = tuple(
            (float(x), INF if y in ("inf", "Infinity") else float(y)) for x, y in doc.get("intervals", [])
        )
        return RadiusSet("intervals", window, intervals=ivs)
    if form == "family":
        return RadiusSet("family", window, family=family_from_json(doc["family"]))
    raise ValueError(f"unknown radius set form {form!r}")
