"""Theta pairing over hypersurfaces and eta_e pairings over complete intersections.

Both are read off the finite-length tail of a Tor profile. Eta fits one polynomial per index
parity (degree < codim R) exactly, checks it on held-out indices, and takes the limit of the
alternating partial sums divided by n^e with closed-form sums.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import Poly, Rational, Symbol, interpolate, summation

from torvan.core.config import pairing_bound
from torvan.core.errors import Divergent, FitFailed, InvalidInput, NotHypersurface, NotStabilized, TailNotFiniteLength
from torvan.core.logging import logger
from torvan.services.module_service import FPModule
from torvan.services.resolution_service import TorProfile, tor_profile

_i = Symbol("i")
_m = Symbol("m")
_k = Symbol("k")
_n = Symbol("n")


def _fraction(x) -> Fraction:
    r = Rational(x)
    return Fraction(int(r.p), int(r.q))


@dataclass(frozen=True)
class PairingResult:
    kind: str
    value: Optional[Fraction]
    certificate: dict = field(default_factory=dict)
    e: Optional[int] = None

    @property
    def divergent(self) -> bool:
        return bool(self.certificate.get("divergence_flag"))


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------

def theta_from_profile(profile: TorProfile) -> PairingResult:
    R = profile.M.ring
    if not R.is_hypersurface:
        raise NotHypersurface(f"{R.describe()} has codimension {R.codim}", field="ring")
    B = profile.bound
    if B < 4:
        raise InvalidInput("theta needs bound >= 4", field="bound")
    window = list(range(B - 3, B + 1))
    entries = profile.entries
    if any(entries[i].dim > 0 for i in window):
        raise TailNotFiniteLength(f"Tor has positive dimension in the window {window}", field="M", window=window)
    lengths = {i: entries[i].length for i in window}
    if lengths[B - 3] != lengths[B - 1] or lengths[B - 2] != lengths[B]:
        raise NotStabilized(f"Tor lengths {lengths} are not 2-periodic yet; raise the bound", field="bound", bound=B)
    even = B if B % 2 == 0 else B - 1
    value = Fraction(lengths[even] - lengths[even - 1])
    cert = {
        "finite_length_from": profile.finite_length_from,
        "window": [B - 3, B],
        "even_length": lengths[even],
        "odd_length": lengths[even - 1],
        "periodic": profile.periodic,
        "divergence_flag": False,
    }
    return PairingResult("theta", value, cert)


def theta(M: FPModule, N: FPModule, bound: Optional[int] = None) -> PairingResult:
    R = M.ring
    if not R.is_hypersurface:
        raise NotHypersurface(f"{R.describe()} has codimension {R.codim}", field="ring")
    B = pairing_bound(R.dim, R.codim, bound)
    result = theta_from_profile(tor_profile(M, N, B))
    logger.info(f"[theta] {M.name or 'M'}, {N.name or 'N'}: {result.value}")
    return result


# ---------------------------------------------------------------------------
# eta
# ---------------------------------------------------------------------------

def _fit_parity(points: list[tuple[int, int]], degree: int):
    """Interpolate through the first degree+1 points; None if too few points."""
    use = points[: degree + 1]
    if len(use) < degree + 1:
        return None
    if len(use) == 1:
        return Rational(use[0][1])
    return interpolate(use, _i)


def _coefficients(expr) -> list[str]:
    coeffs = Poly(expr, _i).all_coeffs() if expr.free_symbols else [expr]
    return [str(_fraction(c)) for c in reversed(coeffs)]


def _alternating_sum(p_even, p_odd, lo: int):
    """Closed forms of sum_{i=lo}^{n} (-1)^i P_{i mod 2}(i) for n even and n odd, as polynomials in n."""
    m0 = (lo + 1) // 2
    m1 = lo // 2
    even_terms = p_even.subs(_i, 2 * _m)
    odd_terms = p_odd.subs(_i, 2 * _m + 1)
    # n = 2k: evens 2m for m0 <= m <= k, odds 2m+1 for m1 <= m <= k-1
    s_even = summation(even_terms, (_m, m0, _k)) - summation(odd_terms, (_m, m1, _k - 1))
    # n = 2k+1: both run to k
    s_odd = summation(even_terms, (_m, m0, _k)) - summation(odd_terms, (_m, m1, _k))
    return (s_even.subs(_k, _n / 2).expand(), s_odd.subs(_k, (_n - 1) / 2).expand())


def _limit(expr, e: int):
    """(degree in n, lim expr / n^e) with None for an infinite limit."""
    poly = Poly(expr, _n)
    deg = poly.degree() if not poly.is_zero else -1
    if deg > e:
        return deg, None
    if deg < e:
        return deg, Rational(0)
    return deg, poly.coeff_monomial(_n**e)


def eta_from_profile(
    profile: TorProfile,
    e: int,
    start: Optional[int] = None,
    allow_divergent: bool = False,
) -> PairingResult:
    if e < 1:
        raise InvalidInput("eta needs e >= 1", field="e")
    R = profile.M.ring
    c = R.codim
    B = profile.bound
    f = profile.finite_length_from
    degree = max(c - 1, 0)
    lo = B - 2 * c - 4
    if f is None or lo < 1 or f > lo:
        raise TailNotFiniteLength(
            f"Tor is not of finite length on the fit window starting at {lo}",
            field="M",
            finite_length_from=f,
            window=[lo, B - 2],
        )
    if start is not None and start < f:
        raise InvalidInput(f"start {start} precedes the finite-length tail at {f}", field="start")
    start = f if start is None else start
    lo = max(lo, start)
    entries = profile.entries
    # finite prefix: a constant, invisible after dividing by n^e
    prefix_sum = sum((-1) ** i * int(entries[i].length) for i in range(start, lo))
    window = list(range(lo, B - 1))
    validation = [B - 1, B]
    pts = {par: [(i, int(entries[i].length)) for i in window if i % 2 == par] for par in (0, 1)}
    fits = {par: _fit_parity(pts[par], degree) for par in (0, 1)}
    if fits[0] is None or fits[1] is None:
        raise FitFailed(f"fit window {window} too short for degree {degree}", field="bound", bound=B)
    for i in window + validation:
        expected = fits[i % 2].subs(_i, i)
        if expected != entries[i].length:
            raise FitFailed(
                f"length at index {i} is {entries[i].length}, fit predicts {expected}; raise the bound",
                field="bound",
                bound=B,
                index=i,
            )

    s_even, s_odd = _alternating_sum(fits[0], fits[1], lo)
    deg_even, lim_even = _limit(s_even, e)
    deg_odd, lim_odd = _limit(s_odd, e)
    divergent = lim_even is None or lim_odd is None or lim_even != lim_odd
    cert = {
        "finite_length_from": f,
        "start": start,
        "prefix_sum": prefix_sum,
        "fit_window": [window[0], window[-1]],
        "fit_polynomials": {"even": _coefficients(fits[0]), "odd": _coefficients(fits[1])},
        "validation_indices": validation,
        "partial_sum_degrees": {"even": deg_even, "odd": deg_odd},
        "divergence_flag": divergent,
    }
    if divergent:
        if allow_divergent:
            return PairingResult("eta", None, cert, e)
        raise Divergent(
            f"eta_{e} diverges: partial sums grow like n^{max(deg_even, deg_odd)} "
            f"(limits {lim_even} / {lim_odd})",
            field="e",
            certificate=cert,
        )
    return PairingResult("eta", _fraction(lim_even), cert, e)


def eta(
    M: FPModule,
    N: FPModule,
    e: int,
    bound: Optional[int] = None,
    start: Optional[int] = None,
    allow_divergent: bool = False,
) -> PairingResult:
    R = M.ring
    B = pairing_bound(R.dim, R.codim, bound)
    result = eta_from_profile(tor_profile(M, N, B), e, start, allow_divergent)
    logger.info(f"[eta] e={e} {M.name or 'M'}, {N.name or 'N'}: {result.value}")
    return result
