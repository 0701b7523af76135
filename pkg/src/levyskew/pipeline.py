"""Option-chain pipeline: forwards, OTM smiles, 25-delta skew, calibration.

Reproduces the empirical procedure end to end: load a chain snapshot,
recover the implied forward per expiry from put-call parity at the
closest-parity strike, invert OTM quotes into a smile, measure the
25-delta skew normalized by the volatility index level, regress log-skew
on log-maturity, and map the power-law exponent to the jump-activity
index under either model reading.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Literal

import numpy as np

from .blackscholes import implied_vol
from .errors import (
    InsufficientQuotes,
    MissingWing,
    OutOfBounds,
    ParseError,
    SchemaError,
    SignMixError,
)

__all__ = [
    "OptionQuote",
    "ChainSnapshot",
    "SkewSeries",
    "PowerLawFit",
    "load_chain",
    "implied_forward",
    "build_otm_smile",
    "skew_point",
    "skew_series",
    "fit_powerlaw",
    "calibrate_Y",
    "MIN_MATURITY_YEARS",
]

MIN_MATURITY_YEARS = 5.0 / 365.0  # drop expiries under five calendar days
_DAYS_PER_YEAR = 365.0            # ACT/365

_HEADER = ["quote_date", "expiry_date", "type", "strike", "bid", "ask", "vix"]


@dataclass(frozen=True)
class OptionQuote:
    strike: float
    kind: Literal["C", "P"]
    bid: float
    ask: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.bid + self.ask)


@dataclass(frozen=True)
class ChainSnapshot:
    quote_date: date
    vix: float  # index level in vol points, e.g. 18.5
    expiries: tuple[tuple[date, tuple[OptionQuote, ...]], ...]

    def maturity(self, expiry: date) -> float:
        return (expiry - self.quote_date).days / _DAYS_PER_YEAR

    def quotes_for(self, expiry: date) -> tuple[OptionQuote, ...]:
        for exp, quotes in self.expiries:
            if exp == expiry:
                return quotes
        raise InsufficientQuotes(f"no quotes for expiry {expiry}")


@dataclass(frozen=True)
class SkewSeries:
    quote_date: date
    points: tuple[tuple[float, float], ...]  # (t years, normalized skew)


@dataclass(frozen=True)
class PowerLawFit:
    slope_b: float
    intercept: float
    r_squared: float
    n_points: int


def load_chain(path: str) -> ChainSnapshot:
    """Parse one snapshot CSV; crossed rows are rejected with diagnostics.

    The file must carry a single quote date and a single VIX level; rows
    with ask < bid are skipped (warned per line), malformed fields raise
    ParseError with the offending line number.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if [h.strip() for h in header] != _HEADER:
            raise SchemaError(
                f"{path}: expected header {','.join(_HEADER)}, got {','.join(header)}"
            )

        quote_date: date | None = None
        vix: float | None = None
        by_expiry: dict[date, list[OptionQuote]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(_HEADER):
                raise ParseError(f"expected {len(_HEADER)} fields, got {len(row)}", line=lineno)
            try:
                qd = date.fromisoformat(row[0].strip())
                ed = date.fromisoformat(row[1].strip())
                kind = row[2].strip()
                strike = float(row[3])
                bid = float(row[4])
                ask = float(row[5])
                row_vix = float(row[6])
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
            if kind not in ("C", "P"):
                raise ParseError(f"type must be C or P, got {kind!r}", line=lineno)
            if strike <= 0 or bid < 0:
                raise ParseError("strike must be positive and bid nonnegative", line=lineno)
            if quote_date is None:
                quote_date, vix = qd, row_vix
            elif qd != quote_date:
                raise ParseError(
                    f"mixed quote dates {quote_date} and {qd} in one snapshot", line=lineno
                )
            elif row_vix != vix:
                raise ParseError(f"inconsistent vix {vix} vs {row_vix}", line=lineno)
            if ask < bid:
                warnings.warn(f"{path} line {lineno}: crossed market, row skipped", stacklevel=2)
                continue
            if ed <= qd:
                raise ParseError("expiry must be after the quote date", line=lineno)
            by_expiry.setdefault(ed, []).append(OptionQuote(strike, kind, bid, ask))

    if quote_date is None or vix is None:
        raise SchemaError(f"{path}: no data rows")
    expiries = tuple(
        (exp, tuple(sorted(by_expiry[exp], key=lambda q: (q.strike, q.kind))))
        for exp in sorted(by_expiry)
    )
    return ChainSnapshot(quote_date=quote_date, vix=vix, expiries=expiries)


def implied_forward(snapshot: ChainSnapshot, expiry: date) -> float:
    """Forward from parity at the strike where call and put mids are closest.

    F = K* + (C(K*) - P(K*)) under zero rates; ties resolve to the lower
    strike.
    """
    quotes = snapshot.quotes_for(expiry)
    calls = {q.strike: q.mid for q in quotes if q.kind == "C"}
    puts = {q.strike: q.mid for q in quotes if q.kind == "P"}
    shared = sorted(set(calls) & set(puts))
    if not shared:
        raise InsufficientQuotes(
            f"expiry {expiry}: no strike quotes both a call and a put"
        )
    k_star = min(shared, key=lambda k: (abs(calls[k] - puts[k]), k))
    return k_star + calls[k_star] - puts[k_star]


def build_otm_smile(
    snapshot: ChainSnapshot, expiry: date, forward: float
) -> list[tuple[float, float]]:
    """OTM smile as (kappa = ln(K/F), implied vol), sorted by kappa.

    Puts cover K <= F, calls strictly K > F; quotes whose mid violates
    price bounds are skipped with a warning.
    """
    t = snapshot.maturity(expiry)
    smile = []
    for q in snapshot.quotes_for(expiry):
        wanted = "C" if q.strike > forward else "P"
        if q.kind != wanted:
            continue
        kind = "call" if q.kind == "C" else "put"
        try:
            vol = implied_vol(q.mid, forward, q.strike, t, kind)
        except OutOfBounds:
            warnings.warn(
                f"expiry {expiry} strike {q.strike}: mid outside bounds, skipped",
                stacklevel=2,
            )
            continue
        smile.append((math.log(q.strike / forward), vol))
    return sorted(smile)


def _call_delta(kappa: float, vol: float, t: float) -> float:
    # forward-measure call delta Phi(d1) with spot = forward
    d1 = (-kappa + 0.5 * vol * vol * t) / (vol * math.sqrt(t))
    return 0.5 * math.erfc(-d1 / math.sqrt(2.0))


def _locate_25delta(
    smile: list[tuple[float, float]],
    t: float,
    wing: Literal["call", "put"],
    mode: Literal["interp", "nearest"],
) -> tuple[float, float]:
    """(kappa, vol) where call delta = 0.25 (call wing) or 0.75 (put wing).

    Call delta decreases in strike, so the target is bracketed on the
    monotone delta-in-strike profile; "interp" blends kappa and vol linearly
    inside the bracket, "nearest" snaps to the closer quoted strike.
    """
    target = 0.25 if wing == "call" else 0.75
    pts = [(k, v, _call_delta(k, v, t)) for k, v in smile]
    if len(pts) < 2:
        raise MissingWing(f"{wing} wing: fewer than two usable quotes")
    for (k0, v0, d0), (k1, v1, d1) in zip(pts, pts[1:]):
        lo, hi = (d1, d0) if d0 >= d1 else (d0, d1)
        if lo <= target <= hi:
            if mode == "nearest":
                return (k0, v0) if abs(d0 - target) <= abs(d1 - target) else (k1, v1)
            if d0 == d1:
                return k0, v0
            w = (target - d0) / (d1 - d0)
            return k0 + w * (k1 - k0), v0 + w * (v1 - v0)
    raise MissingWing(f"{wing} wing: 25-delta point not bracketed by the strike grid")


def skew_point(
    snapshot: ChainSnapshot,
    expiry: date,
    mode: Literal["interp", "nearest"] = "interp",
) -> float:
    """Normalized 25-delta skew for one expiry.

    (vol at the 25-delta call strike minus vol at the 25-delta put strike)
    over the kappa gap, divided by VIX/100.
    """
    t = snapshot.maturity(expiry)
    forward = implied_forward(snapshot, expiry)
    smile = build_otm_smile(snapshot, expiry, forward)
    k_call, v_call = _locate_25delta(smile, t, "call", mode)
    k_put, v_put = _locate_25delta(smile, t, "put", mode)
    if k_call == k_put:
        raise MissingWing("25-delta strikes coincide; no slope defined")
    return (v_call - v_put) / (k_call - k_put) / (snapshot.vix / 100.0)


def skew_series(
    snapshots: Iterable[ChainSnapshot],
    mode: Literal["interp", "nearest"] = "interp",
) -> list[SkewSeries]:
    """One skew term-structure per snapshot date.

    Expiries under the five-day floor are dropped; expiries whose wings
    cannot be located are skipped with a warning rather than failing the
    whole date.
    """
    out = []
    for snap in snapshots:
        points = []
        for expiry, _ in snap.expiries:
            t = snap.maturity(expiry)
            if t < MIN_MATURITY_YEARS:
                continue
            try:
                points.append((t, skew_point(snap, expiry, mode)))
            except (MissingWing, InsufficientQuotes) as exc:
                warnings.warn(f"{snap.quote_date} expiry {expiry}: {exc}", stacklevel=2)
        out.append(SkewSeries(quote_date=snap.quote_date, points=tuple(sorted(points))))
    return out


def fit_powerlaw(series: SkewSeries, t_max: float) -> PowerLawFit:
    """OLS of ln|skew| on ln t over maturities up to t_max.

    The skew values must share one sign inside the window; a sign change is
    reported as SignMixError, never silently absorbed into the magnitudes.
    """
    window = [(t, s) for t, s in series.points if t <= t_max and s != 0.0]
    if len(window) < 3:
        raise InsufficientQuotes(
            f"need at least 3 maturities below t_max={t_max}, have {len(window)}"
        )
    signs = {math.copysign(1.0, s) for _, s in window}
    if len(signs) > 1:
        raise SignMixError("skew changes sign inside the regression window")
    log_t = np.log([t for t, _ in window])
    log_s = np.log([abs(s) for _, s in window])
    slope, intercept = np.polyfit(log_t, log_s, 1)
    fitted = slope * log_t + intercept
    ss_res = float(np.sum((log_s - fitted) ** 2))
    ss_tot = float(np.sum((log_s - log_s.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(
        slope_b=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        n_points=len(window),
    )


def calibrate_Y(fit: PowerLawFit, model_kind: Literal["purejump", "mixed"]) -> dict:
    """Map the power-law exponent b to the jump-activity index Y.

    Pure-jump reading: b = 1/2 - 1/Y, so Y = 2/(1 - 2b).  Mixed reading:
    b = (1 - Y)/2, so Y = 1 - 2b.  Both are reported along with regime
    flags; b outside (-1/2, 0) makes neither reading admissible.
    """
    if model_kind not in ("purejump", "mixed"):
        raise SchemaError(f"model_kind must be purejump or mixed, got {model_kind!r}")
    b = fit.slope_b
    flags = []
    if b >= 0.0:
        flags.append("b >= 0: consistent with continuous or jump-diffusion models")
    if b <= -0.5:
        flags.append("b <= -1/2: consistent with finite-variation jumps")
    admissible = not flags
    y_pj = 2.0 / (1.0 - 2.0 * b) if b < 0.5 else math.nan
    y_mixed = 1.0 - 2.0 * b
    return {
        "model_kind": model_kind,
        "Y": (y_pj if model_kind == "purejump" else y_mixed) if admissible else None,
        "Y_purejump": y_pj,
        "Y_mixed": y_mixed,
        "slope_b": b,
        "admissible": admissible,
        "regime_flags": flags,
    }
