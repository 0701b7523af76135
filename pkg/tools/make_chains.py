"""Generate the synthetic option-chain CSVs under data/chains/.

Each file is one quote date.  Quotes are Black-Scholes prices off a linear
smile in log-moneyness whose normalized 25-delta slope follows an exact
power law s(t) = -A * t**B, so the calibration pipeline should recover B
(up to strike-grid discretization) and map it back to a jump index.
The linear smile makes the recovered two-point slope independent of which
strikes bracket the delta targets.
"""

from __future__ import annotations

import csv
import math
from datetime import date, timedelta
from pathlib import Path

SPOT = 4500.0
VIX = 20.0
SLOPE_A = 0.55
SLOPE_B = -0.31          # target Y_mixed = 1 - 2B = 1.62
QUOTE_DATES = (date(2023, 3, 1), date(2023, 3, 2), date(2023, 3, 3))
EXPIRY_DAYS = (3, 7, 14, 21, 30, 45, 60, 91, 120, 150, 182)
STRIKE_STEP = 5.0
SPREAD = 0.10


def _phi_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _call_price(forward: float, strike: float, t: float, vol: float) -> float:
    k = math.log(strike / forward)
    v = vol * math.sqrt(t)
    d1 = (-k + 0.5 * v * v) / v
    return forward * _phi_cdf(d1) - strike * _phi_cdf(d1 - v)


def _smile_vol(k: float, t: float) -> float:
    atm = 0.18 + 0.02 * math.sqrt(t)
    slope = -SLOPE_A * t ** SLOPE_B * (VIX / 100.0)
    return max(atm + slope * k, 0.05)


def _strikes(t: float) -> list[float]:
    # wide enough that both 25-delta points sit inside the grid
    half_width = max(4.0 * 0.25 * math.sqrt(t), 0.02)
    lo = SPOT * math.exp(-1.6 * half_width)
    hi = SPOT * math.exp(0.9 * half_width)
    first = math.floor(lo / STRIKE_STEP) * STRIKE_STEP
    out = []
    k = first
    while k <= hi:
        if k > 0:
            out.append(k)
        k += max(STRIKE_STEP, STRIKE_STEP * round(SPOT / 4500.0))
    return out


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "data" / "chains"
    out_dir.mkdir(parents=True, exist_ok=True)
    for qd in QUOTE_DATES:
        path = out_dir / f"{qd.isoformat()}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(
                ["quote_date", "expiry_date", "type", "strike", "bid", "ask", "vix"]
            )
            for days in EXPIRY_DAYS:
                expiry = qd + timedelta(days=days)
                t = days / 365.0
                for strike in _strikes(t):
                    k = math.log(strike / SPOT)
                    vol = _smile_vol(k, t)
                    call = _call_price(SPOT, strike, t, vol)
                    put = call - (SPOT - strike)
                    for kind, mid in (("C", call), ("P", put)):
                        bid = max(mid - SPREAD / 2.0, 0.0)
                        ask = mid + SPREAD / 2.0
                        w.writerow(
                            [
                                qd.isoformat(),
                                expiry.isoformat(),
                                kind,
                                f"{strike:.1f}",
                                f"{bid:.4f}",
                                f"{ask:.4f}",
                                f"{VIX:.1f}",
                            ]
                        )
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
