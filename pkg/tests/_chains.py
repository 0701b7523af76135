"""Synthetic option-chain builders shared by the pipeline, CLI, and
acceptance tests.

Two generators: an exact Black-Scholes chain (known forward and flat vol,
for parser/forward/smile unit tests) and a Monte Carlo chain quoted off
smile_mc implied vols (for the end-to-end closure)."""

from __future__ import annotations

import csv
import datetime as dt
import math
import warnings

from levyskew.blackscholes import Quote, bs_price_greeks
from levyskew.models import ModelSpec
from levyskew.montecarlo import McConfig, smile_mc

HEADER = ["quote_date", "expiry_date", "type", "strike", "bid", "ask", "vix"]


def write_rows(path, rows) -> str:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(HEADER)
        w.writerows(rows)
    return str(path)


def bs_chain_rows(
    quote_date: dt.date,
    expiry_days: list[int],
    strikes: list[float],
    sigma: float = 0.2,
    forward: float = 100.0,
    vix: float = 20.0,
    spread: float = 0.0,
):
    """Flat-vol chain rows priced at the exact Black-Scholes values."""
    rows = []
    for d in expiry_days:
        t = d / 365.0
        expiry = quote_date + dt.timedelta(days=d)
        for k in strikes:
            for kind in ("C", "P"):
                q = Quote(spot=forward, strike=k, maturity=t, vol=sigma,
                          kind="call" if kind == "C" else "put")
                px = bs_price_greeks(q)["price"]
                rows.append((quote_date.isoformat(), expiry.isoformat(), kind,
                             f"{k:.6f}", f"{px - spread:.10f}",
                             f"{px + spread:.10f}", f"{vix:.2f}"))
    return rows


def mc_chain_rows(
    model: ModelSpec,
    quote_date: dt.date,
    expiry_days: list[int],
    kappas: list[float],
    n_paths: int,
    seed_base: int,
    vix: float = 16.5,
    n_steps: int = 200,
):
    """Chain rows quoted at Black-Scholes prices of Monte Carlo implied vols.

    Spot and forward are 1 (martingale, zero rates), strikes e^kappa.  One
    seed per expiry so maturities are independent draws.
    """
    rows = []
    for d in expiry_days:
        t = d / 365.0
        cfg = McConfig(n_paths=n_paths, seed=seed_base + d,
                       chunk_size=250_000, n_steps=n_steps)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            triples = smile_mc(model, t, kappas, cfg)
        expiry = quote_date + dt.timedelta(days=d)
        for kappa, iv, _se in triples:
            strike = math.exp(kappa)
            for kind in ("C", "P"):
                q = Quote(spot=1.0, strike=strike, maturity=t, vol=iv,
                          kind="call" if kind == "C" else "put")
                px = bs_price_greeks(q)["price"]
                rows.append((quote_date.isoformat(), expiry.isoformat(), kind,
                             f"{strike:.10f}", f"{px:.12f}", f"{px:.12f}",
                             f"{vix:.2f}"))
    return rows
