"""Write the bundled model parameter files under data/params/.

The four sets mirror the published configurations the test suite pins:
two pure-jump sets, the Brownian-component variant, and its Heston
counterpart with the fitted vol-of-vol.
"""

from __future__ import annotations

import json
from pathlib import Path

PARAMS = {
    "andersen.json": {
        "model": "ts",
        "C_plus": 0.0088,
        "C_minus": 0.0044,
        "G": 0.41,
        "M": 1.93,
        "Y": 1.5,
    },
    "kawai.json": {
        "model": "ts",
        "C_plus": 0.015,
        "C_minus": 0.041,
        "G": 2.318,
        "M": 4.025,
        "Y": 1.35,
    },
    "fig3_bm.json": {
        "model": "ts+bm",
        "C_plus": 0.0040,
        "C_minus": 0.0013,
        "G": 0.41,
        "M": 1.93,
        "Y": 1.5,
        "sigma": 0.1,
    },
    # vol-of-vol fitted so the second-order skew at t = 0.1 equals 0.305;
    # with spot vol 0.1 the positive-rho orientation carries the positive
    # leverage product the target requires
    "fig3_heston.json": {
        "model": "ts+heston",
        "C_plus": 0.0040,
        "C_minus": 0.0013,
        "G": 0.41,
        "M": 1.93,
        "Y": 1.5,
        "heston": {
            "v0": 0.01,
            "kappa": 3.0,
            "theta": 0.01,
            "xi_volvol": 0.411,
            "rho": 0.3,
        },
    },
}


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "data" / "params"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, doc in PARAMS.items():
        path = out_dir / name
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
