"""Record real service responses (exact bytes) for the pass-through tests.

Run from the repo root with the Python package installed:
    python3 frontend/tests/fixtures/generate.py
"""

import itertools
import json
import pathlib
import random

from fastapi.testclient import TestClient

from fdenvelope.families import fdx_select
from fdenvelope.service import create_app

PVALUES = [0.0, 0.004, 0.004, 0.02, 0.05, 0.21, 0.43, 0.43, 0.78, 0.97]
METHODS = ["simes-adaptive", "dkw", "bretagnolle-adaptive", "hsimes", "bretagnolle-sc1"]
ALPHAS = [0.1, 0.2]
GAMMAS = [0.05, 0.1, 0.25, 0.5, 0.9]
OUT = pathlib.Path(__file__).parent / "passthrough.json"


def main() -> None:
    client = TestClient(create_app())
    upload = client.post("/datasets", json={"pvalues": PVALUES})
    upload.raise_for_status()
    ds_id = upload.json()["id"]

    rng = random.Random(7)
    m = len(PVALUES)
    selections = [[], list(range(m))] + [
        sorted(rng.sample(range(m), rng.randint(1, m))) for _ in range(18)
    ]
    method_cycle = itertools.cycle(
        [(meth, alpha) for meth in METHODS for alpha in ALPHAS]
    )
    records = []
    for selection in selections:
        method, alpha = next(method_cycle)
        resp = client.post(
            f"/datasets/{ds_id}/bound",
            json={"selection": selection, "method": method, "alpha": alpha},
        )
        resp.raise_for_status()
        records.append(
            {
                "selection": selection,
                "method": method,
                "alpha": alpha,
                "raw": resp.content.decode(),
            }
        )

    env = client.get(
        f"/datasets/{ds_id}/envelope",
        params={"method": "simes-adaptive", "alpha": 0.1},
    )
    env.raise_for_status()
    m0 = client.get(
        f"/datasets/{ds_id}/m0", params={"method": "simes-adaptive", "alpha": 0.1}
    )
    m0.raise_for_status()
    vhat = env.json()["vhat"]
    fdx = [{"gamma": g, "k": fdx_select(vhat, g)} for g in GAMMAS]

    OUT.write_text(
        json.dumps(
            {
                "dataset": {"pvalues": PVALUES},
                "upload_raw": upload.content.decode(),
                "envelope_raw": env.content.decode(),
                "m0_raw": m0.content.decode(),
                "bounds": records,
                "fdx": fdx,
            },
            indent=1,
        )
    )
    print(f"wrote {OUT} ({len(records)} scripted selections)")


if __name__ == "__main__":
    main()
