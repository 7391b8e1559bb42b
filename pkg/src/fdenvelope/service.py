"""HTTP JSON facade: upload p-value families (or raw contingency tables),
fetch envelope curves, and query bounds for arbitrary selections.

Datasets are immutable snapshots in an in-memory store; envelope curves
are computed lazily and cached per (method, alpha), so repeated queries
are deterministic and never invalidate earlier answers.
"""

from __future__ import annotations

import os
import threading
import uuid
from typing import Any, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .discrete import ContingencyTable, fisher_test
from .model import PValueFamily
from .registry import (
    METHOD_NAMES,
    SHORTCUT_METHODS,
    build_envelope,
    envelope_vhat,
    list_methods,
    selection_vhat,
    shortcut_vhat,
)

DEFAULT_M_LIMIT = 10_000


class _Store:
    def __init__(self, m_limit: int):
        self.m_limit = m_limit
        self._families: dict[str, PValueFamily] = {}
        self._curves: dict[tuple[str, str, float], dict] = {}
        self._lock = threading.Lock()

    def add(self, fam: PValueFamily) -> str:
        ds_id = uuid.uuid4().hex
        with self._lock:
            self._families[ds_id] = fam
        return ds_id

    def get(self, ds_id: str) -> Optional[PValueFamily]:
        return self._families.get(ds_id)

    def curve(self, ds_id: str, method: str, alpha: float) -> dict:
        key = (ds_id, method, alpha)
        cached = self._curves.get(key)
        if cached is not None:
            return cached
        fam = self._families[ds_id]
        built = build_envelope(method, fam, alpha)
        vhat = envelope_vhat(built, fam)
        body = {
            "method": method,
            "alpha": alpha,
            "k": list(range(1, fam.m + 1)),
            "p_k": list(fam.sorted_pvalues()),
            "vhat": list(vhat),
            "dhat": [k - v for k, v in enumerate(vhat, start=1)],
        }
        if built.m0_hat is not None:
            body["m0_hat"] = built.m0_hat
        with self._lock:
            self._curves.setdefault(key, body)
        return self._curves[key]


def _error(status: int, message: str, field: Optional[str] = None) -> JSONResponse:
    detail: dict[str, Any] = {"message": message}
    if field is not None:
        detail["field"] = field
    return JSONResponse(status_code=status, content={"detail": detail})


def _parse_dataset(body: Any, m_limit: int):
    """Returns (PValueFamily, None) or (None, error response)."""
    if not isinstance(body, dict):
        return None, _error(400, "body must be a JSON object", "")
    if "tables" in body:
        tables = body["tables"]
        if not isinstance(tables, list) or not tables:
            return None, _error(400, "tables must be a nonempty list", "tables")
        if len(tables) > m_limit:
            return None, _error(413, f"m exceeds limit {m_limit}", "tables")
        pvals, cdfs = [], []
        for j, row in enumerate(tables):
            if (
                not isinstance(row, (list, tuple))
                or len(row) != 4
                or any(not isinstance(v, int) or v < 0 for v in row)
            ):
                return None, _error(
                    400, "each table is 4 nonnegative ints", f"tables[{j}]"
                )
            p, cdf = fisher_test(ContingencyTable(*row))
            pvals.append(p)
            cdfs.append(cdf)
        return PValueFamily(tuple(pvals), tuple(cdfs)), None
    if "pvalues" not in body:
        return None, _error(400, "need 'pvalues' or 'tables'", "pvalues")
    pvalues = body["pvalues"]
    cdfs_raw = body.get("cdfs")
    if not isinstance(pvalues, list):
        return None, _error(400, "pvalues must be a list", "pvalues")
    if len(pvalues) > m_limit:
        return None, _error(413, f"m exceeds limit {m_limit}", "pvalues")
    if cdfs_raw is None:
        cdfs_raw = [{"identity": True}] * len(pvalues)
    if not isinstance(cdfs_raw, list) or len(cdfs_raw) != len(pvalues):
        return None, _error(400, "cdfs must match pvalues in length", "cdfs")
    try:
        fam = PValueFamily.from_json(
            {
                "pvalues": pvalues,
                "cdfs": cdfs_raw,
                "labels": body.get("labels"),
            }
        )
    except (ValueError, KeyError, TypeError) as exc:
        return None, _error(400, str(exc), "cdfs")
    return fam, None


def create_app(m_limit: Optional[int] = None) -> FastAPI:
    if m_limit is None:
        m_limit = int(os.environ.get("FDENV_MAX_M", DEFAULT_M_LIMIT))
    app = FastAPI(title="fdenvelope")
    store = _Store(m_limit)

    @app.get("/methods")
    def methods() -> list[dict]:
        return list_methods()

    @app.post("/datasets")
    def post_dataset(body: dict):
        fam, err = _parse_dataset(body, store.m_limit)
        if err is not None:
            return err
        ds_id = store.add(fam)
        return {"id": ds_id, "m": fam.m}

    @app.get("/datasets/{ds_id}/envelope")
    def get_envelope(ds_id: str, method: str, alpha: float):
        fam = store.get(ds_id)
        if fam is None:
            return _error(404, f"unknown dataset {ds_id}")
        if method not in METHOD_NAMES:
            return _error(422, f"unknown method {method!r}", "method")
        try:
            return store.curve(ds_id, method, alpha)
        except ValueError as exc:
            return _error(422, str(exc), "alpha")

    @app.get("/datasets/{ds_id}/m0")
    def get_m0(ds_id: str, method: str, alpha: float):
        fam = store.get(ds_id)
        if fam is None:
            return _error(404, f"unknown dataset {ds_id}")
        if method not in METHOD_NAMES:
            return _error(422, f"unknown method {method!r}", "method")
        try:
            built = build_envelope(method, fam, alpha)
        except ValueError as exc:
            return _error(422, str(exc), "alpha")
        return {"method": method, "alpha": alpha, "m0_hat": built.m0_hat}

    @app.post("/datasets/{ds_id}/bound")
    def post_bound(ds_id: str, body: dict):
        fam = store.get(ds_id)
        if fam is None:
            return _error(404, f"unknown dataset {ds_id}")
        method = body.get("method")
        alpha = body.get("alpha")
        selection = body.get("selection")
        if not isinstance(selection, list) or any(
            not isinstance(i, int) for i in selection
        ):
            return _error(422, "selection must be a list of ints", "selection")
        if not isinstance(alpha, (int, float)):
            return _error(422, "alpha must be a number", "alpha")
        indices = sorted(set(selection))
        if any(not 0 <= i < fam.m for i in indices):
            return _error(422, "selection index out of range", "selection")
        try:
            if method in SHORTCUT_METHODS:
                vhat = shortcut_vhat(method, fam, float(alpha), indices)
            elif method in METHOD_NAMES:
                built = build_envelope(method, fam, float(alpha))
                vhat = selection_vhat(built, fam, indices)
            else:
                return _error(422, f"unknown method {method!r}", "method")
        except ValueError as exc:
            return _error(422, str(exc), "alpha")
        size = len(indices)
        return {
            "vhat": vhat,
            "dhat": size - vhat,
            "fdp_bound": vhat / max(size, 1),
        }

    return app


app = create_app()
