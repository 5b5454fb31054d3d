"""Read-only HTTP API over a populated store, plus POST /predict.

Versioned under /api/v1 with JSON bodies. Every chart payload carries both
English and Spanish label strings so the dashboard stays presentation-only.
Box plot summaries (1.5 IQR whisker rule) are computed server-side.
"""
from __future__ import annotations

import math
import threading
from typing import Sequence

import numpy as np
from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from .errors import DataError, NotFoundError
from .features import FEATURE_COLUMNS
from .labels import CATALOG, label_pair
from .ml import forest_from_dict, mlp_from_dict, predict_forest, predict_mlp_label
from .stats import anova_by_factor
from .store import RecordKey, Store

PARAMETERS = (
    "avg_saccade_rate",
    "avg_fixation_rate",
    "avg_saccade_time",
    "avg_fixation_time",
)
FACTORS = ("sex", "group", "html_level")


def five_number_summary(values: Sequence[float]) -> dict:
    """Median, quartiles (linear interpolation), 1.5 IQR whiskers, outliers."""
    arr = np.sort(np.asarray(values, dtype=float))
    q1, med, q3 = (float(v) for v in np.percentile(arr, [25, 50, 75]))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    outliers = arr[(arr < lo_fence) | (arr > hi_fence)]
    return {
        "n": int(arr.size),
        "median": med,
        "q1": q1,
        "q3": q3,
        "whisker_low": float(inside[0]) if inside.size else q1,
        "whisker_high": float(inside[-1]) if inside.size else q3,
        "outliers": [float(v) for v in outliers],
    }


class _ModelSlot:
    """Atomic holder for the default prediction model."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._entry: tuple[str, str, object] | None = None  # (session, name, predictor)

    def swap(self, session_id: str, name: str, predictor: object) -> None:
        with self._lock:
            self._entry = (session_id, name, predictor)

    def current(self) -> tuple[str, str, object] | None:
        with self._lock:
            return self._entry


def _load_predictor(store: Store, session_id: str, name: str):
    """Build a predict(features) -> (label, score) closure from a stored model."""
    payload = store.get("model", RecordKey(session_id, "", name))
    if payload.get("kind") == "forest":
        model = forest_from_dict(payload)
        return lambda x: predict_forest(model, np.asarray(x, dtype=float))
    if payload.get("kind") == "mlp":
        model, std = mlp_from_dict(payload)
        return lambda x: predict_mlp_label(model, std, np.asarray(x, dtype=float))
    raise DataError(f"stored model {name!r} has unknown kind {payload.get('kind')!r}")


def _paginate(items: list, offset: int, limit: int | None) -> list:
    if offset < 0:
        raise HTTPException(status_code=400, detail="offset must be >= 0")
    return items[offset:] if limit is None else items[offset : offset + limit]


def create_app(store: Store, default_model: tuple[str, str] | None = None) -> FastAPI:
    app = FastAPI(title="gazekit analytics API", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # dashboard origin; the API is read-only
        allow_methods=["*"],
        allow_headers=["*"],
    )
    slot = _ModelSlot()
    if default_model is not None:
        slot.swap(default_model[0], default_model[1], _load_predictor(store, *default_model))

    def _profiles(session_id: str) -> list[dict]:
        keys = store.list("profile", session_id)
        if not keys:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return [store.get("profile", k) for k in keys]

    @app.get("/api/v1/labels")
    def get_labels() -> dict:
        return {"catalog": CATALOG}

    @app.get("/api/v1/sessions")
    def get_sessions() -> dict:
        return {"sessions": store.sessions()}

    @app.get("/api/v1/sessions/{session_id}/learners")
    def get_learners(session_id: str, offset: int = 0, limit: int | None = None) -> dict:
        seen: dict[str, dict] = {}
        for p in _profiles(session_id):
            pid = p["participant_id"]
            if pid not in seen:
                seen[pid] = {
                    "participant_id": pid,
                    "sex": p.get("sex", "Unspecified"),
                    "group": p.get("group", ""),
                    "html_level": p.get("html_level", ""),
                }
        learners = [seen[pid] for pid in sorted(seen)]
        return {"session_id": session_id, "learners": _paginate(learners, offset, limit)}

    @app.get("/api/v1/sessions/{session_id}/profiles")
    def get_profiles(
        session_id: str,
        participant: str | None = None,
        activity: str | None = None,
        offset: int = 0,
        limit: int | None = None,
    ) -> dict:
        rows = _profiles(session_id)
        if participant is not None:
            rows = [r for r in rows if r["participant_id"] == participant]
            if not rows:
                raise HTTPException(status_code=404, detail=f"unknown learner {participant!r}")
        if activity is not None:
            rows = [r for r in rows if r["activity_id"] == activity]
        rows.sort(key=lambda r: (r["participant_id"], r["activity_id"]))
        return {"session_id": session_id, "profiles": _paginate(rows, offset, limit)}

    @app.get("/api/v1/sessions/{session_id}/boxplot")
    def get_boxplot(
        session_id: str,
        parameter: str = Query(...),
        activity: str = Query("WholeSession"),
        factor: str | None = Query(None),
    ) -> dict:
        if parameter not in PARAMETERS:
            raise HTTPException(
                status_code=400,
                detail=f"unknown parameter {parameter!r}; expected one of {PARAMETERS}",
            )
        if factor is not None and factor not in FACTORS:
            raise HTTPException(
                status_code=400, detail=f"unknown factor {factor!r}; expected one of {FACTORS}"
            )
        rows = [r for r in _profiles(session_id) if r["activity_id"] == activity]
        if not rows:
            raise HTTPException(
                status_code=404, detail=f"no profiles for activity {activity!r}"
            )
        series: dict[str, list[float]] = {}
        for r in rows:
            level = r.get(factor, "all") if factor else "all"
            series.setdefault(level, []).append(float(r[parameter]))
        payload_series = [
            {
                "level": level,
                "labels": label_pair(level) if factor else label_pair("all_activities"),
                **five_number_summary(vals),
            }
            for level, vals in sorted(series.items())
        ]
        return {
            "session_id": session_id,
            "parameter": parameter,
            "activity": activity,
            "factor": factor,
            "labels": {
                "parameter": label_pair(parameter),
                "activity": label_pair(activity),
                "factor": label_pair(factor) if factor else label_pair("all_activities"),
            },
            "series": payload_series,
        }

    @app.get("/api/v1/sessions/{session_id}/anova")
    def get_anova(
        session_id: str,
        parameter: str = Query(...),
        factor: str = Query(...),
        activity: str = Query("WholeSession"),
        alpha: float = Query(0.05, gt=0.0, lt=1.0),
    ) -> dict:
        if parameter not in PARAMETERS:
            raise HTTPException(status_code=400, detail=f"unknown parameter {parameter!r}")
        if factor not in FACTORS:
            raise HTTPException(status_code=400, detail=f"unknown factor {factor!r}")
        rows = [r for r in _profiles(session_id) if r["activity_id"] == activity]
        groups: dict[str, list[float]] = {}
        for r in rows:
            level = r.get(factor)
            if level:
                groups.setdefault(level, []).append(float(r[parameter]))
        try:
            res = anova_by_factor(groups, parameter=parameter, factor=factor, alpha=alpha)
        except DataError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        rec = res.to_record()
        rec["labels"] = {
            "parameter": label_pair(parameter),
            "factor": label_pair(factor),
            "activity": label_pair(activity),
            "verdict": label_pair("significant" if res.significant else "not_significant"),
        }
        return rec

    @app.get("/api/v1/sessions/{session_id}/heatmap/{participant}")
    def get_heatmap(
        session_id: str,
        participant: str,
        activity: str = Query("all"),
        mode: str = Query("duration"),
    ) -> dict:
        if mode not in ("duration", "count"):
            raise HTTPException(
                status_code=400, detail=f"mode must be duration or count, got {mode!r}"
            )
        name = f"heatmap-{activity}" if mode == "duration" else f"heatmap-count-{activity}"
        try:
            payload = store.get("heatmap", RecordKey(session_id, participant, name))
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        payload["labels"] = {
            "title": label_pair("heatmap"),
            "activity": label_pair(payload.get("activity_id") or "all_activities"),
            "weight_mode": label_pair(payload.get("weight_mode", "duration")),
        }
        return payload

    @app.get("/api/v1/sessions/{session_id}/reports")
    def get_reports(session_id: str, offset: int = 0, limit: int | None = None) -> dict:
        keys = store.list("report", session_id)
        if not keys and not store.list("profile", session_id):
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        reports = [
            {"participant_id": k.participant_id, "name": k.name, "payload": store.get("report", k)}
            for k in keys
        ]
        return {"session_id": session_id, "reports": _paginate(reports, offset, limit)}

    @app.post("/api/v1/model")
    def select_model(body: dict = Body(...)) -> dict:
        session_id, name = body.get("session_id"), body.get("name")
        if not session_id or not name:
            raise HTTPException(status_code=400, detail="body needs session_id and name")
        try:
            predictor = _load_predictor(store, session_id, name)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        slot.swap(session_id, name, predictor)
        return {"selected": {"session_id": session_id, "name": name}}

    @app.post("/api/v1/predict")
    def post_predict(body: dict = Body(...)) -> dict:
        features = body.get("features")
        if not isinstance(features, list) or len(features) != len(FEATURE_COLUMNS):
            raise HTTPException(
                status_code=400,
                detail=f"features must be a list of {len(FEATURE_COLUMNS)} numbers "
                f"in the documented order",
            )
        try:
            vec = [float(v) for v in features]
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail="features must be numeric") from exc
        if any(not math.isfinite(v) for v in vec):
            raise HTTPException(status_code=400, detail="features must be finite")
        if "session_id" in body and "model" in body:
            try:
                predictor = _load_predictor(store, body["session_id"], body["model"])
            except NotFoundError as exc:
                raise HTTPException(status_code=404, detail=str(exc)) from exc
            used = {"session_id": body["session_id"], "name": body["model"]}
        else:
            entry = slot.current()
            if entry is None:
                raise HTTPException(
                    status_code=400,
                    detail="no model selected; POST /api/v1/model or pass session_id+model",
                )
            predictor = entry[2]
            used = {"session_id": entry[0], "name": entry[1]}
        pred_label, score = predictor(vec)  # type: ignore[operator]
        return {
            "label": pred_label,
            "score": score,
            "model": used,
            "labels": {"label": label_pair(pred_label), "title": label_pair("prediction")},
        }

    return app


def serve(store: Store, host: str = "127.0.0.1", port: int = 8000,
          default_model: tuple[str, str] | None = None) -> None:
    """Blocking uvicorn server over an immutable store snapshot."""
    import uvicorn

    uvicorn.run(create_app(store, default_model), host=host, port=port, log_level="info")
