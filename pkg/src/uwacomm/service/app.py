"""HTTP face of the experiment harness.

POST /experiments/{name} runs one experiment synchronously and returns
the table plus its rendered CSV text, so a thin client can write the
same bytes the in-process path would.  Run it with:

    uvicorn uwacomm.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..harness import (
    EXPERIMENT_MODELS,
    SchemaMismatch,
    parse_csv,
    render_plot,
    result_csv,
    run_experiment,
)
from ..harness.svgplot import PlotSpec
from .models import (
    ExperimentRequest,
    ExperimentResponse,
    HealthResponse,
    PlotRequest,
    PlotResponse,
)

app = FastAPI(title="uwacomm", version=__version__)

# URL segment -> experiment kind
ENDPOINT_KINDS = {
    "ber-sweep": "ber_sweep",
    "interleave-compare": "interleaver_compare",
    "mac-compare": "mac_compare",
    "snr-map": "snr_map",
    "codec-table": "codec_table",
}


def _run(kind: str, req: ExperimentRequest) -> ExperimentResponse:
    model = EXPERIMENT_MODELS[kind]
    raw = dict(req.config)
    sent = raw.setdefault("kind", kind)
    if sent != kind:
        raise HTTPException(
            status_code=422,
            detail=f"config: kind {sent!r} does not match endpoint ({kind!r})",
        )
    try:
        cfg = model.model_validate(raw)
    except Exception as exc:
        raise HTTPException(status_code=422, detail=f"config: {exc}") from None
    result = run_experiment(cfg, req.seed)
    return ExperimentResponse(
        kind=result.kind,
        config_hash=result.config_hash,
        columns=result.columns,
        rows=result.rows,
        csv=result_csv(result),
        traces={k: [list(r) for r in v] for k, v in result.traces.items()},
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/codec-table", response_model=ExperimentResponse)
def codec_table() -> ExperimentResponse:
    return _run("codec_table", ExperimentRequest())


@app.post("/experiments/{name}", response_model=ExperimentResponse)
def run_named_experiment(name: str, req: ExperimentRequest) -> ExperimentResponse:
    kind = ENDPOINT_KINDS.get(name)
    if kind is None:
        raise HTTPException(
            status_code=404,
            detail=f"unknown experiment {name!r}; expected one of "
            f"{sorted(ENDPOINT_KINDS)}",
        )
    return _run(kind, req)


@app.post("/plots", response_model=PlotResponse)
def plot(req: PlotRequest) -> PlotResponse:
    spec = PlotSpec(
        kind=req.kind, x=req.x, y=req.y,
        value=req.value, series=req.series, title=req.title,
    )
    try:
        columns, rows = parse_csv(req.csv)
        svg = render_plot(columns, rows, spec)
    except (SchemaMismatch, ValueError) as exc:
        raise HTTPException(status_code=422, detail=f"plot: {exc}") from None
    return PlotResponse(svg=svg)
