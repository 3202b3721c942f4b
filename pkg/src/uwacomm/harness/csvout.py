"""CSV rendering shared by the CLI and the HTTP service.

One renderer produces the full file contents as a string so both
frontends emit byte-identical output for the same table.  The first
line is a comment carrying the resolved-config hash; downstream tools
that reject comments can skip lines starting with '#'.
"""

from __future__ import annotations

import os

from .experiments import ExperimentResult, trace_columns


def render_csv(columns: list[str], rows: list[list[str]], cfg_hash: str) -> str:
    lines = [f"# config_sha256={cfg_hash}"]
    lines.append(",".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(
                f"row of width {len(row)} under {len(columns)} columns"
            )
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def result_csv(result: ExperimentResult) -> str:
    return render_csv(result.columns, result.rows, result.config_hash)


def write_result(result: ExperimentResult, out_dir: str) -> list[str]:
    """Write the result table (and any event traces) under out_dir.
    Returns the written paths, the main table first."""
    os.makedirs(out_dir, exist_ok=True)
    main = os.path.join(out_dir, f"{result.kind}.csv")
    with open(main, "w") as fh:
        fh.write(result_csv(result))
    paths = [main]
    for tag, trace in result.traces.items():
        tpath = os.path.join(out_dir, f"trace_{tag}.csv")
        with open(tpath, "w") as fh:
            fh.write(render_csv(
                trace_columns(), [list(r) for r in trace], result.config_hash
            ))
        paths.append(tpath)
    return paths


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    """Inverse of render_csv: (columns, rows), comment lines skipped."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("no header line")
    columns = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return columns, rows
