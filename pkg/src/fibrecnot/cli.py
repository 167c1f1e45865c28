"""Command-line client for the simulator service.

Every subcommand builds a request, sends it to the HTTP service (an
in-process instance by default, a remote one with --server), and writes
the returned artifacts.  Exit codes: 0 success, 1 domain or data error,
2 usage error.
"""

from __future__ import annotations

from pathlib import Path

import click
import httpx

from .docio import dump_doc, load_doc
from .errors import ParseError
from .metrics import BASES


class ServiceError(click.ClickException):
    """Domain-level failure reported by the service; exits with code 1."""


class _Client:
    """Thin POST wrapper over either transport."""

    def __init__(self, server: str | None):
        if server is None:
            import warnings
            with warnings.catch_warnings():
                # the in-process test transport warns about its own backend
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app
            self._http = TestClient(create_app())
        else:
            self._http = httpx.Client(base_url=server, timeout=300.0)

    def post(self, path: str, payload: dict) -> dict:
        try:
            response = self._http.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise ServiceError(f"service request failed: {exc}") from None
        if response.status_code == 422:
            detail = response.json().get("detail")
            if isinstance(detail, dict) and "message" in detail:
                raise ServiceError(detail["message"])
            raise ServiceError(f"invalid request: {detail}")
        if response.status_code >= 400:
            raise ServiceError(f"service error {response.status_code}: {response.text}")
        return response.json()


def _parse_bases(ctx, param, value: str) -> list[str]:
    bases = [b.strip() for b in value.split(",") if b.strip()]
    for b in bases:
        if b not in BASES:
            raise click.BadParameter(f"unknown basis {b!r}; choose from {','.join(BASES)}")
    if not bases:
        raise click.BadParameter("at least one basis is required")
    return bases


def _source_payload(ideal: bool, config: str | None) -> dict:
    if ideal and config:
        raise click.UsageError("--ideal and --config are mutually exclusive")
    if not ideal and not config:
        raise click.UsageError("provide either --ideal or --config")
    payload = {"ideal": ideal}
    if config:
        payload["config"] = Path(config).read_text()
    return payload


def _deliver(ctx_obj: dict, text: str, doc: dict | None = None,
             extra_files: tuple[tuple[str, str], ...] = ()):
    """Write requested artifacts, then print the text rendering.

    Success keeps the error stream silent; written paths are announced
    on stdout after the main text.
    """
    written = []
    for path, content in extra_files:
        Path(path).write_text(content)
        written.append(path)
    out = ctx_obj.get("out")
    if out:
        if ctx_obj.get("format") == "doc" and doc is not None:
            Path(out).write_text(dump_doc(doc))
        else:
            Path(out).write_text(text)
        written.append(out)
    click.echo(text, nl=False)
    for path in written:
        click.echo(f"wrote {path}")


@click.group()
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0,
              show_default=True, help="Seed for every stochastic step.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Write the primary artifact to this path.")
@click.option("--format", "fmt", type=click.Choice(["text", "doc"]),
              default="text", show_default=True,
              help="Artifact form for --out: plain text or JSON document.")
@click.option("--server", default=None, metavar="URL",
              help="Use a running service instead of the in-process one.")
@click.pass_context
def main(ctx, seed, out, fmt, server):
    """Simulate, analyze, and fit the post-selected fibre CNOT gate."""
    ctx.obj = {"seed": seed, "out": out, "format": fmt, "server": server}


def _client(ctx_obj: dict) -> _Client:
    return _Client(ctx_obj["server"])


@main.command()
@click.option("--ideal", is_flag=True, help="Exact ideal network, no imperfections.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Gate-parameter config file.")
@click.option("--basis", default="ZZ,XX", show_default=True, callback=_parse_bases,
              help="Comma-separated bases to simulate.")
@click.option("--bars", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write bar-height CSV (16 input-output rows per basis).")
@click.pass_obj
def simulate(ctx_obj, ideal, config, basis, bars):
    """Compute truth tables for the ideal or a configured gate."""
    payload = _source_payload(ideal, config)
    payload.update(bases=basis, include_bars=bars is not None)
    result = _client(ctx_obj).post("/simulate", payload)
    extra = ((bars, result["bars_csv"]),) if bars else ()
    _deliver(ctx_obj, result["text"], result["doc"], extra)


@main.command()
@click.argument("counts", type=click.Path(exists=True, dir_okay=False))
@click.option("--resamples", type=int, default=200, show_default=True,
              help="Bootstrap resamples for the fidelity error bars.")
@click.option("--reference", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Config whose model replaces the ideal gate as reference.")
@click.option("--bars", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write bar-height CSV of the measured tables.")
@click.pass_obj
def analyze(ctx_obj, counts, resamples, reference, bars):
    """Turn a count file into truth tables, fidelities, and bounds."""
    payload = {
        "counts": Path(counts).read_text(),
        "resamples": resamples,
        "seed": ctx_obj["seed"],
        "include_bars": bars is not None,
    }
    if reference:
        payload["reference_config"] = Path(reference).read_text()
    result = _client(ctx_obj).post("/analyze", payload)
    extra = ((bars, result["bars_csv"]),) if bars else ()
    _deliver(ctx_obj, result["text"], result["doc"], extra)


@main.command()
@click.argument("counts", type=click.Path(exists=True, dir_okay=False))
@click.option("--fitspec", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Optimizer-control config; defaults fit overlap and mixing.")
@click.option("--params-out", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Write the fitted gate parameters as a config.")
@click.pass_obj
def fit(ctx_obj, counts, fitspec, params_out):
    """Fit the imperfection model to a two-basis count file."""
    payload = {"counts": Path(counts).read_text()}
    if fitspec:
        payload["fitspec"] = Path(fitspec).read_text()
    result = _client(ctx_obj).post("/fit", payload)
    extra = ((params_out, result["params_config"]),) if params_out else ()
    _deliver(ctx_obj, result["text"], result["doc"], extra)


@main.command()
@click.option("--ideal", is_flag=True, help="Draw from the ideal gate's tables.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Gate-parameter config file.")
@click.option("--basis", default="ZZ,XX", show_default=True, callback=_parse_bases,
              help="Comma-separated bases to synthesize.")
@click.option("--trials", type=click.IntRange(min=1), required=True,
              help="Events per logical input.")
@click.option("--accidental-mean", type=click.FloatRange(min=0), default=0.0,
              show_default=True, help="Mean Poisson accidentals per output channel.")
@click.option("--time", "integration_time", type=click.FloatRange(min=0, min_open=True),
              default=1.0, show_default=True, help="Recorded integration time per row.")
@click.pass_obj
def synth(ctx_obj, ideal, config, basis, trials, accidental_mean, integration_time):
    """Generate a synthetic count file; deterministic per seed."""
    payload = _source_payload(ideal, config)
    payload.update(bases=basis, trials=trials, accidental_mean=accidental_mean,
                   seed=ctx_obj["seed"], integration_time=integration_time)
    result = _client(ctx_obj).post("/synth", payload)
    out = ctx_obj.get("out")
    if out:
        Path(out).write_text(result["counts"])
        click.echo(result["text"], nl=False)
        click.echo(f"wrote {out}")
    else:
        click.echo(result["counts"], nl=False)


@main.command()
@click.argument("doc", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def report(ctx_obj, doc):
    """Render a structured document back to its text form."""
    try:
        loaded = load_doc(Path(doc).read_text())
    except ParseError as exc:
        raise ServiceError(str(exc)) from None
    result = _client(ctx_obj).post("/render", {"doc": loaded})
    _deliver(ctx_obj, result["text"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
