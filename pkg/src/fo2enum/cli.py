"""Command-line front end.

The CLI is a thin client of the HTTP service: by default it mounts the app
in process (no network involved), with --server it talks to a running
instance instead. Sentence files are UTF-8 text with '#' line comments and a
single sentence expression; '#' comments are handled by the parser itself.

Exit codes: 0 success, 2 parse error or malformed arguments, 3 I/O failure.
"""

from __future__ import annotations

import json
import sys

import click
import httpx


class ClientError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


class ServiceClient:
    """HTTP client; in-process against the app unless a server URL is given."""

    def __init__(self, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from fo2enum.service.app import create_app

            self._client = TestClient(create_app())

    def _raise_for(self, response) -> None:
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except Exception:
                detail = response.text
            raise ClientError(str(detail), 2)

    def register(self, path: str) -> str:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ClientError(f"cannot read {path}: {exc}", 3) from None
        response = self._post("/sentences", {"text": text})
        self._raise_for(response)
        return response.json()["id"]

    def _post(self, url: str, payload: dict):
        try:
            return self._client.post(url, json=payload)
        except (httpx.TransportError, OSError) as exc:
            raise ClientError(f"cannot reach service: {exc}", 3) from None

    def post_json(self, url: str, payload: dict) -> dict:
        response = self._post(url, payload)
        self._raise_for(response)
        return response.json()

    def get_json(self, url: str) -> dict:
        try:
            response = self._client.get(url)
        except (httpx.TransportError, OSError) as exc:
            raise ClientError(f"cannot reach service: {exc}", 3) from None
        self._raise_for(response)
        return response.json()

    def stream_lines(self, url: str, payload: dict):
        try:
            with self._client.stream("POST", url, json=payload) as response:
                if response.status_code >= 400:
                    response.read()
                    self._raise_for(response)
                yield from response.iter_lines()
        except (httpx.TransportError, OSError) as exc:
            raise ClientError(f"cannot reach service: {exc}", 3) from None


def _run(ctx: click.Context, action) -> None:
    client = ServiceClient(ctx.obj.get("server"))
    try:
        action(client)
    except ClientError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)


def _parse_csv_ints(text: str, what: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ClientError(f"malformed {what} {text!r}", 2) from None
    if not values:
        raise ClientError(f"empty {what}", 2)
    return values


@click.group()
@click.option("--server", default=None, help="Base URL of a running service (default: in process).")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Model enumeration for two-variable first-order logic."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command("enumerate")
@click.option("--sentence", required=True, type=click.Path(), help="Sentence file.")
@click.option("-n", "domain_size", required=True, type=int, help="Domain size.")
@click.option("--limit", type=int, default=None, help="Stop after this many models.")
@click.option("--format", "fmt", type=click.Choice(["ndjson", "text"]), default="ndjson")
@click.pass_context
def enumerate_cmd(ctx, sentence, domain_size, limit, fmt):
    """Stream every model over a domain of the given size, exactly once."""

    def action(client: ServiceClient) -> None:
        sid = client.register(sentence)
        payload = {"n": domain_size, "limit": limit}
        for line in client.stream_lines(f"/sentences/{sid}/enumerate", payload):
            if not line:
                continue
            if fmt == "ndjson":
                click.echo(line)
                continue
            record = json.loads(line)
            if "index" in record:
                click.echo(f"model {record['index']}: " + " ".join(record["model"]))

    _run(ctx, action)


@main.command()
@click.option("--sentence", required=True, type=click.Path())
@click.option("-n", "domain_size", required=True, type=int)
@click.pass_context
def count(ctx, sentence, domain_size):
    """Exact model count by full enumeration (exponential in n)."""

    def action(client: ServiceClient) -> None:
        sid = client.register(sentence)
        data = client.post_json(f"/sentences/{sid}/count", {"n": domain_size})
        click.echo(data["count"])

    _run(ctx, action)


@main.command("check-config")
@click.option("--sentence", required=True, type=click.Path())
@click.option("--config", "config_csv", required=True, help="Comma-separated cardinalities.")
@click.pass_context
def check_config(ctx, sentence, config_csv):
    """Decide satisfiability of a 1-type configuration (prints SAT or UNSAT)."""

    def action(client: ServiceClient) -> None:
        sid = client.register(sentence)
        config = _parse_csv_ints(config_csv, "configuration")
        data = client.post_json(f"/sentences/{sid}/check-config", {"config": config})
        click.echo("SAT" if data["satisfiable"] else "UNSAT")

    _run(ctx, action)


@main.command()
@click.option("--sentence", required=True, type=click.Path())
@click.option("-n", "domain_size", required=True, type=int)
@click.pass_context
def spectrum(ctx, sentence, domain_size):
    """Whether any satisfiable configuration of the given size exists."""

    def action(client: ServiceClient) -> None:
        sid = client.register(sentence)
        data = client.post_json(f"/sentences/{sid}/spectrum", {"n": domain_size})
        click.echo("SAT" if data["in_spectrum"] else "UNSAT")

    _run(ctx, action)


@main.command()
@click.option("--sentence", required=True, type=click.Path())
@click.option("--sizes", required=True, help="Comma-separated domain sizes.")
@click.option("--limit", type=int, default=1000, help="Models per size.")
@click.option("--format", "fmt", type=click.Choice(["text", "ndjson"]), default="text")
@click.pass_context
def bench(ctx, sentence, sizes, limit, fmt):
    """Measure inter-model delay per domain size and fit its growth."""

    def action(client: ServiceClient) -> None:
        sid = client.register(sentence)
        size_list = _parse_csv_ints(sizes, "size list")
        data = client.post_json(f"/sentences/{sid}/bench", {"sizes": size_list, "limit": limit})
        if fmt == "ndjson":
            for row in data["rows"]:
                click.echo(json.dumps(row, separators=(",", ":")))
            click.echo(json.dumps({"slope": data["slope"]}, separators=(",", ":")))
            return
        click.echo(f"{'n':>6} {'models':>8} {'mean':>12} {'max':>12} {'p99':>12}")
        for row in data["rows"]:
            click.echo(
                f"{row['n']:>6} {row['models']:>8} {row['mean_delay']:>12.6f} "
                f"{row['max_delay']:>12.6f} {row['p99_delay']:>12.6f}"
            )
        slope = data["slope"]
        click.echo(f"slope: {slope:.3f}" if slope is not None else "slope: n/a")

    _run(ctx, action)


@main.command("show-types")
@click.option("--sentence", required=True, type=click.Path())
@click.pass_context
def show_types(ctx, sentence):
    """Print the compatible 1-types and the derived constants of a sentence."""

    def action(client: ServiceClient) -> None:
        sid = client.register(sentence)
        data = client.get_json(f"/sentences/{sid}/types")
        click.echo(f"predicates: {' '.join(data['predicates'])}")
        click.echo(f"equality: {'yes' if data['equality'] else 'no'}")
        click.echo(f"existential conjuncts (m): {data['m']}")
        click.echo(f"witness predicates: {' '.join(data['betas']) or '-'}")
        click.echo(f"auxiliary predicates: {' '.join(data['aux_predicates']) or '-'}")
        click.echo(f"template bound (delta): {data['delta']} (effective {data['delta_eff']})")
        click.echo(f"compatible 1-types ({data['u']}):")
        for i, text in enumerate(data["compatible_one_types"]):
            click.echo(f"  [{i}] {text}")

    _run(ctx, action)


@main.command(hidden=True)
@click.option("--sentence", required=True, type=click.Path())
@click.option("-n", "domain_size", required=True, type=int)
@click.pass_context
def oracle(ctx, sentence, domain_size):
    """Brute-force reference enumeration (debugging only)."""

    def action(client: ServiceClient) -> None:
        sid = client.register(sentence)
        data = client.post_json(f"/sentences/{sid}/oracle", {"n": domain_size})
        click.echo(json.dumps({"count": data["count"]}, separators=(",", ":")))
        for model in data["models"]:
            click.echo(json.dumps({"model": model}, separators=(",", ":")))

    _run(ctx, action)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the enumeration service."""
    import uvicorn

    uvicorn.run("fo2enum.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
