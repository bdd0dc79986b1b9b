"""``freemix`` command line.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for usage and I/O errors.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import click

from freemix import freeprob, ncp, rmt, verify
from freemix.freeprob import ChainSpec, MomentSequence, format_rational
from freemix.ncp import PartitionTypeVector

FORMATS = click.Choice(["json", "csv", "table"])

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageFailure(Exception):
    """Bad input; reported on stderr with exit code 2."""


def _fail_usage(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_USAGE)


def _render(rows: list[dict], columns: Sequence[str], fmt: str, payload: dict | None = None) -> str:
    if fmt == "json":
        return json.dumps(payload if payload is not None else rows, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow(["" if r.get(c) is None else r.get(c) for c in columns])
        return buf.getvalue().rstrip("\n")
    cells = [[str(c) for c in columns]] + [
        ["-" if r.get(c) is None else str(r.get(c)) for c in columns] for r in rows
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text + "\n")
        except OSError as exc:
            raise UsageFailure(f"cannot write {output}: {exc}") from exc
    else:
        click.echo(text)


def _resolve_threads(threads: int | None) -> int:
    if threads is not None:
        if threads < 1:
            raise UsageFailure("--threads must be positive")
        return threads
    try:
        return rmt.default_threads()
    except ValueError as exc:
        raise UsageFailure(str(exc)) from exc


def _load_moment_file(path: str) -> MomentSequence:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageFailure(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageFailure(f"malformed JSON in {path}: {exc}") from exc
    try:
        seq = MomentSequence.from_json(obj)
    except ValueError as exc:
        raise UsageFailure(f"{path}: {exc}") from exc
    if not seq.label:
        seq = MomentSequence(seq.even_moments, Path(path).stem)
    return seq


def _moment_spec(text: str, k_max: int) -> tuple[MomentSequence, int | None]:
    """Resolve a named spec or file; the second item is ``m`` for ``zm:m`` heads."""
    text = text.strip()
    if text.startswith("file:"):
        return _load_moment_file(text[5:]), None
    if text.endswith(".json") or (os.sep in text and Path(text).exists()):
        return _load_moment_file(text), None
    try:
        spec = rmt.DistributionSpec.parse(text)
    except ValueError as exc:
        raise UsageFailure(str(exc)) from exc
    return spec.even_moments(k_max), (spec.m if spec.kind == "zm" else None)


def _split_specs(text: str) -> list[str]:
    return [t for t in (s.strip() for s in text.split(",")) if t]


def _split_chain(text: str) -> list[str]:
    # atoms specs contain commas themselves, so glue their pieces back on
    out: list[str] = []
    for tok in _split_specs(text):
        if out and out[-1].startswith("atoms:") and "@" in tok and ":" not in tok:
            out[-1] += "," + tok
        else:
            out.append(tok)
    return out


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Exact moments of orthogonally mixed distributions, with brute-force and Monte Carlo checks."""


def _guard(fn):
    """Map library and input errors onto exit code 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UsageFailure as exc:
            _fail_usage(str(exc))
        except (ValueError, freeprob.InsufficientMomentsError) as exc:
            _fail_usage(str(exc))

    return wrapper


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


@main.command()
@click.option("--chain", "chain_text", help="Comma list: head (zm:m or a law) followed by tail laws.")
@click.option("--op-r", "op_r_args", nargs=2, help="Two laws or moment files to mix.")
@click.option("--k", "k_max", type=int, default=6, show_default=True, help="Largest moment index k.")
@click.option("--method", type=click.Choice(["both", "inductive", "closed"]), default="both", show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write to a file instead of stdout.")
@_guard
def moments(chain_text, op_r_args, k_max, method, fmt, output):
    """Exact even moments of a chain or of a single o_R product.

    Laws: zm:m, rademacher, gaussian[:sigma], atoms:v@p,..., file:path.
    """
    if (chain_text is None) == (not op_r_args):
        raise UsageFailure("give exactly one of --chain or --op-r")
    if k_max < 1:
        raise UsageFailure("--k must be positive")

    if op_r_args:
        left, _ = _moment_spec(op_r_args[0], k_max)
        right, _ = _moment_spec(op_r_args[1], k_max)
        result = freeprob.op_r(left, right, k_max)
        rows = [{"k": k, "value": format_rational(v)} for k, v in enumerate(result.even_moments, 1)]
        payload = {"label": result.label, "k_max": k_max, "rows": rows, "notes": list(result.notes)}
        _emit(_render(rows, ["k", "value"], fmt, payload), output)
        return

    specs = _split_chain(chain_text)
    if not specs:
        raise UsageFailure("--chain is empty")
    head, head_m = _moment_spec(specs[0], k_max)
    tail = tuple(_moment_spec(s, k_max)[0] for s in specs[1:])

    inductive = closed = None
    if head_m is None:
        if method == "closed":
            raise UsageFailure("the closed form needs a zm:m head")
        acc = head
        for t in tail:
            acc = freeprob.op_r(acc, t, k_max)
        inductive = acc
    else:
        chain = ChainSpec(head_m, tail)
        if method in ("both", "closed"):
            if chain.s > chain.m:
                raise UsageFailure(f"closed form needs s <= m (s={chain.s}, m={chain.m}); use --method inductive")
            closed = freeprob.chain_moments_closed(chain, k_max)
        if method in ("both", "inductive"):
            inductive = freeprob.chain_moments_inductive(chain, k_max)

    rows = []
    agree_all = True
    for k in range(1, k_max + 1):
        iv = inductive.even_moments[k - 1] if inductive is not None else None
        cv = closed.even_moments[k - 1] if closed is not None else None
        agree = None if iv is None or cv is None else iv == cv
        agree_all = agree_all and agree is not False
        rows.append({
            "k": k,
            "inductive": None if iv is None else format_rational(iv),
            "closed": None if cv is None else format_rational(cv),
            "agree": agree,
        })
    notes = list((inductive or closed).notes)
    payload = {"chain": specs, "k_max": k_max, "rows": rows, "agree": agree_all, "notes": notes}
    _emit(_render(rows, ["k", "inductive", "closed", "agree"], fmt, payload), output)
    for note in notes:
        click.echo(f"note: {note}", err=True)
    if not agree_all:
        sys.exit(EXIT_CHECK)


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------


def _parse_alpha(text: str) -> PartitionTypeVector:
    try:
        return PartitionTypeVector.parse(text)
    except ValueError as exc:
        raise UsageFailure(str(exc)) from exc


@main.command()
@click.option("--alpha", help="Type vector as a comma list, e.g. 2,1,0,0.")
@click.option("--alphas", help="Semicolon-separated type vectors for NP_m, e.g. '2,0;2,0'.")
@click.option("--m", "m", type=int, default=None, help="Scale (with --alpha) or family index m (with --alphas).")
@click.option("--c", "c", type=int, default=None, help="Anchored c-gon size (with --alphas).")
@click.option("--brute", is_flag=True, help="Also count by enumeration and compare.")
@click.option("--dump", is_flag=True, help="List the enumerated partitions as JSON.")
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@_guard
def count(alpha, alphas, m, c, brute, dump, fmt):
    """Closed-form partition counts, optionally checked by enumeration."""
    if (alpha is None) == (alphas is None):
        raise UsageFailure("give exactly one of --alpha or --alphas")

    members = None
    if alpha is not None:
        if c is not None:
            raise UsageFailure("--c needs --alphas")
        al = _parse_alpha(alpha)
        scale = 1 if m is None else m
        if scale < 1:
            raise UsageFailure("--m must be positive")
        family = f"NP({scale}*alpha)" if scale > 1 else "NP(alpha)"
        closed = ncp.count_nc_scaled(al, scale)
        want_enum = brute or dump
        if want_enum and scale * al.k > ncp.ENUMERATION_CAP:
            raise UsageFailure(f"enumeration needs m*k <= {ncp.ENUMERATION_CAP}")
        if want_enum:
            target = sorted((scale * s for s in al.parts()), reverse=True)
            members = [p for p in ncp.enumerate_nc(scale * al.k) if sorted(p.block_sizes(), reverse=True) == target]
        params = {"alpha": str(al), "m": scale}
    else:
        als = [_parse_alpha(t) for t in alphas.split(";") if t.strip()]
        if m is None:
            raise UsageFailure("--alphas needs --m")
        family = "NP_m" if c is None else "NP_m c-gon"
        closed = ncp.count_np_general(als, m) if c is None else ncp.count_np_general_cgon(als, m, c)
        if dump:
            gen = ncp.enumerate_np_general(als, m) if c is None else ncp.enumerate_np_general_cgon(als, m, c)
            members = list(gen)
        params = {"alphas": [str(a) for a in als], "m": m, "c": c}

    brute_value = None
    method = None
    if brute:
        if alpha is not None:
            brute_value, method = len(members), "NC enumeration"
        elif c is None and m == 2 and len(als) == 2 and als[0].k <= ncp.PAIR_CAP:
            brute_value, method = sum(1 for _ in ncp.enumerate_pairs(*als)), "pair enumeration"
        elif c is None:
            brute_value, method = ncp.count_np_general_brute(als, m), "residue-class search"
        else:
            brute_value, method = ncp.count_np_general_cgon_brute(als, m, c), "residue-class search"

    agree = None if brute_value is None else brute_value == closed
    row = {"family": family, "closed": closed, "brute": brute_value, "agree": agree}
    payload = dict(params, family=family, closed=closed, brute=brute_value, brute_method=method, agree=agree)
    if dump:
        payload["partitions"] = [p.to_json() for p in members]

    if fmt == "table":
        click.echo(str(closed) if brute_value is None else f"{closed} {'=' if agree else '!='} {brute_value}")
        for p in members if dump else []:
            click.echo(str(p))
    else:
        click.echo(_render([row], ["family", "closed", "brute", "agree"], fmt, payload))
    if agree is False:
        sys.exit(EXIT_CHECK)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@main.command("verify")
@click.option("--suite", type=click.Choice(["identities", "partitions", "freeprob", "all"]), default="all",
              show_default=True)
@click.option("--kmax", type=int, default=None, help="Cap on size parameters (default: the full ranges).")
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@_guard
def verify_cmd(suite, kmax, fmt):
    """Run the exact identity and enumeration checks."""
    if kmax is not None and kmax < 1:
        raise UsageFailure("--kmax must be positive")

    def line(res: verify.CheckResult) -> None:
        if fmt == "table":
            status = "PASS" if res.passed else "FAIL"
            click.echo(f"{status}  {res.name}  ({res.cases} cases, {res.seconds:.2f}s)")

    results = verify.run_suite(suite, kmax, on_result=line)
    failed = [r for r in results if not r.passed]
    if fmt == "json":
        click.echo(json.dumps({"suite": suite, "kmax": kmax, "passed": not failed,
                               "checks": [r.to_json() for r in results]}, indent=2))
    elif fmt == "csv":
        rows = [dict(r.to_json(), counterexample=json.dumps(r.counterexample) if r.counterexample else None)
                for r in results]
        click.echo(_render(rows, ["name", "passed", "cases", "seconds", "counterexample"], "csv"))
    if failed:
        if fmt == "table":
            click.echo(f"counterexample for {failed[0].name}:")
            click.echo(json.dumps(failed[0].counterexample, indent=2))
        sys.exit(EXIT_CHECK)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

DEFAULT_REL_TOL = {"drd-chain": 0.05, "matrix-product": 0.10, "graph-z2": 0.20}


@main.command()
@click.option("--scenario", type=click.Choice(list(rmt.SCENARIOS)), required=True)
@click.option("--head", default="rademacher", show_default=True, help="drd-chain head: a law or zm:m.")
@click.option("--tail", "tails", multiple=True, help="drd-chain tail law; repeat or comma-separate.")
@click.option("--m", "m", type=int, default=1, show_default=True, help="matrix-product depth.")
@click.option("--n", "n", type=int, default=200, show_default=True, help="Matrix dimension.")
@click.option("--trials", type=int, default=32, show_default=True)
@click.option("--k", "k_max", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threads", type=int, default=None, help="Worker threads (default: FREEMIX_THREADS or 1).")
@click.option("--rel-tol", type=float, default=None, help="Relative tolerance (default depends on scenario).")
@click.option("--no-timestamp", is_flag=True, help="Omit timestamp and wall time from JSON.")
@click.option("--traces", "include_traces", is_flag=True, help="Include per-trial traces in JSON.")
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False))
@_guard
def simulate(scenario, head, tails, m, n, trials, k_max, seed, threads, rel_tol, no_timestamp,
             include_traces, fmt, output):
    """Monte Carlo trace-power estimates compared with exact moments."""
    tail_specs = tuple(rmt.DistributionSpec.parse(t) for text in tails for t in _split_chain(text))
    config = rmt.SimulationConfig(
        scenario=scenario,
        n=n,
        trials=trials,
        k_max=k_max,
        seed=seed,
        head=rmt.DistributionSpec.parse(head) if scenario == "drd-chain" else None,
        tail=tail_specs if scenario == "drd-chain" else (),
        m=m,
        rel_tol=DEFAULT_REL_TOL[scenario] if rel_tol is None else rel_tol,
        threads=_resolve_threads(threads),
    )
    report = rmt.run_simulation(config)
    if fmt == "json":
        text = json.dumps(report.to_json(timestamp=not no_timestamp, include_traces=include_traces), indent=2)
    elif fmt == "csv":
        text = report.to_csv().rstrip("\n")
    else:
        rows = []
        for v in report.verdicts():
            rows.append({
                "k": v.k,
                "estimate": f"{v.estimate:.6g}",
                "se": f"{v.se:.3g}",
                "exact": f"{v.exact:.6g}",
                "rel_err": None if v.rel_err is None else f"{v.rel_err:.3%}",
                "verdict": "pass" if v.passed else "FAIL",
            })
        text = _render(rows, ["k", "estimate", "se", "exact", "rel_err", "verdict"], "table")
    _emit(text, output)
    if not report.passed:
        sys.exit(EXIT_CHECK)


if __name__ == "__main__":
    main()
