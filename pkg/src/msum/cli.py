"""Command line entry points.

Everything printed here is a rendering of library results; the paper tables
are regenerated, never pasted. Exit codes: 0 verified / ok, 1 violations
found, 2 usage error, 3 search cap exceeded.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
from math import gcd

import click

from . import campaign, engine
from .cyclo import corollary13_exceptions
from .errors import DomainError, MsumError, NotCoprime, NotFoundWithinCap, UnknownClaim
from .modular import instance, unit_subgroup
from .store import ResultStore
from .towers import tower_sequence

_FORMATS = click.Choice(["text", "json", "csv"])


def _store_path(flag_value: str | None) -> str | None:
    # flags beat the environment
    return flag_value or os.environ.get("MSUM_STORE") or None


def _witness_text(q: int, witness: tuple[int, ...]) -> str:
    if len(witness) > 12:
        groups = []
        for exp in sorted(set(witness)):
            k = witness.count(exp)
            groups.append(f"{k}*{q}^{exp}" if k > 1 else f"{q}^{exp}")
        return "+".join(groups)
    return "+".join(f"{q}^{a}" for a in witness)


@click.group()
def main() -> None:
    """Minimal vanishing sums of powers: compute m(q,e), tables and verifications."""


@main.command("m")
@click.argument("q", type=int)
@click.argument("e", type=int)
@click.option("--format", "fmt", type=_FORMATS, default="text", show_default=True)
@click.option("--store", "store_flag", type=click.Path(), default=None,
              help="Result store path (env MSUM_STORE is the fallback).")
def cmd_m(q: int, e: int, fmt: str, store_flag: str | None) -> None:
    """Compute m(Q, E) with a verified witness."""
    try:
        inst = instance(q, e)
    except NotCoprime:
        raise click.UsageError(
            f"q and e must be coprime; gcd({q},{e}) = {gcd(q, e)}"
        )
    except DomainError as exc:
        raise click.UsageError(str(exc))
    result = engine.m(q, e)
    qr = q % e
    closed = []
    if e == 1:
        closed.append("e=1")
    if qr == 1 and e > 1:
        closed.append("q=1 (mod e)")
    if (e & (e - 1)) == 0 and e > 1:
        closed.append(f"two-power: m = {engine.two_power_m(q, e.bit_length() - 1)}")
    if engine.is_m_two(inst):
        closed.append("m=2 criterion")
    if 1 < qr and inst.e1 > 1 and e < inst.e1 * inst.e1 + 2 * inst.e1:
        closed.append(f"small-modulus case: m = e1 = {inst.e1}")
    bound = engine.ceil_bound(inst)
    store_path = _store_path(store_flag)
    if store_path:
        key = engine.subgroup_key(unit_subgroup(q, e))
        st = ResultStore(store_path)
        st.add(e, key.digest, result.value)
        st.save()
    if fmt == "json":
        click.echo(json.dumps({
            "q": q, "e": e, "m": result.value, "witness": list(result.witness),
            "n": inst.n, "e1": inst.e1, "ceil_bound": bound,
            "closed_forms": closed,
        }, sort_keys=True))
        return
    if q % e == 1:
        click.echo(f"m({q},{e}): m={result.value} (q=1 mod e case)")
    else:
        click.echo(f"m({q},{e}): m={result.value}, witness {_witness_text(q, result.witness)}")
    click.echo(f"  n={inst.n} e1={inst.e1} ceil(e/n)={bound}")
    click.echo("  closed forms: " + ("; ".join(closed) if closed else "none"))


@main.command("table")
@click.option("--e-min", type=int, default=2, show_default=True)
@click.option("--e-max", type=int, required=True)
@click.option("--q-min", type=int, default=1, show_default=True)
@click.option("--q-max", type=int, default=None, help="Default: e-1 per modulus.")
@click.option("--format", "fmt", type=_FORMATS, default="csv", show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Default: stdout.")
def cmd_table(e_min: int, e_max: int, q_min: int, q_max: int | None,
              fmt: str, out: str | None) -> None:
    """Emit the grid of m values (e outer ascending, q inner ascending)."""
    rows = []
    for e in range(max(e_min, 2), e_max + 1):
        table = engine.m_table_for_modulus(e)
        hi = min(q_max, e - 1) if q_max is not None else e - 1
        for q in range(max(q_min, 1), hi + 1):
            got = table.get(q)
            if got is None:
                continue
            rows.append({"e": e, "q": q, "n": got[1], "e1": gcd(e, q - 1), "m": got[0]})
    if fmt == "json":
        text = json.dumps({"rows": rows}, sort_keys=True)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["e", "q", "n", "e1", "m"])
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue().rstrip("\n")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command("verify")
@click.argument("claim_id")
@click.option("--e-max", type=int, default=None)
@click.option("--e-min", type=int, default=None)
@click.option("--p-max", type=int, default=None)
@click.option("--q-max", type=int, default=None)
@click.option("--k-cap", type=int, default=None)
@click.option("--k-max", type=int, default=None)
@click.option("--n-max", type=int, default=None)
@click.option("--r", type=int, default=None)
@click.option("--n", "ns", type=int, multiple=True,
              help="Restrict list-driven claims to these n (repeatable).")
@click.option("--jobs", type=int, default=None, help="Default: logical cores.")
@click.option("--store", "store_flag", type=click.Path(), default=None)
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="Default: ./reports/<claim_id>.json")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
def cmd_verify(claim_id: str, e_max, e_min, p_max, q_max, k_cap, k_max, n_max, r,
               ns, jobs, store_flag, report_path, fmt) -> None:
    """Run one verification claim and write its report."""
    flags = {
        "e_max": e_max, "e_min": e_min, "p_max": p_max, "q_max": q_max,
        "k_cap": k_cap, "k_max": k_max, "n_max": n_max, "r": r,
        "ns": tuple(ns) if ns else None,
    }
    try:
        defaults = campaign.claim_defaults(claim_id)
    except UnknownClaim:
        known = ", ".join(sorted(campaign.list_claims()))
        raise click.UsageError(f"unknown claim '{claim_id}' (known: {known})")
    params = {k: v for k, v in flags.items() if v is not None and k in defaults}
    try:
        report = campaign.run_claim(
            claim_id, params,
            jobs=jobs if jobs is not None else (os.cpu_count() or 1),
            store=_store_path(store_flag),
        )
    except NotFoundWithinCap as exc:
        click.echo(f"cap exceeded: {exc}", err=True)
        sys.exit(3)
    path = report_path or os.path.join("reports", f"{claim_id}.json")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json() + "\n")
    click.echo(report.to_json() if fmt == "json" else report.render_text())
    click.echo(f"report written to {path}", err=True)
    sys.exit(0 if report.ok else 1)


@main.command("claims")
def cmd_claims() -> None:
    """List the verifiable claims."""
    for cid, desc in sorted(campaign.list_claims().items()):
        click.echo(f"{cid:12s} {desc}")


@main.command("sequence")
@click.argument("p", type=int)
@click.argument("n", type=int)
@click.argument("k_max", type=int)
@click.option("--format", "fmt", type=_FORMATS, default="text", show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_sequence(p: int, n: int, k_max: int, fmt: str, out: str | None) -> None:
    """Tower of m values at p, p^2, ..., p^K_MAX for order-n generators."""
    try:
        report = tower_sequence(p, n, k_max)
    except (DomainError, MsumError) as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        text = json.dumps({
            "p": p, "n": n, "k_max": k_max,
            "m_sequence": list(report.m_sequence),
            "levels": [
                {"k": lv.k, "modulus": lv.modulus, "generator": lv.generator,
                 "ord": lv.ord, "m": lv.m, "w": lv.w}
                for lv in report.levels
            ],
            "limit": report.limit, "K_hit": report.K_hit,
            "decreases": list(report.decreases),
        }, sort_keys=True)
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["p", "n", "k", "modulus", "generator", "ord", "m", "w", "limit"])
        for lv in report.levels:
            writer.writerow([p, n, lv.k, lv.modulus, lv.generator, lv.ord, lv.m,
                             lv.w, report.limit])
        text = buf.getvalue().rstrip("\n")
    else:
        lines = [f"tower p={p} n={n} k_max={k_max}"]
        lines.append("  k  modulus          generator        ord  m   w")
        for lv in report.levels:
            lines.append(f"  {lv.k:<2d} {lv.modulus:<16d} {lv.generator:<16d} "
                         f"{lv.ord:<4d} {lv.m:<3d} {lv.w}")
        lines.append(f"m sequence: ({', '.join(str(v) for v in report.m_sequence)})")
        hit = f"reached at k={report.K_hit}" if report.K_hit else "not reached"
        lines.append(f"limit {report.limit}; smallest prime divisor of n {hit}")
        if report.decreases:
            lines.append(f"note: m decreased at k in {list(report.decreases)}")
        text = "\n".join(lines)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command("exceptions")
@click.argument("n", type=int)
@click.option("--k-cap", type=int, default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_exceptions(n: int, k_cap: int | None, jobs: int, fmt: str,
                   out: str | None) -> None:
    """Exception set for order n: prime powers p^k with m below n/(n-phi(n))."""
    try:
        result = corollary13_exceptions(n, k_cap, jobs=jobs)
    except (DomainError, MsumError) as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        text = json.dumps({
            "n": n,
            "threshold": [result.threshold.numerator, result.threshold.denominator],
            "entries": [list(en) for en in result.entries],
            "candidate_pool_size": len(result.candidate_pool),
            "unresolved": [list(u) for u in result.unresolved],
            "complete": result.complete,
        }, sort_keys=True)
    else:
        thr = result.threshold
        lines = [f"exceptions n={n} threshold={thr.numerator}/{thr.denominator}"]
        for p, k, mv in result.entries:
            lines.append(f"  (p={p}, k={k}) m={mv}")
        if not result.entries:
            lines.append("  (none)")
        status = "complete" if result.complete else "candidates, verified members"
        lines.append(f"candidates: {len(result.candidate_pool)}; "
                     f"unresolved: {len(result.unresolved)}; {status}")
        text = "\n".join(lines)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


if __name__ == "__main__":
    main()
