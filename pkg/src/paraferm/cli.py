"""Batch verification front end.

Every identity of the suite is a named subcommand producing one
machine-readable report per check (JSON lines by default, a table with
--format table); `all` runs the whole suite over a range of levels.  Exit
code 0 when everything passes, 1 on any failure, 2 on usage errors.

The environment variable PARAFERM_TRUNCATION overrides the per-check
default truncations.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import characters, lattice_fock, w1inf_symbols
from .errors import BadParams, ParafermError, UnknownCheck
from .fusion_identify import (
    enumerate_simples,
    identify,
    topweight_para,
    topweight_w,
    w_label,
)
from .report import Report, make_report


def _truncation_default(fallback: int) -> int:
    env = os.environ.get("PARAFERM_TRUNCATION")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise BadParams(f"PARAFERM_TRUNCATION must be an integer, got {env!r}") from exc
    return fallback


def _check_ope(params: dict) -> Report:
    return lattice_fock.ope_check(params["k"], _truncation_default(4))


def _check_singular(params: dict) -> Report:
    k = params["k"]
    seed = params.get("seed", 0)
    T = _truncation_default(4)
    cv = lattice_fock.conformal_vectors(k, T)
    entries = []
    r1 = lattice_fock.singular_vector_check(cv["W3"], cv["omega_para"])
    entries.append(("W3 is singular for the coset conformal vector", r1.passed, None))
    dim = lattice_fock.singular_space_dimension(k)
    entries.append(
        (
            "weight-3 singular space in the commutant is one-dimensional",
            dim == 1,
            None if dim == 1 else {"dimension": dim},
        )
    )
    r2 = lattice_fock.virasoro_bracket_check(k, truncation=max(T, 5), seed=seed)
    entries.append(("Virasoro bracket spot checks", r2.passed, None))
    return make_report(
        "singular-vector",
        {"k": k, "truncation": T, "seed": seed},
        entries,
        identity="uniqueness and singularity of the weight-3 coset primary",
    )


def _check_ek_power(params: dict) -> Report:
    k = params["k"]
    return lattice_fock.ek_power_check(k, max(_truncation_default(k + 2), k + 2))


def _check_lk0(params: dict) -> Report:
    k = params["k"]
    T = params.get("max_weight") or _truncation_default(10)
    return characters.decomposition_check_lk0(k, T)


def _check_lki(params: dict) -> Report:
    k = params["k"]
    T = params.get("max_weight") or _truncation_default(10)
    i = params.get("i")
    if i is not None:
        return characters.decomposition_check_lki(k, i, T)
    entries = []
    for ii in range(k + 1):
        r = characters.decomposition_check_lki(k, ii, T)
        entries.append((f"module {ii} decomposes", r.passed, None if r.passed else r.to_obj()))
    return make_report(
        "lki-decomposition",
        {"k": k, "i": "all", "max_weight": T},
        entries,
        identity="graded dimensions of every affine module equal its coset-sum",
    )


def _check_dual_route(params: dict) -> Report:
    k = params["k"]
    T = params.get("max_weight") or _truncation_default(6 if k <= 3 else 4)
    return characters.string_dual_route_check(k, params.get("i") or 0, T, j=params.get("j"), strict=False)


def _check_topweight(params: dict) -> Report:
    k = params["k"]
    bad = []
    for i in range(k + 1):
        for j in range(k):
            para = topweight_para(k, i, j)
            img = w_label(k, j, j - i)
            if para != topweight_w(k, img.a, img.b):
                bad.append({"i": i, "j": j})
    n = len(enumerate_simples(k))
    entries = [
        (
            f"top weights match on all {n} classes",
            not bad,
            None if not bad else {"mismatches": bad},
        )
    ]
    return make_report(
        "top-weight-match",
        {"k": k},
        entries,
        identity="coset and W-side top weights agree under the first matching",
    )


def _check_identify(params: dict) -> Report:
    k = params["k"]
    bijs = identify(k)
    entries = [
        ("exactly two identifications", len(bijs) == 2, {"count": len(bijs)}),
        (
            "both preserve top weights",
            all(b.preserves_topweights() for b in bijs),
            None,
        ),
        ("bijections", True, {"bijections": [b.to_obj() for b in bijs]}),
    ]
    return make_report(
        "identify",
        {"k": k},
        entries,
        identity="the two matchings of the simple-module families",
    )


def _check_w1inf(params: dict) -> Report:
    bound = params.get("max") or 20
    reached = w1inf_symbols.generation_closure({1, 2}, bound)
    want = set(range(1, bound + 1))
    ok = reached == want
    chains = w1inf_symbols.derivation_chains({1, 2}, bound)
    witness = {"reached": sorted(reached)}
    if ok:
        witness["witness_products"] = {str(t): list(w) for t, w in sorted(chains.items())}
    else:
        witness["missing"] = sorted(want - reached)
        witness["extra"] = sorted(reached - want)
    entries = [
        (f"weight-2 and weight-3 symbols generate J^1..J^{bound}", ok, witness)
    ]
    return make_report(
        "w1inf-generation",
        {"max": bound},
        entries,
        identity="generation of the graded symbol algebra from two seeds",
    )


def _check_intertwiner(params: dict) -> Report:
    return lattice_fock.intertwiner_leading_check(params["k"], _truncation_default(3))


CHECKS = {
    "ope": (_check_ope, "bracket relations of the level-k generators"),
    "singular-vector": (_check_singular, "weight-3 coset primary: singular and unique"),
    "ek-power": (_check_ek_power, "highest nonzero power of E(-1) on the vacuum"),
    "lk0-decomposition": (_check_lk0, "vacuum module decomposition into coset strings"),
    "lki-decomposition": (_check_lki, "every module's decomposition into coset strings"),
    "string-dual-route": (_check_dual_route, "string functions vs Fock kernel dimensions"),
    "top-weight-match": (_check_topweight, "coset vs W-side top weights"),
    "identify": (_check_identify, "the two simple-module identifications"),
    "w1inf-generation": (_check_w1inf, "symbol algebra generation"),
    "intertwiner-leading": (_check_intertwiner, "leading intertwiner coefficients"),
}


def run_check(name: str, params: dict) -> Report:
    """Dispatch one registered check; see CHECKS for the registry."""
    if name not in CHECKS:
        raise UnknownCheck(f"unknown check {name!r}; known: {sorted(CHECKS)}")
    handler, _ = CHECKS[name]
    try:
        return handler(params)
    except ParafermError:
        raise
    except (TypeError, KeyError) as exc:
        raise BadParams(f"check {name!r} cannot run with params {params}: {exc}") from exc


def run_all(kmax: int, max_weight=None) -> list[Report]:
    """Every check for 3 <= k <= kmax, plus the level-independent ones."""
    if kmax < 3:
        raise BadParams(f"need kmax >= 3, got {kmax}")
    T = max_weight or _truncation_default(6)
    reports = []
    for k in range(3, kmax + 1):
        reports.append(run_check("ope", {"k": k}))
        reports.append(run_check("singular-vector", {"k": k}))
        reports.append(run_check("ek-power", {"k": k}))
        reports.append(run_check("lk0-decomposition", {"k": k, "max_weight": T}))
        reports.append(run_check("lki-decomposition", {"k": k, "max_weight": T}))
        # the Fock route grows quickly with rank and depth; shrink the window
        dual_T = max(3, T - 2 - (k - 3))
        for i in range(k + 1):
            reports.append(
                run_check("string-dual-route", {"k": k, "i": i, "max_weight": dual_T})
            )
        reports.append(run_check("top-weight-match", {"k": k}))
        reports.append(run_check("identify", {"k": k}))
        reports.append(run_check("intertwiner-leading", {"k": k}))
    reports.append(run_check("w1inf-generation", {"max": 20}))
    reports.sort(key=lambda r: (r.check, r.to_json()))
    return reports


# ---------------------------------------------------------------------------
# argument parsing and output
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="paraferm",
        description="Exact verification suite for the coset/W-algebra identities.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, k=True, ij=False, weight=False):
        if k:
            p.add_argument("--k", type=int, required=True, help="level (k >= 3)")
        if ij:
            p.add_argument("--i", type=int, default=None)
            p.add_argument("--j", type=int, default=None)
        if weight:
            p.add_argument("--max-weight", type=int, default=None)
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=str, default=None)

    for name, (_, help_text) in CHECKS.items():
        p = sub.add_parser(name, help=help_text)
        if name == "w1inf-generation":
            p.add_argument("--max", type=int, default=20)
            common(p, k=False)
        elif name in ("lk0-decomposition",):
            common(p, weight=True)
        elif name in ("lki-decomposition", "string-dual-route"):
            common(p, ij=True, weight=True)
        else:
            common(p)
    p = sub.add_parser("all", help="run the full suite for 3 <= k <= kmax")
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    return ap


def _format_table(reports: list[Report]) -> str:
    rows = [("CHECK", "PARAMS", "STATUS", "DETAILS")]
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
        ok = sum(1 for d in r.details if d.get("ok"))
        rows.append((r.check, params, r.status, f"{ok}/{len(r.details)} ok"))
    widths = [max(len(row[c]) for row in rows) for c in range(4)]
    return "\n".join(
        "  ".join(col.ljust(w) for col, w in zip(row, widths)).rstrip() for row in rows
    )


def _emit(reports: list[Report], fmt: str, out: str | None) -> None:
    if fmt == "table":
        text = _format_table(reports) + "\n"
    else:
        text = "".join(r.to_json() + "\n" for r in reports)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "all":
            reports = run_all(args.kmax, args.max_weight)
        else:
            params = {
                key: getattr(args, key)
                for key in ("k", "i", "j", "max_weight", "seed", "max")
                if getattr(args, key, None) is not None
            }
            reports = [run_check(args.command, params)]
    except (BadParams, UnknownCheck) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    _emit(reports, args.format, args.out)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
