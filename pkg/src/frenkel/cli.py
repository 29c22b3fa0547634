"""Batch front door: pair generation, the identity verification suite,
pencil curve export, truncation experiments, and the divergence probe.

Reports are byte-reproducible: a fixed item list, seeded inputs and no
wall-clock data in the output mean repeated runs (at any FRENKEL_THREADS
setting) serialize identically.  Exit codes: 0 all checks pass, 1 some
identity failed, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import frechet, pencil, resolvent, schatten
from .divergence import delta_operator, trace_divergence
from .io import json_ready, read_pair, write_csv, write_pair
from .linalg import (
    ZERO_BAND,
    hermitian_part,
    opnorm,
    random_unitary,
    support_relation,
)
from .quadrature import (
    divergence_probe,
    frenkel_trace,
    proof_chain_integrals,
    rhs_frg,
    rhs_frg1,
)

COMMANDS = ("gen", "verify", "pencil", "truncate", "probe")


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one batch invocation."""

    command: str
    seed: int = 0
    dim: int = 4
    tol: float = 1e-8
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    commuting: bool = False
    singular_b: bool = False
    unsupported: bool = False
    condition_target: float = 100.0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not (1 <= self.dim <= 512):
            raise ValueError("dim must be in [1, 512]")
        if not (1e-12 <= self.tol <= 1e-2):
            raise ValueError("tol must be in [1e-12, 1e-2]")
        if not (1.0 <= self.condition_target <= 1e10):
            raise ValueError("condition target must be in [1, 1e10]")
        if self.unsupported and self.commuting:
            raise ValueError("unsupported pairs are generated non-commuting")


def _spread(rng: np.random.Generator, n: int, cond: float) -> np.ndarray:
    base = np.logspace(0.0, -math.log10(cond), n) if (n > 1 and cond > 1) else np.ones(n)
    jitter = rng.uniform(0.8, 1.25, n)
    scale = rng.uniform(0.5, 2.0)
    return np.sort(base * jitter)[::-1] * scale


def generate_pair(config: RunConfig) -> tuple[np.ndarray, np.ndarray]:
    """Seeded PSD/PD pair construction, byte-reproducible from the seed.

    commuting: both matrices share one eigenbasis.  singular_b: B loses its
    trailing third of eigenvalues and A is built inside range(B) (support
    containment holds).  unsupported: B singular but A full rank, so the
    support dichotomy fails and the divergence is infinite.
    """
    rng = np.random.default_rng(config.seed)
    n = config.dim
    cond = config.condition_target
    U = random_unitary(n, rng)
    a_evs = _spread(rng, n, cond)
    b_evs = _spread(rng, n, cond)
    Ub = U if config.commuting else random_unitary(n, rng)
    if config.unsupported:
        k = max(1, n // 3) if n > 1 else 1
        b_evs[n - k :] = 0.0
        A = hermitian_part((U * a_evs) @ U.conj().T)
        B = hermitian_part((Ub * b_evs) @ Ub.conj().T)
        return A, B
    if config.singular_b:
        k = max(1, n // 3) if n > 1 else 0
        b_evs[n - k :] = 0.0
        B = hermitian_part((Ub * b_evs) @ Ub.conj().T)
        r = n - k
        V = Ub[:, :r]
        if config.commuting:
            A1 = np.diag(a_evs[:r]).astype(complex)
        else:
            G = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
            W, _ = np.linalg.qr(G)
            A1 = hermitian_part((W * a_evs[:r]) @ W.conj().T)
        A = hermitian_part(V @ A1 @ V.conj().T)
        return A, B
    A = hermitian_part((U * a_evs) @ U.conj().T)
    B = hermitian_part((Ub * b_evs) @ Ub.conj().T)
    return A, B


def _threads() -> int:
    raw = os.environ.get("FRENKEL_THREADS", "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"FRENKEL_THREADS must be an integer, got {raw!r}")
    return min(8, os.cpu_count() or 1)


def _is_pd(M: np.ndarray) -> bool:
    w = np.linalg.eigvalsh(M)
    return bool(w.min() > ZERO_BAND * np.abs(w).max(initial=0.0))


def _suite_items(A: np.ndarray, B: np.ndarray, tol: float):
    """The fixed list of (name, thunk); each thunk returns a result dict.

    Items whose formulas need a definite operand (logs of B, the chain
    integrals) are skipped for PSD-but-singular inputs; the restriction
    route items cover those pairs.
    """
    a_pd = _is_pd(A)
    b_pd = _is_pd(B)
    both_pd = a_pd and b_pd
    scale_tr = max(1.0, abs(float(np.trace(A).real)))

    def main_identity():
        delta = delta_operator(A, B).delta
        r = rhs_frg1(A, B, tol)
        return {"residual": float(np.linalg.norm(r.value - delta, 2)), "threshold": 100 * tol}

    def form_equivalence():
        r1 = rhs_frg1(A, B, tol)
        r2 = rhs_frg(A, B, tol)
        return {"residual": float(np.linalg.norm(r1.value - r2.value, 2)), "threshold": 2 * tol}

    def trace_formula():
        d = trace_divergence(A, B)
        return {"residual": abs(frenkel_trace(A, B, tol) - d), "threshold": 100 * tol}

    def trace_consistency():
        rep = delta_operator(A, B)
        return {
            "residual": rep.residual_trace_consistency,
            "threshold": 1e-8 * (1 + abs(rep.trace_div)),
        }

    def pairing_trace():
        if not b_pd:
            return {"skipped": True}
        r1, _ = frechet.trace_pairing_check(B, A)
        return {"residual": r1, "threshold": 1e-9 * scale_tr}

    def pairing_identity():
        if not b_pd:
            return {"skipped": True}
        _, r2 = frechet.trace_pairing_check(B, A)
        return {"residual": r2, "threshold": 1e-10}

    def chain_identity():
        if not both_pd:
            return {"skipped": True}
        pc = proof_chain_integrals(A, B, tol)
        return {"residual": pc.residual_chain, "threshold": 10 * tol}

    def log_difference_representation():
        if not both_pd:
            return {"skipped": True}
        pc = proof_chain_integrals(A, B, tol)
        return {"residual": pc.residual_log_difference, "threshold": 10 * tol}

    def dlog_representation():
        if not both_pd:
            return {"skipped": True}
        pc = proof_chain_integrals(A, B, tol)
        return {"residual": pc.residual_dlog_representation, "threshold": 10 * tol}

    def log_resolvent_oracle():
        from .linalg import matrix_log

        if not b_pd:
            return {"skipped": True}
        return {
            "residual": float(np.linalg.norm(resolvent.log_resolvent(B, tol) - matrix_log(B), 2)),
            "threshold": 1e-6,
        }

    def abs_resolvent_oracle():
        from .linalg import parts

        target = parts(A - B).absolute_value
        got = resolvent.abs_resolvent(A - B, tol)
        return {"residual": float(np.linalg.norm(got - target, 2)), "threshold": 1e-6}

    def dlog_resolvent_oracle():
        if not b_pd:
            return {"skipped": True}
        got = resolvent.dlog_resolvent(B, A, tol)
        return {"residual": float(np.linalg.norm(got - frechet.dlog(B, A), 2)), "threshold": 1e-6}

    def dlog_fd_oracle():
        if not b_pd:
            return {"skipped": True}
        got = frechet.dlog_fd_oracle(B, A)
        return {"residual": float(np.linalg.norm(got - frechet.dlog(B, A), 2)), "threshold": 1e-7}

    def bdlog_product_oracle():
        from .divergence import embed, restrict_pair

        pr = resolvent.bdlog_product(A, B, tol)
        V, A1, B1 = restrict_pair(A, B)
        target = embed(V, B1 @ frechet.dlog(B1, A1), A.shape[0])
        residual = float(np.linalg.norm(pr.value - target, 2))
        bound_excess = max(0.0, pr.value_norm - pr.bound * (1 + 1e-6) - tol)
        return {
            "residual": max(residual, bound_excess),
            "threshold": 1e-6,
            "norm": pr.value_norm,
            "bound": pr.bound,
        }

    def alogdiff_oracle():
        if not both_pd:
            return {"skipped": True}
        li = resolvent.alogdiff_integral(A, B, tol)
        from .divergence import _block_chain

        target = _block_chain(A, B)
        residual = float(np.linalg.norm(li.value - target, 2))
        excess = 0.0
        if li.within_a is not None and not li.within_a:
            excess = max(excess, li.value_norm - li.bound_a)
        if li.within_b is not None and not li.within_b:
            excess = max(excess, li.value_norm - li.bound_b)
        return {"residual": max(residual, excess), "threshold": 1e-6}

    def kato_bound():
        lhs, rhs = pencil.kato_continuity_check(A, B)
        return {"residual": lhs - rhs * (1 + 1e-9), "threshold": 0.0, "lhs": lhs, "rhs": rhs}

    def araki_bound():
        lhs, rhs = pencil.araki_check(A, B)
        return {"residual": lhs - rhs * (1 + 1e-9), "threshold": 0.0, "lhs": lhs, "rhs": rhs}

    def delta_psd():
        rep = delta_operator(A, B)
        scale = max(opnorm(rep.delta), 1.0)
        return {"residual": -rep.delta_min_eigenvalue, "threshold": 1e-8 * scale}

    def quadrature_psd():
        r = rhs_frg1(A, B, tol)
        min_eig = float(np.linalg.eigvalsh(r.value).min())
        return {"residual": -min_eig, "threshold": r.error_estimate + 1e-10}

    return [
        ("main_identity_gamma_form", main_identity),
        ("form_equivalence", form_equivalence),
        ("trace_formula", trace_formula),
        ("trace_consistency", trace_consistency),
        ("pairing_trace", pairing_trace),
        ("pairing_identity", pairing_identity),
        ("chain_identity", chain_identity),
        ("log_difference_representation", log_difference_representation),
        ("dlog_representation", dlog_representation),
        ("log_resolvent_oracle", log_resolvent_oracle),
        ("abs_resolvent_oracle", abs_resolvent_oracle),
        ("dlog_resolvent_oracle", dlog_resolvent_oracle),
        ("dlog_fd_oracle", dlog_fd_oracle),
        ("bdlog_product_oracle", bdlog_product_oracle),
        ("alogdiff_oracle", alogdiff_oracle),
        ("kato_bound", kato_bound),
        ("araki_bound", araki_bound),
        ("delta_psd", delta_psd),
        ("quadrature_psd", quadrature_psd),
    ]


def run_verification_suite(A: np.ndarray, B: np.ndarray, tol: float, threads: Optional[int] = None) -> dict:
    """Run every identity check on one pair and assemble the JSON report.

    Pairs without support containment route to the divergence probe instead;
    their single check is the growth slope against log t.
    """
    sup = support_relation(A, B)
    report = {"schema": 1, "dim": int(A.shape[0]), "tol": tol}
    if not sup.holds:
        record = divergence_probe(A, B, (10.0, 100.0, 1000.0, 10000.0), tol)
        slope_ok = record.slope >= 0.9 * record.witness_mass
        report["dichotomy"] = "divergent"
        report["witness"] = json_ready(record.witness)
        report["probe"] = {
            "checkpoints": json_ready(record.checkpoints),
            "values": json_ready(record.values),
            "slope": json_ready(record.slope),
            "witness_mass": json_ready(record.witness_mass),
        }
        report["items"] = [
            {
                "name": "divergence_growth_slope",
                "residual": json_ready(0.9 * record.witness_mass - record.slope),
                "threshold": 0.0,
                "pass": bool(slope_ok),
            }
        ]
        report["all_pass"] = bool(slope_ok)
        return report

    report["dichotomy"] = "finite"
    items = _suite_items(A, B, tol)
    n_workers = threads if threads is not None else _threads()

    def run_one(pair):
        name, thunk = pair
        t0 = time.perf_counter()
        out = thunk()
        elapsed = time.perf_counter() - t0
        return name, out, elapsed

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(run_one, items))
    else:
        results = [run_one(it) for it in items]

    entries = []
    all_pass = True
    timings = {}
    for name, out, elapsed in results:
        timings[name] = elapsed
        if out.get("skipped"):
            entries.append({"name": name, "skipped": True, "pass": True})
            continue
        ok = out["residual"] <= out["threshold"]
        entry = {"name": name, "skipped": False, "pass": bool(ok)}
        for key, val in out.items():
            entry[key] = json_ready(val)
        entries.append(entry)
        all_pass = all_pass and ok
    report["items"] = entries
    report["all_pass"] = bool(all_pass)
    # Timings stay out of the report so repeated runs serialize identically.
    total = sum(timings.values())
    print(f"suite: {len(entries)} items in {total:.2f}s (wall, summed)", file=sys.stderr)
    return report


def _cmd_gen(args) -> int:
    config = RunConfig(
        command="gen",
        seed=args.seed,
        dim=args.dim,
        commuting=args.commuting,
        singular_b=args.singular_b,
        unsupported=args.unsupported,
        condition_target=args.cond,
    )
    A, B = generate_pair(config)
    write_pair(args.output, A, B, seed=args.seed)
    return 0


def _panel_log(result) -> dict:
    return {
        "panels": [[json_ready(iv[0]), json_ready(iv[1]), json_ready(err)] for iv, err in result.panels],
        "evaluations": result.evaluations,
        "error_estimate": json_ready(result.error_estimate),
        "tail_bound": json_ready(result.tail_bound),
        "converged": result.converged,
    }


def _cmd_verify(args) -> int:
    A, B = read_pair(args.input)
    report = run_verification_suite(A, B, args.tol)
    if args.diagnostics and report["dichotomy"] == "finite":
        report["diagnostics"] = {
            "gamma_form": _panel_log(rhs_frg1(A, B, args.tol)),
            "t_line": _panel_log(rhs_frg(A, B, args.tol)),
        }
    text = json.dumps(report, indent=2)
    with open(args.output, "w") as fh:
        fh.write(text)
        fh.write("\n")
    return 0 if report["all_pass"] else 1


def _cmd_pencil(args) -> int:
    A, B = read_pair(args.input)
    grid = np.linspace(args.lo, args.hi, args.points)
    curves = pencil.eigencurves(A, B, grid)
    pencil.write_eigencurves_csv(args.output, grid, curves)
    return 0


def _cmd_truncate(args) -> int:
    with open(args.config) as fh:
        cfg = json.load(fh)
    model = schatten.model_from_config(cfg)
    T = schatten.synth_compact(model)
    series = schatten.truncation_series(T, model.p)
    schatten.write_series_csv(args.output, series)
    return 0


def _cmd_probe(args) -> int:
    A, B = read_pair(args.input)
    checkpoints = [float(tok) for tok in args.checkpoints.split(",") if tok.strip()]
    record = divergence_probe(A, B, checkpoints)
    write_csv(
        args.output,
        ["t", "witness_quadratic_form"],
        ([t, v] for t, v in zip(record.checkpoints, record.values)),
    )
    slope = "nan" if record.slope is None else f"{record.slope:.17g}"
    print(f"slope={slope} witness_mass={record.witness_mass:.17g}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frenkel",
        description="Batch verification of the operator-divergence integral identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded PSD pair")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dim", type=int, default=4)
    g.add_argument("--commuting", action="store_true")
    g.add_argument("--singular-b", dest="singular_b", action="store_true")
    g.add_argument("--unsupported", action="store_true")
    g.add_argument("--cond", type=float, default=100.0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=_cmd_gen)

    v = sub.add_parser("verify", help="run the identity suite on a pair file")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--diagnostics", action="store_true", help="embed quadrature panel logs in the report")
    v.add_argument("-o", "--output", required=True)
    v.set_defaults(func=_cmd_verify)

    p = sub.add_parser("pencil", help="export eigenvalue curves of A - gamma B")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_pencil)

    t = sub.add_parser("truncate", help="run a truncation experiment from a config file")
    t.add_argument("--config", required=True)
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=_cmd_truncate)

    b = sub.add_parser("probe", help="growth probe for a pair without support containment")
    b.add_argument("-i", "--input", required=True)
    b.add_argument("--checkpoints", default="10,100,1000,10000")
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(func=_cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"frenkel: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
