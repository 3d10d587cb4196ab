"""Reproducible command-line harness for every verification in the package.

Each subcommand drives one family of cross-checks and emits a flat CSV table
(one row per reported quantity, complex values as re/im columns, every number
carrying an error estimate or an "exact" marker) plus a JSON record echoing
the full configuration so any run is reproducible from its record alone.

Exit codes: 0 success, 1 numeric failure (disagreement, unconverged
quadrature, failed acceptance row), 2 usage error (bad flags or parameters).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__, asymptotic, calibration, exactrep, gue, hciz, kahler
from .matcore import RngStream

_ROW_FIELDS = ("quantity", "re", "im", "error", "error_kind")


class UsageError(ValueError):
    """Invalid parameter combination (exit code 2)."""


# ----------------------------------------------------------------------
# parsing and emission plumbing
# ----------------------------------------------------------------------

def _complex_scalar(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"not a complex number: {text!r}") from exc


def _complex_list(text: str) -> tuple[complex, ...]:
    if not text.strip():
        return ()
    return tuple(_complex_scalar(tok) for tok in text.split(","))


def _real_list(text: str) -> tuple[float, ...]:
    values = _complex_list(text)
    if any(v.imag for v in values):
        raise UsageError(f"expected real numbers, got {text!r}")
    return tuple(v.real for v in values)


def _grid_pair(text: str) -> tuple[int, int]:
    toks = text.split(",")
    if len(toks) != 2:
        raise UsageError(f"--grid takes two comma-separated integers, got {text!r}")
    return int(toks[0]), int(toks[1])


def _row(quantity: str, value, error: float | None, error_kind: str) -> dict:
    z = complex(value)
    return {"quantity": quantity, "re": z.real, "im": z.imag,
            "error": 0.0 if error is None else float(error), "error_kind": error_kind}


def _emit(record: dict, out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_ROW_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in record["rows"]:
        writer.writerow(row)
    csv_text = buf.getvalue()
    json_text = json.dumps(record, indent=2, default=str) + "\n"
    if out:
        with open(out + ".csv", "w") as fh:
            fh.write(csv_text)
        with open(out + ".json", "w") as fh:
            fh.write(json_text)
        print(f"wrote {out}.csv and {out}.json")
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write("\n")
        sys.stdout.write(json_text)


def _run_and_emit(args: argparse.Namespace, runner) -> int:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    t0 = time.perf_counter()
    rows, notes, ok = runner(args)
    record = {
        "command": args.command,
        "version": __version__,
        "config": {k: repr(v) if isinstance(v, (tuple, complex)) else v
                   for k, v in config.items()},
        "rows": rows,
        "notes": notes,
        "ok": bool(ok),
        "wall_time_s": round(time.perf_counter() - t0, 6),
    }
    _emit(record, args.out)
    return 0 if ok else 1


# ----------------------------------------------------------------------
# subcommand runners
# ----------------------------------------------------------------------

def _trace_h2_samples(n: int, samples: int, gen: np.random.Generator) -> np.ndarray:
    """Tr H^2 = sum |H_ij|^2 per sample, generated in fixed-size batches."""
    parts = []
    done = 0
    while done < samples:
        count = min(512, samples - done)
        h = gue.sample_gue_batch(n, count, gen)
        parts.append(np.sum(np.abs(h) ** 2, axis=(1, 2)))
        done += count
    return np.concatenate(parts)


def _run_sample_gue(args) -> tuple[list, list, bool]:
    rng = RngStream(seed=args.seed, stream_id=0)
    edges, density = gue.spectral_histogram(args.size, args.samples, args.bins, rng)
    centers = 0.5 * (edges[:-1] + edges[1:])
    rows = []
    sup = 0.0
    for c, d in zip(centers, density):
        rows.append(_row(f"density@{c:+.3f}", d, None, "estimate"))
        if abs(c) < 2:
            sup = max(sup, abs(d - math.sqrt(4 - c * c) / (2 * math.pi)))
    tr2 = _trace_h2_samples(args.size, min(args.samples, 2000),
                            RngStream(seed=args.seed, stream_id=1).generator())
    stderr = float(tr2.std(ddof=1) / math.sqrt(len(tr2)))
    rows.append(_row("sup|density - semicircle| (bulk)", sup, None, "estimate"))
    rows.append(_row("mean Tr H^2", tr2.mean(), stderr, "stderr"))
    rows.append(_row("expected Tr H^2", float(args.size), None, "exact"))
    ok = abs(float(tr2.mean()) - args.size) <= 3 * stderr
    return rows, [f"semicircle sup-norm over |mu|<2 at bin width {float(edges[1]-edges[0]):.3f}"], ok


def _spectral_from_args(args) -> gue.SpectralParams:
    return gue.SpectralParams(n_B=len(args.mu1b), n_F=len(args.muf) // 2,
                              mu_1B=args.mu1b, mu_2B=args.mu2b, mu_F=args.muf,
                              rotated_fermionic=not args.plain_fermionic)


def _run_correlator(args) -> tuple[list, list, bool]:
    notes = []
    if args.mode == "mc":
        sp = _spectral_from_args(args)
        est = gue.correlator_mc(sp, N=args.size, samples=args.samples,
                                rng=RngStream(seed=args.seed, stream_id=0),
                                threads=args.threads)
        rows = [_row("correlator_mc", est.mean,
                     max(est.stderr_real, est.stderr_imag), "stderr_max"),
                _row("stderr_real", est.stderr_real, None, "exact"),
                _row("stderr_imag", est.stderr_imag, None, "exact")]
        return rows, notes, True
    if args.mode == "exact":
        sp = _spectral_from_args(args)
        n_q, n_p = (args.grid if args.grid else (None, None))
        params = exactrep.ExactRepParams(N=args.size, spectral=sp,
                                         n_q=n_q, n_p=n_p, tol=args.tol)
        res = exactrep.correlator_exact(params)
        if sp.n_B % 2 == 1:
            notes.append(f"branch phase cell ({args.size % 2}, {sp.n_B}, {sp.n_F}): "
                         f"{calibration.correlator_phase(args.size, sp.n_B, sp.n_F)}")
        rows = [_row("correlator_exact", res.value, res.error, "quadrature"),
                _row("converged", 1.0 if res.converged else 0.0, None, "exact")]
        return rows, notes, res.converged
    # asymptotic
    params = asymptotic.ScalingParams(mu=args.mu, omega_1B=args.omega1b,
                                      omega_2B=args.omega2b, omega_F=args.omegaf)
    value = asymptotic.asymptotic_correlator(params, args.size,
                                             b_denominator=args.b_denominator)
    notes.append(f"asymptotic branch cell ({args.size % 2}, {params.n_B}, {params.n_F}): "
                 f"{calibration.asymptotic_phase(args.size, params.n_B, params.n_F)}")
    sv = asymptotic.saddle_points(args.mu)
    rows = [_row("correlator_asymptotic", value, None, "leading order"),
            _row("q_plus", sv.q_plus, None, "exact"),
            _row("q_minus", sv.q_minus, None, "exact")]
    return rows, notes, True


def _run_hciz(args) -> tuple[list, list, bool]:
    inp = hciz.HcizInput(x=args.x, y=args.y)
    rows, notes = [], []
    ok = True
    if args.group == "unitary":
        det_val = hciz.hciz_compact_det(inp)
        rows.append(_row("determinant_kernel", det_val, None, "exact"))
        if args.method == "weyl":
            w = hciz.compact_normalization(inp.size) * hciz.weyl_sum(inp, (inp.size,))
            rows.append(_row("normalized_weyl_sum", w, None, "exact"))
            ok = abs(w - det_val) <= 1e-9 * max(1.0, abs(det_val))
        elif args.method == "mc":
            est = hciz.haar_mc_hciz(inp, args.samples,
                                    RngStream(seed=args.seed, stream_id=0),
                                    threads=args.threads)
            rows.append(_row("haar_mc", est.mean,
                             max(est.stderr_real, est.stderr_imag), "stderr_max"))
            rows.append(_row("stderr_real", est.stderr_real, None, "exact"))
            rows.append(_row("stderr_imag", est.stderr_imag, None, "exact"))
            ok = (abs(est.mean.real - det_val.real) <= 3 * est.stderr_real
                  and abs(est.mean.imag - det_val.imag) <= 3 * est.stderr_imag)
        elif args.method == "quad":
            raise UsageError("disk quadrature applies to the pseudo-unitary rank-1 case; "
                             "use --group pseudo --n1 1 --n2 1")
    else:
        sig = hciz.PseudoSignature(args.n1, args.n2)
        res = hciz.hciz_pseudo_det(inp, sig)
        rows.append(_row("determinant_kernel", res.value, None, "exact"))
        rows.append(_row("converges", 1.0 if res.converges else 0.0, None, "exact"))
        if args.method == "weyl":
            w = ((-1.0) ** (args.n1 * args.n2)) * hciz.weyl_sum(inp, (args.n1, args.n2))
            rows.append(_row("normalized_weyl_sum", w, None, "exact"))
            ok = abs(w - res.value) <= 1e-9 * max(1.0, abs(res.value))
        elif args.method == "quad":
            if (args.n1, args.n2) != (1, 1):
                raise UsageError("disk quadrature is the rank-1 route: --n1 1 --n2 1")
            grid = args.grid if args.grid else (400, 256)
            q = hciz.disk_quadrature_rank1(inp, grid)
            rows.append(_row("disk_quadrature", q, abs(q - res.value), "vs closed form"))
            notes.append(f"measure calibration factor {calibration.disk_measure_factor()}")
            ok = abs(q - res.value) <= 1e-3 * abs(res.value)
        elif args.method == "mc":
            raise UsageError("Monte Carlo over the noncompact group is not a supported "
                             "route; use --method det|weyl|quad")
    return rows, notes, ok


def _run_dh_check(args) -> tuple[list, list, bool]:
    space = kahler.CosetSpace.COMPACT_CP1 if args.space == "cp1" else kahler.CosetSpace.NONCOMPACT_DISK
    t = args.t
    grid = args.grid if args.grid else (400, 64)
    numeric = kahler.dh_integral_numeric(space, t, grid)
    fixed = kahler.dh_fixed_point_sum(space, t)
    diff = abs(numeric - fixed)
    rows = [_row("numeric_integral", numeric, diff, "vs fixed-point sum"),
            _row("fixed_point_sum", fixed, None, "exact")]
    tol = 1e-6 if args.space == "cp1" else 1e-5
    return rows, [f"localization exactness tolerance {tol}"], diff <= tol * max(1.0, abs(fixed))


def _run_kernel_check(args) -> tuple[list, list, bool]:
    sig = hciz.PseudoSignature(args.n1, args.n2)
    inp = hciz.HeatKernelInput(alpha=args.alpha, beta=args.beta, t=args.t)
    value = hciz.heat_kernel(inp, sig)
    resid = hciz.heat_residual(inp, sig)
    rows = [_row("kernel_value", value, None, "exact sum"),
            _row("heat_equation_residual", resid, None, "finite difference")]
    ok = abs(resid) <= 1e-4 * max(abs(value), 1e-300)
    return rows, ["residual of d/dt K = (1/2) Laplacian_alpha K"], ok


def _run_theorem1(args) -> tuple[list, list, bool]:
    inst = exactrep.TheoremOneInstance(N=args.size, m=args.m, field_kind=args.field)
    lhs, rhs = exactrep.gram_gaussian_check(inst)
    rows = [_row("gaussian_lhs", lhs, None, "exact"),
            _row("gaussian_rhs", rhs, None, "exact"),
            _row("reduction_constant", exactrep.gram_reduction_constant(inst), None, "exact")]
    ok = abs(lhs - rhs) <= 1e-10 * lhs
    notes = []
    if args.field == "complex":
        rep = exactrep.wishart_mc_check(inst, args.samples,
                                        RngStream(seed=args.seed, stream_id=0))
        rows += [_row("trace_mean", rep.tr_mean, rep.tr_stderr, "stderr"),
                 _row("trace_expected", rep.tr_expected, None, "exact"),
                 _row("det_mean", rep.det_mean, rep.det_stderr, "stderr"),
                 _row("det_expected", rep.det_expected, None, "exact"),
                 _row("min_eigenvalue", rep.min_eigenvalue, None, "estimate")]
        ok = ok and (abs(rep.tr_mean - rep.tr_expected) <= 3 * rep.tr_stderr
                     and abs(rep.det_mean - rep.det_expected) <= 3 * rep.det_stderr
                     and rep.min_eigenvalue >= -1e-10)
    else:
        notes.append("Monte Carlo moment check implements the complex convention only")
    return rows, notes, ok


# ----------------------------------------------------------------------
# acceptance suite
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    margin: str
    seconds: float


def _timed(fn):
    t0 = time.perf_counter()
    passed, margin = fn()
    return passed, margin, time.perf_counter() - t0


def _gapped_vector(gen: np.random.Generator, n: int, gap: float) -> tuple[float, ...]:
    steps = gap + gen.uniform(0.0, 0.7, size=n)
    return tuple(np.cumsum(steps) + gen.uniform(-2.0, 0.0))


def _criterion_1() -> tuple[bool, str]:
    """Unitary group integral: determinant kernel vs Haar Monte Carlo."""
    worst = 0.0
    for n, stream in ((2, 0), (3, 1)):
        gen = RngStream(seed=11, stream_id=stream).generator()
        for i in range(10):
            inp = hciz.HcizInput(x=_gapped_vector(gen, n, 0.3), y=_gapped_vector(gen, n, 0.3))
            det_val = hciz.hciz_compact_det(inp)
            est = hciz.haar_mc_hciz(inp, 10**5, RngStream(seed=101, stream_id=10 * n + i),
                                    threads=4)
            worst = max(worst,
                        abs(est.mean.real - det_val.real) / est.stderr_real,
                        abs(est.mean.imag - det_val.imag) / est.stderr_imag)
    return worst <= 3.0, f"worst deviation {worst:.2f} sigma (limit 3)"


def _criterion_2() -> tuple[bool, str]:
    """Determinant kernels reproduce the Weyl permutation sums exactly."""
    gen = RngStream(seed=12, stream_id=0).generator()
    worst = 0.0
    for blocks in ((3,), (2, 1), (2, 2)):
        n = sum(blocks)
        for _ in range(50):
            inp = hciz.HcizInput(x=_gapped_vector(gen, n, 0.25), y=_gapped_vector(gen, n, 0.25))
            if len(blocks) == 1:
                closed = hciz.hciz_compact_det(inp)
                w = hciz.compact_normalization(n) * hciz.weyl_sum(inp, blocks)
            else:
                closed = hciz.hciz_pseudo_det(inp, hciz.PseudoSignature(*blocks)).value
                w = ((-1.0) ** (blocks[0] * blocks[1])) * hciz.weyl_sum(inp, blocks)
            worst = max(worst, abs(closed - w) / max(abs(closed), 1e-300))
    return worst <= 1e-10, f"worst relative error {worst:.2e} (limit 1e-10)"


def _criterion_3(break_disk_factor: bool = False) -> tuple[bool, str]:
    """Rank-1 disk quadrature vs the closed pseudo-unitary kernel."""
    gen = RngStream(seed=13, stream_id=0).generator()
    sig = hciz.PseudoSignature(1, 1)
    worst = 0.0
    found = 0
    while found < 10:
        x = (complex(gen.uniform(-2, 2), gen.uniform(0.3, 2.0)), gen.uniform(-1, 1))
        y = (gen.uniform(0.3, 2.0), 0.0)
        inp = hciz.HcizInput(x=x, y=y)
        if not hciz.pseudo_convergence_flag(inp, sig):
            continue
        found += 1
        closed = hciz.hciz_pseudo_det(inp, sig).value
        quad = hciz.disk_quadrature_rank1(inp, (400, 256))
        if break_disk_factor:
            quad /= calibration.disk_measure_factor()  # deliberately broken constant
        worst = max(worst, abs(quad - closed) / abs(closed))
    return worst <= 1e-3, f"worst relative error {worst:.2e} (limit 1e-3)"


def _criterion_4() -> tuple[bool, str]:
    """Localization: numeric phase-space integrals equal fixed-point sums."""
    worst = 0.0
    for t in (0.5, 1.0, 2.0, 5.0):
        numeric = kahler.dh_integral_numeric(kahler.CosetSpace.COMPACT_CP1, t)
        fixed = kahler.dh_fixed_point_sum(kahler.CosetSpace.COMPACT_CP1, t)
        analytic = math.sin(t) / t
        err = max(abs(numeric - fixed), abs(numeric - analytic)) / 1e-6
        worst = max(worst, err)
    for t in (1j, 2j, 1 + 1j):
        numeric = kahler.dh_integral_numeric(kahler.CosetSpace.NONCOMPACT_DISK, t)
        fixed = kahler.dh_fixed_point_sum(kahler.CosetSpace.NONCOMPACT_DISK, t)
        worst = max(worst, abs(numeric - fixed) / 1e-5)
    return worst <= 1.0, f"worst error {worst:.2e} in units of the tolerance"


def _random_interior(gen: np.random.Generator, space: kahler.CosetSpace) -> complex:
    r = math.sqrt(gen.uniform(0.01, 0.81)) if space is kahler.CosetSpace.NONCOMPACT_DISK \
        else math.sqrt(gen.uniform(0.01, 4.0))
    phi = gen.uniform(0.0, 2.0 * math.pi)
    return r * complex(math.cos(phi), math.sin(phi))


def _criterion_5() -> tuple[bool, str]:
    """Momentum-map gradient equations and Hamiltonian localizability."""
    gen = RngStream(seed=15, stream_id=0).generator()
    worst = 0.0
    for space in kahler.CosetSpace:
        for _ in range(100):
            p = kahler.CosetPoint(z=_random_interior(gen, space))
            worst = max(worst, kahler.localizability_residual(space, p))
    control = kahler.localizability_residual(
        kahler.CosetSpace.COMPACT_CP1, kahler.CosetPoint(z=0.4 + 0.2j),
        hamiltonian=lambda z: (z * np.conj(z)).real)
    ok = worst <= 1e-6 and control > 1e-2
    return ok, f"worst residual {worst:.2e} (limit 1e-6), negative control {control:.2e} (> 1e-2)"


def _criterion_6() -> tuple[bool, str]:
    """Potential cocycle and projector conjugation under the group action."""
    gen = RngStream(seed=16, stream_id=0).generator()
    worst = 0.0
    for space in kahler.CosetSpace:
        for _ in range(100):
            g = kahler.random_group_element(space, gen)
            p = kahler.CosetPoint(z=_random_interior(gen, space))
            gp = kahler.moebius_action(g, p)
            # K(gz) = K(z) - ln|cz+d|^2 holds on both spaces in these charts
            cocycle = (kahler.kahler_potential(space, gp)
                       - kahler.kahler_potential(space, p)
                       + 2.0 * complex(np.log(g.c * p.z + g.d)).real)
            conj = g.matrix @ kahler.rho_matrix(space, p) @ kahler.group_inverse(space, g)
            moved = kahler.rho_matrix(space, gp)
            # projector entries scale like 1/(1-|gz|^2) near the disk edge, so
            # the conjugation defect is measured relative to the matrix scale
            scale = max(1.0, float(np.max(np.abs(moved))))
            worst = max(worst, abs(cocycle),
                        float(np.max(np.abs(moved - conj))) / scale)
    return worst <= 1e-12, f"worst identity violation {worst:.2e} (limit 1e-12)"


def _criterion_7() -> tuple[bool, str]:
    """Gram-reduction identity and Wishart moment Monte Carlo."""
    worst = 0.0
    for (n, m) in ((3, 1), (4, 1), (4, 2), (5, 2)):
        for kind in ("real", "complex"):
            lhs, rhs = exactrep.gram_gaussian_check(
                exactrep.TheoremOneInstance(N=n, m=m, field_kind=kind))
            worst = max(worst, abs(lhs - rhs) / lhs)
    rep = exactrep.wishart_mc_check(exactrep.TheoremOneInstance(N=4, m=2, field_kind="complex"),
                                    10**5, RngStream(seed=17, stream_id=0))
    sig = max(abs(rep.tr_mean - rep.tr_expected) / rep.tr_stderr,
              abs(rep.det_mean - rep.det_expected) / rep.det_stderr)
    ok = worst <= 1e-10 and sig <= 3.0 and rep.min_eigenvalue >= -1e-10
    return ok, f"identity rel err {worst:.2e} (limit 1e-10), moments {sig:.2f} sigma (limit 3)"


def _acceptance_cells_8():
    return {
        "(1,0)": gue.SpectralParams(n_B=1, n_F=0, mu_1B=(0.4 + 1.0j,), mu_2B=(-0.2 - 1.0j,), mu_F=()),
        "(0,1)": gue.SpectralParams(n_B=0, n_F=1, mu_1B=(), mu_2B=(), mu_F=(0.7, -0.3)),
        "(1,1)": gue.SpectralParams(n_B=1, n_F=1, mu_1B=(0.4 + 1.0j,), mu_2B=(-0.2 - 1.0j,), mu_F=(0.7, -0.3)),
    }


def _criterion_8() -> tuple[bool, str]:
    """Exact finite-N representation vs brute-force Monte Carlo."""
    worst = 0.0
    for i, (_, sp) in enumerate(_acceptance_cells_8().items()):
        res = exactrep.correlator_exact(exactrep.ExactRepParams(N=8, spectral=sp))
        est = gue.correlator_mc(sp, N=8, samples=10**6,
                                rng=RngStream(seed=18, stream_id=i), threads=4)
        worst = max(worst,
                    abs(est.mean.real - res.value.real) / est.stderr_real,
                    abs(est.mean.imag - res.value.imag) / est.stderr_imag)
    return worst <= 3.0, f"worst deviation {worst:.2f} sigma (limit 3)"


def _criterion_9() -> tuple[bool, str]:
    """Decoupling limit of the exact representation."""
    sp = gue.SpectralParams(n_B=1, n_F=1, mu_1B=(0.5 + 10j,), mu_2B=(0.5 - 10j,),
                            mu_F=(10.0, -10.0))
    res = exactrep.correlator_exact(exactrep.ExactRepParams(N=6, spectral=sp))
    target = ((-1.0) ** 6 * (10.0 * -10.0) ** 6 / ((0.5 + 10j) * (0.5 - 10j)) ** 6)
    rel = abs(res.value - target) / abs(target)
    return rel <= 0.01, f"relative deviation {rel:.2e} (limit 1e-2)"


def _criterion_10() -> tuple[bool, str]:
    """Large-N asymptotics against the exact representation and Monte Carlo."""
    w1, w2, wf = (1j,), (-1j,), (0.5, -0.5)
    params = asymptotic.ScalingParams(mu=0.0, omega_1B=w1, omega_2B=w2, omega_F=wf)
    devs = []
    for n in (8, 16, 32):
        sp = gue.SpectralParams(n_B=1, n_F=1, mu_1B=(w1[0] / n,), mu_2B=(w2[0] / n,),
                                mu_F=tuple(1j * w / n for w in wf))
        exact = exactrep.correlator_exact(exactrep.ExactRepParams(N=n, spectral=sp)).value
        asym = asymptotic.asymptotic_correlator(params, n)
        devs.append(abs(abs(exact / asym) - 1.0))
    monotone = devs[0] > devs[1] > devs[2]
    n = 40
    asym40 = abs(asymptotic.asymptotic_correlator(params, n))
    sp = gue.SpectralParams(n_B=1, n_F=1, mu_1B=(w1[0] / n,), mu_2B=(w2[0] / n,),
                            mu_F=tuple(1j * w / n for w in wf))
    est = gue.correlator_mc(sp, N=n, samples=10**5,
                            rng=RngStream(seed=110, stream_id=0), threads=4)
    mc_dev = abs(abs(est.mean) / asym40 - 1.0)
    ok = monotone and devs[2] <= 0.15 and mc_dev <= 0.12
    return ok, (f"ratio deviations {devs[0]:.3f} > {devs[1]:.3f} > {devs[2]:.3f} "
                f"(monotone: {monotone}, final limit 0.15); MC modulus dev {mc_dev:.3f} (limit 0.12)")


def _chamber_pair(gen: np.random.Generator) -> tuple[tuple, tuple, float]:
    """Nearby chamber-ordered endpoint vectors for the (2,1) kernel.

    First-block gaps >= 1 and endpoint offsets <= 0.3 keep the signed sum
    away from cancellation, so relative residuals measure the PDE itself.
    """
    b0 = gen.uniform(0.5, 1.2)
    a0 = b0 + gen.uniform(-0.3, 0.3)
    a1 = a0 - gen.uniform(1.0, 1.6)
    b1 = b0 - gen.uniform(1.0, 1.6)
    a2 = gen.uniform(-0.5, 0.5)
    b2 = a2 + gen.uniform(-0.3, 0.3)
    return (a0, a1, a2), (b0, b1, b2), float(gen.uniform(0.7, 1.5))


def _criterion_11() -> tuple[bool, str]:
    """Permutation-sum kernel solves the heat equation; block antisymmetry."""
    sig = hciz.PseudoSignature(2, 1)
    gen = RngStream(seed=111, stream_id=0).generator()
    worst = 0.0
    for _ in range(100):
        alpha, beta, t = _chamber_pair(gen)
        inp = hciz.HeatKernelInput(alpha=alpha, beta=beta, t=t)
        k_val = hciz.heat_kernel(inp, sig)
        worst = max(worst, hciz.heat_residual(inp, sig) / abs(k_val))
    inp = hciz.HeatKernelInput(alpha=(0.7, -0.4, 0.1), beta=(0.6, -0.5, 0.2), t=0.9)
    swapped = hciz.HeatKernelInput(alpha=(-0.4, 0.7, 0.1), beta=(0.6, -0.5, 0.2), t=0.9)
    anti = hciz.heat_kernel(inp, sig) + hciz.heat_kernel(swapped, sig)
    ok = worst <= 1e-4 and anti == 0.0
    return ok, f"worst residual {worst:.2e} x |K| (limit 1e-4), antisymmetry defect {anti}"


def _criterion_12() -> tuple[bool, str]:
    """Sampler statistics: semicircle density and the Tr H^2 normalization."""
    n, samples = 64, 1000
    edges, density = gue.spectral_histogram(n, samples, bins=20,
                                            rng=RngStream(seed=112, stream_id=0))
    centers = 0.5 * (edges[:-1] + edges[1:])
    mask = np.abs(centers) <= 1.5
    sup = float(np.max(np.abs(density[mask] - np.sqrt(4 - centers[mask] ** 2) / (2 * np.pi))))
    tr2 = _trace_h2_samples(n, samples, RngStream(seed=112, stream_id=1).generator())
    stderr = float(tr2.std(ddof=1) / math.sqrt(samples))
    t_sig = abs(float(tr2.mean()) - n) / stderr
    ok = sup <= 0.02 and t_sig <= 3.0
    return ok, f"semicircle sup-norm {sup:.4f} (limit 0.02), Tr H^2 {t_sig:.2f} sigma (limit 3)"


ACCEPTANCE_CRITERIA: tuple[tuple[str, object], ...] = (
    ("unitary-integral-vs-haar-mc", _criterion_1),
    ("determinant-vs-weyl-sum", _criterion_2),
    ("disk-quadrature-vs-closed-form", _criterion_3),
    ("localization-exactness", _criterion_4),
    ("momentum-map-pdes", _criterion_5),
    ("transformation-laws", _criterion_6),
    ("gram-reduction-identity", _criterion_7),
    ("exact-representation-vs-mc", _criterion_8),
    ("decoupling-limit", _criterion_9),
    ("asymptotics-vs-exact-and-mc", _criterion_10),
    ("heat-kernel-residual", _criterion_11),
    ("sampler-statistics", _criterion_12),
)


def run_acceptance(negative_control: bool = False) -> tuple[list[CriterionResult], bool]:
    results = []
    for name, fn in ACCEPTANCE_CRITERIA:
        if negative_control and name == "disk-quadrature-vs-closed-form":
            fn = lambda: _criterion_3(break_disk_factor=True)  # noqa: E731
            name = name + " [broken-constant fixture]"
        passed, margin, secs = _timed(fn)
        results.append(CriterionResult(name=name, passed=passed, margin=margin, seconds=secs))
    return results, all(r.passed for r in results)


def _run_acceptance_cmd(args) -> tuple[list, list, bool]:
    results, all_ok = run_acceptance(negative_control=args.negative_control)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.margin}  [{r.seconds:.1f}s]", file=sys.stderr)
    rows = [_row(r.name, 1.0 if r.passed else 0.0, None, r.margin) for r in results]
    notes = [f"{sum(r.passed for r in results)}/{len(results)} criteria passed"]
    return rows, notes, all_ok


# ----------------------------------------------------------------------
# argument parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmtlab",
        description="Cross-validation harness: random-matrix correlators, group "
                    "integrals, localization geometry, and their large-N limits.")
    parser.add_argument("--version", action="version", version=f"rmtlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=2026, help="root seed of the run")
        p.add_argument("--out", type=str, default=None,
                       help="basename for <out>.csv and <out>.json (default: stdout)")

    p = sub.add_parser("sample-gue",
                       help="sampler statistics: spectral histogram vs the semicircle "
                            "law and the Tr H^2 = N normalization")
    p.add_argument("--size", type=int, default=64, help="matrix size N")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--bins", type=int, default=20)
    common(p)
    p.set_defaults(func=_run_sample_gue)

    p = sub.add_parser("correlator",
                       help="characteristic-polynomial ratio correlator: Monte Carlo, "
                            "exact finite-N quadrature, or large-N asymptotics")
    p.add_argument("--mode", choices=("mc", "exact", "asymptotic"), required=True)
    p.add_argument("--size", "--N", dest="size", type=int, default=8, help="matrix size N")
    p.add_argument("--mu1b", type=_complex_list, default=(),
                   help="comma-separated upper-half-plane denominator arguments")
    p.add_argument("--mu2b", type=_complex_list, default=(),
                   help="comma-separated lower-half-plane denominator arguments")
    p.add_argument("--muf", type=_complex_list, default=(),
                   help="comma-separated numerator arguments (rotated; length 2 n_F)")
    p.add_argument("--plain-fermionic", action="store_true",
                   help="treat --muf as direct polynomial arguments instead of rotated ones")
    p.add_argument("--samples", type=int, default=10**5, help="mc mode: sample count")
    p.add_argument("--threads", type=int, default=1, help="mc mode: worker threads")
    p.add_argument("--grid", type=_grid_pair, default=None,
                   help="exact mode: n_q,n_p quadrature node counts")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="exact mode: relative error above which the result is unconverged")
    p.add_argument("--mu", type=float, default=0.0, help="asymptotic mode: bulk point")
    p.add_argument("--omega1b", type=_complex_list, default=(),
                   help="asymptotic mode: scaled denominator offsets (upper)")
    p.add_argument("--omega2b", type=_complex_list, default=(),
                   help="asymptotic mode: scaled denominator offsets (lower)")
    p.add_argument("--omegaf", type=_complex_list, default=(),
                   help="asymptotic mode: scaled numerator offsets")
    p.add_argument("--b-denominator", choices=("cross", "printed"), default="cross",
                   help="asymptotic mode: index range of the mixed denominator product")
    common(p)
    p.set_defaults(func=_run_correlator)

    p = sub.add_parser("hciz",
                       help="unitary / pseudo-unitary group integrals: determinant "
                            "kernel vs Weyl sum vs Haar Monte Carlo vs disk quadrature")
    p.add_argument("--group", choices=("unitary", "pseudo"), required=True)
    p.add_argument("--method", choices=("det", "weyl", "mc", "quad"), default="det")
    p.add_argument("--x", type=_complex_list, required=True, help="first eigenvalue vector")
    p.add_argument("--y", type=_complex_list, required=True, help="second eigenvalue vector")
    p.add_argument("--n1", type=int, default=1, help="pseudo: positive-signature block size")
    p.add_argument("--n2", type=int, default=1, help="pseudo: negative-signature block size")
    p.add_argument("--samples", type=int, default=10**5, help="mc method: sample count")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--grid", type=_grid_pair, default=None,
                   help="quad method: radial,angular node counts")
    common(p)
    p.set_defaults(func=_run_hciz)

    p = sub.add_parser("dh-check",
                       help="localization check: numeric phase-space integral vs "
                            "fixed-point sum on the sphere or the disk")
    p.add_argument("--space", choices=("cp1", "disk"), required=True)
    p.add_argument("--t", type=_complex_scalar, required=True,
                   help="scale of the localizable Hamiltonian (disk needs Im t > 0)")
    p.add_argument("--grid", type=_grid_pair, default=None, help="radial,angular node counts")
    common(p)
    p.set_defaults(func=_run_dh_check)

    p = sub.add_parser("kernel-check",
                       help="permutation-sum kernel: heat-equation residual and "
                            "block antisymmetry")
    p.add_argument("--n1", type=int, default=2)
    p.add_argument("--n2", type=int, default=1)
    p.add_argument("--alpha", type=_real_list, required=True,
                   help="start vector, length n1+n2")
    p.add_argument("--beta", type=_real_list, required=True,
                   help="end vector, length n1+n2")
    p.add_argument("--t", type=float, required=True, help="diffusion time (> 0)")
    common(p)
    p.set_defaults(func=_run_kernel_check)

    p = sub.add_parser("theorem1",
                       help="vector-to-matrix integration identity: Gaussian self-check "
                            "of the reduction constant plus Gram-moment Monte Carlo")
    p.add_argument("--size", "--N", dest="size", type=int, required=True, help="vector dimension N")
    p.add_argument("--m", type=int, required=True, help="number of vectors")
    p.add_argument("--field", choices=("real", "complex"), default="complex")
    p.add_argument("--samples", type=int, default=10**5)
    common(p)
    p.set_defaults(func=_run_theorem1)

    p = sub.add_parser("acceptance",
                       help="run every acceptance criterion; one pass/fail row each, "
                            "nonzero exit on any failure")
    p.add_argument("--negative-control", action="store_true",
                   help="re-run the disk-quadrature row with a deliberately broken "
                        "measure constant to demonstrate the row fails")
    common(p)
    p.set_defaults(func=_run_acceptance_cmd)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run_and_emit(args, args.func)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OverflowError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
