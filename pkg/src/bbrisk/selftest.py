"""Built-in sanity checks: the hand-computable identities of every module.

Used by the ``selftest`` CLI subcommand; each check is cheap and
deterministic, so a failure points at a broken build rather than noise.
"""
from __future__ import annotations

import math

import numpy as np

from . import closedform, constant, mc, model, paths


def _checks():
    yield "normalize_horizon identity", lambda: model.normalize_horizon(
        model.ModelParams(1, 1, 0, 0, 1.0, 1, 1)) == model.ModelParams(1, 1, 0, 0, 1.0, 1, 1)

    def nh_rescale():
        p = model.normalize_horizon(model.ModelParams(1, 0.5, 0, 0, 4.0, 2, 2))
        return (p.T == 1.0 and math.isclose(p.u1, 1.0) and math.isclose(p.u2, 1.0)
                and math.isclose(p.c1, 2.0) and math.isclose(p.c2, 1.0))
    yield "normalize_horizon rescaling", nh_rescale

    def canon_swap():
        c = model.canonicalize(model.ModelParams(1, 2, 0.5, 1.0, 1.0, 1, 2))
        return (c.u == 2 and c.a == 0.5 and c.c1 == 2 and c.c2 == 1
                and c.gamma1 == 1.0 and c.gamma2 == 0.5)
    yield "canonicalize swap", canon_swap

    def canon_negative():
        c = model.canonicalize(model.ModelParams(0, 0, 0, 0, 1.0, 3, -1.5))
        return c.u == 3 and c.a == -0.5
    yield "canonicalize negative ratio", canon_negative

    def path_zero():
        return paths.sample_bm(16, 1.0, paths.SeedSpec(7)).values[0] == 0.0
    yield "sample_bm starts at zero", path_zero

    def path_det():
        a = paths.sample_bm(64, 1.0, paths.SeedSpec(7, 3)).values
        b = paths.sample_bm(64, 1.0, paths.SeedSpec(7, 3)).values
        return bool(np.array_equal(a, b))
    yield "sample_bm deterministic", path_det

    def drift_check():
        p = paths.GridPath(2, 1.0, np.array([0.0, 1.0, 2.0]))
        return bool(np.allclose(paths.drifted(p, 2.0).values, [0, 0, 0]))
    yield "drifted hand case", drift_check

    def runinf_check():
        p = paths.GridPath(2, 1.0, np.array([0.0, -1.0, 0.5]))
        return bool(np.allclose(paths.running_inf(p).values, [0, -1, -1]))
    yield "running_inf hand case", runinf_check

    def reflect_check():
        p = paths.GridPath(2, 1.0, np.array([0.0, -1.0, 0.5]))
        full = np.allclose(paths.reflect(p, 1.0).values, [0, 0, 1.5])
        half = np.allclose(paths.reflect(p, 0.5).values, [0, -0.5, 1.0])
        return bool(full and half)
    yield "reflect hand cases", reflect_check

    yield "bridge min at unif=1", lambda: paths.bridge_min_sample(0.3, -0.2, 0.5, 1.0) == -0.2

    yield "normal_cdf symmetry", lambda: closedform.normal_cdf(0.0) == 0.5

    yield "ruin_1d_finite at u=0", lambda: abs(closedform.ruin_1d_finite(0, 1, 1) - 1) < 1e-12

    yield "ruin_1d_infinite exponent", lambda: math.isclose(
        closedform.ruin_1d_infinite(1, 1), closedform.ruin_1d_infinite(0.5, 2))

    yield "constant upper bound", lambda: math.isclose(
        closedform.constant_upper_bound(1, 1, 1), 16.0)

    def stair_single():
        return math.isclose(constant.staircase_exp_integral(
            np.array([0.0]), np.array([0.0]), 1.0), 1.0)
    yield "staircase single point", stair_single

    def stair_two():
        val = constant.staircase_exp_integral(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 1.0)
        return math.isclose(val, 2 * math.e - 1)
    yield "staircase two points", stair_two

    def stair_dominated():
        val = constant.staircase_exp_integral(np.array([1.0, 0.5]), np.array([0.0, -1.0]), 1.0)
        return math.isclose(val, math.e)
    yield "staircase dominated point", stair_dominated

    def indicator_simultaneity():
        prob = model.CanonicalProblem(u=1.0, a=1.0, c1=0.0, c2=0.0, gamma1=0.0, gamma2=0.0)
        p1 = paths.GridPath(2, 1.0, np.array([0.0, 2.0, 0.0]))
        p2 = paths.GridPath(2, 1.0, np.array([0.0, 0.0, 3.0]))
        return mc.ruin_indicator(prob, p1, p2) is False
    yield "ruin needs simultaneous exceedance", indicator_simultaneity

    def indicator_t0():
        prob = model.CanonicalProblem(u=-1.0, a=0.5, c1=0.0, c2=0.0, gamma1=0.0, gamma2=0.0)
        p1 = paths.GridPath(1, 1.0, np.array([0.0, -2.0]))
        p2 = paths.GridPath(1, 1.0, np.array([0.0, -2.0]))
        return mc.ruin_indicator(prob, p1, p2) is True
    yield "both barriers negative: ruined at time zero", indicator_t0


def run(report=print) -> bool:
    ok = True
    for name, check in _checks():
        try:
            passed = bool(check())
        except Exception as exc:  # noqa: BLE001 - a selftest must never crash the CLI
            passed = False
            report(f"FAIL {name}: {exc!r}")
            ok = False
            continue
        report(f"{'PASS' if passed else 'FAIL'} {name}")
        ok &= passed
    return ok
