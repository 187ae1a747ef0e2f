"""Acceptance criteria, one test each.

Every test records a ``[PASS]`` or ``[FAIL]`` line that is printed in the
"acceptance criteria" section at the end of the pytest run.
"""

import contextlib
import io
import math
import time

import numpy as np

from svdkit import svd, truncate
from svdkit.cli import run
from svdkit.entangle import entropy, is_entangled, max_entropy, schmidt, validate_state
from svdkit.grains import GrowthParams, Kind, Selector, csd, generate_population, geometry, mvee
from svdkit.rollcall import (
    Scheme,
    VotingMatrix,
    orient,
    planted_two_bloc,
    predictability,
    project,
    reconstruct_outcomes,
)
from svdkit.tensor3 import cp_als, fit, hosvd, outer3, rank_bound, reconstruct_cp, reconstruct_tucker

from conftest import ACCEPTANCE_RESULTS, cli_invocations, random_orthonormal, write_cli_corpus


@contextlib.contextmanager
def criterion(number, title):
    details = []
    try:
        yield details
    except BaseException:
        ACCEPTANCE_RESULTS.append(f"[FAIL] criterion {number}: {title}")
        raise
    suffix = f" ({'; '.join(details)})" if details else ""
    ACCEPTANCE_RESULTS.append(f"[PASS] criterion {number}: {title}{suffix}")


def test_criterion_1_svd_suite():
    with criterion(1, "SVD invariants on 200 random real/complex matrices") as info:
        rng = np.random.default_rng(1)
        start = time.perf_counter()
        count = 0
        for shape in [(5, 3), (3, 5), (20, 20), (50, 30)]:
            for trial in range(50):
                A = rng.standard_normal(shape)
                if trial % 2:
                    A = A + 1j * rng.standard_normal(shape)
                U, s, V = svd(A)
                p = min(shape)
                I = np.eye(p)
                assert np.linalg.norm(A - (U * s) @ V.conj().T) <= 1e-12 * max(np.linalg.norm(A), 1)
                assert np.linalg.norm(U.conj().T @ U - I) <= 1e-12 * math.sqrt(p)
                assert np.linalg.norm(V.conj().T @ V - I) <= 1e-12 * math.sqrt(p)
                assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
                count += 1
        elapsed = time.perf_counter() - start
        assert count == 200
        assert elapsed < 30
        info.append(f"{elapsed:.1f} s")


def test_criterion_2_eckart_young():
    with criterion(2, "spectral truncation error equals sigma_{k+1} within 1e-10"):
        rng = np.random.default_rng(2)
        for _ in range(50):
            A = rng.standard_normal((10, 8))
            f = svd(A)
            for k in range(f.p):
                err = np.linalg.norm(A - truncate(f, k).approx, 2)
                assert abs(err - f.sigma[k]) <= 1e-10
            assert np.linalg.norm(A - truncate(f, f.p).approx, 2) <= 1e-10


def test_criterion_3_planted_rollcall():
    with criterion(3, "planted two-bloc chamber: bloc recovery, outcomes, predictability") as info:
        planted = planted_two_bloc(n_legislators=100, n_bills=200, loyalty=0.9, absence=0.05, seed=0)
        vm = planted.matrix
        p = orient(project(vm), vm, "R")
        recovery = float(np.mean(np.sign(p.partisan) == planted.bloc))
        assert recovery >= 0.95
        acc = reconstruct_outcomes(vm, Scheme.SCORE_SUM).accuracy
        assert acc >= 0.90
        # rank <= 2 voting matrices: perfectly partisan blocs plus a consensus bill
        rng = np.random.default_rng(3)
        for _ in range(10):
            bloc = rng.choice([-1.0, 1.0], size=12)
            bloc[:2] = [1, -1]
            pos = rng.choice([-1.0, 1.0], size=15)
            A = np.outer(bloc, pos)
            A[:, 0] = 1.0
            legislators = tuple((f"L{i}", "R" if b > 0 else "D") for i, b in enumerate(bloc))
            small = VotingMatrix(legislators, tuple(f"B{j}" for j in range(15)), A)
            assert np.all(predictability(small, 2) == 1.0)
        info.append(f"recovery {recovery:.2f}, ScoreSum accuracy {acc:.3f}")


def test_criterion_4_ellipsoids():
    with criterion(4, "MVEE oracles, containment and Khachiyan speed") as info:
        octahedron = np.vstack([np.eye(3), -np.eye(3)])
        np.testing.assert_allclose(geometry(mvee(octahedron, 1e-9)).radii, [1, 1, 1], atol=1e-6)
        box = np.array([[a, b, c] for a in (-1, 1) for b in (-2, 2) for c in (-3, 3)], dtype=float)
        expected = np.sqrt(3) * np.array([3.0, 2.0, 1.0])
        np.testing.assert_allclose(geometry(mvee(box, 1e-9)).radii, expected, atol=1e-5)
        rng = np.random.default_rng(4)
        tol = 1e-7
        for _ in range(50):
            P = rng.standard_normal((300, 3)) @ rng.standard_normal((3, 3)) + 5 * rng.standard_normal(3)
            e = mvee(P, tol)
            d = P - e.center
            assert np.einsum("ij,jk,ik->i", d, e.shape, d).max() - 1 <= tol
        worst = 0.0
        for g in generate_population(GrowthParams(alpha=0.0, steps=3, noise=0.1, seed=1)):
            start = time.perf_counter()
            mvee(g.points, tol)
            worst = max(worst, time.perf_counter() - start)
        assert worst < 1.0
        info.append(f"slowest grain {worst * 1000:.0f} ms")


def test_criterion_5_csd_linearity():
    with criterion(5, "CSD of the alpha=0.5, steps=8 population is ln-linear") as info:
        pop = generate_population(GrowthParams(alpha=0.5, steps=8, noise=0.0, seed=0))
        rep = csd(pop, Selector.SHORT, Kind.INSCRIBED)
        assert rep.r_squared >= 0.9
        info.append(f"R^2 = {rep.r_squared:.3f}")


def test_criterion_6_entanglement():
    with criterion(6, "entropy of Bell, product and random states"):
        bell = schmidt(validate_state(np.eye(2) / math.sqrt(2)))
        assert abs(entropy(bell) - math.log(2)) <= 1e-12
        rng = np.random.default_rng(6)
        for _ in range(20):
            x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            C = np.outer(x, y.conj())
            spec = schmidt(validate_state(C / np.linalg.norm(C)))
            assert entropy(spec) <= 1e-12 and not is_entangled(spec)
        for _ in range(50):
            C = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            C /= np.linalg.norm(C)
            W1 = random_orthonormal(rng, 4, 4, complex_=True)
            W2 = random_orthonormal(rng, 4, 4, complex_=True)
            h = entropy(schmidt(validate_state(C)))
            assert abs(entropy(schmidt(validate_state(W1 @ C @ W2.conj().T))) - h) <= 1e-10
            assert 0 <= h <= max_entropy(4, 4) + 1e-12
        for m, n in [(2, 5), (6, 3)]:
            C = rng.standard_normal((m, n))
            h = entropy(schmidt(validate_state(C / np.linalg.norm(C))))
            assert 0 <= h <= math.log(min(m, n)) + 1e-12


def test_criterion_7_tensors():
    with criterion(7, "HOSVD exactness and bound, CP recovery, rank bounds") as info:
        rng = np.random.default_rng(7)
        for _ in range(10):
            T = rng.standard_normal((4, 5, 3))
            assert fit(T, reconstruct_tucker(hosvd(T))) <= 1e-12
            ranks = (2, 3, 2)
            err2 = np.linalg.norm(T - reconstruct_tucker(hosvd(T, ranks))) ** 2
            bound = sum(
                np.sum(np.linalg.svd(np.moveaxis(T, d, 0).reshape(T.shape[d], -1), compute_uv=False)[m:] ** 2)
                for d, m in enumerate(ranks)
            )
            assert err2 <= bound + 1e-8
        u, v, w = (np.linalg.qr(rng.standard_normal((n, 2)))[0] for n in (4, 5, 3))
        T = 5 * outer3(u[:, 0], v[:, 0], w[:, 0]) + 3 * outer3(u[:, 1], v[:, 1], w[:, 1])
        model = cp_als(T, 2)
        cp_fit = fit(T, reconstruct_cp(model))
        assert cp_fit <= 1e-6
        np.testing.assert_allclose(model.weights, [5, 3], atol=1e-6)
        assert rank_bound(9, 9, 9) == 81
        assert rank_bound(3, 3, 2) == 4
        info.append(f"CP fit {cp_fit:.1e}, weights {model.weights[0]:.6f}, {model.weights[1]:.6f}")


def test_criterion_8_cli_determinism(tmp_path):
    with criterion(8, "CLI invocations are byte-identical across two runs") as info:
        paths = write_cli_corpus(tmp_path)
        cases = cli_invocations(paths)
        for n, argv in enumerate(cases):
            outputs = []
            for rep in range(2):
                out_dir = tmp_path / f"run{n}_{rep}"
                stdout = io.StringIO()
                assert run(argv, stdout, io.StringIO()) == 0
                assert run(argv + ["--output", str(out_dir)], io.StringIO(), io.StringIO()) == 0
                files = {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}
                outputs.append((stdout.getvalue(), files))
            assert outputs[0] == outputs[1]
        info.append(f"{len(cases)} invocations")
