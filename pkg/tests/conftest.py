import numpy as np
import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_orthonormal(rng, n, k, complex_=False):
    X = rng.standard_normal((n, k))
    if complex_:
        X = X + 1j * rng.standard_normal((n, k))
    Q, _ = np.linalg.qr(X)
    return Q


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


def write_cli_corpus(directory):
    """Small input files covering every CLI subcommand; returns name -> path."""
    from svdkit import io as sio
    from svdkit.grains import GrowthParams, box_surface_points, generate_population
    from svdkit.rollcall import Vote, VoteRecord, planted_two_bloc

    rng = np.random.default_rng(7)
    paths = {}

    def put(name, text):
        p = directory / name
        p.write_text(text)
        paths[name] = str(p)

    put("A.csv", sio.format_matrix_csv(rng.standard_normal((6, 4))))
    put("Z.csv", sio.format_matrix_csv(rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))))
    put("bell.csv", sio.format_matrix_csv(np.eye(2) / np.sqrt(2)))
    put("unnormalized.csv", "1,0\n0,1\n")
    planted = planted_two_bloc(n_legislators=30, n_bills=40, seed=3)
    vm = planted.matrix
    records = [
        VoteRecord(lid, party, bid, Vote(int(vm.A[i, j])))
        for i, (lid, party) in enumerate(vm.legislators)
        for j, bid in enumerate(vm.bills)
    ]
    put("votes.csv", sio.format_rollcall_csv(records))
    T = np.einsum("i,j,k->ijk", [1.0, 2, 0.5, -1], [1.0, 0, 1, 2, 1], [3.0, 1, 1]) + 0.5 * np.einsum(
        "i,j,k->ijk", [0.0, 1, 1, 0], [1.0, -1, 0, 0, 2], [0.0, 1, -1]
    )
    put("tensor.txt", sio.format_tensor(T))
    pts = box_surface_points([1.0, 2.0, 3.0], 400)
    put("points.csv", "x,y,z\n" + "".join(f"{x!r},{y!r},{z!r}\n" for x, y, z in pts.tolist()))
    pop = generate_population(GrowthParams(alpha=0.5, steps=5, points_per_grain=300))
    put("population.json", sio.dumps(sio.population_to_json(pop)))
    return paths


def cli_invocations(paths):
    """Argument lists (without --output) forming the determinism corpus."""
    return [
        ["svd", "--input", paths["A.csv"]],
        ["svd", "--input", paths["A.csv"], "--k", "2"],
        ["svd", "--input", paths["Z.csv"], "--k", "1", "--format", "csv"],
        ["rollcall", "--input", paths["votes.csv"], "--right-party", "R"],
        ["rollcall", "--input", paths["votes.csv"], "--right-party", "D", "--scheme", "sign-majority"],
        ["grains", "--input", paths["points.csv"]],
        ["grains", "--input", paths["population.json"], "--selector", "long", "--kind", "mean"],
        ["grains", "--steps", "5", "--points-per-grain", "300", "--noise", "0.05", "--write-population"],
        ["entangle", "--input", paths["bell.csv"]],
        ["entangle", "--input", paths["unnormalized.csv"], "--normalize", "--format", "csv"],
        ["tensor", "--input", paths["tensor.txt"]],
        ["tensor", "--input", paths["tensor.txt"], "--method", "cp", "--r", "2"],
        ["tensor", "--input", paths["tensor.txt"], "--method", "cp", "--r", "2", "--init", "random", "--seed", "4"],
        ["tensor", "--input", paths["tensor.txt"], "--multirank", "2,2,2"],
    ]
