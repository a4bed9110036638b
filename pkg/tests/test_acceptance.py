"""Acceptance gate: one test per shipped guarantee.

Each test is self-contained and checks exactly one promise at its stated
tolerance, so `pytest -v tests/test_acceptance.py` reads as a pass/fail
checklist. Dataset-level checks run on the bundled synthetic portrait
corpus with a fixed seed; nothing here depends on network or external
data.
"""
import math
import time
import warnings
from collections import Counter

import numpy as np
import pytest

from qface import baselines, bench, classifier, cli, dataio, encoding, qsim, swaptest

TRAIN_N = 150
SPLIT_SEED = 0


def random_unit(rng, dim):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def swap_test_p0(psi, phi):
    """Ancilla ground-state probability straight from the simulated circuit."""
    reg = swaptest.build_swap_test_state(
        qsim.from_amplitudes(psi), qsim.from_amplitudes(phi)
    )
    return qsim.probability_zero(reg, reg.num_qubits - 1)


def test_01_circuit_agrees_with_analytic_across_dims():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    for dim in (2, 4, 8, 16, 64):
        for _ in range(100):
            psi, phi = random_unit(rng, dim), random_unit(rng, dim)
            analytic = abs(np.vdot(psi, phi)) ** 2
            circuit = swaptest.estimate_fidelity(psi, phi, mode=swaptest.CIRCUIT_EXACT)
            assert abs(circuit.value - analytic) < 1e-10
            p0 = swap_test_p0(psi, phi)
            assert abs(p0 - (0.5 + 0.5 * analytic)) < 1e-10
    assert time.perf_counter() - start < 30.0


def test_02_identical_and_orthogonal_states():
    rng = np.random.default_rng(102)
    for dim in (2, 16, 64):
        psi = random_unit(rng, dim)
        est = swaptest.estimate_fidelity(psi, psi, mode=swaptest.CIRCUIT_EXACT)
        assert abs(est.value - 1.0) < 1e-12

        e0 = np.zeros(dim); e0[0] = 1.0
        e1 = np.zeros(dim); e1[1] = 1.0
        assert abs(swap_test_p0(e0, e1) - 0.5) < 1e-12
        est = swaptest.estimate_fidelity(e0, e1, mode=swaptest.CIRCUIT_EXACT)
        assert abs(est.value) < 1e-12


def test_03_sampled_estimates_track_analytic_within_three_sigma():
    start = time.perf_counter()
    shots = 100_000
    rng = np.random.default_rng(103)
    hits = 0
    for trial in range(100):
        psi, phi = random_unit(rng, 64), random_unit(rng, 64)
        analytic = abs(np.vdot(psi, phi)) ** 2
        p_true = 0.5 + 0.5 * analytic
        sigma = 2.0 * math.sqrt(p_true * (1.0 - p_true) / shots)
        est = swaptest.estimate_fidelity(
            psi, phi, mode=swaptest.SAMPLED, shots=shots, seed=trial,
        )
        if abs(est.value - analytic) <= 3.0 * sigma:
            hits += 1
    assert hits >= 99
    assert time.perf_counter() - start < 120.0


def test_04_register_size_per_encoding_dim():
    assert encoding.required_qubits(16) == 9
    assert encoding.required_qubits(64) == 13
    assert encoding.required_qubits(256) == 17


def test_05_gate_involutions_and_norm_stability():
    rng = np.random.default_rng(105)

    reg = qsim.from_amplitudes(random_unit(rng, 2 ** 6))
    once = qsim.apply_hadamard(reg, 3)
    twice = qsim.apply_hadamard(once, 3)
    assert np.allclose(twice.amplitudes, reg.amplitudes, atol=1e-12)

    once = qsim.apply_controlled_swap(reg, 5, 1, 4)
    twice = qsim.apply_controlled_swap(once, 5, 1, 4)
    assert np.allclose(twice.amplitudes, reg.amplitudes, atol=1e-12)

    # 1000 random gates; the register guard raises on drift > 1e-9
    state = qsim.from_amplitudes(random_unit(rng, 2 ** 6))
    for _ in range(1000):
        if rng.integers(2) == 0:
            state = qsim.apply_hadamard(state, int(rng.integers(6)))
        else:
            a, b, c = rng.choice(6, size=3, replace=False)
            state = qsim.apply_controlled_swap(state, int(a), int(b), int(c))
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-9


def _corpus_split(face_corpus_dir, dim, **kwargs):
    return dataio.make_split(face_corpus_dir, train_n=TRAIN_N, dim=dim,
                             seed=SPLIT_SEED, **kwargs)


def _test_samples(split):
    return [
        classifier.LabeledSample(vector=e.vector, label=e.label, id=e.id)
        for e in split.test_faces + split.test_nonfaces
    ]


def test_06_faces_average_higher_fidelity_than_nonfaces(face_corpus_dir):
    start = time.perf_counter()
    gaps = {}
    for dim in (16, 64, 256):
        split = _corpus_split(face_corpus_dir, dim)
        template = classifier.build_template([e.vector for e in split.train_faces])
        mean_face, mean_nonface = classifier.average_fidelity_report(
            template, _test_samples(split), mode=swaptest.CIRCUIT_EXACT,
        )
        assert mean_face > mean_nonface
        gaps[dim] = mean_face - mean_nonface
    assert gaps[64] >= 0.03
    assert time.perf_counter() - start < 300.0


def test_07_best_threshold_lands_in_upper_band(face_corpus_dir):
    split = _corpus_split(face_corpus_dir, 64)
    template = classifier.build_template([e.vector for e in split.train_faces])
    report = classifier.sweep_thresholds(
        template, _test_samples(split),
        start=0.70, step=0.01, end=1.00, mode=swaptest.CIRCUIT_EXACT,
    )
    assert report.best_accuracy >= 0.80
    assert 0.90 <= report.best_threshold < 1.00


def test_08_classical_baselines_bound_quantum_accuracy(face_corpus_dir):
    split = _corpus_split(face_corpus_dir, 64, nonface_train_n=TRAIN_N)
    train = [
        classifier.LabeledSample(vector=e.vector, label=e.label, id=e.id)
        for e in split.train_faces + split.train_nonfaces
    ]
    report = baselines.compare_algorithms(
        train, _test_samples(split), mode=swaptest.CIRCUIT_EXACT,
    )
    acc = {row.algorithm: row.accuracy for row in report.rows}
    assert acc["svm"] >= acc["knn"]
    assert acc["knn"] >= acc["quantum"] - 0.02


def test_09_default_sweep_grid_is_31_thresholds():
    grid = classifier.threshold_grid(0.70, 0.01, 1.00)
    assert len(grid) == 31
    assert grid[0] == 0.70
    assert grid[-1] == 1.00
    assert np.allclose(np.diff(grid), 0.01)


def oracle_knn(train, query, k):
    """Brute force: all distances, majority vote, vote tie -> nearest label."""
    ranked = sorted(train, key=lambda s: (float(np.linalg.norm(s.vector - query)), s.id))
    votes = Counter(s.label for s in ranked[:k])
    top = votes.most_common()
    if len(top) > 1 and top[0][1] == top[1][1]:
        return ranked[0].label
    return top[0][0]


def oracle_svm_decision(model, x):
    total = 0.0
    for vector, label, alpha in model.support_vectors:
        diff = vector - x
        total += alpha * label * math.exp(-model.gamma * float(diff @ diff))
    return total + model.bias


def test_10_baselines_match_independent_reimplementations():
    rng = np.random.default_rng(110)
    for trial in range(50):
        points = rng.standard_normal((10, 4))
        labels = [classifier.FACE] * 5 + [classifier.NONFACE] * 5
        train = [
            classifier.LabeledSample(
                vector=points[i] / np.linalg.norm(points[i]),
                label=labels[i], id=f"s{i:02d}",
            )
            for i in range(10)
        ]
        queries = rng.standard_normal((5, 4))
        queries /= np.linalg.norm(queries, axis=1, keepdims=True)

        for k in (1, 2, 3):
            model = baselines.KnnModel(train=train, k=k)
            for q in queries:
                assert baselines.knn_classify(model, q) == oracle_knn(train, q, k)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            svm = baselines.svm_train(train, seed=trial)
        for q in queries:
            ours = baselines.svm_decision(svm, q)
            assert abs(ours - oracle_svm_decision(svm, q)) < 1e-12


def test_11_sweep_command_reruns_byte_identically(small_face_dir, tmp_path):
    def run(out, mode_flags):
        rc = cli.main(["sweep", str(small_face_dir), "--train-n", "8",
                       "--seed", "7", "--out", str(out), *mode_flags])
        assert rc == 0

    for mode_flags in ((), ("--mode", "sampled", "--shots", "1024")):
        out1 = tmp_path / f"a{len(mode_flags)}"
        out2 = tmp_path / f"b{len(mode_flags)}"
        run(out1, mode_flags)
        run(out2, mode_flags)
        assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()


def test_12_timing_scales_as_documented():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = bench.run_bench(seed=1)

    analytic = [(r.samples, r.median_seconds) for r in rows if r.path == "analytic"]
    x = np.array([s for s, _ in analytic], dtype=float)
    y = np.array([t for _, t in analytic])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    r_squared = 1.0 - residual @ residual / ((y - y.mean()) @ (y - y.mean()))
    assert r_squared > 0.9

    circuit = {(r.dim, r.samples): r.median_seconds for r in rows if r.path == "circuit"}
    big = sum(circuit[256, s] for s in bench.SAMPLE_COUNTS)
    small = sum(circuit[16, s] for s in bench.SAMPLE_COUNTS)
    ratio = big / small
    assert 256 / 8 <= ratio <= 256 * 8
