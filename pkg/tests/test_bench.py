import json
from math import exp as e_pow

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcloudsim.backends import load_backend
from qcloudsim.bench import (Experiment, ExperimentRecord, FitError, build_bv, build_cnot_chain, build_swap_chain,
                             classical_baseline, compile_for, default_grid, fit_gaussian, fit_linear_first4,
                             gaussian_model, point_seed, read_records, sweep, weight_string, write_records)
from qcloudsim.circuit import two_qubit_gate_count
from qcloudsim.noise import NoiseProfile
from qcloudsim.simulator import outcome_distribution

IONQ = load_backend("ionq")
VIGO = load_backend("ibm-vigo")


def noiseless(backend):
    return backend.with_profile(spam=NoiseProfile().spam, depol=NoiseProfile().depol,
                                coherent=NoiseProfile().coherent, crosstalk=NoiseProfile().crosstalk)


def test_builders():
    c = build_cnot_chain(2)
    assert c.measured == (0,) and two_qubit_gate_count(c) == 4
    s = build_swap_chain(3)
    assert s.measured == (0, 1) and two_qubit_gate_count(s) == 9
    b = build_bv(4, "0000")
    assert two_qubit_gate_count(b) == 0 and b.initial_ones == frozenset({4})
    assert outcome_distribution(b)["0000"] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        build_bv(4, "101")
    with pytest.raises(ValueError):
        build_bv(15, "0" * 15)
    with pytest.raises(ValueError):
        build_cnot_chain(0)


def test_weight_string_and_baseline():
    assert weight_string(5, 2) == "11000"
    assert classical_baseline(10) == 1 / 512
    assert classical_baseline(1) == 1.0
    assert classical_baseline(4) == 0.125


def test_record_round_trip(tmp_path):
    recs = [ExperimentRecord("ionq", "bv", w, 1024, 1000 - w, 17 + w, 0.01) for w in range(3)]
    path = tmp_path / "r.jsonl"
    write_records(recs, path)
    assert read_records(path) == recs
    assert list(json.loads(path.read_text().splitlines()[0])) == [
        "backend", "experiment", "parameter", "shots", "successes", "seed", "ci95"]
    with pytest.raises(ValueError):
        ExperimentRecord.from_json('{"backend": "x"}')


@given(st.text(min_size=1, max_size=10), st.integers(0, 100), st.integers(1, 10 ** 6), st.data())
def test_record_json_property(name, param, shots, data):
    succ = data.draw(st.integers(0, shots))
    r = ExperimentRecord(name, "spam", param, shots, succ, data.draw(st.integers(0, 2 ** 63 - 1)),
                         data.draw(st.floats(0, 1)))
    assert ExperimentRecord.from_json(r.to_json()) == r


def test_sweep_examples():
    spam = sweep(Experiment("spam"), [0, 1], load_backend("ibm-melbourne"), 3000, 0)
    assert [r.parameter for r in spam] == [0, 1] and all(r.shots == 3000 for r in spam)
    bv = sweep(Experiment("bv"), range(5), IONQ, 1024, 0)
    assert len(bv) == 5
    assert sweep(Experiment("bv"), [], IONQ, 1024, 0) == []


def test_noiseless_sweeps_all_succeed():
    for exp, grid in (("spam", [0, 1]), ("cnot-chain", [2, 4, 6]), ("swap-chain", [1, 2]), ("bv", range(5))):
        for backend in (IONQ, VIGO, load_backend("rigetti-aspen8")):
            recs = sweep(Experiment(exp), grid, noiseless(backend), 256, 1)
            assert all(r.successes == r.shots for r in recs), (exp, backend.name)


def test_sweep_is_order_independent():
    exp = Experiment("swap-chain")
    fwd = sweep(exp, [1, 2, 3], IONQ, 512, 9)
    rev = sweep(exp, [3, 2, 1], IONQ, 512, 9, workers=3)
    assert fwd == rev[::-1]
    assert point_seed(9, "swap-chain", 1) != point_seed(9, "swap-chain", 2)


def test_random_strings_per_weight():
    exp = Experiment("bv", n=4, strings_per_weight=3)
    (rec,) = sweep(exp, [2], noiseless(IONQ), 100, 0)
    assert rec.shots == 300 and rec.successes == 300


def test_experiment_validation():
    with pytest.raises(ValueError):
        Experiment("qft")
    with pytest.raises(ValueError):
        Experiment("cnot-chain").build(3)
    assert default_grid("cnot-chain") == list(range(2, 61, 2))
    assert default_grid("bv", 10) == list(range(11))


def test_vigo_bv_swaps():
    exp = Experiment("bv")
    for w in range(5):
        c = exp.build(w)
        _, _, swaps = compile_for(c, VIGO, VIGO.passes, hub=4)
        assert swaps == (0 if w <= 3 else 1)
        _, _, swaps = compile_for(c, IONQ, IONQ.passes, hub=4)
        assert swaps == 0


def test_aspen_compaction_fits_cap():
    aspen = load_backend("rigetti-aspen8")
    physical, layout, _ = compile_for(build_bv(10, "1" * 10), aspen, aspen.passes, hub=10)
    assert physical.n_qubits <= 15 and len(layout) == physical.n_qubits


def test_fit_gaussian_synthetic():
    d = np.arange(2, 61, 2)
    pts = list(zip(d, gaussian_model(d, 28.0, 0.5)))
    res = fit_gaussian(pts)
    assert res.params[0] == pytest.approx(28.0, rel=0.01)
    assert res.params[1] == pytest.approx(0.5, rel=0.01)


def test_fit_gaussian_matches_dense_grid_oracle():
    rng = np.random.default_rng(3)
    d = np.arange(2, 61, 2)
    y = gaussian_model(d, 21.0, 0.42) + rng.normal(0, 0.02, d.size)
    res = fit_gaussian(list(zip(d, y)))
    best = min(
        float(np.sum((y - gaussian_model(d, d0, a)) ** 2))
        for d0 in np.linspace(1, 120, 1200) for a in np.linspace(0.001, 0.5, 500)
    )
    assert res.residual <= best * 1.02


def test_fit_gaussian_errors():
    with pytest.raises(FitError, match="degenerate data"):
        fit_gaussian([(d, 0.5) for d in range(2, 12, 2)])
    with pytest.raises(FitError):
        fit_gaussian([(1, 0.9), (2, 0.8)])


def test_fit_linear_examples():
    pts = [(d, 0.945 - 0.0422 * d) for d in range(1, 5)]
    b0, b1 = fit_linear_first4(pts).params
    assert abs(b0 - 0.945) < 1e-12 and abs(b1 + 0.0422) < 1e-12
    assert fit_linear_first4([(d, 0.3) for d in range(1, 5)]).params[1] == 0
    # only the four shallowest points count
    assert fit_linear_first4(pts + [(9, 0.0)]).params == pytest.approx((0.945, -0.0422))
    with pytest.raises(FitError):
        fit_linear_first4(pts[:3])


@given(st.floats(0.1, 1.0), st.floats(-0.2, 0.2))
def test_fit_linear_exact_on_lines(b0, b1):
    res = fit_linear_first4([(d, b0 + b1 * d) for d in (1, 2, 3, 4)])
    assert res.params == pytest.approx((b0, b1), abs=1e-12)


@given(st.floats(5, 60), st.floats(0.05, 0.5))
def test_fit_gaussian_exact_on_model(d0, amp):
    d = np.arange(2, 61, 2)
    res = fit_gaussian(list(zip(d, gaussian_model(d, d0, amp))))
    assert res.params[0] == pytest.approx(d0, rel=0.01)
    assert res.params[1] == pytest.approx(amp, rel=0.01)


def test_bv_success_falls_with_weight_on_vigo():
    recs = sweep(Experiment("bv"), range(5), VIGO, 8192, 4)
    p = [r.success for r in recs]
    slack = [2 * np.sqrt(x * (1 - x) / 8192) for x in p]
    for a in range(4):
        assert p[a + 1] <= p[a] + slack[a] + slack[a + 1]
    # the routed weight-4 drop exceeds the 2->3 step, which adds one CNOT but no SWAP
    assert p[3] - p[4] > p[2] - p[3]


def test_gaussian_model_value():
    assert float(gaussian_model(28.0, 28.0, 0.5)) == pytest.approx(0.5 + 0.5 * e_pow(-1))


def test_rigetti_offset_dips_below_incoherent_floor():
    from qcloudsim.noise import DepolarizingModel, QuasiStaticCoherentModel

    rigetti = load_backend("rigetti-aspen8")
    assert rigetti.profile.coherent.offset == 0 and rigetti.profile.coherent.run_sigma == 0
    skewed = rigetti.with_profile(coherent=QuasiStaticCoherentModel(0.0, "XY", 0.075),
                                  depol=DepolarizingModel(0.0, 0.0))
    recs = sweep(Experiment("swap-chain"), [11, 12], skewed, 4096, 1)
    assert all(r.success < 0.25 for r in recs)


def test_run_sigma_varies_between_seeds_only():
    from qcloudsim.noise import QuasiStaticCoherentModel

    drifting = IONQ.with_profile(coherent=QuasiStaticCoherentModel(0.0, "XY", 0.0, run_sigma=0.1))
    a = sweep(Experiment("swap-chain"), [6], drifting, 2048, 1)
    assert a == sweep(Experiment("swap-chain"), [6], drifting, 2048, 1)
    assert a != sweep(Experiment("swap-chain"), [6], drifting, 2048, 2)
