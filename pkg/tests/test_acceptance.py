"""Exit criteria, each at its fixed tolerance.

A ``[PASS]``/``[FAIL]`` line per criterion is printed in the terminal summary.
"""
import csv
import json
import os
import shutil
import time

import numpy as np
import pytest

from fractalts import core, mfdfa, synth
from fractalts.cli import main
from fractalts.xcorr import cross_correlation
from oracles import cascade_h_closed_form, classical_dfa, naive_ccf, naive_fq

pytestmark = pytest.mark.acceptance

SEEDS = range(20)
Q_NONZERO = (-5, -4, -3, -2, -1, 1, 2, 3, 4, 5)


@pytest.mark.criterion(1)
def test_memoryless_anchor(criterion):
    start = time.perf_counter()
    hs = [mfdfa.analyze(synth.white_noise(8192, s)).hurst for s in SEEDS]
    elapsed = time.perf_counter() - start
    mean_h = float(np.mean(hs))
    ok = abs(mean_h - 0.5) <= 0.05 and elapsed < 10
    criterion(ok, f"white noise mean H = {mean_h:.4f} (0.50 +- 0.05), {elapsed:.2f} s (< 10 s)")
    assert abs(mean_h - 0.5) <= 0.05
    assert elapsed < 10


@pytest.mark.criterion(2)
def test_persistent_monofractal(criterion):
    start = time.perf_counter()
    spectra = [mfdfa.analyze(synth.fgn(0.7, 8192, s)) for s in SEEDS]
    elapsed = time.perf_counter() - start
    mean_h = float(np.mean([s.hurst for s in spectra]))
    mean_dh = float(np.mean([s.delta_h for s in spectra]))
    ok = 0.63 <= mean_h <= 0.77 and mean_dh < 0.15 and elapsed < 20
    criterion(ok, f"fGn(0.7) mean H = {mean_h:.4f} in [0.63, 0.77], mean dh = {mean_dh:.4f} < 0.15, "
                  f"{elapsed:.2f} s (< 20 s)")
    assert 0.63 <= mean_h <= 0.77
    assert mean_dh < 0.15
    assert elapsed < 20


@pytest.mark.criterion(3)
def test_multifractal_oracle(criterion):
    p = 0.3
    start = time.perf_counter()
    spectra = [mfdfa.analyze(synth.cascade(p, 14, s)) for s in SEEDS]
    elapsed = time.perf_counter() - start
    q_grid = spectra[0].q_grid
    mean_h = {q: float(np.mean([s.h_at(q) for s in spectra])) for q in Q_NONZERO}
    want = {q: cascade_h_closed_form(q, p) for q in Q_NONZERO}
    worst = max(abs(mean_h[q] - want[q]) for q in Q_NONZERO)
    mean_dh = float(np.mean([s.delta_h for s in spectra]))
    want_dh = cascade_h_closed_form(q_grid[0], p) - cascade_h_closed_form(q_grid[-1], p)
    ok = worst <= 0.1 and abs(mean_dh - want_dh) <= 0.15 and elapsed < 30
    criterion(ok, f"cascade p=0.3 max |mean h(q) - closed form| = {worst:.4f} (<= 0.1), "
                  f"mean dh = {mean_dh:.4f} vs {want_dh:.4f} (+- 0.15), {elapsed:.2f} s (< 30 s)")
    assert worst <= 0.1
    assert abs(mean_dh - want_dh) <= 0.15
    assert elapsed < 30


@pytest.mark.criterion(4)
def test_dfa_identity(criterion):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(50):
        x = rng.standard_normal(1024)
        cfg = core.AnalysisConfig.for_length(1024)
        got = mfdfa.fluctuation_function(core.build_profile(x), cfg).row(2.0)
        want = classical_dfa(x, cfg.tau_grid)
        worst = max(worst, float(np.max(np.abs(got - want) / want)))
    criterion(worst <= 1e-10, f"q=2 column vs classical DFA, max rel err = {worst:.2e} (<= 1e-10)")
    assert worst <= 1e-10


def small_fixtures():
    rng = np.random.default_rng(64)
    out = []
    for n in (32, 40, 47, 57, 64):
        out.append(rng.standard_normal(n))
        out.append(rng.standard_normal(n).cumsum())
        out.append(rng.exponential(size=n) ** 2)
    out.append(synth.cascade(0.3, 5, 1).values)
    out.append(synth.cascade(0.2, 6, 2).values)
    out.append(synth.fgn(0.8, 64, 3).values)
    return out


@pytest.mark.criterion(5)
def test_small_instance_brute_force(criterion):
    q_grid = tuple(float(q) for q in range(-5, 6))
    worst_f = 0.0
    for x in small_fixtures():
        for m in (1, 2):
            cfg = core.AnalysisConfig(q_grid, (4, 5, 6, 7, 8), m)
            table = mfdfa.fluctuation_function(core.build_profile(x), cfg)
            for q, tau, f in table.rows():
                ref = naive_fq(x, q, tau, m)
                worst_f = max(worst_f, abs(f - ref) / ref)

    rng = np.random.default_rng(256)
    worst_c = 0.0
    for n in (8, 33, 100, 256):
        a = rng.standard_normal(n).cumsum()
        b = 0.5 * a + rng.standard_normal(n)
        max_lag = min(30, n - 3)
        res = cross_correlation(a, b, max_lag)
        ref = naive_ccf(a.tolist(), b.tolist(), max_lag)
        worst_c = max(worst_c, max(abs(c - ref[int(k)]) for k, c in zip(res.lags, res.coefficients)))
    ok = worst_f <= 1e-10 and worst_c <= 1e-12
    criterion(ok, f"F_q vs naive loops rel err = {worst_f:.2e} (<= 1e-10); "
                  f"CCF vs double loop abs err = {worst_c:.2e} (<= 1e-12)")
    assert worst_f <= 1e-10
    assert worst_c <= 1e-12


@pytest.mark.criterion(6)
def test_invariances(criterion):
    worst_h = 0.0
    for seed in range(3):
        for x in (synth.fgn(0.7, 4096, seed), synth.cascade(0.3, 12, seed)):
            base = mfdfa.analyze(x).h
            for alpha in (0.001, 1000.0):
                worst_h = max(worst_h, float(np.max(np.abs(mfdfa.analyze(x.scaled(alpha)).h - base))))

    rng = np.random.default_rng(6)
    worst_c = 0.0
    for _ in range(10):
        a = rng.standard_normal(500).cumsum()
        b = rng.standard_normal(500) + 0.2 * a
        base = cross_correlation(a, b, 30).coefficients
        for alpha, beta in ((0.001, 5.0), (1000.0, -3e3), (7.5, 0.0)):
            for aa, bb in ((alpha * a + beta, b), (a, alpha * b + beta)):
                worst_c = max(worst_c, float(np.max(np.abs(cross_correlation(aa, bb, 30).coefficients - base))))
    ok = worst_h <= 1e-9 and worst_c <= 1e-12
    criterion(ok, f"h(q) under x -> ax max change = {worst_h:.2e} (<= 1e-9); "
                  f"CCF under positive affine maps = {worst_c:.2e} (<= 1e-12)")
    assert worst_h <= 1e-9
    assert worst_c <= 1e-12


@pytest.mark.criterion(7)
def test_lag_recovery(criterion):
    found = {}
    for shift in (1, 3, 10):
        w = synth.white_noise(4096 + shift, shift).values
        a, b = w[shift:], w[:4096]  # b[t + shift] == a[t]
        found[shift] = cross_correlation(a, b, 30).peak_lag
    ok = all(found[s] == s for s in found)
    criterion(ok, f"injected -> recovered peak lag: {found}")
    assert ok


def _generate_six(directory):
    paths = []
    for seed in (1, 2, 3):
        path = directory / f"cascade_{seed}.csv"
        assert main(["generate", "--kind", "cascade", "--p", "0.3", "--levels", "14",
                     "--seed", str(seed), "--out", str(path)]) == 0
        paths.append(path)
    for seed in (1, 2, 3):
        path = directory / f"fgn_{seed}.csv"
        assert main(["generate", "--kind", "fgn", "--h", "0.7", "--length", "8192",
                     "--seed", str(seed), "--out", str(path)]) == 0
        paths.append(path)
    return paths


@pytest.mark.criterion(8)
def test_table_shaped_report(tmp_path, criterion):
    paths = _generate_six(tmp_path)
    out = tmp_path / "report"
    argv = ["analyze", "--out", str(out)]
    for path in paths:
        argv += ["--input", str(path)]
    assert main(argv) == 0
    with open(out / "table.csv", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        rows = {r["series"]: r for r in reader}
    structural = header[:4] == ["series", "h(q=-5)", "h(q=5)", "H"] and len(rows) == 6

    want_dh = cascade_h_closed_form(-5, 0.3) - cascade_h_closed_form(5, 0.3)
    problems = []
    for name, row in rows.items():
        h_lo, h_hi, hurst = float(row["h(q=-5)"]), float(row["h(q=5)"]), float(row["H"])
        summary = json.loads((out / f"{name}.summary.json").read_text())
        if summary["h_qmin"] != h_lo or summary["h_qmax"] != h_hi or summary["H"] != hurst:
            problems.append(f"{name}: table and summary disagree")
        if name.startswith("cascade") and abs((h_lo - h_hi) - want_dh) > 0.15:
            problems.append(f"{name}: dh = {h_lo - h_hi:.3f}")
        if name.startswith("fgn") and not (0.62 <= hurst <= 0.78 and h_lo - h_hi < 0.15):
            problems.append(f"{name}: H = {hurst:.3f}, dh = {h_lo - h_hi:.3f}")
    ok = structural and not problems
    criterion(ok, f"table.csv columns {header[:4]}, {len(rows)} rows; "
                  f"value checks: {'ok' if not problems else problems}")
    assert structural
    assert not problems


def _files(directory):
    return {
        name: (directory / name).read_bytes()
        for name in sorted(os.listdir(directory))
        if not name.startswith(".") and (directory / name).is_file()
    }


@pytest.mark.criterion(9)
def test_determinism(tmp_path, criterion):
    runs = []
    for _ in range(2):
        # outputs are written to the same place both times, then captured
        work = tmp_path / "work"
        work.mkdir(exist_ok=True)
        for old in work.iterdir():
            old.unlink()
        series = work / "s.csv"
        other = work / "t.csv"
        assert main(["generate", "--kind", "cascade", "--p", "0.3", "--levels", "12",
                     "--seed", "4", "--out", str(series)]) == 0
        assert main(["generate", "--kind", "fgn", "--h", "0.6", "--length", "4096",
                     "--seed", "4", "--out", str(other)]) == 0
        assert main(["generate", "--kind", "white_noise", "--length", "1000",
                     "--seed", "4", "--out", str(work / "w.csv")]) == 0
        for fmt in ("csv", "json"):
            assert main(["analyze", "--input", str(series), "--input", str(other),
                         "--out", str(work / f"analyze_{fmt}"), "--format", fmt]) == 0
            assert main(["fluct", "--input", str(series), "--out", str(work / f"fluct_{fmt}"),
                         "--format", fmt]) == 0
            assert main(["xcorr", "--input", str(series), "--input", str(other), "--max-lag", "12",
                         "--out", str(work / f"xcorr_{fmt}"), "--format", fmt]) == 0
        captured = {"": _files(work)}
        for sub in sorted(p for p in work.iterdir() if p.is_dir()):
            captured[sub.name] = _files(sub)
            shutil.rmtree(sub)
        runs.append(captured)
    n_files = sum(len(v) for v in runs[0].values())
    ok = runs[0] == runs[1] and n_files > 0
    criterion(ok, f"{n_files} output files across generate/analyze/fluct/xcorr byte-identical on rerun")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
