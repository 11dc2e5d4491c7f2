"""Acceptance suite: the eleven end-to-end criteria at their full sizes.

Each test prints exactly one ``PASS``/``FAIL`` line (also collected into the
pytest terminal summary).  Run standalone with ``python tests/test_acceptance.py``.
"""
import json
import sys
import tempfile
import time
from importlib import resources
from pathlib import Path

import pytest

from nief_spectra import checks, cli

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # standalone run outside pytest
    ACCEPTANCE_LINES = {}

FIXTURES = Path(__file__).parent / "fixtures"
SCENARIOS = resources.files("nief_spectra") / "scenarios"

pytestmark = pytest.mark.acceptance


def report(number, title, passed, detail):
    line = f"[{number:2d}] {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert passed, line


def check_report(number, title, result, **extra):
    detail = f"worst={result.worst:.3e} tol={result.tolerance:.1e}"
    for k, v in {**result.detail, **extra}.items():
        detail += f" {k}={v:.3e}" if isinstance(v, float) else f" {k}={v}"
    report(number, title, result.passed and all(extra.get(k, True) for k in ("within_time",)), detail)


def test_01_oracle_equivalence():
    start = time.perf_counter()
    r = checks.oracle_equivalence(draws=1000)
    elapsed = time.perf_counter() - start
    check_report(1, "oracle equivalence of r2/r4 (1000 draws, <=60 s)", r,
                 seconds=round(elapsed, 1), within_time=elapsed <= 60.0)


def test_02_sum_rule():
    check_report(2, "integral intensity unchanged by dressing (50 configs)", checks.sum_rule_invariance(configs=50))


def test_03_reduction_identity():
    check_report(3, "field-3-off reduction on a 1e4-point grid", checks.reduction_identity(points=10_000))


def test_04_raman_asymptote():
    check_report(4, "far-detuned Raman asymptote (20 configs)", checks.raman_asymptote(configs=20))


def test_05_awi_threshold():
    check_report(5, "gain-without-inversion threshold (20 configs)", checks.awi_threshold(configs=20))


def test_06_mixing_identities():
    check_report(6, "mixing factor identities and enhancement", checks.mixing_identities(draws=10_000))


def test_07_lics():
    check_report(7, "continuum-structure limits, Fano node, dual form", checks.lics_checks(draws=10_000))


def test_08_cascade():
    check_report(8, "cascade interference profile, K bound, 6j, gain conditions",
                 checks.cascade_checks(f_draws=20, k_draws=10_000, sixj_draws=1000, cond_draws=500))


def test_09_collision_resonance():
    check_report(9, "collision-induced four-wave-mixing resonance", checks.fwm_checks())


def test_10_doppler():
    check_report(10, "Doppler averaging", checks.doppler_checks())


def _run(config, out_dir):
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    with open(Path(out_dir) / "stderr.txt", "w") as err:
        saved, sys.stderr = sys.stderr, err
        try:
            return cli.main(["run", str(config), "--out-dir", str(out_dir)])
        finally:
            sys.stderr = saved


def test_11_cli_determinism_and_exit_codes():
    problems = []
    names = sorted(p.name for p in SCENARIOS.iterdir() if p.name.endswith(".json"))
    with tempfile.TemporaryDirectory() as tmp:
        for name in names:
            stem = name[:-5]
            outputs = []
            for run in ("a", "b"):
                d = Path(tmp) / run
                code = _run(SCENARIOS / name, d)
                if code != 0:
                    problems.append(f"{name} exit {code}")
                outputs.append([(d / f"{stem}.{ext}").read_bytes() for ext in ("csv", "json")])
            if outputs[0] != outputs[1]:
                problems.append(f"{name} not byte-identical")
        expected = json.loads((FIXTURES / "expected.json").read_text())
        malformed = sorted(k for k in expected if k.startswith("malformed/"))
        for fixture in malformed:
            want = expected[fixture]
            d = Path(tmp) / "err" / Path(fixture).stem
            code = _run(FIXTURES / fixture, d)
            record = json.loads((d / f"{Path(fixture).stem}.json").read_text())
            violations = [v["name"] for v in record["error"].get("violations", [])]
            if (code != want["exit"] or record["error"]["name"] != want["name"]
                    or want["violation"] not in violations or list(d.glob("*.csv"))):
                problems.append(f"{fixture}: exit {code}, {record['error']['name']} {violations}")
    detail = (f"{len(names)} scenarios run twice, {len(malformed)} malformed fixtures; "
              + ("; ".join(problems) if problems else "all byte-identical, all exit codes honored"))
    report(11, "CLI determinism and error contracts", not problems and len(malformed) == 5, detail)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
