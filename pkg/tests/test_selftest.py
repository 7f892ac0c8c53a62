import os
import subprocess
import sys

import pytest

from ncx2cdf import selftest


def test_quick_all_green():
    results = selftest.run("quick")
    assert [r.name for r in results] == list(selftest.SUITES)
    for r in results:
        assert r.ok, (r.name, r.failures[:5])
        assert r.passed > 0


def test_named_suite_only():
    (r,) = selftest.run("quick", ["marcum"])
    assert r.name == "marcum" and r.ok


def test_bad_level():
    with pytest.raises(ValueError):
        selftest.run("medium")


def test_guard_reports_exceptions():
    r = selftest.SuiteResult("x")
    r.guard("boom", lambda: 1 / 0)
    r.guard("fine", lambda: True)
    assert r.passed == 1 and r.failures == ["boom: ZeroDivisionError: division by zero"]


def test_agree():
    assert selftest.agree(1.0, 1.0 + 1e-10)
    assert not selftest.agree(1.0, 1.0 + 1e-8)
    assert selftest.agree(0.0, 1e-13)
    assert not selftest.agree(0.0, 1e-11)


MUTANT = """
import sys
import ncx2cdf
from ncx2cdf import _jit, selftest
assert _jit.backend() == "python"
mods = [m for name, m in sys.modules.items() if name.startswith("ncx2cdf")]
orig = ncx2cdf.special.log_bessel_i_scaled
def bumped(nu, z, rtol, max_terms):
    out = orig(nu, z, rtol, max_terms)
    return (out[0] + 1e-6,) + tuple(out[1:])
for m in mods:
    if getattr(m, "log_bessel_i_scaled", None) is orig:
        m.log_bessel_i_scaled = bumped
bad = [r.name for r in selftest.run("quick") if not r.ok]
print(",".join(bad))
"""


def test_selftest_catches_bessel_mutation():
    env = dict(os.environ, NCX2_DISABLE_NUMBA="1")
    r = subprocess.run([sys.executable, "-c", MUTANT], env=env, capture_output=True, text=True, check=True)
    failing = r.stdout.strip().split(",")
    assert "ncx2" in failing
