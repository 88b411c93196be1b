import os

from hypothesis import HealthCheck, settings

HYPOTHESIS_SEED = 20240611

settings.register_profile(
    "fixed",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    print_blob=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fixed"))


def pytest_report_header(config):
    return f"hypothesis: derandomized profile 'fixed'; explicit seeds use {HYPOTHESIS_SEED}"


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, TITLES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}: {TITLES[n]} ({detail})")
        else:
            terminalreporter.write_line(f"criterion {n} NOT RUN: {TITLES[n]}")
