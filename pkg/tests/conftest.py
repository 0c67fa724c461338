import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rkhs_kit import Kernel

settings.register_profile("repo", max_examples=30, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    """Store one acceptance verdict; printed in the terminal summary."""
    ACCEPTANCE[number] = (title, bool(ok), detail)
    line = f"CRITERION {number:2d} {'PASS' if ok else 'FAIL'}: {title}"
    print(line + (f" ({detail})" if detail else ""))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        line = f"CRITERION {number:2d} {'PASS' if ok else 'FAIL'}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def matern_id():
    """Matérn base without maps, so values follow the table formula directly."""
    return Kernel("matern", maps=())


@pytest.fixture
def gaussian_id():
    return Kernel("gaussian", maps=())


def bimodal(seed, n):
    """0.5 N(-2, 0.5^2) + 0.5 N(2, 0.5^2), drawn from the seeded data stream."""
    from rkhs_kit._rng import standard_normal, substream, uniform

    gen = substream(seed, "data")
    side = np.where(uniform(gen, n) < 0.5, -2.0, 2.0)
    return (side + 0.5 * standard_normal(gen, n))[:, None]


@pytest.fixture(scope="session")
def bimodal_run():
    """Generator fitted on 1000 bimodal draws (seed 0) and 1000 fresh samples."""
    from rkhs_kit.generative import TransportGenerator

    target = bimodal(0, 1000)
    gen = TransportGenerator(seed=0).fit(target)
    return {"target": target, "held_out": bimodal(1, 1000), "generator": gen,
            "samples": gen.sample(1000)}
