import pytest

from splinedim import example_star, generate_example


@pytest.fixture(scope="session")
def ms3d():
    return generate_example("ms3d", 1)


@pytest.fixture(scope="session")
def cavity():
    return generate_example("ms3d_cavity", 1)


@pytest.fixture(scope="session")
def torus():
    return generate_example("square_torus", 1)


@pytest.fixture(scope="session")
def cube():
    return generate_example("cube_octahedron", 1)


@pytest.fixture(scope="session")
def octa_star():
    return example_star("octahedron_star", 1)


@pytest.fixture(scope="session")
def cone_star_ms():
    return example_star("ms_cone_star", 1)


@pytest.fixture
def tet():
    from splinedim import build_complex

    return build_complex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2, 3)])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def _report(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line, flush=True)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
