import pytest
from hypothesis import settings

from masseylift import kernel

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(params=sorted(kernel.BACKENDS))
def backend(request):
    previous = kernel.BACKEND
    kernel.use_backend(request.param)
    yield request.param
    kernel.use_backend(previous)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
