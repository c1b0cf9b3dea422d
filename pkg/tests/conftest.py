import pytest

from hopflattice.hopf import dual_hopf, function_algebra, group_algebra, named_group


def group(name):
    return group_algebra(*named_group(name), name=f"C[{name}]")


def functions(name):
    return function_algebra(*named_group(name), name=f"F({name})")


@pytest.fixture(scope="session")
def cz2():
    return group("Z2")


@pytest.fixture(scope="session")
def cz3():
    return group("Z3")


@pytest.fixture(scope="session")
def cs3():
    return group("S3")


@pytest.fixture(scope="session")
def fs3():
    return functions("S3")


@pytest.fixture(scope="session")
def dual_cs3(cs3):
    return dual_hopf(cs3)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
