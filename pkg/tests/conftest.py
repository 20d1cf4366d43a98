import pytest

from tautrel import build_c_table, build_q_table


@pytest.fixture(scope="session")
def q60():
    return build_q_table(60)


@pytest.fixture(scope="session")
def c60(q60):
    return build_c_table(q60)


@pytest.fixture(scope="session")
def q20(q60):
    # independent small build; also checks prefix-stability against the big one
    q = build_q_table(20)
    assert all(q.rows[k] == q60.rows[k] for k in range(21))
    return q


@pytest.fixture(scope="session")
def c20(q20):
    return build_c_table(q20)
