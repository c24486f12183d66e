import pytest

from berncolloc import catalog_example, solve_report


@pytest.fixture(scope="session")
def ex1_l2_by_order():
    """L2 relative errors for example 1 at the orders several tests share.

    Cached once per session; the n=41 solve dominates the cost.
    """
    problem = catalog_example(1)
    orders = (11, 13, 15, 17, 19, 21, 41)
    return {n: solve_report(problem, n).l2_rel_error for n in orders}
