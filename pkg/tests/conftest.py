import pytest

from lingmux.codec import get_plan


@pytest.fixture(params=["t1-1000", "t-10g", "kr-10g"])
def plan(request):
    return get_plan(request.param)
