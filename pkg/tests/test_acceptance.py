import pytest

from polychain import reproduce

LINES: list[str] = []


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number):
    result = reproduce.CRITERIA[number - 1](0)
    print(result.line())
    LINES.append(result.line())
    assert result.ok, result.details
