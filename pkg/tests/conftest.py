from django.conf import settings

from ramsey_lab.conf import DEFAULTS


def pytest_configure():
    settings.configure(**dict(
        DEFAULTS,

        SEARCH_BUDGET=100000,

        BOOTSTRAP_RESAMPLES=200,
    ))
