"""Lab settings, read from ``django.conf.settings`` with :data:`DEFAULTS` for unset names.

Configure once per process with :func:`configure`, which calls
``django.conf.settings.configure`` on first use. Tests and callers wanting a temporary
change use ``django.test.override_settings``.

.. admonition:: example

    .. code:: python

        from ramsey_lab.conf import configure

        configure(SEARCH_BUDGET=10 ** 6, LOG_BASE=2)
"""
import json
import math

from django.conf import settings as django_settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    #: Largest vertex count accepted by samplers and readers.
    'MAX_VERTICES': 100000,
    #: Largest pattern handled by the generic matcher.
    'MAX_PATTERN_VERTICES': 12,
    #: Largest host scanned for dense (v, e) pairs.
    'DENSE_SCAN_MAX_VERTICES': 64,
    #: Largest collage (in hyperedges) for the exact sub-collage density scan.
    'EXACT_SUBCOLLAGE_MAX_HYPEREDGES': 24,
    #: Above this many vertices the densest subgraph is found by parametric flow.
    'DENSEST_SCAN_MAX_VERTICES': 20,
    #: Base of every "log n" in the lab.
    'LOG_BASE': math.e,
    #: Decision-node budget of the triangle-free colouring search.
    'SEARCH_BUDGET': 200000,
    #: Largest wedge family enumerated for Janson parameters.
    'JANSON_FAMILY_CAP': 10 ** 6,
    #: p within this factor of n^(-3/5) is reported as the critical window.
    'CRITICAL_WINDOW_FACTOR': 2.0,
    #: p >= C * n^(-1/2) is reported as the zero regime.
    'ZERO_REGIME_CONSTANT': 1.0,
    #: Cells with a larger share of first round failures are flagged.
    'FIRST_ROUND_FLAG_RATE': 0.1,
    #: Resamples used for crossing intervals.
    'BOOTSTRAP_RESAMPLES': 1000,
    #: Confidence of Wilson intervals.
    'WILSON_CONFIDENCE': 0.95,
    #: Directory receiving the instance of a falsified claim met during a sweep.
    'FALSIFICATION_DUMP_DIR': '.',
}


def configure(**options):
    """Override default settings.

    The first call configures ``django.conf.settings`` with :data:`DEFAULTS` plus
    ``options``; later calls set the given names on it.

    :param options: Upper-case setting names mapped to their new values.
    :raises ImproperlyConfigured: For names that are not lab settings.
    """

    unknown = sorted(set(options) - set(DEFAULTS))
    if unknown:
        raise ImproperlyConfigured('Unknown settings: %s' % ', '.join(unknown))
    if not django_settings.configured:
        django_settings.configure(**dict(DEFAULTS, **options))
        return
    for name, value in options.items():
        setattr(django_settings, name, value)


def configure_from_file(path):
    """Configure from a JSON object stored at ``path``."""

    with open(path, encoding='utf-8') as f:
        options = json.load(f)
    if not isinstance(options, dict):
        raise ImproperlyConfigured('%s must hold a JSON object' % path)
    configure(**options)


def snapshot():
    """The current value of every lab setting, as keyword arguments for :func:`configure`."""

    return dict((name, getattr(settings, name)) for name in DEFAULTS)


class LabSettings(object):

    """Attribute access to the lab settings.

    Names missing from ``django.conf.settings`` fall back to :data:`DEFAULTS`; an
    unconfigured process is configured with the defaults on first read.
    """

    def __getattr__(self, name):
        if name not in DEFAULTS:
            raise AttributeError(name)
        if not django_settings.configured:
            django_settings.configure(**DEFAULTS)
        return getattr(django_settings, name, DEFAULTS[name])

    def log(self, x):
        """Logarithm of ``x`` in the configured base."""

        base = self.LOG_BASE
        if base == math.e:
            return math.log(x)
        return math.log(x, base)


settings = LabSettings()
