from collections import namedtuple

from extrapolation.bases import chebyshev, make_anchor_frame, spherical_harmonics, trigonometric
from extrapolation.functions import trigonometric_terms
from extrapolation.scenarios.anchors import (
    ANCHORS_DEFAULTS,
    FAR_DOMAINS_DEFAULTS,
    build_anchor_catalog,
    run_anchors,
    run_far_domains,
)
from extrapolation.scenarios.chebyshev import (
    CHEB_MONOTONE_DEFAULTS,
    CHEB_NOISY_DEFAULTS,
    NOISE_SWEEP_DEFAULTS,
    run_cheb_monotone,
    run_cheb_noisy,
    run_noise_sweep,
)
from extrapolation.scenarios.sphere import SPHERE_DEFAULTS, run_sphere

ScenarioEntry = namedtuple("ScenarioEntry", ["run", "defaults"])


def get_scenarios():
    """Build the scenario registry: name -> (run function, default settings)."""
    return {
        "cheb-noisy": ScenarioEntry(run_cheb_noisy, CHEB_NOISY_DEFAULTS),
        "cheb-monotone": ScenarioEntry(run_cheb_monotone, CHEB_MONOTONE_DEFAULTS),
        "noise-sweep": ScenarioEntry(run_noise_sweep, NOISE_SWEEP_DEFAULTS),
        "anchors": ScenarioEntry(run_anchors, ANCHORS_DEFAULTS),
        "far-domains": ScenarioEntry(run_far_domains, FAR_DOMAINS_DEFAULTS),
        "sphere": ScenarioEntry(run_sphere, SPHERE_DEFAULTS),
    }


def build_family(settings):
    """Basis family named by settings["basis"].

    ``degree`` is the Chebyshev degree, the highest spherical harmonic
    degree, or the highest trigonometric frequency.
    """
    basis = settings.get("basis", "chebyshev")
    degree = int(settings.get("degree", 0))
    if basis == "chebyshev":
        return chebyshev(degree)
    if basis == "trigonometric":
        include_constant = bool(settings.get("fillers_include_constant", True))
        return trigonometric(2 * degree + int(include_constant), include_constant)
    if basis == "spherical-harmonic":
        return spherical_harmonics(degree)
    if basis == "anchor-frame":
        anchors = build_anchor_catalog(settings.get("anchor_set", "non-decaying"))
        fillers = trigonometric_terms(
            int(settings.get("fillers", 0)), bool(settings.get("fillers_include_constant", True))
        )
        return make_anchor_frame(anchors, fillers)
    raise ValueError(f"Unknown basis: {basis}")
