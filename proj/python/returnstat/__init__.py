"""Python surface of the returnstat C++ core.

The heavy lifting (exact cylinder probabilities, cluster parameters,
Monte Carlo count sampling) lives in the compiled ``_core`` module; this
package re-exports it and adds small JSON conveniences.
"""

import json as _json

from ._core import (  # noqa: F401
    CapacityError,
    DomainError,
    Model,
    ParameterError,
    UnsupportedError,
    beta,
    cluster_exponent,
    compound_poisson_geo_pmf,
    convergence_experiment_json,
    exact_count_masses,
    geometric_pmf,
    kappa,
    period,
    periodic_extension,
    poisson_pmf,
    polya_aeppli_masses,
    polya_aeppli_pmf,
    predicted_rho,
    rho,
    sample_polya_aeppli,
    simulate_counts,
    tightness_json,
    total_variation,
    trials_count,
)


def make_model(spec):
    """Build a model from a spec dict (or JSON string)."""
    if isinstance(spec, str):
        return Model(spec)
    return Model(_json.dumps(spec))


def convergence_experiment(model, block, t, d, n_list, samples, seed, workers=0):
    """Run a convergence experiment and return the report as a dict."""
    raw = convergence_experiment_json(model, block, t, d, n_list, samples, seed, workers)
    return _json.loads(raw)


def tightness(report):
    """Tightness diagnostic for a report dict; returns a dict."""
    return _json.loads(tightness_json(_json.dumps(report)))
