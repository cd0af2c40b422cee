"""Information geometry of the finite outcome distributions behind tomography.

Three sample spaces appear:

* the binary space of a single spin measurement, with distribution
  ((1+xi)/2, (1-xi)/2) for xi in (-1, 1);
* the product space of k independent spin measurements (k <= 3), with 2^k
  outcomes in fixed lexicographic order, +1 before -1, axis 1 outermost;
* the 6-outcome space of a randomized measurement, where axis i is chosen
  with probability s_i and then read out, ordered
  (axis1,+1), (axis1,-1), (axis2,+1), (axis2,-1), (axis3,+1), (axis3,-1).

Natural logarithms throughout.  The product manifold is an exponential
family with natural parameters theta^i = log((1+xi_i)/(1-xi_i)), expectation
parameters eta_i = (1+xi_i)/2, log partition psi = sum_i log(1+e^theta_i)
and negative entropy phi = theta.eta - psi; the canonical divergence built
from these potentials coincides with the outcome-wise Kullback-Leibler
divergence, which is what `canonical_divergence` lets tests verify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidInputError, StokesVector, WeightVector, weight_vector

# Probability vector over a fixed finite outcome set: 1-d float array,
# strictly positive entries summing to 1.
FiniteDistribution = np.ndarray

PROB_SUM_TOL = 1e-12


def finite_distribution(probs) -> FiniteDistribution:
    """Validate a probability vector on the open simplex."""
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise InvalidInputError(f"expected a 1-d probability vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError("probability vector has non-finite entries")
    if np.any(p <= 0.0):
        raise InvalidInputError("probability vector must be strictly positive")
    if abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise InvalidInputError(f"probabilities must sum to 1 (got {p.sum()!r})")
    return p


def _interior(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 1 or not 1 <= xi.size <= 3:
        raise InvalidInputError(f"expected a k-vector with k in {{1,2,3}}, got shape {xi.shape}")
    if not np.all(np.isfinite(xi)):
        raise InvalidInputError("non-finite component")
    if np.any(np.abs(xi) >= 1.0):
        raise InvalidInputError(f"components must lie strictly inside (-1, 1), got {xi.tolist()}")
    return xi


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum_w p(w) log(p(w)/q(w))."""
    p = finite_distribution(p)
    q = finite_distribution(q)
    if p.size != q.size:
        raise InvalidInputError(f"outcome sets differ: {p.size} vs {q.size}")
    return float(np.sum(p * np.log(p / q)))


def product_distribution(xi) -> FiniteDistribution:
    """Product of per-axis binary distributions over the 2^k outcome space."""
    xi = _interior(xi)
    probs = np.array([1.0])
    for x in xi:
        probs = np.kron(probs, [(1.0 + x) / 2.0, (1.0 - x) / 2.0])
    return probs


def randomized_distribution(s: WeightVector, xi: StokesVector) -> FiniteDistribution:
    """6-outcome distribution of a randomized measurement: pick axis i with
    probability s_i, then observe +/-1 with probability (1 +/- xi_i)/2."""
    s = weight_vector(s)
    xi = _interior(xi)
    if xi.size != 3:
        raise InvalidInputError("randomized measurement needs all 3 axes")
    out = np.empty(6)
    out[0::2] = s * (1.0 + xi) / 2.0
    out[1::2] = s * (1.0 - xi) / 2.0
    return out


@dataclass(frozen=True)
class DualCoordinates:
    """Natural/expectation coordinates of a product distribution, with the
    Legendre pair of potentials (psi + phi - theta.eta = 0)."""

    theta: np.ndarray
    eta: np.ndarray
    psi: float
    phi: float


def dual_coordinates(xi) -> DualCoordinates:
    """Dual affine coordinates and potentials of the product distribution."""
    xi = _interior(xi)
    theta = np.log((1.0 + xi) / (1.0 - xi))
    eta = (1.0 + xi) / 2.0
    psi = float(np.logaddexp(0.0, theta).sum())
    phi = float(np.dot(theta, eta)) - psi
    return DualCoordinates(theta=theta, eta=eta, psi=psi, phi=phi)


def canonical_divergence(p_xi, q_xi) -> float:
    """Divergence between two product distributions computed purely from the
    dual potentials, psi(theta(q)) + phi(eta(p)) - theta(q).eta(p).

    Never touches outcome-wise sums, so comparing it against
    ``kl_divergence(product_distribution(p), product_distribution(q))`` is a
    genuine cross-check of the dually flat structure, not a tautology.
    """
    cp = dual_coordinates(p_xi)
    cq = dual_coordinates(q_xi)
    if cp.theta.size != cq.theta.size:
        raise InvalidInputError("points live on product manifolds of different dimension")
    return cq.psi + cp.phi - float(np.dot(cq.theta, cp.eta))


def weighted_bernoulli_kl(xi_p, xi_q, s) -> float:
    """Per-axis binary KL divergences, weighted by the measurement fractions.

    Equals the KL divergence between the 6-outcome randomized distributions
    with the same weights on both sides.  The first argument may have
    boundary components (+-1); vanishing-probability terms follow the
    0 log 0 := 0 convention, so this is safe on empirical estimates.
    """
    xi_p = np.asarray(xi_p, dtype=float)
    xi_q = np.asarray(xi_q, dtype=float)
    s = np.asarray(s, dtype=float)
    total = 0.0
    for sign in (1.0, -1.0):
        p = (1.0 + sign * xi_p) / 2.0
        q = np.clip((1.0 + sign * xi_q) / 2.0, 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            term = np.where(p > 0.0, p * (np.log(p) - np.log(q)), 0.0)
        total += float(np.sum(s * term))
    return total


def fisher_metric(xi: StokesVector, s: WeightVector) -> np.ndarray:
    """Fisher information matrix of the randomized model in Stokes
    coordinates: diag(s_i / (1 - xi_i^2)).  Scale is fixed to a single
    observation; the projection this metric drives is scale-invariant."""
    xi = _interior(xi)
    s = weight_vector(s)
    if xi.size != 3:
        raise InvalidInputError("Fisher metric is defined on the full 3-axis model")
    return np.diag(s / (1.0 - xi**2))


def _randomized_probs(s1: float, s2: float, xi: np.ndarray) -> np.ndarray:
    # Raw 6-vector with s3 implicit; used for derivatives in the (s1, s2, xi)
    # parametrization, so no normalization checks here.
    s = np.array([s1, s2, 1.0 - s1 - s2])
    out = np.empty(6)
    out[0::2] = s * (1.0 + xi) / 2.0
    out[1::2] = s * (1.0 - xi) / 2.0
    return out


def foliation_coordinates(s: WeightVector, xi: StokesVector) -> tuple[np.ndarray, np.ndarray]:
    """Mixed dual coordinates (eta, theta) of the 5-simplex of randomized
    distributions, adapted to the weight/state split.

    eta = (s1, s2, s1 xi1, s2 xi2, s3 xi3) is mixture-affine; its dual
    theta has components 1 and 2 mixing weights and state while components
    3..5 equal atanh(xi_i) and depend on the state alone.  That separation
    is exactly what makes the weights a harmless nuisance: slices of fixed
    weights and slices of fixed state meet orthogonally.
    """
    s = weight_vector(s)
    xi = _interior(xi)
    if xi.size != 3:
        raise InvalidInputError("foliation coordinates need all 3 axes")
    eta = np.array([s[0], s[1], s[0] * xi[0], s[1] * xi[1], s[2] * xi[2]])
    theta = np.array(
        [
            0.5 * np.log((s[0] / s[2]) ** 2 * (1.0 - xi[0] ** 2) / (1.0 - xi[2] ** 2)),
            0.5 * np.log((s[1] / s[2]) ** 2 * (1.0 - xi[1] ** 2) / (1.0 - xi[2] ** 2)),
            np.arctanh(xi[0]),
            np.arctanh(xi[1]),
            np.arctanh(xi[2]),
        ]
    )
    return eta, theta


def foliation_orthogonality_defect(s: WeightVector, xi: StokesVector, step: float = 1e-6) -> float:
    """Largest Fisher inner product between a state direction and a weight
    direction on the 6-outcome model; zero when the foliation is orthogonal.

    Derivatives are central differences with the given step (the model is
    affine in every parameter, so the differences are exact up to rounding).
    """
    s = weight_vector(s)
    xi = _interior(xi)
    if xi.size != 3:
        raise InvalidInputError("orthogonality defect needs all 3 axes")
    p = _randomized_probs(s[0], s[1], xi)

    d_xi = []
    for i in range(3):
        e = np.zeros(3)
        e[i] = step
        d_xi.append((_randomized_probs(s[0], s[1], xi + e) - _randomized_probs(s[0], s[1], xi - e)) / (2.0 * step))
    d_s = [
        (_randomized_probs(s[0] + step, s[1], xi) - _randomized_probs(s[0] - step, s[1], xi)) / (2.0 * step),
        (_randomized_probs(s[0], s[1] + step, xi) - _randomized_probs(s[0], s[1] - step, xi)) / (2.0 * step),
    ]
    defect = 0.0
    for du in d_xi:
        for dv in d_s:
            defect = max(defect, abs(float(np.sum(du * dv / p))))
    return defect
