"""Exact information quantities on small discrete joint laws."""

from dataclasses import dataclass

import numpy as np

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteJoint:
    """Joint probability mass over a product alphabet.

    ``mass`` has one axis per variable; ``dims`` is its shape.
    """

    mass: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=float)
        if mass.ndim < 1:
            raise ValueError("joint mass needs at least one axis")
        if not np.all(np.isfinite(mass)) or np.any(mass < 0):
            raise ValueError("joint mass must be finite and non-negative")
        if abs(mass.sum() - 1.0) > _MASS_TOL:
            raise ValueError(f"joint mass sums to {mass.sum()!r}, not 1")
        object.__setattr__(self, "mass", mass)

    @property
    def dims(self):
        return self.mass.shape

    def marginal(self, *axes):
        drop = tuple(i for i in range(self.mass.ndim) if i not in axes)
        m = self.mass.sum(axis=drop)
        # sum keeps the original axis order; reorder to the requested one
        order = np.argsort(np.argsort(axes))
        return np.transpose(m, order) if m.ndim > 1 else m


def entropy_bits(p, axis=None):
    """Shannon entropy in bits with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=axis)


def discrete_mutual_information(joint, axis_a, axis_b):
    """Mutual information between two axes of ``joint`` in bits."""
    if not isinstance(joint, DiscreteJoint):
        joint = DiscreteJoint(np.asarray(joint))
    if axis_a == axis_b:
        raise ValueError("axes must be distinct")
    pab = joint.marginal(axis_a, axis_b)
    pa = pab.sum(axis=1)
    pb = pab.sum(axis=0)
    outer = np.outer(pa, pb)
    mask = pab > 0
    mi = float(np.sum(pab[mask] * np.log2(pab[mask] / outer[mask])))
    return max(mi, 0.0)


def expected_posterior_kl(joint, s_axis, x_axis, shat_axis):
    """E over (x, s_hat) of D(p(s|x) || p(s|s_hat)) in bits.

    This is the semantic distance between the posteriors of S given the
    observation and given the reconstruction, computed by direct summation.
    """
    if not isinstance(joint, DiscreteJoint):
        joint = DiscreteJoint(np.asarray(joint))
    p = joint.marginal(s_axis, x_axis, shat_axis)
    p_sx = p.sum(axis=2)
    p_sshat = p.sum(axis=1)
    p_s_given_x = p_sx / np.where(p_sx.sum(axis=0) > 0, p_sx.sum(axis=0), 1.0)
    p_s_given_shat = p_sshat / np.where(p_sshat.sum(axis=0) > 0, p_sshat.sum(axis=0), 1.0)
    total = 0.0
    for s, x, v in zip(*np.nonzero(p)):
        total += p[s, x, v] * np.log2(p_s_given_x[s, x] / p_s_given_shat[s, v])
    return float(total)


def mi_2x2(joint):
    """Vectorised mutual information for arrays of 2x2 joints, shape (..., 2, 2)."""
    joint = np.asarray(joint, dtype=float)
    pa = joint.sum(axis=-1)
    pb = joint.sum(axis=-2)
    return entropy_bits(pa, axis=-1) + entropy_bits(pb, axis=-1) - entropy_bits(
        joint.reshape(joint.shape[:-2] + (4,)), axis=-1)


def conditional_entropy_2x2(joint):
    """H(A | B) for arrays of 2x2 joints p(a, b), shape (..., 2, 2)."""
    joint = np.asarray(joint, dtype=float)
    pb = joint.sum(axis=-2)
    return entropy_bits(joint.reshape(joint.shape[:-2] + (4,)), axis=-1) - entropy_bits(
        pb, axis=-1)
