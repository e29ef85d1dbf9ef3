"""Strongly convex objectives with closed-form conjugates and subgradients.

All three variants have strong convexity modulus 1 and are separable, so
every operation works coordinate-wise; inputs of shape (..., n) are reduced
over the last axis.
"""

import numpy as np


def soft_shrink(z, lam):
    """Coordinate-wise max(|z| - lam, 0) * sign(z), i.e. z - clip(z, -lam, lam)."""
    z = np.asarray(z, dtype=float)
    return z - np.minimum(np.maximum(z, -lam), lam)


class Potential:
    """Base interface: value, conjugate, conjugate gradient, subgradient."""

    alpha = 1.0  # strong convexity modulus, shared by all variants

    def value(self, x):
        raise NotImplementedError

    def conjugate_value(self, xstar):
        raise NotImplementedError

    def conjugate_gradient(self, xstar):
        raise NotImplementedError

    def subgradient(self, x):
        raise NotImplementedError


class SquaredNorm(Potential):
    """f(x) = 1/2 ||x||^2, self-conjugate with identity gradient maps."""

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * (x * x).sum(axis=-1)

    def conjugate_value(self, xstar):
        return self.value(xstar)

    def conjugate_gradient(self, xstar):
        return np.array(xstar, dtype=float, copy=True)

    def subgradient(self, x):
        return np.array(x, dtype=float, copy=True)


class ElasticNet(Potential):
    """f(x) = lam * ||x||_1 + 1/2 ||x||^2.

    The conjugate gradient is soft shrinkage; the subgradient uses the
    minimum-norm selection sign(0) = 0, which makes xstar = 0 valid at
    x = 0 (the solvers start from that pair).
    """

    def __init__(self, lam):
        if not lam > 0:
            raise ValueError("lam must be positive")
        self.lam = float(lam)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.lam * np.abs(x).sum(axis=-1) + 0.5 * (x * x).sum(axis=-1)

    def conjugate_value(self, xstar):
        s = soft_shrink(xstar, self.lam)
        return 0.5 * (s * s).sum(axis=-1)

    def conjugate_gradient(self, xstar):
        return soft_shrink(xstar, self.lam)

    def subgradient(self, x):
        x = np.asarray(x, dtype=float)
        return x + self.lam * np.sign(x)


class SmoothedElasticNet(Potential):
    """Elastic net with the l1 term replaced by its Moreau envelope.

    Differentiable everywhere; the envelope is quadratic |x| <= eps and
    linear (shifted by eps/2) outside.
    """

    def __init__(self, lam, eps):
        if not lam > 0:
            raise ValueError("lam must be positive")
        if not eps > 0:
            raise ValueError("eps must be positive")
        self.lam = float(lam)
        self.eps = float(eps)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        envelope = np.where(ax > self.eps, ax - 0.5 * self.eps, x * x / (2.0 * self.eps))
        return self.lam * envelope.sum(axis=-1) + 0.5 * (x * x).sum(axis=-1)

    def conjugate_value(self, xstar):
        # No closed form worth maintaining: evaluate through the gradient,
        # f*(x*) = <x*, g> - f(g) with g = grad f*(x*).
        xstar = np.asarray(xstar, dtype=float)
        g = self.conjugate_gradient(xstar)
        return (xstar * g).sum(axis=-1) - self.value(g)

    def conjugate_gradient(self, xstar):
        xstar = np.asarray(xstar, dtype=float)
        cut = self.eps + self.lam
        inner = xstar * (self.eps / cut)
        outer = xstar - self.lam * np.sign(xstar)
        return np.where(np.abs(xstar) <= cut, inner, outer)

    def subgradient(self, x):
        x = np.asarray(x, dtype=float)
        return x + self.lam * np.clip(x / self.eps, -1.0, 1.0)


def bregman_distance(f, x, xstar, y):
    """f(y) - f(x) - <xstar, y - x> for a subgradient xstar of f at x.

    The pairing is verified through the Fenchel equality before the
    distance is returned; an xstar that is not a subgradient at x would
    silently produce meaningless (possibly negative) values otherwise.
    """
    x = np.asarray(x, dtype=float)
    xstar = np.asarray(xstar, dtype=float)
    y = np.asarray(y, dtype=float)
    fx = float(f.value(x))
    gap = fx + float(f.conjugate_value(xstar)) - float(xstar @ x)
    if abs(gap) > 1e-8 * (1.0 + abs(fx)):
        raise ValueError(f"xstar is not a subgradient at x (Fenchel gap {gap:.3e})")
    return float(f.value(y)) - fx - float(xstar @ (y - x))
