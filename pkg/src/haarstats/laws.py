"""Exact analytic laws for bit-string probabilities of random states.

Every law describes one scalar observable in two coordinate systems:

* raw: a single probability ``p`` (full system), ``p_A`` (subsystem), or
  ``p_{A|b}`` (conditional slice);
* scaled: ``x = dim * p`` with ``dim`` the dimension of the system the
  probability lives on, so the ideal mean is always 1.

Families
--------
``FULL_BETA``
    Marginal of the flat Dirichlet: ``Beta(1, N-1)``; density
    ``(N-1)(1-p)^(N-2)``.
``SUBSYSTEM_BETA``
    Marginal of an aggregated Dirichlet for a subsystem of dimension M with
    complement dimension K: ``Beta(K, N-K)``.
``EXP_LIMIT``
    Large-N limit of the scaled full-system law: density ``exp(-x)``.
``GAMMA_LIMIT``
    Large-N limit of the scaled subsystem law: Gamma with shape K and
    scale 1/K (unit mean, variance 1/K).
``CONDITIONAL_BETA``
    Law of subsystem probabilities conditioned on a fixed complement
    outcome: identical to the full-system law at reduced dimension M.
``SHIFTED_EXP_LIMIT`` / ``SHIFTED_SUBSYSTEM_BETA``
    The same laws under global depolarizing noise of strength ``lam``.

Depolarization enters every family the same way: the scaled variable is
mapped through ``x -> (1-lam)*x + lam``, which shifts the support floor to
``lam`` (the depolarizing gap) and rescales the density by ``1/(1-lam)``.
``lam = 1`` is excluded: the fully mixed state is a point mass and has no
density.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc, gammainc, gammaln


@functools.lru_cache(maxsize=None)
def _log_beta_norm(dim_b: int, dim: int) -> float:
    """log B(K, N-K) for integers K < N without large-argument cancellation.

    gammaln(N-K) - gammaln(N) loses ~1e-8 absolute precision at N ~ 2^20,
    which shows up as a normalization bias; the product form
    Gamma(N)/Gamma(N-K) = prod_{j=1..K} (N-j) keeps the error at the
    rounding level.
    """
    j = np.arange(1, dim_b, dtype=float)  # gammaln(K) term via the same form
    log_gamma_k = float(np.sum(np.log(j))) if dim_b > 1 else 0.0
    j = np.arange(1, dim_b + 1, dtype=float)
    log_falling = dim_b * math.log(dim) + float(np.sum(np.log1p(-j / dim)))
    return log_gamma_k - log_falling


class LawFamily(enum.Enum):
    FULL_BETA = "full_beta"
    SUBSYSTEM_BETA = "subsystem_beta"
    EXP_LIMIT = "exp_limit"
    GAMMA_LIMIT = "gamma_limit"
    SHIFTED_EXP_LIMIT = "shifted_exp_limit"
    SHIFTED_SUBSYSTEM_BETA = "shifted_subsystem_beta"
    CONDITIONAL_BETA = "conditional_beta"


# Shifted names are aliases: the shift is carried by ``lam``.
_BASE_FAMILY = {
    LawFamily.SHIFTED_EXP_LIMIT: LawFamily.EXP_LIMIT,
    LawFamily.SHIFTED_SUBSYSTEM_BETA: LawFamily.SUBSYSTEM_BETA,
}


@dataclass(frozen=True)
class AnalyticLaw:
    """One analytic distribution family with fixed parameters.

    Parameters
    ----------
    family:
        Distribution family; see module docstring.
    dim:
        Full-system dimension N (required for FULL_BETA and SUBSYSTEM_BETA;
        enables raw coordinates for EXP_LIMIT).
    dim_a:
        Measured-subsystem dimension M (required for CONDITIONAL_BETA;
        derived as ``dim // dim_b`` for SUBSYSTEM_BETA).
    dim_b:
        Complement dimension K (required for SUBSYSTEM_BETA and
        GAMMA_LIMIT).
    lam:
        Depolarizing strength in [0, 1).
    scaled:
        If True the law is expressed in ``x = dim * p`` coordinates,
        otherwise in raw probability coordinates.
    """

    family: LawFamily
    dim: int | None = None
    dim_a: int | None = None
    dim_b: int | None = None
    lam: float = 0.0
    scaled: bool = True

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise ValueError(f"lam must lie in [0, 1); got {self.lam} "
                             "(lam=1 is a point mass with no density)")
        base = self.base_family
        if base is LawFamily.FULL_BETA:
            self._require_dim("dim", self.dim, 2)
        elif base is LawFamily.SUBSYSTEM_BETA:
            self._require_dim("dim", self.dim, 2)
            self._require_dim("dim_b", self.dim_b, 1)
            if self.dim % self.dim_b or self.dim // self.dim_b < 1:
                raise ValueError(f"dim_b={self.dim_b} must divide dim={self.dim}")
            if self.dim_a is None:
                object.__setattr__(self, "dim_a", self.dim // self.dim_b)
            elif self.dim_a * self.dim_b != self.dim:
                raise ValueError("dim_a * dim_b must equal dim")
            if self.dim_b >= self.dim:
                raise ValueError("dim_b must be smaller than dim (subsystem must be nonempty)")
        elif base is LawFamily.CONDITIONAL_BETA:
            self._require_dim("dim_a", self.dim_a, 2)
        elif base is LawFamily.GAMMA_LIMIT:
            self._require_dim("dim_b", self.dim_b, 1)
            if not self.scaled:
                self._require_dim("dim_a", self.dim_a, 1)
        elif base is LawFamily.EXP_LIMIT:
            if not self.scaled:
                self._require_dim("dim", self.dim, 2)

    @staticmethod
    def _require_dim(name, value, minimum):
        if value is None or value < minimum:
            raise ValueError(f"{name} must be an integer >= {minimum}, got {value}")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def full_beta(cls, dim: int, lam: float = 0.0, scaled: bool = True) -> "AnalyticLaw":
        return cls(LawFamily.FULL_BETA, dim=dim, lam=lam, scaled=scaled)

    @classmethod
    def subsystem_beta(cls, dim: int, dim_b: int, lam: float = 0.0,
                       scaled: bool = True) -> "AnalyticLaw":
        family = LawFamily.SHIFTED_SUBSYSTEM_BETA if lam > 0 else LawFamily.SUBSYSTEM_BETA
        return cls(family, dim=dim, dim_b=dim_b, lam=lam, scaled=scaled)

    @classmethod
    def exp_limit(cls, lam: float = 0.0, scaled: bool = True,
                  dim: int | None = None) -> "AnalyticLaw":
        family = LawFamily.SHIFTED_EXP_LIMIT if lam > 0 else LawFamily.EXP_LIMIT
        return cls(family, dim=dim, lam=lam, scaled=scaled)

    @classmethod
    def gamma_limit(cls, dim_b: int, lam: float = 0.0, scaled: bool = True,
                    dim_a: int | None = None) -> "AnalyticLaw":
        return cls(LawFamily.GAMMA_LIMIT, dim_a=dim_a, dim_b=dim_b, lam=lam, scaled=scaled)

    @classmethod
    def conditional_beta(cls, dim_a: int, lam: float = 0.0,
                         scaled: bool = True) -> "AnalyticLaw":
        return cls(LawFamily.CONDITIONAL_BETA, dim_a=dim_a, lam=lam, scaled=scaled)

    # ------------------------------------------------------------------
    # structure

    @property
    def base_family(self) -> LawFamily:
        return _BASE_FAMILY.get(self.family, self.family)

    @property
    def _raw_divisor(self) -> int:
        """Dimension converting raw probability to the scaled variable."""
        base = self.base_family
        if base in (LawFamily.FULL_BETA, LawFamily.EXP_LIMIT):
            return self.dim
        return self.dim_a

    @property
    def _ideal_scaled_sup(self) -> float:
        """Upper support bound of the ideal (lam=0) scaled law."""
        base = self.base_family
        if base is LawFamily.FULL_BETA:
            return float(self.dim)
        if base in (LawFamily.SUBSYSTEM_BETA, LawFamily.CONDITIONAL_BETA):
            return float(self.dim_a)
        return math.inf

    def support(self) -> tuple[float, float]:
        """Closed support bounds ``(lo, hi)`` in the law's own coordinates."""
        hi0 = self._ideal_scaled_sup
        lo = self.lam
        hi = (1.0 - self.lam) * hi0 + self.lam if math.isfinite(hi0) else math.inf
        if not self.scaled:
            d = self._raw_divisor
            lo, hi = lo / d, hi / d
        return lo, hi

    # ------------------------------------------------------------------
    # densities

    def _log_pdf_ideal_scaled(self, x: np.ndarray) -> np.ndarray:
        """Log density of the lam=0 scaled law; x assumed inside support."""
        base = self.base_family
        with np.errstate(divide="ignore"):
            if base is LawFamily.EXP_LIMIT:
                return -x
            if base is LawFamily.GAMMA_LIMIT:
                shape = self.dim_b
                out = shape * math.log(shape) - gammaln(shape) - shape * x
                if shape > 1:
                    out = out + (shape - 1) * np.log(x)
                return out
            if base in (LawFamily.FULL_BETA, LawFamily.CONDITIONAL_BETA):
                n = self.dim if base is LawFamily.FULL_BETA else self.dim_a
                out = math.log(n - 1) - math.log(n)
                if n > 2:
                    out = out + (n - 2) * np.log1p(-x / n)
                else:
                    out = np.full_like(x, out)
                return out
            # SUBSYSTEM_BETA: Beta(K, N-K) in p = x / M
            a, b = self.dim_b, self.dim - self.dim_b
            m = self.dim_a
            out = -math.log(m) - _log_beta_norm(a, self.dim)
            if a > 1:
                out = out + (a - 1) * np.log(x / m)
            if b > 1:
                out = out + (b - 1) * np.log1p(-x / m)
            if np.ndim(out) == 0:
                out = np.full_like(x, out)
            return out

    def _cdf_ideal_scaled(self, x: np.ndarray) -> np.ndarray:
        """CDF of the lam=0 scaled law; x assumed clipped to support."""
        base = self.base_family
        with np.errstate(divide="ignore"):
            if base is LawFamily.EXP_LIMIT:
                return -np.expm1(-x)
            if base is LawFamily.GAMMA_LIMIT:
                shape = self.dim_b
                return gammainc(shape, shape * x)
            if base in (LawFamily.FULL_BETA, LawFamily.CONDITIONAL_BETA):
                n = self.dim if base is LawFamily.FULL_BETA else self.dim_a
                return -np.expm1((n - 1) * np.log1p(-x / n))
            a, b = self.dim_b, self.dim - self.dim_b
            return betainc(a, b, x / self.dim_a)

    def _to_ideal_scaled(self, v: np.ndarray) -> np.ndarray:
        x = v if self.scaled else v * self._raw_divisor
        if self.lam:
            x = (x - self.lam) / (1.0 - self.lam)
        return x

    def pdf(self, v) -> np.ndarray | float:
        """Probability density at ``v``; exactly 0 outside the support."""
        v_arr = np.asarray(v, dtype=float)
        u = self._to_ideal_scaled(v_arr)
        inside = (u >= 0.0) & (u <= self._ideal_scaled_sup)
        u_safe = np.where(inside, u, 0.5)
        log_jac = -math.log1p(-self.lam)
        if not self.scaled:
            log_jac += math.log(self._raw_divisor)
        with np.errstate(invalid="ignore"):
            dens = np.where(inside, np.exp(self._log_pdf_ideal_scaled(u_safe) + log_jac), 0.0)
        return float(dens) if np.isscalar(v) or np.ndim(v) == 0 else dens

    def cdf(self, v) -> np.ndarray | float:
        """Cumulative distribution at ``v``; 0 below and 1 above the support."""
        v_arr = np.asarray(v, dtype=float)
        u = self._to_ideal_scaled(v_arr)
        u = np.clip(u, 0.0, self._ideal_scaled_sup)
        out = self._cdf_ideal_scaled(u)
        return float(out) if np.isscalar(v) or np.ndim(v) == 0 else out

    # ------------------------------------------------------------------
    # moments and limits

    def moments(self) -> tuple[float, float]:
        """Exact (mean, variance) of the law."""
        base = self.base_family
        if base is LawFamily.EXP_LIMIT:
            var0 = 1.0
        elif base is LawFamily.GAMMA_LIMIT:
            var0 = 1.0 / self.dim_b
        elif base is LawFamily.FULL_BETA:
            var0 = (self.dim - 1) / (self.dim + 1)
        elif base is LawFamily.CONDITIONAL_BETA:
            var0 = (self.dim_a - 1) / (self.dim_a + 1)
        else:
            n, k = self.dim, self.dim_b
            var0 = (n - k) / (k * (n + 1))
        # scaled ideal mean is 1 by construction; noise preserves it
        mean = (1.0 - self.lam) * 1.0 + self.lam
        var = (1.0 - self.lam) ** 2 * var0
        if not self.scaled:
            d = self._raw_divisor
            return mean / d, var / d**2
        return mean, var

    def limit_law(self) -> "AnalyticLaw":
        """Large-N limit of a scaled Beta family, preserving ``lam``."""
        if not self.scaled:
            raise ValueError("limit laws are defined for scaled laws only")
        base = self.base_family
        if base is LawFamily.FULL_BETA:
            return AnalyticLaw.exp_limit(lam=self.lam, dim=self.dim)
        if base is LawFamily.SUBSYSTEM_BETA:
            if self.dim_b == 1:
                return AnalyticLaw.exp_limit(lam=self.lam, dim=self.dim)
            return AnalyticLaw.gamma_limit(self.dim_b, lam=self.lam, dim_a=self.dim_a)
        raise ValueError(f"no large-N limit defined for {self.family.value}")
