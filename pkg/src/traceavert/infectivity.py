"""Daily infectivity profiles.

The model discretizes an infected person's infectiousness over days 1..14
after their own infection into the fraction-of-transmissions profile ``i_w``
(a Weibull-shaped curve: nothing on days 1-2, the bulk on days 3-7). Two
derived curves drive everything downstream:

``i_a``
    adhering infectivity — after day ``t_sym + t_plan`` a fraction ``a_base``
    of infected people has isolated, scaling the remaining days by
    ``1 - a_base``;
``i_c``
    the running sum of ``i_a``: the expected fraction of transmission
    potential realized by someone who is left alone until day ``x`` and
    follows base adherence afterwards. ``i_c`` saturates at
    ``i_c_inf = i_c(13)``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from .params import ModelParams

__all__ = [
    "WEIBULL_PROFILE",
    "InfectivityProfile",
    "weibull_profile",
    "adhering_profile",
    "cumulative_profile",
]

#: reference daily infectivity fractions, days 1..14. The curve is zero on the
#: first two days, peaks on days 3-4 and has a small tail; days 14+ are zero.
#: Note the published entries sum to 0.99, not 1.0 — they are carried verbatim
#: because every downstream constant is calibrated against them.
WEIBULL_PROFILE: tuple[float, ...] = (
    0.00, 0.00, 0.22, 0.22, 0.18, 0.13, 0.08,
    0.05, 0.04, 0.02, 0.02, 0.02, 0.01, 0.00,
)

#: day index (1-based) of each profile entry
_DAYS = np.arange(1, len(WEIBULL_PROFILE) + 1)

#: index of the saturation day of i_c (day 13; day 14 adds nothing)
_SATURATION_DAY = 13


def weibull_profile() -> np.ndarray:
    """Return the daily infectivity fractions for days 1..14."""
    return np.array(WEIBULL_PROFILE)


def adhering_profile(i_w: npt.ArrayLike, p: ModelParams) -> np.ndarray:
    """Scale days after ``t_sym + t_plan`` by ``1 - a_base``.

    Up to and including the symptom+planning delay everyone is still out and
    about; afterwards the base-adherent fraction has isolated.
    """
    i_w = np.asarray(i_w, dtype=float)
    return np.where(_DAYS[: i_w.size] <= p.t_sym + p.t_plan, i_w, i_w * (1.0 - p.a_base))


def cumulative_profile(i_a: npt.ArrayLike) -> np.ndarray:
    """Running sum of the adhering profile."""
    return np.cumsum(np.asarray(i_a, dtype=float))


@dataclass(frozen=True)
class InfectivityProfile:
    """The three daily curves plus the saturation value of ``i_c``.

    Attributes
    ----------
    i_w, i_a, i_c
        Arrays indexed by day-1 (entry 0 is day 1), length 14.
    i_c_inf
        Asymptotic cumulative value, ``i_c`` at day 13 onwards.
    """

    i_w: np.ndarray
    i_a: np.ndarray
    i_c: np.ndarray
    i_c_inf: float

    @classmethod
    def from_params(cls, p: ModelParams) -> "InfectivityProfile":
        i_w = weibull_profile()
        i_a = adhering_profile(i_w, p)
        i_c = cumulative_profile(i_a)
        for arr in (i_w, i_a, i_c):
            arr.flags.writeable = False
        return cls(i_w=i_w, i_a=i_a, i_c=i_c, i_c_inf=float(i_c[_SATURATION_DAY - 1]))

    def i_w_at(self, day: int) -> float:
        """Daily infectivity at ``day``; zero outside days 1..14."""
        if 1 <= day <= self.i_w.size:
            return float(self.i_w[day - 1])
        return 0.0

    def i_c_at(self, day: npt.ArrayLike) -> float | np.ndarray:
        """Cumulative adhering infectivity with the model's boundary rules.

        Nonpositive days contribute nothing (``0``); days at or beyond the
        saturation day return ``i_c_inf``. Accepts scalars or arrays (the
        simulation evaluates it on whole day grids, including ``inf`` for
        warnings that never arrive).
        """
        d = np.asarray(day, dtype=float)
        idx = np.clip(d, 1, _SATURATION_DAY).astype(int) - 1
        out = np.where(d >= _SATURATION_DAY, self.i_c_inf,
                       np.where(d >= 1, self.i_c[idx], 0.0))
        if np.ndim(day) == 0:
            return float(out)
        return out

    def to_csv(self, target: str | Path | io.TextIOBase) -> None:
        """Write the three curves as ``day,i_w,i_a,i_c`` rows."""
        lines = ["day,i_w,i_a,i_c"]
        for day in range(1, self.i_w.size + 1):
            values = (self.i_w[day - 1], self.i_a[day - 1], self.i_c[day - 1])
            lines.append(f"{day}," + ",".join(repr(float(v)) for v in values))
        text = "\n".join(lines) + "\n"
        if isinstance(target, (str, Path)):
            Path(target).write_text(text, encoding="utf-8")
        else:
            target.write(text)
