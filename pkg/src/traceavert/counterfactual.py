"""Counterfactual epidemic reconstruction and averted-outcome accounting.

Removing a tracing channel makes the cases it found behave like their
fallback type: manual-tracing cases (personally informed or called) revert to
missed cases, app-warned cases revert to the manual/missed blend that the
app-uptake share would otherwise provide.  Every such reversion raises the
tertiary attack fraction of those cases, so the counterfactual epidemic grows
faster than the observed one.

The reconstruction walks the observed series week by week.  The counterfactual
case count first grows at the observed week-over-week growth factor (the
epidemic context — seasonality, variants, behaviour — is taken as given), and
the channel's removal then adds the extra onward transmission of the reverted
cases, scaled by the observed per-case transmission volume of that week:

    carried(w+1)  = c_not(w) * g(w),          g(w) = c(w+1) / c(w)
    extra(w+1)    = carried(w+1) * gap(w) / volume(w)
    c_not(w+1)    = carried(w+1) + extra(w+1)

where ``gap(w)`` sums, over the reverted cases of week ``w``, the difference
between their fallback and actual tertiary attack fractions, and ``volume(w)``
is the fraction-weighted case total of the week.  Averted cases are
``c_not - c`` per week; severity outcomes apply fixed infection-to-outcome
rates to the total.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cases import CaseSeries, CaseWeek
from .params import ModelParams
from .taf import CASE_TYPES

__all__ = [
    "CounterfactualResult",
    "SeverityOutcomes",
    "taf_volume",
    "averted_ct",
    "averted_app",
    "severity_outcomes",
    "rt_series",
    "rt_reduction",
]

#: generation interval, in days, used to convert weekly growth to Rt
_GENERATION_DAYS = 4.0
_WEEK_DAYS = 7.0

_TYPE_FIELDS = {
    "miss": "c_miss",
    "sym": "c_sym",
    "pers": "c_pers",
    "ct": "c_ct",
    "app_minus": "c_app_minus",
    "app_plus": "c_app_plus",
}


@dataclass(frozen=True)
class SeverityOutcomes:
    """Averted severe outcomes implied by a count of averted infections."""

    hospitalizations: float
    icu_admissions: float
    deaths: float


@dataclass(frozen=True)
class CounterfactualResult:
    """Full output of one channel-removal reconstruction."""

    intervention: str
    c_not_weekly: tuple[float, ...]
    s_weekly: tuple[float, ...]
    s_total: float
    severity: SeverityOutcomes
    rt_reduction_avg: float

    @property
    def averted_fraction(self) -> float:
        """Averted cases as a fraction of the observed total."""
        total = sum(week for week in self.s_weekly)
        observed = sum(c_not - s for c_not, s in zip(self.c_not_weekly, self.s_weekly))
        return total / observed if observed else 0.0


def taf_volume(week: CaseWeek, lambdas: dict[str, float]) -> float:
    """Fraction-weighted case total of one week: sum of count x TAF by type."""
    return sum(lambdas[name] * getattr(week, _TYPE_FIELDS[name]) for name in CASE_TYPES)


def _reversion_gap_ct(week: CaseWeek, lambdas: dict[str, float]) -> float:
    """Extra transmission volume if manual tracing had not existed.

    Only cases found by a tracing call revert: without the call they would
    never have learned of their exposure, i.e. they become missed cases.
    (Personally-informed cases are warned by their index, not by the call.)
    """
    return week.c_ct * (lambdas["miss"] - lambdas["ct"])


def _reversion_gap_app(week: CaseWeek, lambdas: dict[str, float], p: ModelParams) -> float:
    """Extra transmission volume if the notification app had not existed.

    App-warned cases fall back on what manual tracing would have done for
    them: a share ``e_app`` would have been missed entirely, the rest found
    by a tracing call.
    """
    fallback = p.e_app * lambdas["miss"] + (1.0 - p.e_app) * lambdas["ct"]
    return (week.c_app_minus * (fallback - lambdas["app_minus"])
            + week.c_app_plus * (fallback - lambdas["app_plus"]))


def _reconstruct(
    series: CaseSeries,
    lambdas: dict[str, float],
    gap,
    intervention: str,
    p: ModelParams,
) -> CounterfactualResult:
    if len(series) < 2:
        raise ValueError("counterfactual reconstruction needs at least 2 weeks")
    c = series.column("c_total")
    for index, total in enumerate(c[:-1]):
        if total <= 0.0:
            raise ValueError(
                f"week {series[index].week_label}: nonpositive case total "
                f"{total:.1f} breaks the growth recurrence"
            )

    c_not = [c[0]]
    extras = [0.0]
    for w in range(len(series) - 1):
        volume = taf_volume(series[w], lambdas)
        if volume <= 0.0:
            raise ValueError(
                f"week {series[w].week_label}: nonpositive transmission "
                f"volume {volume:.1f}"
            )
        growth = c[w + 1] / c[w]
        carried = c_not[w] * growth
        extra = carried * gap(series[w]) / volume
        c_not.append(carried + extra)
        extras.append(extra)

    s_weekly = tuple(cn - cw for cn, cw in zip(c_not, c))
    s_total = sum(s_weekly)
    actual_rt = rt_series(c)
    counter_rt = rt_series(c_not)
    return CounterfactualResult(
        intervention=intervention,
        c_not_weekly=tuple(c_not),
        s_weekly=s_weekly,
        s_total=s_total,
        severity=severity_outcomes(s_total, p),
        rt_reduction_avg=rt_reduction(actual_rt, counter_rt),
    )


def averted_ct(series: CaseSeries, lambdas: dict[str, float], p: ModelParams) -> CounterfactualResult:
    """Reconstruct the epidemic without manual contact tracing."""
    return _reconstruct(
        series, lambdas, lambda week: _reversion_gap_ct(week, lambdas), "ct", p,
    )


def averted_app(series: CaseSeries, lambdas: dict[str, float], p: ModelParams) -> CounterfactualResult:
    """Reconstruct the epidemic without the exposure-notification app."""
    return _reconstruct(
        series, lambdas, lambda week: _reversion_gap_app(week, lambdas, p), "app", p,
    )


def severity_outcomes(averted_cases: float, p: ModelParams) -> SeverityOutcomes:
    """Apply infection-to-outcome rates to a count of averted infections."""
    return SeverityOutcomes(
        hospitalizations=averted_cases * p.ihr,
        icu_admissions=averted_cases * p.iir,
        deaths=averted_cases * p.ifr,
    )


def rt_series(totals: list[float] | tuple[float, ...]) -> list[float]:
    """Weekly reproduction numbers from consecutive case totals.

    The weekly growth factor is rescaled to the generation interval:
    ``rt(w) = (c(w+1) / c(w)) ** (4/7)``.  The series is one entry shorter
    than the input.

    Raises
    ------
    ValueError
        If any total involved in a ratio is not positive.
    """
    rt = []
    for w in range(len(totals) - 1):
        if totals[w] <= 0.0 or totals[w + 1] <= 0.0:
            raise ValueError(
                f"week index {w}: reproduction number undefined for "
                f"nonpositive case totals ({totals[w]!r} -> {totals[w + 1]!r})"
            )
        rt.append((totals[w + 1] / totals[w]) ** (_GENERATION_DAYS / _WEEK_DAYS))
    return rt


def rt_reduction(actual: list[float], counterfactual: list[float]) -> float:
    """Average weekly Rt gap attributable to the intervention (unweighted)."""
    if len(actual) != len(counterfactual):
        raise ValueError(
            f"mismatched Rt series lengths: {len(actual)} vs {len(counterfactual)}"
        )
    if not actual:
        raise ValueError("cannot average an empty Rt series")
    gaps = [cf - ac for ac, cf in zip(actual, counterfactual)]
    return sum(gaps) / len(gaps)
