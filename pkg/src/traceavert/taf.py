"""The tertiary attack fraction (TAF) calculus.

A warning that reaches an index case's contacts early prevents those contacts
from passing the infection on. The TAF of a scenario is the fraction of all
*possible* third-generation infections that is still realized: 1 means nobody
ever quarantines, 0 means tertiary spread is fully suppressed.

The calculus is built in four layers:

``lambda_pair(l, h)``
    a contact infected by an index who roams ``l + h`` days realizes
    ``sum_x i_w(x) * i_c(l + h - x)`` of its tertiary potential — day ``x``
    produces ``i_w(x)`` of the secondary infections, and a contact infected on
    day ``x`` runs free for ``l + h - x`` days before the warning lands;
``lambda_alpha(x, channel)``
    mixes the warned outcome with the unwarned one: a fraction
    ``adherence * reach`` of contacts reacts to a warning sent by an index who
    isolates on day ``x``, the rest realizes ``i_c(x) * i_c_inf`` (index
    stopped on day ``x``; contacts follow base adherence only);
``capital_lambda(l, h, b, channel)``
    averages ``lambda_alpha`` over when the index itself got infected, with
    infection-day weights ``i_w(x + b)`` over a window of width ``h``;
``delta_mix(l, h, b)``
    app-usage-weighted mixture of the app and manual-tracing variants of
    ``capital_lambda``.

From these, :func:`case_type_lambdas` derives one average TAF per surveillance
case type. Reference values for the default parameter set are bundled so
reports can show deviations, and :func:`calibrate_variant` picks the argument
pairing for ``lambda_alpha`` that best reproduces the reference rows (two
readings circulate; they differ in whether the warned term gets ``x`` or
``t_alpha + x`` days of slack — see VARIANTS).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .infectivity import InfectivityProfile
from .params import ModelParams

__all__ = [
    "WarningChannel",
    "LambdaTable",
    "CASE_TYPES",
    "VARIANTS",
    "ct_channel",
    "app_channel",
    "lambda_pair",
    "lambda_alpha",
    "capital_lambda",
    "delta_mix",
    "case_type_lambdas",
    "calibrate_variant",
    "REFERENCE_LAMBDA_PAIR_ROW",
    "REFERENCE_LAMBDA_CT_ROW",
    "REFERENCE_LAMBDA_APP_ROW",
    "REFERENCE_CASE_TYPE_TAF",
]

#: the six exclusive surveillance case types, in reporting order
CASE_TYPES: tuple[str, ...] = ("miss", "sym", "pers", "ct", "app_minus", "app_plus")

#: the two circulating argument pairings for the warned term of lambda_alpha
VARIANTS: tuple[str, ...] = ("table", "text")

# Reference rows for the default parameter set (days 1..14), used for report
# deltas and to calibrate the lambda_alpha variant. Independently tabulated;
# entries are printed at 4 decimals.
REFERENCE_LAMBDA_PAIR_ROW: tuple[float, ...] = (
    0.0000, 0.0000, 0.0000, 0.0000, 0.0484, 0.1452, 0.2728,
    0.4092, 0.5340, 0.6452, 0.7125, 0.7700, 0.8135, 0.8491,
)
REFERENCE_LAMBDA_CT_ROW: tuple[float, ...] = (
    0.0000, 0.0000, 0.1511, 0.3221, 0.4798, 0.6085, 0.6992,
    0.7546, 0.7977, 0.8255, 0.8494, 0.8577, 0.8607, 0.8607,
)
REFERENCE_LAMBDA_APP_ROW: tuple[float, ...] = (
    0.0000, 0.0000, 0.1269, 0.2781, 0.4259, 0.5549, 0.6546,
    0.7254, 0.7712, 0.8060, 0.8338, 0.8577, 0.8607, 0.8607,
)
REFERENCE_CASE_TYPE_TAF: Mapping[str, float] = {
    "miss": 0.87,
    "sym": 0.70,
    "pers": 0.36,
    "ct": 0.60,
    "app_plus": 0.60,
    "app_minus": 0.27,
}

#: day range over which the variant calibration scores row agreement
_CALIBRATION_DAYS = range(3, 14)


@dataclass(frozen=True)
class WarningChannel:
    """How a warning travels from a positive index to their contacts.

    Parameters
    ----------
    kind
        ``"ct"`` (manual contact tracing) or ``"app"``.
    delay
        Days between the index isolating and the warning reaching contacts.
    reach
        Fraction of infected contacts the channel finds at all.
    adherence
        Fraction of warned contacts who actually quarantine.
    """

    kind: str
    delay: int
    reach: float
    adherence: float

    def __post_init__(self) -> None:
        if self.kind not in ("ct", "app"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.delay < 0:
            raise ValueError(f"channel delay must be >= 0, got {self.delay}")
        for name in ("reach", "adherence"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"channel {name} must lie in [0, 1], got {value}")

    @property
    def warn_fraction(self) -> float:
        """Probability that an infected contact is both reached and adheres."""
        return self.adherence * self.reach


def ct_channel(p: ModelParams) -> WarningChannel:
    """Manual contact tracing: delay ``t_ct``, reach ``f_ct``, adherence ``a_ct``."""
    return WarningChannel(kind="ct", delay=p.t_ct, reach=p.f_ct, adherence=p.a_ct)


def app_channel(p: ModelParams) -> WarningChannel:
    """Exposure-notification app: delay ``t_app``, reach ``f_app``, adherence ``a_app``."""
    return WarningChannel(kind="app", delay=p.t_app, reach=p.f_app, adherence=p.a_app)


def lambda_pair(l: int, h: int, profile: InfectivityProfile) -> float:
    """Tertiary fraction realized when contacts run loose ``l + h`` days.

    ``sum_{x=1}^{l+h-1} i_w(x) * i_c(l+h-x)``: the index infects ``i_w(x)``
    of its contacts on day ``x``, and a contact infected on day ``x`` realizes
    ``i_c(l+h-x)`` of its own potential before the warning arrives.
    """
    if l < 1:
        raise ValueError(f"warning delay l must be >= 1, got {l}")
    span = l + h
    return float(sum(
        profile.i_w_at(x) * profile.i_c_at(span - x) for x in range(1, span)
    ))


def lambda_alpha(
    x: int,
    channel: WarningChannel,
    profile: InfectivityProfile,
    variant: str = "table",
) -> float:
    """Average TAF of an index isolating on day ``x`` who warns via ``channel``.

    A fraction ``channel.warn_fraction`` of the infected contacts receives and
    follows the warning; the rest spreads unimpeded except for base adherence:
    the index stopped infecting on day ``x`` (factor ``i_c(x)``) and each
    contact realizes ``i_c_inf`` of its own potential.

    ``variant`` selects the warned-term pairing (see :data:`VARIANTS`):
    ``"table"`` uses ``lambda_pair(delay, x)``, ``"text"`` uses
    ``lambda_pair(delay, delay + x)``.
    """
    if x < 1:
        raise ValueError(f"isolation day x must be >= 1, got {x}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    horizon = x if variant == "table" else channel.delay + x
    warned = lambda_pair(channel.delay, horizon, profile)
    unwarned = profile.i_c_at(x) * profile.i_c_inf
    wf = channel.warn_fraction
    return wf * warned + (1.0 - wf) * unwarned


def capital_lambda(
    l: int,
    h: int,
    b: int,
    channel: WarningChannel,
    profile: InfectivityProfile,
    variant: str = "table",
) -> float:
    """Infectivity-weighted average of :func:`lambda_alpha` over a window.

    The index was infected on day ``x + b`` of its own infector's timeline,
    with ``x`` running over ``1..h`` and weights ``i_w(x + b)``; an index
    infected late in the window isolates correspondingly early
    (``lambda_alpha`` argument ``l + h + 1 - x``).
    """
    if h < 1:
        raise ValueError(f"window width h must be >= 1, got {h}")
    weights = [profile.i_w_at(x + b) for x in range(1, h + 1)]
    total = sum(weights)
    if total <= 0.0:
        raise ValueError(
            f"all infectivity weights vanish for window h={h}, offset b={b}"
        )
    acc = sum(
        w * lambda_alpha(l + h + 1 - x, channel, profile, variant)
        for x, w in zip(range(1, h + 1), weights)
    )
    return acc / total


def delta_mix(
    l: int,
    h: int,
    b: int,
    p: ModelParams,
    profile: InfectivityProfile,
    variant: str = "table",
) -> float:
    """App-usage-weighted mixture of the app and manual-tracing averages."""
    lam_app = capital_lambda(l, h, b, app_channel(p), profile, variant)
    lam_ct = capital_lambda(l, h, b, ct_channel(p), profile, variant)
    return p.u_app * lam_app + (1.0 - p.u_app) * lam_ct


def case_type_lambdas(
    p: ModelParams,
    profile: InfectivityProfile,
    variant: str = "table",
) -> dict[str, float]:
    """Average TAF per surveillance case type.

    - ``miss``: never detected; both generations follow base adherence only,
      giving ``i_c_inf ** 2``.
    - ``sym``: self-reported after symptoms; isolates on day
      ``t_sym + t_plan`` and warns contacts via manual tracing.
    - ``pers``: personally pre-warned by their own index (lead ``t_pers``),
      so they isolate early; their contacts are still traced manually.
    - ``ct``: found by a manual-tracing call (lead ``t_ct``).
    - ``app_plus``: app-warned, symptomatic at test booking; infected during
      the pre-symptomatic window of their index.
    - ``app_minus``: app-warned while still symptomless; infected during the
      index's post-symptom planning window (offset ``t_sym``, width
      ``t_plan``), warned with app lead ``t_app``. Both app types mix warning
      channels by app usage ``u_app``.
    """
    ct = ct_channel(p)
    isolation_span = p.t_sym + p.t_plan
    return {
        "miss": profile.i_c_inf ** 2,
        "sym": lambda_alpha(isolation_span, ct, profile, variant),
        "pers": capital_lambda(p.t_pers, isolation_span, 0, ct, profile, variant),
        "ct": capital_lambda(p.t_ct, isolation_span, 0, ct, profile, variant),
        "app_plus": delta_mix(p.t_sym - 1, p.t_app + p.t_plan + 1, 0, p, profile, variant),
        "app_minus": delta_mix(p.t_app, p.t_plan, p.t_sym, p, profile, variant),
    }


def _row_deviation(p: ModelParams, profile: InfectivityProfile, variant: str) -> float:
    """Max absolute deviation from the reference channel rows over days 3..13."""
    worst = 0.0
    for channel, reference in (
        (ct_channel(p), REFERENCE_LAMBDA_CT_ROW),
        (app_channel(p), REFERENCE_LAMBDA_APP_ROW),
    ):
        for day in _CALIBRATION_DAYS:
            value = lambda_alpha(day, channel, profile, variant)
            worst = max(worst, abs(value - reference[day - 1]))
    return worst


def calibrate_variant(
    p: ModelParams, profile: InfectivityProfile
) -> tuple[str, dict[str, float]]:
    """Pick the ``lambda_alpha`` variant that best reproduces the reference rows.

    Returns the winning variant name plus the max-deviation score per variant.
    """
    scores = {variant: _row_deviation(p, profile, variant) for variant in VARIANTS}
    winner = min(scores, key=lambda name: (scores[name], name))
    return winner, scores


@dataclass(frozen=True)
class LambdaTable:
    """All TAF values for one parameter set: three day rows + six constants.

    ``lambda_pair_row`` holds ``lambda_pair(1, x)`` for days ``x = 1..14``;
    the channel rows hold ``lambda_alpha(x, channel)``. ``per_type`` maps each
    case type to its average TAF. ``variant`` records which argument pairing
    produced the table.
    """

    variant: str
    lambda_pair_row: tuple[float, ...]
    lambda_ct_row: tuple[float, ...]
    lambda_app_row: tuple[float, ...]
    per_type: Mapping[str, float]

    @classmethod
    def build(
        cls,
        p: ModelParams,
        profile: InfectivityProfile,
        variant: str | None = None,
    ) -> "LambdaTable":
        """Compute the full table; calibrates the variant when not given."""
        if variant is None:
            variant, _ = calibrate_variant(p, profile)
        days = range(1, profile.i_w.size + 1)
        ct = ct_channel(p)
        app = app_channel(p)
        return cls(
            variant=variant,
            lambda_pair_row=tuple(lambda_pair(1, x, profile) for x in days),
            lambda_ct_row=tuple(lambda_alpha(x, ct, profile, variant) for x in days),
            lambda_app_row=tuple(lambda_alpha(x, app, profile, variant) for x in days),
            per_type=case_type_lambdas(p, profile, variant),
        )
