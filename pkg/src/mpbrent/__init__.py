"""mpbrent: multiple-precision zero-finding and elementary functions.

Precision-n floats with truncating arithmetic (:mod:`mpbrent.core`),
Newton-iteration reciprocals and square roots (:mod:`mpbrent.basic`),
variable-precision zero finders (:mod:`mpbrent.zeros`), AGM-based pi, log
and exp (:mod:`mpbrent.elementary`), complex arithmetic and trig
(:mod:`mpbrent.mpcomplex`), and truncated power series
(:mod:`mpbrent.series`).  Costs are measured in units of M(n), one
precision-n multiplication, with :class:`CostMeter`.
"""

from .errors import (CapabilityError, ConvergenceError, DegenerateSecantError,
                     DivisionByZero, DomainError, EmptyReportError, ExponentOverflow,
                     MPError, NormalizationError, RangeError)
from .core import (MPFloat, CostMeter, Phase, ReportRow, add, sub, mul, sqr, cmp,
                   round_to, ldexp, mpf, one, zero, parse, to_decimal, to_fixed, to_hex,
                   meter_report, use_backend, metered, calibrate, thresholds, Thresholds)
from .basic import PrecisionSchedule, newton_schedule, recip, div, inv_sqrt, sqrt, sqrt_direct
from .zeros import (FunctionOracle, SolverReport, secant, inverse_quadratic, discrete_newton,
                    solve_with_derivatives, asymptotic_constant, cubic_quadratic_crossover)
from .elementary import (AGMTrace, agm, elliptic_ke, compute_pi, compute_ln2, pi, ln2,
                         ConstantCache, CONSTANTS, mp_log, log1p_series, mp_exp)
from .mpcomplex import (MPComplex, mpc, cmul, csquare, cdiv, crecip, csqrt, cagm, clog,
                        cexp, trig)
from .series import (Series, OpCounter, Float64Field, MPField, RationalField,
                     ps_mul, ps_recip, ps_log, ps_exp, ps_pow, ps_atan, ps_diff,
                     ps_integrate)

__version__ = "0.1.0"
