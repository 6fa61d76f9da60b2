"""Wilkinson-shift QR dynamics on 3x3 symmetric tridiagonal matrices near T_X."""

from .cantor import (Bracket, box_count_line, cover_2d, interval_table, interval_tree,
                     line_cover, locate, locate_gap, locate_point)
from .chart import (A_MAX, MINUS, PLUS, ChartPoint, classify_region, omega, omega_pm,
                    omega_partials, phi, phi_inverse)
from .dynamics import (OrbitRecord, classify, jacobian, orbit, push_cone, signature,
                       w_side, wilkinson_map)
from .errors import (AtConePoint, BoundViolation, ChartDomainError, ConeViolation,
                     MonotonicityError, NotBracketable, PrecisionBudgetExceeded,
                     ShiftIsEigenvalue, WilkshiftError, WrongSide)
from .precision import PrecisionCtx
from .signs import SignSeq
from .tridiag import SymTridiagonal3, T_X, qr_decompose, shifted_step, wilkinson_shift, wilkinson_step

__version__ = "0.1.0"
