"""Exact bounds, with replayable certificates, on odd-primary homotopy
exponents of compact simple Lie groups and related p-local spaces."""

from .arith import OddPrime, choose2, nu, nu_factorial
from .bounds import (
    RuleContext, exponent_interval, fibration_upper, iterated_bundle_upper, replay,
    replay_interval, sp_interval, sphere_exponent, su_lower, su_upper_closed,
    su_upper_recursive, two_cell_bundle_interval,
)
from .certs import INF, BoundInterval, Certificate
from .exceptional import crosscheck_table, exceptional_row, exceptional_table
from .spaces import (
    Bundle, ExoticAtom, GroupAtom, Product, Sphere, parse_space, render_space,
    validate_for_prime,
)
from .splittings import decompose, mnt_su_factors, su_prime_factor

__version__ = "0.1.0"
