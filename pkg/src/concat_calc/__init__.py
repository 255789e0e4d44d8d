"""Concatenability of solutions of linear constant-coefficient evolution equations.

Exact and high-precision arithmetic for exponential polynomials and distributions
with a single interface at ``t = 0``, a quadrature oracle for pairings with test
functions, and certificate-producing decision procedures for ``p(d/dt) u = 0``
and its PDE version ``p(x, d/dt) u = 0``.
"""

from .concat_ode import (Closure, ConstantPolynomial, Counterexample, Report, certificate_ode,
                         decide_ode, verify_certificate)
from .distribution import (ConcatFunction, DeltaComb, Distribution, MatchError, dist_apply_op,
                           dist_derive, dist_from_concat, dist_restrict_punctured, fk_closed_form)
from .exppoly import (ExpPoly, Poly1, PolyOperator, ep_add, ep_apply_op, ep_derive, ep_eval,
                      ep_scale, ep_solution_basis)
from .oracle import adjoint_pair_derivative, pair, recover_comb
from .parser import (ParseError, parse_distribution, parse_exppoly, parse_operator, parse_testfn,
                     parse_univariate, print_operator)
from .pde import (MultiPoly, PlaneWaveCertificate, TDegreeZero, certificate_pde, decide_pde,
                  specialize, tdegree, verify_certificate_pde, witness_xi)
from .roots import ExactFactorizationUnavailable, NonConvergence, roots
from .scalar import EXACT, BigFloatField, GaussRat
from .testfn import TestFunction, bump, monomial_window, tf_derive

__version__ = "0.1.0"
