"""Exact p-adic computation of twisted q-Bernoulli numbers, the associated
distributions and measures on X = lim Z/(l p^N), and the h-extended p-adic
twisted q-L-function."""

from qtwist.characters import DirichletCharacter, TwistedCharacter, character, enumerate_characters
from qtwist.cyclotomic import ExactCyclotomic, ExtElement, ExtensionTower, RootOfUnity, build_tower, tower_for_orders
from qtwist.errors import DomainError, InsufficientLevel, PrecisionError, UnsupportedOrder, VerificationFailure
from qtwist.padic import PadicContext, PadicNumber, angle, log_p, exp_p, qnum, teichmuller
from qtwist.qbernoulli import QSetting, beta_generalized, beta_twisted, generalized_bernoulli_exact

__version__ = "0.1.0"
