from .dsmodel import *
from .errors import *
from .measures import make_atomic, make_trig, lebesgue, moment, poisson, dilate_measure, conjugate, MomentSequence
from .polynomials import VectorPolynomial, monomial, from_scalar
from .spaces import MeasureTuple, make_tuple, gram
