#!/usr/bin/env python
# ****************************************************************************
# dsmodel.py
#
# DESCRIPTION:
# Contains the definition of the DSModel object, which holds a measure
# tuple and exposes the operations of the model space H_mu(E) and of the
# shift M_z on it (norms, Gram matrices, defect forms, recovery).
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import logging

from .spaces import MeasureTuple, tuple_inner, tuple_norm_sq, gram, defect_form, inequality_form
from .spaces import wandering_span_dim, dilation_convergence, verify_model_identities
from .recovery import gram_oracle_from_model, recover_moments, roundtrip_verify, uniqueness_check
from .dsl_load import load_tuple
from .dsl_save import save_json, tuple_to_dict


class DSModel(object):
    '''
    The model space of a measure tuple.

    :param measures: sequence of measures (mu_1..mu_{m-1}) or a MeasureTuple
    :param ifile: str, tuple JSON file to read from
    '''
    def __init__(self, measures=None, ifile=None):
        self._tuple = None
        if ifile is not None:
            self.load(ifile)
        elif measures is not None:
            self._tuple = measures if isinstance(measures, MeasureTuple) else MeasureTuple(measures)

    def load(self, ifile):
        '''Load a measure tuple from a JSON file.'''
        self._tuple = load_tuple(ifile)

    def save(self, ofile):
        '''Save the measure tuple to a JSON file.'''
        save_json(ofile, tuple_to_dict(self.tuple))

    @property
    def tuple(self):
        assert self._tuple is not None, 'Error - no measure tuple loaded'
        return self._tuple

    @property
    def m(self):
        return self.tuple.m

    @property
    def dimE(self):
        return self.tuple.dimE

    def inner(self, f, g):
        return tuple_inner(self.tuple, f, g)

    def norm_sq(self, f):
        return tuple_norm_sq(self.tuple, f)

    def gram(self, d):
        return gram(self.tuple, d)

    def defect_form(self, r, f, g=None):
        return defect_form(self.tuple, r, f, f if g is None else g)

    def inequality_form(self, r, f):
        return inequality_form(self.tuple, r, f)

    def identities(self, f, tol=1.0e-8):
        return verify_model_identities(self.tuple, f, tol)

    def recover(self, d, S=None):
        '''Moment sequences of mu_1..mu_{m-1} recovered from the Gram pairings of degree d.'''
        log = logging.getLogger(__name__)
        S = d - self.m if S is None else S
        oracle = gram_oracle_from_model(self.tuple, d)
        out = [recover_moments(oracle, self.m, r, S) for r in range(1, self.m)]
        log.debug('recovered {} sequences of order {}'.format(len(out), S))
        return out

    def roundtrip(self, d, S=None, tol=1.0e-8):
        return roundtrip_verify(gram_oracle_from_model(self.tuple, d), self.m, d, S, tol)

    def uniqueness(self, V, d, tol=1.0e-8):
        return uniqueness_check(self.tuple, V, d, tol)

    def wandering_span_dim(self, d):
        return wandering_span_dim(self.tuple, d)

    def dilation_convergence(self, f, r_grid):
        return dilation_convergence(self.tuple, f, r_grid)
