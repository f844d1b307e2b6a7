#!/usr/bin/env python
# ****************************************************************************
# cli.py
#
# DESCRIPTION:
# Command line driver. Every subcommand builds a Scenario (kind, inputs,
# tolerance, seed, degree, order) that is dispatched to the matching
# cmd_* function; scenario files can also be run in batches with `run`.
#
# Exit codes: 0 all checks pass, 2 at least one check failed, 1 invalid
# input or I/O error. Reports are JSON lines (streams) or a single JSON
# document (certificates, Gram matrices, classifications), or text tables.
#
# HISTORY:
# 20261019 - initial version
# ****************************************************************************
import sys
import argparse
import logging
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
from tqdm import tqdm

from .errors import DSLError, ParseError, DiagonalInconsistent, InfeasibleSequence
from .systools import get_config, write_atomic
from .dsl_load import load_measure, load_polynomial, load_tuple, load_operator, read_document, \
    parse_measure, parse_polynomial, parse_scenario, parse_int, SCENARIO_KINDS
from .dsl_save import to_json, report_lines, reports_table
from .dirichlet import verify_difference_identities, verify_l_contractivity, verify_shift_lshift, \
    verify_dilation_contractivity, verify_multiplier_bound, verify_refined_integral
from .spaces import gram, verify_model_identities
from .operators import classify, wold_split
from .recovery import gram_oracle_from_model, gram_oracle_from_operator, roundtrip_verify
from .corpus import builtin_corpus, tuple_corpus, get_rng, random_polynomial

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2

R_GRID = (0.25, 0.5, 0.75, 0.9, 0.99)


@dataclass
class Scenario:
    kind: str
    inputs: dict = field(default_factory=dict)
    tol: float = None
    seed: int = None
    degree: int = None
    order: int = None
    extras: dict = field(default_factory=dict)


@dataclass
class Outcome:
    code: int
    rows: list = field(default_factory=list)
    document: object = None


def scenario_from_dict(obj):
    '''Scenario from a parsed scenario file.'''
    obj = parse_scenario(obj)
    extras = {k: v for k, v in obj.items() if k not in ['kind', 'inputs', 'tol', 'seed', 'degree', 'order']}
    return Scenario(kind=obj['kind'], inputs=obj['inputs'], tol=obj.get('tol'), seed=obj.get('seed'),
                    degree=obj.get('degree'), order=obj.get('order'), extras=extras)


def _code(rows):
    return EXIT_PASS if all([r['pass'] for r in rows]) else EXIT_FAIL


def _recipe(scn, config):
    recipe = dict(config['corpus'])
    if scn.seed is not None:
        recipe['seed'] = scn.seed
    return recipe


def _corpus_triples(scn, config):
    '''(label, mu, f, n) from the inputs, a corpus file or the built-in corpus.'''
    log = logging.getLogger(__name__)
    inputs = scn.inputs
    if 'measure' in inputs:
        mu = load_measure(inputs['measure'])
        if 'polynomial' in inputs:
            f = load_polynomial(inputs['polynomial'])
        else:
            seed = scn.seed if scn.seed is not None else config['corpus']['seed']
            f = random_polynomial(get_rng(seed), mu.dimE, scn.degree if scn.degree is not None else 4)
        n = scn.order if scn.order is not None else config['corpus']['nmax']
        return [(0, mu, f, n)]
    src = scn.extras.get('corpus', 'builtin')
    if src is None or src == 'builtin':
        return [(c['index'], c['mu'], c['f'], c['n']) for c in builtin_corpus(_recipe(scn, config))]
    doc = read_document(src)
    if not isinstance(doc, list):
        raise ParseError('corpus file {} must hold a list of cases'.format(src))
    out = []
    for i, case in enumerate(doc):
        if not isinstance(case, dict):
            raise ParseError('case {} of corpus {} must be an object'.format(i, src))
        for k in case.keys():
            if k not in ['measure', 'polynomial', 'n']:
                raise ParseError("unknown key '{}' in case {} of corpus {}".format(k, i, src))
        for k in ['measure', 'polynomial']:
            if k not in case:
                raise ParseError("missing key '{}' in case {} of corpus {}".format(k, i, src))
        n = parse_int(case.get('n', 2), 'n')
        out.append((i, parse_measure(case['measure']), parse_polynomial(case['polynomial']), n))
    log.info('corpus {}: {} cases'.format(src, len(out)))
    return out


def cmd_verify(scn, config):
    '''Identity suite over a single case or a corpus; one report per identity, order and case.'''
    tol = scn.tol if scn.tol is not None else config['tolerances']['exact']
    ctol = scn.tol if scn.tol is not None else config['tolerances']['contractivity']
    seed = scn.seed if scn.seed is not None else config['corpus']['seed']
    rows = []
    show_progress = bool(scn.extras.get('progress', False))
    for idx, mu, f, nmax in tqdm(_corpus_triples(scn, config), disable=(not show_progress)):
        reps = verify_difference_identities(mu, f, min(nmax, 8), tol, with_quadrature=False)
        n = min(max(nmax, 1), 6)
        reps.append(verify_l_contractivity(mu, f, n, ctol))
        reps.append(verify_shift_lshift(mu, f, n, tol))
        reps.append(verify_dilation_contractivity(mu, f, n, R_GRID, ctol))
        reps.append(verify_multiplier_bound(mu, f, tol=ctol))
        for r in reps:
            d = r.to_dict()
            d.update({'case': idx, 'seed': seed})
            rows.append(d)
    if 'tuple' in scn.inputs:
        tuples = [load_tuple(scn.inputs['tuple'])]
    elif 'measure' in scn.inputs:
        tuples = []
    else:
        recipe = _recipe(scn, config)
        tuples = tuple_corpus(recipe)
    rng = get_rng(seed + 2)
    for idx, mt in enumerate(tuples):
        deg = scn.degree if scn.degree is not None else int(rng.integers(0, config['corpus']['degree'][1] + 1))
        f = random_polynomial(rng, mt.dimE, deg)
        for r in verify_model_identities(mt, f, tol):
            d = r.to_dict()
            d.update({'tuple': idx, 'seed': seed})
            rows.append(d)
    return Outcome(code=_code(rows), rows=rows)


def cmd_quadrature(scn, config):
    '''Quadrature cross-checks of the refined integrals at the configured radii.'''
    tol = scn.tol if scn.tol is not None else config['tolerances']['quadrature']
    seed = scn.seed if scn.seed is not None else config['corpus']['seed']
    qc = config['quadrature']
    radii = scn.extras.get('radii') or qc['radii']
    grid = tuple(scn.extras.get('grid') or (qc['radial'], qc['angular']))
    cases = _corpus_triples(scn, config)
    if 'measure' not in scn.inputs:
        cases = cases[:qc.get('cases', 50)]
    rows = []
    for idx, mu, f, nmax in cases:
        n = min(nmax, 3)
        for R in radii:
            reps = [verify_refined_integral(mu, f, n, R, grid, tol)]
            reps += [r for r in verify_difference_identities(mu, f, n, qtol=tol, radii=(R,), grid=grid)
                     if r.identity == 'refined_difference']
            for r in reps:
                d = r.to_dict()
                d.update({'case': idx, 'seed': seed})
                rows.append(d)
    return Outcome(code=_code(rows), rows=rows)


def cmd_gram(scn, config):
    '''Gram matrix of the model space for a tuple file.'''
    if 'tuple' not in scn.inputs:
        raise ParseError("missing key 'tuple' in inputs of gram scenario")
    mt = load_tuple(scn.inputs['tuple'])
    model = gram(mt, scn.degree if scn.degree is not None else 4)
    doc = model.to_dict()
    doc['minEig'] = model.min_eig
    doc['pass'] = bool(model.min_eig >= -config['tolerances']['psd'] * max(1.0, abs(model.min_eig)))
    return Outcome(code=EXIT_PASS, document=doc)


def cmd_classify(scn, config):
    '''Classification of an operator file; informative, exit 0 on success.'''
    if 'operator' not in scn.inputs:
        raise ParseError("missing key 'operator' in inputs of classify scenario")
    T, _ = load_operator(scn.inputs['operator'])
    cap = scn.extras.get('cap') or config['operators']['classify_cap']
    K = scn.extras.get('K') or config['operators']['series_terms']
    tol = scn.tol if scn.tol is not None else config['tolerances']['psd']
    return Outcome(code=EXIT_PASS, document=classify(T, cap=cap, tol=tol, K=K).to_dict())


def cmd_wold(scn, config):
    if 'operator' not in scn.inputs:
        raise ParseError("missing key 'operator' in inputs of wold scenario")
    T, _ = load_operator(scn.inputs['operator'])
    tol = scn.tol if scn.tol is not None else config['tolerances']['psd']
    rep = wold_split(T, tol)
    return Outcome(code=EXIT_PASS if rep.passed else EXIT_FAIL, document=rep.to_dict())


def cmd_recover(scn, config):
    '''
    Round trip through the recovered moment sequences. Oracles come from a
    tuple file (model space) or an operator file with optional kernel basis.
    A pairing matrix outside the model class yields a failed certificate.
    '''
    d = scn.degree if scn.degree is not None else config['recovery']['degree']
    tol = scn.tol if scn.tol is not None else config['tolerances']['roundtrip']
    if 'tuple' in scn.inputs:
        mt = load_tuple(scn.inputs['tuple'])
        oracle = gram_oracle_from_model(mt, d)
        m = scn.extras.get('m') or mt.m
    elif 'operator' in scn.inputs:
        T, kernel = load_operator(scn.inputs['operator'])
        oracle = gram_oracle_from_operator(T, kernel, d)
        m = scn.extras.get('m')
        if m is None:
            m = classify(T).isometric_order
        if m is None or m < 2:
            raise ParseError("key 'm' is required for operators without an isometric order >= 2")
    else:
        raise ParseError("missing key 'tuple' or 'operator' in inputs of recover scenario")
    S = scn.order
    try:
        doc = roundtrip_verify(oracle, m, d, S, tol).to_dict()
    except (DiagonalInconsistent, InfeasibleSequence) as err:
        doc = {'m': m, 'S': S if S is not None else d - m, 'd': d, 'pass': False, 'feasible': [],
               'maxGramDeviation': None, 'diagnostics': ['{}: {}'.format(type(err).__name__, err)]}
    return Outcome(code=EXIT_PASS if doc['pass'] else EXIT_FAIL, document=doc)


scenario_functions = {
    'identities': cmd_verify,
    'quadrature': cmd_quadrature,
    'gram': cmd_gram,
    'classify': cmd_classify,
    'wold': cmd_wold,
    'recover': cmd_recover,
    'roundtrip': cmd_recover,
}


def run_scenario(scn, config):
    '''Runs one scenario; errors become exit code 1 with a diagnostic line.'''
    log = logging.getLogger(__name__)
    assert scn.kind in scenario_functions, 'Error - unknown scenario kind {}'.format(scn.kind)
    try:
        return scn, scenario_functions[scn.kind](scn, config), None
    except (DSLError, OSError) as err:
        log.debug('scenario {} failed'.format(scn.kind), exc_info=True)
        return scn, Outcome(code=EXIT_ERROR), '{}: {}'.format(type(err).__name__, err)


def render(outcome, output):
    if output == 'text':
        rows = outcome.rows if outcome.document is None else [outcome.document]
        if outcome.document is not None and 'matrix' in outcome.document:
            rows = [{k: v for k, v in outcome.document.items() if k != 'matrix'}]
        return reports_table(rows)
    if outcome.document is not None:
        return to_json(outcome.document, indent=1) + '\n'
    return report_lines(outcome.rows)


def _parser():
    p = argparse.ArgumentParser(prog='dslib', description='Weighted Dirichlet-type shifts: identity checks, '
                                'operator classification and model recovery.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', type=float, default=None, help='tolerance override')
    common.add_argument('--degree', type=int, default=None, help='polynomial / Gram degree')
    common.add_argument('--order', type=int, default=None, help='identity order or moment order S')
    common.add_argument('--seed', type=int, default=None, help='corpus seed')
    common.add_argument('--jobs', type=int, default=1, help='scenarios run in parallel')
    common.add_argument('--output', choices=['json', 'text'], default='json')
    common.add_argument('--corpus', default='builtin', help='corpus file or "builtin"')
    common.add_argument('--config', default=None, help='yaml file overriding the packaged defaults')
    common.add_argument('--out', default=None, help='write reports to this file instead of stdout')
    common.add_argument('--verbose', action='store_true')
    common.add_argument('--progress', action='store_true', help='progress bar over corpora (stderr)')
    common.add_argument('--measure', default=None)
    common.add_argument('--polynomial', default=None)
    common.add_argument('--tuple', default=None)
    common.add_argument('--operator', default=None)
    common.add_argument('--m', type=int, default=None, help='isometric order for recovery')
    common.add_argument('--cap', type=int, default=None, help='classification cap')
    sub = p.add_subparsers(dest='command')
    sub.required = True
    for name, aliases in [('verify', ['identities']), ('recover', ['roundtrip']), ('classify', []),
                          ('gram', []), ('wold', []), ('quadrature', [])]:
        sub.add_parser(name, aliases=aliases, parents=[common])
    run = sub.add_parser('run', parents=[common], help='run scenario files')
    run.add_argument('scenarios', nargs='+')
    return p


KINDS = {'verify': 'identities', 'identities': 'identities', 'recover': 'recover', 'roundtrip': 'roundtrip',
         'classify': 'classify', 'gram': 'gram', 'wold': 'wold', 'quadrature': 'quadrature'}


def _scenario_from_args(args):
    inputs = {k: getattr(args, k) for k in ['measure', 'polynomial', 'tuple', 'operator'] if getattr(args, k) is not None}
    extras = {'corpus': args.corpus, 'progress': args.progress}
    if args.m is not None:
        extras['m'] = args.m
    if args.cap is not None:
        extras['cap'] = args.cap
    return Scenario(kind=KINDS[args.command], inputs=inputs, tol=args.tol, seed=args.seed, degree=args.degree,
                    order=args.order, extras=extras)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    log = logging.getLogger(__name__)
    errors = []
    try:
        config = get_config(args.config)
        if args.command == 'run':
            scenarios = []
            for ifile in args.scenarios:
                scn = scenario_from_dict(read_document(ifile))
                for k in ['tol', 'seed', 'degree', 'order']:
                    if getattr(args, k) is not None:
                        setattr(scn, k, getattr(args, k))
                scenarios.append(scn)
        else:
            scenarios = [_scenario_from_args(args)]
    except (DSLError, OSError, AssertionError) as err:
        sys.stderr.write('error: {}: {}\n'.format(type(err).__name__, err))
        return EXIT_ERROR
    assert all([s.kind in SCENARIO_KINDS for s in scenarios])
    if args.jobs > 1 and len(scenarios) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(lambda s: run_scenario(s, config), scenarios))
    else:
        results = [run_scenario(s, config) for s in scenarios]
    text = ''
    codes = []
    for scn, outcome, err in results:
        codes.append(outcome.code)
        if err is not None:
            errors.append(err)
            continue
        text += render(outcome, args.output)
    for err in errors:
        sys.stderr.write('error: {}\n'.format(err))
    code = EXIT_ERROR if EXIT_ERROR in codes else (EXIT_FAIL if EXIT_FAIL in codes else EXIT_PASS)
    if code == EXIT_ERROR:
        return code
    if args.out is not None:
        try:
            write_atomic(args.out, text)
        except OSError as err:
            log.error('could not write {}: {}'.format(args.out, err))
            return EXIT_ERROR
    else:
        sys.stdout.write(text)
    return code


if __name__ == '__main__':
    raise SystemExit(main())
