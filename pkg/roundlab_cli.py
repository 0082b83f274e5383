#!/usr/bin/env python
# -*- coding: utf-8 -*-
# PYTHON_ARGCOMPLETE_OK

"""
Command line front end of roundlab.

It generates example spaces, computes their generalized roundness, searches for violating gon configurations,
embeds median graphs in l1 and negative type kernels in Euclidean spaces, and sweeps the roundness of growing balls.

Exit codes are 0 on success, 2 on invalid input (metric, negative type or cubical check failure, malformed or
missing file, bad parameter) and 3 when a size cap is hit.
"""

import os
import sys
import time
import warnings
from datetime import datetime
import argparse

from roundlab import __version__
from roundlab import rlio
from roundlab import generators as gen
from roundlab.metric import power_transform
from roundlab.negative_type import gns_embed, DEFAULT_TOL, DEFAULT_PMAX
from roundlab.roundness import (generalized_roundness, search_violation, deficiency_curve, STRATEGIES,
                                MAX_EXHAUSTIVE_CONFIGS)
from roundlab.cubical import theta_classes, halfspace_embedding, verify_isometry
from roundlab.tools import resolve_jobs, pool_map, JOBS_ENV_VAR
from roundlab.exceptions import RoundlabError, DomainError, StructuralError, SizeCapError

__year__ = datetime.now().year

__author__ = "roundlab developers"
__copyright__ = "Copyright 2024-%u, roundlab developers" % __year__
__licence__ = "GPLv3"
__status__ = "Development"

__all__ = ['main']

SWEEP_FAMILIES = ('zn', 'free', 'hypercube', 'grid')


# =======================================================================
#                         HELPERS
# =======================================================================

def _parse_range(text):
    """Parses an inclusive integer range 'a..b'"""
    try:
        first, last = (int(x) for x in text.split('..'))
    except ValueError:
        raise argparse.ArgumentTypeError('expected a range a..b, got "%s"' % text)
    if first > last:
        raise argparse.ArgumentTypeError('empty range %s' % text)
    return first, last


def _parameters(args):
    return dict((key, value) for (key, value) in sorted(vars(args).items()) if key not in ('func', 'quiet'))


def _manifest(args, inputs=()):
    return rlio.RunManifest.collect(args.command, _parameters(args), getattr(args, 'seed', None), inputs)


def _default_output(infilename, suffix):
    base, _ = os.path.splitext(infilename)
    return '%s_%s.json' % (base, suffix)


def _load(args, verbose):
    graph, space = rlio.load_input(args.infilename, force=getattr(args, 'force', False))
    if verbose:
        print('%s successfully loaded (%u points)' % (args.infilename, space.nb_points))
    return graph, space


def _row(space, result, runtime_ms, seed):
    return {'space_id': space.name,
            'n_points': space.nb_points,
            'p_star': result.p_star,
            'capped': result.capped,
            'tol': result.tol,
            'p_max': result.p_max,
            'runtime_ms': runtime_ms,
            'seed': seed}


def _build_sweep_space(family, rank, radius):
    if family == 'zn':
        return gen.zn_ball(rank, radius)[1]
    elif family == 'free':
        return gen.free_group_ball(rank, radius)[1]
    elif family == 'hypercube':
        return gen.hypercube(radius)[1]
    return gen.grid([radius] * rank)[1]


def _sweep_worker(task):
    """Computes one row of a sweep. Size caps give a row with p_star = nan and the error message."""
    family, rank, radius, tol, p_max, seed = task
    tic = time.perf_counter()
    try:
        space = _build_sweep_space(family, rank, radius)
        result = generalized_roundness(space, tol=tol, p_max=p_max)
    except SizeCapError as err:
        row = {'space_id': '%s_rank%u_radius%u' % (family, rank, radius),
               'n_points': 0,
               'p_star': float('nan'),
               'capped': False,
               'tol': tol,
               'p_max': p_max,
               'runtime_ms': 0.,
               'seed': seed}
        return row, str(err)
    runtime_ms = round(1000. * (time.perf_counter() - tic), 3)
    return _row(space, result, runtime_ms, seed), None


# =======================================================================
#                         SUB-COMMANDS
# =======================================================================

def cmd_gen(args, verbose):
    if args.family == 'edges':
        if args.edges is None:
            raise DomainError('gen edges needs --edges <file>')
        graph, space = rlio.load_input(args.edges, file_format='txt')
        inputs = [args.edges]
    else:
        kwargs = dict(rank=args.rank, radius=args.radius, n=args.n, dims=args.dims, dim=args.dim,
                      count=args.count, p=args.p, seed=args.seed)
        for (family, required) in (('zn', ('rank', 'radius')), ('free', ('rank', 'radius')), ('hypercube', ('n',)),
                                   ('grid', ('dims',)), ('cycle', ('n',)), ('path', ('n',)),
                                   ('equilateral', ('n',)), ('lp', ('dim', 'count', 'p'))):
            if args.family == family:
                missing = [key for key in required if kwargs[key] is None]
                if missing:
                    raise DomainError('gen %s needs --%s' % (family, ' --'.join(missing)))
        graph, space = gen.build_family(args.family, **kwargs)
        inputs = []

    if verbose:
        print(space)
        if graph is not None:
            print('\t--> %u edges' % graph.nb_edges)

    outfilename = args.outfilename or '%s.json' % space.name
    rlio.write_output(outfilename, space, graph, _manifest(args, inputs))
    if verbose:
        print('Writing %s' % outfilename)
        print('\t-> Done.')
    return 0


def cmd_info(args, verbose):
    graph, space = _load(args, verbose)
    print(space)
    print(space.report)
    if graph is not None:
        print(graph)
        print('Bipartite: %s' % graph.is_bipartite())
        print('Tree:      %s' % graph.is_tree())
    return 0


def cmd_gr(args, verbose):
    _, space = _load(args, verbose)

    tic = time.perf_counter()
    result = generalized_roundness(space, tol=args.tol, p_max=args.pmax, verbose=verbose)
    runtime_ms = round(1000. * (time.perf_counter() - tic), 3)

    if verbose:
        print('\t--> %s' % result)
        print('\t--> Equivariant compression lower bound: %.6f' % result.compression_lower_bound)

    manifest = _manifest(args, [args.infilename])
    manifest.runtime_ms = runtime_ms
    outfilename = args.outfilename or _default_output(args.infilename, 'gr')
    rlio.write_result(outfilename, space, result, manifest)
    csvfilename = os.path.splitext(outfilename)[0] + '.csv'
    rlio.write_csv(csvfilename, [_row(space, result, runtime_ms, args.seed)], manifest)
    if verbose:
        print('Writing %s and %s' % (outfilename, csvfilename))
        print('\t-> Done.')
    return 0


def cmd_search(args, verbose):
    _, space = _load(args, verbose)
    jobs = resolve_jobs(args.jobs)

    certificate = search_violation(space, args.p, strategy=args.strategy, budget=args.budget, max_n=args.max_n,
                                   seed=args.seed, jobs=jobs, verbose=verbose)

    extra = dict(p=args.p, strategy=args.strategy, max_n=args.max_n)
    if args.curve and certificate is not None:
        extra['curve'] = [list(point) for point in deficiency_curve(space, certificate.config, p_max=args.pmax)]
    if verbose and certificate is None:
        print('\t--> No violation found: this does not prove the inequality holds at p=%g' % args.p)

    outfilename = args.outfilename or _default_output(args.infilename, 'search')
    rlio.write_certificate(outfilename, certificate, space, _manifest(args, [args.infilename]), **extra)
    if verbose:
        print('Writing %s' % outfilename)
        print('\t-> Done.')
    return 0


def cmd_sweep(args, verbose):
    if args.rank is None and args.family != 'hypercube':
        raise DomainError('sweep %s needs --rank' % args.family)
    rank = args.rank if args.rank is not None else 0
    first, last = args.radii
    jobs = resolve_jobs(args.jobs)

    if verbose:
        print('* Sweeping %s, radii %u..%u, with %u worker(s)...' % (args.family, first, last, jobs))

    tasks = [(args.family, rank, radius, args.tol, args.pmax, args.seed) for radius in range(first, last + 1)]
    rows = []
    for (row, error) in pool_map(_sweep_worker, tasks, jobs):
        if error is not None:
            warnings.warn('%s: %s' % (row['space_id'], error))
        elif verbose:
            print('\t--> %s: p* = %.6f%s' % (row['space_id'], row['p_star'], ' (capped)' if row['capped'] else ''))
        rows.append(row)

    outfilename = args.outfilename or 'sweep_%s.csv' % args.family
    rlio.write_csv(outfilename, rows, _manifest(args))
    if verbose:
        print('Writing %s' % outfilename)
        print('\t-> Done.')
    return 0


def cmd_embed(args, verbose):
    graph, space = _load(args, verbose)
    manifest = _manifest(args, [args.infilename])

    if args.kind == 'l1':
        if graph is None:
            raise DomainError('%s holds no graph: l1 embeddings need an edge list or a JSON file with edges'
                              % args.infilename)
        if args.check_median and not gen.is_median_graph(graph):
            raise DomainError('%s is not a median graph' % graph.name)
        hps = theta_classes(graph, seed=args.seed, verbose=verbose)
        embedding = halfspace_embedding(graph, hps, args.basepoint)
        report = verify_isometry(embedding, space)
        if not report.passed:
            raise StructuralError('Hyperplane embedding of %s is not isometric: %s' % (graph.name, report))
        if verbose:
            print('\t--> %s' % report)
        outfilename = args.outfilename or _default_output(args.infilename, 'l1')
        rlio.write_embedding(outfilename, embedding, hps=hps, graph=graph, manifest=manifest)

    else:
        if args.p is None:
            raise DomainError('embed gns needs --p')
        if verbose:
            print('* Embedding d^%g of %s...' % (args.p, space.name))
        configuration = gns_embed(power_transform(space, args.p), basepoint=args.basepoint)
        if verbose:
            print('\t--> %u points in dimension %u' % (configuration.nb_points, configuration.dimension))
        outfilename = args.outfilename or _default_output(args.infilename, 'gns')
        if outfilename.lower().endswith('.vtp'):
            rlio.write_vtp(outfilename, configuration.points, [] if graph is None else graph.edges, manifest)
        else:
            rlio.write_embedding(outfilename, configuration, labels=space.labels, manifest=manifest)

    if verbose:
        print('Writing %s' % outfilename)
        print('\t-> Done.')
    return 0


# =======================================================================
#                         COMMAND LINE USAGE
# =======================================================================


try:
    import argcomplete

    acok = True
except ImportError:
    acok = False

parser = argparse.ArgumentParser(
    description="""  --  ROUNDLAB --
                A python module and a command line utility to compute the generalized roundness of finite metric
                spaces, find violating gon configurations and build hyperplane embeddings of median graphs.

                Spaces are read from JSON files {"labels": [...], "dist": [[...], ...]} and graphs from edge lists
                (one "u v" pair of integer ids per line). The format is chosen from the file extension:

                +-----------+---------------------+------------------------+
                | File      | Content             | Commands               |
                | extension |                     |                        |
                +===========+=====================+========================+
                |   .json   | space (+ edges)     | every command          |
                +-----------+---------------------+------------------------+
                |   .txt    | edge list           | every command          |
                | .edges/.el|                     |                        |
                +-----------+---------------------+------------------------+
                |   .csv    | roundness table     | gr, sweep (written)    |
                +-----------+---------------------+------------------------+
                |   .vtp    | point configuration | embed gns (written)    |
                +-----------+---------------------+------------------------+

                Exit codes: 0 on success, 2 on invalid input, 3 when a size cap is hit.
                """,
    epilog='--  Copyright 2024-%u  -  roundlab developers  --' % __year__,
    formatter_class=argparse.RawDescriptionHelpFormatter)

parser.add_argument('-q', '--quiet', action='store_true',
                    help="""switch off verbosity""")

parser.add_argument('--version', action='version',
                    version='roundlab - version %s\n%s' % (__version__, __copyright__),
                    help="""shows the version number""")

subparsers = parser.add_subparsers(dest='command', metavar='command')
subparsers.required = True

# Options shared by the sub-commands
input_parser = argparse.ArgumentParser(add_help=False)
input_parser.add_argument('infilename',
                          help="""path of the input space (.json) or edge list (.txt)""")
input_parser.add_argument('--force', action='store_true',
                          help="""loads a matrix violating the metric axioms anyway""")

output_parser = argparse.ArgumentParser(add_help=False)
output_parser.add_argument('-o', '--outfilename', type=str,
                           help="""path of the output file""")

seed_parser = argparse.ArgumentParser(add_help=False)
seed_parser.add_argument('--seed', type=int, default=0,
                         help="""random seed. Default is 0""")

exponent_parser = argparse.ArgumentParser(add_help=False)
exponent_parser.add_argument('--tol', type=float, default=DEFAULT_TOL,
                             help="""bisection tolerance on p*. Default is %g""" % DEFAULT_TOL)
exponent_parser.add_argument('--pmax', type=float, default=DEFAULT_PMAX,
                             help="""upper end of the exponent bracket. Default is %g""" % DEFAULT_PMAX)

jobs_parser = argparse.ArgumentParser(add_help=False)
jobs_parser.add_argument('--jobs', type=int, default=None,
                         help="""number of worker processes. Default is the %s environment variable, or
                         1""" % JOBS_ENV_VAR)

# gen
gen_parser = subparsers.add_parser('gen', parents=[output_parser, seed_parser],
                                   help="""generates an example space""")
gen_parser.add_argument('family', choices=gen.FAMILIES + ('edges',),
                        help="""family of the space""")
gen_parser.add_argument('--rank', type=int, help="""rank of the group (zn, free)""")
gen_parser.add_argument('--radius', type=int, help="""radius of the ball (zn, free)""")
gen_parser.add_argument('--n', type=int, help="""size (hypercube, cycle, path, equilateral)""")
gen_parser.add_argument('--dims', type=int, nargs='+', help="""number of vertices along each axis (grid)""")
gen_parser.add_argument('--dim', type=int, help="""dimension of the cube points are drawn in (lp)""")
gen_parser.add_argument('--count', type=int, help="""number of points (lp)""")
gen_parser.add_argument('--p', type=float, help="""exponent of the norm, 1 <= p <= 2 (lp)""")
gen_parser.add_argument('--edges', type=str, help="""edge list to load (edges)""")
gen_parser.set_defaults(func=cmd_gen)

# info
info_parser = subparsers.add_parser('info', parents=[input_parser],
                                    help="""prints a summary of a space and its metric report""")
info_parser.set_defaults(func=cmd_info)

# gr
gr_parser = subparsers.add_parser('gr', parents=[input_parser, output_parser, exponent_parser, seed_parser],
                                  help="""computes the generalized roundness p* of a space. Writes a JSON report
                                  with the bracketing certificates and a one row CSV table next to it""")
gr_parser.set_defaults(func=cmd_gr)

# search
search_parser = subparsers.add_parser('search', parents=[input_parser, output_parser, seed_parser, jobs_parser],
                                      help="""searches for a gon configuration violating the roundness inequality
                                      at a given exponent""")
search_parser.add_argument('--p', type=float, required=True, help="""exponent""")
search_parser.add_argument('--strategy', choices=STRATEGIES, default='exhaustive',
                           help="""search strategy. Exhaustive search is limited to %u configurations. Default
                           is exhaustive""" % MAX_EXHAUSTIVE_CONFIGS)
search_parser.add_argument('--budget', type=int, default=100000,
                           help="""number of configurations evaluated by the random and local strategies""")
search_parser.add_argument('--max-n', type=int, default=3, dest='max_n',
                           help="""largest gon size n. Default is 3""")
search_parser.add_argument('--curve', action='store_true',
                           help="""also writes the deficiency of the violating configuration over p""")
search_parser.add_argument('--pmax', type=float, default=DEFAULT_PMAX,
                           help="""end of the deficiency curve. Default is %g""" % DEFAULT_PMAX)
search_parser.set_defaults(func=cmd_search)

# sweep
sweep_parser = subparsers.add_parser('sweep', parents=[output_parser, exponent_parser, seed_parser, jobs_parser],
                                     help="""computes p* over growing balls of a family and writes a CSV table""")
sweep_parser.add_argument('--family', choices=SWEEP_FAMILIES, required=True,
                          help="""family of the balls. For hypercubes the radius is the dimension, for grids the
                          number of vertices along each axis""")
sweep_parser.add_argument('--rank', type=int, help="""rank of the group (zn, free) or number of axes (grid)""")
sweep_parser.add_argument('--radii', type=_parse_range, required=True, help="""inclusive range a..b""")
sweep_parser.set_defaults(func=cmd_sweep)

# embed
embed_parser = subparsers.add_parser('embed', parents=[input_parser, output_parser, seed_parser],
                                     help="""embeds a median graph in l1 along its hyperplanes (l1), or the power
                                     kernel d^p in a Euclidean space (gns)""")
embed_parser.add_argument('kind', choices=('l1', 'gns'), help="""embedding kind""")
embed_parser.add_argument('--basepoint', type=int, default=0,
                          help="""index of the point sent to the origin. Default is 0""")
embed_parser.add_argument('--p', type=float, help="""exponent of the power kernel (gns)""")
embed_parser.add_argument('--check-median', action='store_true', dest='check_median',
                          help="""checks that the graph is a median graph before embedding it (l1)""")
embed_parser.set_defaults(func=cmd_embed)


def main(argv=None):
    if acok:
        argcomplete.autocomplete(parser)

    args = parser.parse_args(argv)

    if args.quiet:
        verbose = False
    else:
        verbose = True

    if verbose:
        print('\n=============================================')
        print(('roundlab - version %s\n%s' % (__version__, __copyright__)))
        print('=============================================')

    try:
        return args.func(args, verbose)
    except SizeCapError as err:
        sys.stderr.write('roundlab %s: size cap: %s\n' % (args.command, err))
        return 3
    except (ValueError, IOError) as err:
        sys.stderr.write('roundlab %s: error: %s\n' % (args.command, err))
        return 2
    except RoundlabError as err:
        sys.stderr.write('roundlab %s: internal error: %s\n' % (args.command, err))
        return 2


if __name__ == '__main__':
    sys.exit(main())
