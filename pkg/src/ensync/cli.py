"""
    Command line: ``ensync simulate|filter|smooth|recover|bench``.

    Exit codes: 0 success, 1 numerical failure, 2 usage or format error.
"""
import argparse
import logging
import sys
import time

import numpy as np

from . import __version__, logger
from .config_file import dump_config, load_config
from .ensemble_model import (EnsembleConfig, run_filter,
                             smooth_performance)
from .formats import PerformanceFile, write_gains, write_truth
from .interface import (ConfigError, ContractException, FormatError, NumericalError,
                        OracleSizeError)
from .kalman_core import innovation_loglik
from .recovery import DEFAULT_SIGMA_T, run_recovery
from .synth import (DEFAULT_LEADER_DRIFT, GainSpec, SimulationParams, leader_drift,
                    make_script, simulate, to_ioi_series)

__all__ = ['main', 'make_parser']

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def cmd_simulate(args):
    script = make_script(args.condition, args.K, args.N, args.base_T,
                         leader=args.leader, seed=args.seed)
    drift = None
    if args.condition == 'speed' and args.leader_drift:
        drift = leader_drift(args.K, args.leader, args.leader_drift)
    params = SimulationParams(args.K, args.N, script,
                              alpha=GainSpec(args.alpha, args.alpha_std, drift),
                              beta=GainSpec(args.beta, args.beta_std),
                              sigma_T=args.sigma_T, seed=args.seed)
    timeline, truth = simulate(params)
    PerformanceFile.from_timeline(timeline, units=args.units).write(args.out)
    if args.truth is not None:
        write_truth(args.truth, truth)
    print('Wrote %s: K=%d, N=%d (%s).' % (args.out, args.K, args.N, args.condition))
    return EXIT_OK


def _estimate(args, smoothed):
    performance = PerformanceFile.read(args.input)
    data = performance.data
    config = load_config(args.config, data.K)
    if args.dump_config is not None:
        with open(args.dump_config, 'w') as f:
            f.write(dump_config(config))

    t0 = time.perf_counter()
    if smoothed:
        filter_steps, _, trajectory = smooth_performance(data, config)
    else:
        filter_steps, trajectory = run_filter(data, config)
    runtime_ms = 1000.0 * (time.perf_counter() - t0)

    write_gains(args.out, trajectory)
    loglik = innovation_loglik(filter_steps)
    print('N=%d K=%d mode=%s runtime_ms=%.3f loglik=%.17g' %
          (data.N, data.K, trajectory.mode, runtime_ms, loglik))
    return EXIT_OK


def cmd_filter(args):
    return _estimate(args, smoothed=False)


def cmd_smooth(args):
    return _estimate(args, smoothed=True)


def cmd_recover(args):
    # without a file, the settings matched to the simulator
    config = load_config(args.config, args.K) if args.config is not None else None
    report = run_recovery(args.condition, args.K, args.N, args.seed, config=config,
                          leader=args.leader, base_T=args.base_T, sigma_T=args.sigma_T,
                          alpha=args.alpha, drift=args.leader_drift)
    frame = report.to_frame()
    with open(args.report, 'w') as f:
        f.write('# %s\n' % report.summary())
        frame.to_csv(f, index=False, float_format='%.17g', lineterminator='\n')
    print(report.summary())
    return EXIT_OK


def cmd_bench(args):
    script = make_script('deadpan', args.K, args.N, 500.0)
    params = SimulationParams(args.K, args.N, script, sigma_T=DEFAULT_SIGMA_T, seed=args.seed)
    timeline, _ = simulate(params)
    data = to_ioi_series(timeline)
    config = EnsembleConfig(args.K)
    times = []
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        smooth_performance(data, config)
        times.append(1000.0 * (time.perf_counter() - t0))
    print('K=%d N=%d repeat=%d median_ms=%.3f' %
          (args.K, args.N, args.repeat, float(np.median(times))))
    return EXIT_OK


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError('must be at least 1, got %s' % s)
    return v


def _add_performance_flags(p, N_default):
    p.add_argument('--condition', choices=['deadpan', 'normal', 'speed'], default='deadpan')
    p.add_argument('--K', type=_positive_int, default=4, help='number of performers')
    p.add_argument('--N', type=_positive_int, default=N_default, help='number of IOIs')
    p.add_argument('--base-T', dest='base_T', type=float, default=500.0,
                   help='timekeeper interval in ms')
    p.add_argument('--leader', type=int, default=None, help='leader id (speed only)')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--sigma-T', dest='sigma_T', type=float, default=DEFAULT_SIGMA_T,
                   help='timekeeper noise std-dev in ms')
    p.add_argument('--alpha', type=float, default=0.25, help='true phase correction gain')
    p.add_argument('--leader-drift', dest='leader_drift', type=float,
                   default=DEFAULT_LEADER_DRIFT,
                   help='change of the gains towards/from the leader (speed only)')


def make_parser():
    parser = argparse.ArgumentParser(
        prog='ensync',
        description='Time-varying phase/period correction gains in ensemble timing.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('simulate', help='generate a synthetic performance')
    _add_performance_flags(p, 46)
    p.add_argument('--alpha-std', dest='alpha_std', type=float, default=0.0)
    p.add_argument('--beta', type=float, default=0.0)
    p.add_argument('--beta-std', dest='beta_std', type=float, default=0.0)
    p.add_argument('--units', choices=['ms', 's'], default='ms')
    p.add_argument('--out', required=True, help='performance CSV (onset mode)')
    p.add_argument('--truth', default=None, help='ground-truth gain CSV')
    p.set_defaults(func=cmd_simulate)

    for name, func, what in (('filter', cmd_filter, 'filtered'),
                             ('smooth', cmd_smooth, 'smoothed')):
        p = sub.add_parser(name, help='write the %s gains of a performance' % what)
        p.add_argument('--input', required=True, help='performance CSV')
        p.add_argument('--config', default=None, help='key = value configuration file')
        p.add_argument('--out', required=True, help='gain CSV')
        p.add_argument('--dump-config', dest='dump_config', default=None,
                       help='write the effective configuration here')
        p.set_defaults(func=func)

    p = sub.add_parser('recover', help='simulate, smooth and score the gains')
    _add_performance_flags(p, 200)
    p.add_argument('--config', default=None)
    p.add_argument('--report', required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser('bench', help='time the smoother')
    p.add_argument('--K', type=_positive_int, default=4)
    p.add_argument('--N', type=_positive_int, default=46)
    p.add_argument('--repeat', type=_positive_int, default=20)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def _check_leader(parser, args):
    if getattr(args, 'condition', None) is None:
        return
    if args.condition == 'speed':
        if args.leader is None:
            parser.error('--condition speed needs --leader')
        if not 1 <= args.leader <= args.K:
            parser.error('--leader must be between 1 and %d' % args.K)
    elif args.leader is not None:
        parser.error('--leader only applies to --condition speed')


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        _check_leader(parser, args)
    except SystemExit as e:
        return e.code

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    logger.debug('Running %s.' % args.command)
    try:
        return args.func(args)
    except NumericalError as e:
        step = getattr(e, 'step', None)
        where = '' if step is None else ' (step %s)' % step
        print('ensync: numerical failure%s: %s' % (where, e), file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, FormatError, ContractException, OracleSizeError,
            ValueError, OSError) as e:
        print('ensync: %s' % e, file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
